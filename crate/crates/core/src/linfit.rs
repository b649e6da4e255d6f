//! Ordinary least squares for a straight line, with residual diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};

/// Least-squares line y = intercept + slope * x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals.
    pub sse: f64,
    /// Coefficient of determination; 1 for a constant ordinate fitted exactly.
    pub r2: f64,
}

impl LineFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Fits by centered normal equations.
///
/// Errors when fewer than 2 points or when all abscissae coincide.
pub fn ols(x: &[f64], y: &[f64]) -> Result<LineFit> {
    assert_eq!(x.len(), y.len(), "ols: mismatched input lengths");
    if x.len() < 2 {
        return Err(Error::RangeTooSmall { found: x.len(), need: 2 });
    }
    let n = x.len() as f64;
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - xm;
        let dy = yi - ym;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVarianceAbscissa);
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let mut sse = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let r = yi - (intercept + slope * xi);
        sse += r * r;
    }
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LineFit { slope, intercept, sse, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_line_recovered() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 1.0).collect();
        let f = ols(&x, &y).unwrap();
        assert_relative_eq!(f.slope, 3.0, max_relative = 1e-14);
        assert_relative_eq!(f.intercept, -1.0, max_relative = 1e-14);
        assert!(f.sse < 1e-24);
        assert_relative_eq!(f.r2, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn two_points_are_interpolated() {
        let f = ols(&[2.0, 4.0], &[5.0, 9.0]).unwrap();
        assert_relative_eq!(f.slope, 2.0, max_relative = 1e-15);
        assert_relative_eq!(f.intercept, 1.0, max_relative = 1e-15);
        assert!(f.sse.abs() < 1e-24);
    }

    #[test]
    fn constant_ordinate_has_unit_r2() {
        let f = ols(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.intercept, 2.0);
        assert_eq!(f.r2, 1.0);
    }

    #[test]
    fn degenerate_abscissa_rejected() {
        let err = ols(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).unwrap_err();
        assert!(err.to_string().contains("zero variance abscissa"));
    }

    #[test]
    fn single_point_rejected() {
        assert!(ols(&[1.0], &[1.0]).is_err());
    }
}

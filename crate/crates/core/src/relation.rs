//! Cross-station regression: at nearly constant effective Reynolds number,
//! the outer-law prefactor B is close to linear in 1/beta. This module
//! selects the constant-Re band, fits B = slope/beta + intercept by OLS,
//! and emits pressure-parameter cross sections for plotting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::ChevronFit;
use crate::linfit;
use crate::profile::{GradientSign, StationMeta};
use crate::similarity::{PressureParameter, SimilarityResult};

/// Everything the pipeline knows about one station.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationRecord {
    pub meta: StationMeta,
    pub fit: ChevronFit,
    /// Absent when the inner-layer fit could not be inverted.
    pub sim: Option<SimilarityResult>,
    #[serde(rename = "P")]
    pub p: Option<PressureParameter>,
}

/// OLS line B = slope * (1/beta) + intercept over the selected stations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: Vec<RelationPoint>,
    /// Per-point residual B - predicted(1/beta), in `points` order.
    pub residuals: Vec<f64>,
    /// (min, max) ln Re_Lambda over the fitted stations that carry one.
    pub ln_re_lambda_band: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationPoint {
    pub station_id: String,
    pub inv_beta: f64,
    pub b: f64,
}

impl RelationFit {
    pub fn predict(&self, inv_beta: f64) -> f64 {
        self.intercept + self.slope * inv_beta
    }
}

/// Low median: for even counts this is the lower of the two central values,
/// which breaks band ties toward lower ln Re_Lambda.
fn low_median(sorted: &[f64]) -> f64 {
    sorted[(sorted.len() - 1) / 2]
}

/// Returns the indices of records whose ln Re_Lambda lies within +-tol of
/// the (low) median, plus the band used. Records without a similarity
/// result cannot be placed in the band and are never selected.
pub fn select_constant_re_band(
    records: &[StationRecord],
    tol: f64,
) -> Result<(Vec<usize>, (f64, f64))> {
    let mut values: Vec<f64> = records
        .iter()
        .filter_map(|r| r.sim.as_ref().map(|s| s.ln_re_lambda))
        .collect();
    if values.is_empty() {
        return Err(Error::EmptyBand { lo: f64::NAN, hi: f64::NAN });
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = low_median(&values);
    let (lo, hi) = (median - tol, median + tol);
    let selected: Vec<usize> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            r.sim
                .as_ref()
                .is_some_and(|s| s.ln_re_lambda >= lo && s.ln_re_lambda <= hi)
        })
        .map(|(i, _)| i)
        .collect();
    if selected.is_empty() {
        return Err(Error::EmptyBand { lo, hi });
    }
    Ok((selected, (lo, hi)))
}

/// Checks that the records do not mix adverse and favourable stations;
/// zero/unknown pool with either signed family.
fn check_gradient_homogeneity(records: &[&StationRecord]) -> Result<()> {
    let has = |s: GradientSign| records.iter().any(|r| r.meta.gradient_sign == s);
    if has(GradientSign::Adverse) && has(GradientSign::Favourable) {
        return Err(Error::MixedGradientSeries);
    }
    Ok(())
}

/// OLS of B on 1/beta over the stations with a second region present.
/// Stations without one are excluded and cannot influence the line.
pub fn fit_b_vs_inv_beta(records: &[StationRecord]) -> Result<RelationFit> {
    let included: Vec<&StationRecord> = records
        .iter()
        .filter(|r| r.fit.region2_present && r.fit.segment2.is_some())
        .collect();
    if included.len() < 2 {
        return Err(Error::TooFewRelationPoints { found: included.len(), need: 2 });
    }
    check_gradient_homogeneity(&included)?;
    let points: Vec<RelationPoint> = included
        .iter()
        .map(|r| {
            let s2 = r.fit.segment2.as_ref().expect("filtered on segment2");
            RelationPoint {
                station_id: r.meta.station_id.clone(),
                inv_beta: 1.0 / s2.exponent,
                b: s2.coeff,
            }
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| p.inv_beta).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.b).collect();
    let line = linfit::ols(&xs, &ys)?;
    let residuals: Vec<f64> = points.iter().map(|p| p.b - line.predict(p.inv_beta)).collect();
    let lambdas: Vec<f64> = included
        .iter()
        .filter_map(|r| r.sim.as_ref().map(|s| s.ln_re_lambda))
        .collect();
    let band = if lambdas.is_empty() {
        (f64::NAN, f64::NAN)
    } else {
        (
            lambdas.iter().cloned().fold(f64::INFINITY, f64::min),
            lambdas.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    Ok(RelationFit {
        slope: line.slope,
        intercept: line.intercept,
        r2: line.r2,
        points,
        residuals,
        ln_re_lambda_band: band,
    })
}

/// Point sets for the beta(P) and B(P) cross sections at fixed Re band,
/// sorted by P. Stations lacking P or a second region are skipped.
pub fn cross_section(records: &[StationRecord]) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let mut rows: Vec<(f64, f64, f64)> = records
        .iter()
        .filter_map(|r| {
            let p = r.p.as_ref()?;
            let s2 = r.fit.segment2.as_ref()?;
            Some((p.p, s2.exponent, s2.coeff))
        })
        .collect();
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    (
        rows.iter().map(|&(p, beta, _)| (p, beta)).collect(),
        rows.iter().map(|&(p, _, b)| (p, b)).collect(),
    )
}

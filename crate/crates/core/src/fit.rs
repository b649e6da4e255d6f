//! Two-segment power-law (chevron) fitting in bilogarithmic coordinates:
//! unweighted OLS per segment, exhaustive breakpoint search minimizing total
//! SSE, and detection of the absent second self-similar region.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linfit;
use crate::profile::DimensionlessProfile;

/// One fitted power law phi = coeff * eta^exponent over a sample range.
/// sse and r2 are computed in (lg eta, lg phi) space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentFit {
    pub coeff: f64,
    pub exponent: f64,
    /// Half-open sample range [start, end) used for the fit.
    pub index_range: (usize, usize),
    pub sse: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakConfig {
    /// Minimum samples per segment in the breakpoint scan.
    pub min_points: usize,
    /// The two-segment fit must beat the single-segment SSE by this factor,
    /// otherwise the second region is reported absent.
    pub min_improvement: f64,
    /// Minimum |exponent difference| for the two segments to count as
    /// distinct scaling laws.
    pub min_slope_gap: f64,
    /// When set, a second region is only accepted if its exponent exceeds
    /// the first region's (outer law steeper than inner, the adverse-gradient
    /// shape). Off by default: measured favourable-gradient stations do show
    /// chevrons with the outer exponent slightly below the inner one.
    pub require_steeper_outer: bool,
}

impl Default for BreakConfig {
    fn default() -> Self {
        Self {
            min_points: 4,
            min_improvement: 2.0,
            min_slope_gap: 0.02,
            require_steeper_outer: false,
        }
    }
}

/// Result of a chevron fit. When region2_present is false, segment1 covers
/// the whole fit window and segment2/break_index are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChevronFit {
    pub segment1: SegmentFit,
    pub segment2: Option<SegmentFit>,
    /// First sample index of segment2; segment1 ends here.
    pub break_index: Option<usize>,
    pub region2_present: bool,
    pub total_sse: f64,
    /// Diagnostic note, e.g. when the window cannot host two segments.
    pub flag: Option<String>,
}

pub const FLAG_WINDOW_TOO_SMALL: &str = "window too small for chevron";

/// Fits phi = coeff * eta^exponent by OLS of lg phi on lg eta over `range`.
pub fn fit_power_law(p: &DimensionlessProfile, range: Range<usize>) -> Result<SegmentFit> {
    let n = range.end.saturating_sub(range.start);
    if n < 3 {
        return Err(Error::RangeTooSmall { found: n, need: 3 });
    }
    let x: Vec<f64> = p.samples[range.clone()].iter().map(|s| s.0.log10()).collect();
    let y: Vec<f64> = p.samples[range.clone()].iter().map(|s| s.1.log10()).collect();
    let line = linfit::ols(&x, &y)?;
    Ok(SegmentFit {
        coeff: 10f64.powf(line.intercept),
        exponent: line.slope,
        index_range: (range.start, range.end),
        sse: line.sse,
        r2: line.r2,
    })
}

/// Fits the chevron over `window` by exhaustively scanning break indices
/// that leave at least cfg.min_points samples per side and keeping the
/// global minimum of total SSE (ties go to the lowest break index).
///
/// The second region is reported absent when the best split fails to improve
/// on the single-segment SSE by cfg.min_improvement, or the two exponents
/// differ by less than cfg.min_slope_gap, or (with require_steeper_outer)
/// the outer exponent is not the larger one. Windows too small to host two
/// segments fall back to a flagged single-segment fit.
pub fn fit_chevron(
    p: &DimensionlessProfile,
    window: Range<usize>,
    cfg: &BreakConfig,
) -> Result<ChevronFit> {
    assert!(cfg.min_points >= 3, "min_points must be at least 3 for a power-law fit");
    let single = fit_power_law(p, window.clone())?;
    let n = window.end - window.start;
    if n < 2 * cfg.min_points {
        return Ok(ChevronFit {
            total_sse: single.sse,
            segment1: single,
            segment2: None,
            break_index: None,
            region2_present: false,
            flag: Some(FLAG_WINDOW_TOO_SMALL.to_string()),
        });
    }

    let mut best: Option<(f64, SegmentFit, SegmentFit, usize)> = None;
    for b in (window.start + cfg.min_points)..=(window.end - cfg.min_points) {
        let s1 = fit_power_law(p, window.start..b)?;
        let s2 = fit_power_law(p, b..window.end)?;
        let total = s1.sse + s2.sse;
        if best.as_ref().is_none_or(|(t, ..)| total < *t) {
            best = Some((total, s1, s2, b));
        }
    }
    let (total, s1, s2, b) = best.expect("scan range is non-empty when n >= 2*min_points");

    let improved = single.sse >= cfg.min_improvement * total;
    let distinct = (s2.exponent - s1.exponent).abs() >= cfg.min_slope_gap;
    let steeper_ok = !cfg.require_steeper_outer || s2.exponent > s1.exponent;
    if improved && distinct && steeper_ok {
        Ok(ChevronFit {
            segment1: s1,
            segment2: Some(s2),
            break_index: Some(b),
            region2_present: true,
            total_sse: total,
            flag: None,
        })
    } else {
        Ok(ChevronFit {
            total_sse: single.sse,
            segment1: single,
            segment2: None,
            break_index: None,
            region2_present: false,
            flag: None,
        })
    }
}

/// Location of the chevron vertex: the eta where the two fitted laws cross,
/// lg eta* = (lg A - lg B)/(beta - alpha). None when no second region.
pub fn break_eta(f: &ChevronFit) -> Result<Option<f64>> {
    let Some(s2) = &f.segment2 else {
        return Ok(None);
    };
    let s1 = &f.segment1;
    let denom = s2.exponent - s1.exponent;
    if denom.abs() < 1e-9 {
        return Err(Error::ParallelSegments);
    }
    let lg = (s1.coeff.log10() - s2.coeff.log10()) / denom;
    Ok(Some(10f64.powf(lg)))
}

/// Post-hoc diagnostic: does the vertex fall inside the eta gap between the
/// segments, extended by one sample spacing (in lg) on each side?
/// None when no second region or the segments are parallel.
pub fn vertex_within_gap(f: &ChevronFit, p: &DimensionlessProfile) -> Option<bool> {
    let eta_star = break_eta(f).ok().flatten()?;
    let b = f.break_index?;
    let (w0, w1) = (f.segment1.index_range.0, f.segment2.as_ref()?.index_range.1);
    let lg = |i: usize| p.eta(i).log10();
    let lo_spacing = if b >= 2 && b - 2 >= w0 { lg(b - 1) - lg(b - 2) } else { 0.0 };
    let hi_spacing = if b + 1 < w1 { lg(b + 1) - lg(b) } else { 0.0 };
    let lo = lg(b - 1) - lo_spacing;
    let hi = lg(b) + hi_spacing;
    let v = eta_star.log10();
    Some(lo <= v && v <= hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::StationMeta;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn profile_from(samples: Vec<(f64, f64)>) -> DimensionlessProfile {
        DimensionlessProfile::new(StationMeta::default(), samples).unwrap()
    }

    fn power_law_profile(coeff: f64, exponent: f64, n: usize, lo: f64, hi: f64) -> DimensionlessProfile {
        let (llo, lhi) = (lo.log10(), hi.log10());
        let samples = (0..n)
            .map(|i| {
                let eta = 10f64.powf(llo + (lhi - llo) * i as f64 / (n - 1) as f64);
                (eta, coeff * eta.powf(exponent))
            })
            .collect();
        profile_from(samples)
    }

    fn chevron_profile(
        a: f64,
        alpha: f64,
        beta: f64,
        brk: f64,
        n: usize,
        lo: f64,
        hi: f64,
    ) -> (DimensionlessProfile, f64) {
        let b = a * brk.powf(alpha - beta);
        let (llo, lhi) = (lo.log10(), hi.log10());
        let samples = (0..n)
            .map(|i| {
                let eta = 10f64.powf(llo + (lhi - llo) * i as f64 / (n - 1) as f64);
                let phi = if eta <= brk { a * eta.powf(alpha) } else { b * eta.powf(beta) };
                (eta, phi)
            })
            .collect();
        (profile_from(samples), b)
    }

    #[test]
    fn exact_power_law_identified() {
        let p = power_law_profile(8.53, 0.143, 20, 40.0, 4000.0);
        let f = fit_power_law(&p, 0..20).unwrap();
        assert_relative_eq!(f.coeff, 8.53, epsilon = 1e-9);
        assert_relative_eq!(f.exponent, 0.143, epsilon = 1e-12);
        assert!(f.sse < 1e-24);
        assert_relative_eq!(f.r2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constant_profile_has_zero_exponent() {
        let samples: Vec<(f64, f64)> = (1..=10).map(|i| (i as f64 * 10.0, 2.0)).collect();
        let p = profile_from(samples);
        let f = fit_power_law(&p, 0..10).unwrap();
        assert_relative_eq!(f.exponent, 0.0, epsilon = 1e-15);
        assert_relative_eq!(f.coeff, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn noisy_power_law_statistics() {
        // phi = 6.08 * eta^0.190 with 1% multiplicative lognormal noise,
        // 30 points: coeff within 3% and exponent within 0.01 in at least
        // 95 of 100 seeded runs.
        let mut pass = 0;
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let clean = power_law_profile(6.08, 0.190, 30, 30.0, 3000.0);
            let samples: Vec<(f64, f64)> = clean
                .samples
                .iter()
                .map(|&(eta, phi)| {
                    let g: f64 = rng.sample(StandardNormal);
                    (eta, phi * (0.01 * g).exp())
                })
                .collect();
            let f = fit_power_law(&profile_from(samples), 0..30).unwrap();
            if (f.coeff / 6.08 - 1.0).abs() <= 0.03 && (f.exponent - 0.190).abs() <= 0.01 {
                pass += 1;
            }
        }
        assert!(pass >= 95, "only {pass}/100 runs inside tolerance");
    }

    #[test]
    fn noiseless_chevron_recovered() {
        let (p, b) = chevron_profile(8.45, 0.145, 0.388, 2000.0, 40, 30.0, 20000.0);
        let f = fit_chevron(&p, 0..40, &BreakConfig::default()).unwrap();
        assert!(f.region2_present);
        let s2 = f.segment2.unwrap();
        assert_relative_eq!(f.segment1.exponent, 0.145, epsilon = 1e-6);
        assert_relative_eq!(s2.exponent, 0.388, epsilon = 1e-6);
        assert_relative_eq!(f.segment1.coeff, 8.45, max_relative = 1e-6);
        assert_relative_eq!(s2.coeff, b, max_relative = 1e-6);
        // Break within one sample of eta = 2000.
        let bi = f.break_index.unwrap();
        let true_bi = p.samples.iter().position(|&(eta, _)| eta > 2000.0).unwrap();
        assert!(bi.abs_diff(true_bi) <= 1, "break {bi} vs true {true_bi}");
        assert_eq!(vertex_within_gap(&f, &p), Some(true));
    }

    #[test]
    fn single_power_law_reports_absent_region() {
        let p = power_law_profile(8.3, 0.15, 40, 30.0, 10000.0);
        let f = fit_chevron(&p, 0..40, &BreakConfig::default()).unwrap();
        assert!(!f.region2_present);
        assert!(f.segment2.is_none());
        assert!(f.break_index.is_none());
        assert_eq!(f.segment1.index_range, (0, 40));
        assert_relative_eq!(f.segment1.exponent, 0.15, epsilon = 1e-9);
    }

    #[test]
    fn tiny_window_falls_back_with_flag() {
        let p = power_law_profile(8.0, 0.2, 12, 30.0, 1000.0);
        let f = fit_chevron(&p, 0..7, &BreakConfig::default()).unwrap();
        assert!(!f.region2_present);
        assert_eq!(f.flag.as_deref(), Some(FLAG_WINDOW_TOO_SMALL));
    }

    #[test]
    fn break_eta_closed_form() {
        // A=8, alpha=0.15, B=2, beta=0.35: eta* = 10^(lg4 / 0.2) = 1024.
        let (p, _) = chevron_profile(8.45, 0.145, 0.388, 2000.0, 40, 30.0, 20000.0);
        let mut f = fit_chevron(&p, 0..40, &BreakConfig::default()).unwrap();
        f.segment1.coeff = 8.0;
        f.segment1.exponent = 0.15;
        let s2 = f.segment2.as_mut().unwrap();
        s2.coeff = 2.0;
        s2.exponent = 0.35;
        let eta_star = break_eta(&f).unwrap().unwrap();
        assert_relative_eq!(eta_star, 1024.0, max_relative = 1e-12);
        // Cross-check by bisection on the two laws.
        let g = |eta: f64| 8.0 * eta.powf(0.15) - 2.0 * eta.powf(0.35);
        let (mut lo, mut hi) = (10.0f64, 100000.0f64);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if g(mid) > 0.0 { lo = mid } else { hi = mid }
        }
        assert_relative_eq!(eta_star, lo, max_relative = 1e-9);
    }

    #[test]
    fn equal_prefactors_cross_at_unit_eta() {
        let (p, _) = chevron_profile(8.45, 0.145, 0.388, 2000.0, 40, 30.0, 20000.0);
        let mut f = fit_chevron(&p, 0..40, &BreakConfig::default()).unwrap();
        f.segment1.coeff = 5.0;
        f.segment2.as_mut().unwrap().coeff = 5.0;
        assert_relative_eq!(break_eta(&f).unwrap().unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn parallel_segments_rejected() {
        let (p, _) = chevron_profile(8.45, 0.145, 0.388, 2000.0, 40, 30.0, 20000.0);
        let mut f = fit_chevron(&p, 0..40, &BreakConfig::default()).unwrap();
        let e = f.segment1.exponent;
        f.segment2.as_mut().unwrap().exponent = e + 1e-12;
        assert!(matches!(break_eta(&f), Err(Error::ParallelSegments)));
    }

    #[test]
    fn absent_region_has_no_vertex() {
        let p = power_law_profile(8.3, 0.15, 40, 30.0, 10000.0);
        let f = fit_chevron(&p, 0..40, &BreakConfig::default()).unwrap();
        assert_eq!(break_eta(&f).unwrap(), None);
    }

    #[test]
    fn selected_break_is_global_argmin() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let alpha = rng.gen_range(0.13..0.18);
            let beta = alpha + rng.gen_range(0.05..0.3);
            let brk = 10f64.powf(rng.gen_range(2.0..3.2));
            let (clean, _) = chevron_profile(8.4, alpha, beta, brk, 40, 30.0, 10000.0);
            let sigma = 0.01;
            let samples: Vec<(f64, f64)> = clean
                .samples
                .iter()
                .map(|&(eta, phi)| {
                    let g: f64 = rng.sample(StandardNormal);
                    (eta, phi * (sigma * g).exp())
                })
                .collect();
            let p = profile_from(samples);
            let cfg = BreakConfig::default();
            let f = fit_chevron(&p, 0..40, &cfg).unwrap();
            // Exhaustive re-scan: no candidate split beats the chosen one,
            // and the single-segment SSE is never below the best split SSE.
            let mut best = f64::INFINITY;
            let mut best_b = 0;
            for b in cfg.min_points..=(40 - cfg.min_points) {
                let t = fit_power_law(&p, 0..b).unwrap().sse
                    + fit_power_law(&p, b..40).unwrap().sse;
                if t < best {
                    best = t;
                    best_b = b;
                }
            }
            let single = fit_power_law(&p, 0..40).unwrap();
            assert!(single.sse >= best - 1e-15);
            if f.region2_present {
                assert_eq!(f.break_index.unwrap(), best_b);
                assert_relative_eq!(f.total_sse, best, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn scale_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let alpha = rng.gen_range(0.13..0.18);
            let beta = alpha + rng.gen_range(0.05..0.3);
            let brk = 10f64.powf(rng.gen_range(2.2..3.0));
            let (clean, _) = chevron_profile(8.4, alpha, beta, brk, 40, 30.0, 10000.0);
            let samples: Vec<(f64, f64)> = clean
                .samples
                .iter()
                .map(|&(eta, phi)| {
                    let g: f64 = rng.sample(StandardNormal);
                    (eta, phi * (0.005 * g).exp())
                })
                .collect();
            let p = profile_from(samples.clone());
            let c = rng.gen_range(0.1..10.0);
            let scaled = profile_from(samples.iter().map(|&(e, ph)| (e, c * ph)).collect());
            let cfg = BreakConfig::default();
            let f = fit_chevron(&p, 0..40, &cfg).unwrap();
            let g = fit_chevron(&scaled, 0..40, &cfg).unwrap();
            assert_eq!(f.region2_present, g.region2_present);
            assert_eq!(f.break_index, g.break_index);
            assert_relative_eq!(g.segment1.coeff, c * f.segment1.coeff, max_relative = 1e-12);
            assert_relative_eq!(g.segment1.exponent, f.segment1.exponent, epsilon = 1e-12);
            if let (Some(s2), Some(t2)) = (&f.segment2, &g.segment2) {
                assert_relative_eq!(t2.coeff, c * s2.coeff, max_relative = 1e-12);
                assert_relative_eq!(t2.exponent, s2.exponent, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn abscissa_power_covariance_halves_exponents() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let alpha = rng.gen_range(0.13..0.18);
            let beta = alpha + rng.gen_range(0.05..0.3);
            let brk = 10f64.powf(rng.gen_range(2.2..3.0));
            let (clean, _) = chevron_profile(8.4, alpha, beta, brk, 40, 30.0, 10000.0);
            let samples: Vec<(f64, f64)> = clean
                .samples
                .iter()
                .map(|&(eta, phi)| {
                    let g: f64 = rng.sample(StandardNormal);
                    (eta, phi * (0.005 * g).exp())
                })
                .collect();
            let p = profile_from(samples.clone());
            let squared = profile_from(samples.iter().map(|&(e, ph)| (e * e, ph)).collect());
            // Halved exponents also halve the slope gap, so compare with a
            // correspondingly relaxed gap threshold on the squared abscissa.
            let cfg = BreakConfig::default();
            let cfg2 = BreakConfig { min_slope_gap: cfg.min_slope_gap / 2.0, ..cfg };
            let f = fit_chevron(&p, 0..40, &cfg).unwrap();
            let g = fit_chevron(&squared, 0..40, &cfg2).unwrap();
            assert_eq!(f.region2_present, g.region2_present);
            assert_eq!(f.break_index, g.break_index);
            assert_relative_eq!(g.segment1.exponent, f.segment1.exponent / 2.0, epsilon = 1e-12);
            if let (Some(s2), Some(t2)) = (&f.segment2, &g.segment2) {
                assert_relative_eq!(t2.exponent, s2.exponent / 2.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn fit_is_deterministic() {
        let (p, _) = chevron_profile(8.45, 0.145, 0.388, 700.0, 60, 30.0, 9000.0);
        let a = fit_chevron(&p, 0..60, &BreakConfig::default()).unwrap();
        let b = fit_chevron(&p, 0..60, &BreakConfig::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn serialized_field_names_are_stable() {
        let (p, _) = chevron_profile(8.45, 0.145, 0.388, 2000.0, 40, 30.0, 20000.0);
        let f = fit_chevron(&p, 0..40, &BreakConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        for key in ["segment1", "segment2", "break_index", "region2_present", "total_sse"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["coeff", "exponent", "sse", "r2", "index_range"] {
            assert!(v["segment1"].get(key).is_some(), "missing segment1.{key}");
        }
    }
}

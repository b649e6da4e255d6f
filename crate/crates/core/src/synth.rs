//! Synthetic two-layer profiles with known ground truth, for validating the
//! fitting pipeline end to end. The outer prefactor is always derived from
//! continuity at the break, so a generated profile is a single connected
//! chevron in log-log coordinates, not two disjoint laws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{DimensionlessProfile, StationMeta};
use crate::similarity::wall_law_from_re;

/// Generator parameters. `ln_re_lambda` fixes the inner layer through the
/// wall law; `beta` and `break_eta` place the outer layer; the outer
/// prefactor is not free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub ln_re_lambda: f64,
    pub beta: f64,
    pub break_eta: f64,
    /// (lowest, highest) eta on the grid; both sides of the break must be
    /// inside this range.
    pub eta_range: (f64, f64),
    pub n_points: usize,
    /// Standard deviation of multiplicative lognormal noise on phi.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            ln_re_lambda: 10.3,
            beta: 0.388,
            break_eta: 1000.0,
            eta_range: (30.0, 3000.0),
            n_points: 40,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

/// Exact parameters the generator used, before noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub a: f64,
    pub alpha: f64,
    pub b: f64,
    pub beta: f64,
    pub break_eta: f64,
    /// First grid index past the break, i.e. the start of region II.
    pub break_index: usize,
}

fn validate(spec: &SyntheticSpec) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidSpec(msg));
    if !(spec.ln_re_lambda.is_finite() && spec.ln_re_lambda > 0.0) {
        return bad(format!("ln_re_lambda must be positive, got {}", spec.ln_re_lambda));
    }
    if !(spec.beta.is_finite() && spec.beta > 0.0) {
        return bad(format!("beta must be positive, got {}", spec.beta));
    }
    let (lo, hi) = spec.eta_range;
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
        return bad(format!("eta_range must satisfy 0 < lo < hi, got ({lo}, {hi})"));
    }
    if !(spec.break_eta.is_finite() && lo < spec.break_eta && spec.break_eta < hi) {
        return bad(format!(
            "break_eta must lie strictly inside eta_range, got {} outside ({lo}, {hi})",
            spec.break_eta
        ));
    }
    if spec.n_points < 10 {
        return bad(format!("n_points must be at least 10, got {}", spec.n_points));
    }
    if !(spec.noise_sigma.is_finite() && spec.noise_sigma >= 0.0) {
        return bad(format!("noise_sigma must be nonnegative, got {}", spec.noise_sigma));
    }
    Ok(())
}

/// Builds the profile and its ground truth. The grid is log-uniform over
/// `eta_range` inclusive of both endpoints. Noise is drawn only when
/// `noise_sigma > 0`, so a zero-sigma profile is exact regardless of seed.
pub fn generate(spec: &SyntheticSpec) -> Result<(DimensionlessProfile, GroundTruth)> {
    validate(spec)?;
    let wall = wall_law_from_re(spec.ln_re_lambda)?;
    let (a, alpha) = (wall.a, wall.alpha);
    let b = a * spec.break_eta.powf(alpha - spec.beta);
    let (lo, hi) = spec.eta_range;
    let (llo, lhi) = (lo.log10(), hi.log10());
    let n = spec.n_points;
    let etas: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(llo + (lhi - llo) * i as f64 / (n - 1) as f64))
        .collect();
    let mut phis: Vec<f64> = etas
        .iter()
        .map(|&eta| {
            if eta <= spec.break_eta {
                a * eta.powf(alpha)
            } else {
                b * eta.powf(spec.beta)
            }
        })
        .collect();
    if spec.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        for phi in &mut phis {
            let g: f64 = StandardNormal.sample(&mut rng);
            *phi *= (spec.noise_sigma * g).exp();
        }
    }
    let break_index = etas
        .iter()
        .position(|&eta| eta > spec.break_eta)
        .unwrap_or(n);
    let samples: Vec<(f64, f64)> = etas.into_iter().zip(phis).collect();
    let meta = StationMeta { station_id: "synthetic".into(), ..StationMeta::default() };
    let profile = DimensionlessProfile::new(meta, samples)?;
    let truth = GroundTruth {
        a,
        alpha,
        b,
        beta: spec.beta,
        break_eta: spec.break_eta,
        break_index,
    };
    Ok((profile, truth))
}

/// Header lines recording the generator's truth next to the data. The
/// profile parser ignores these keys, so the file round-trips as a plain
/// profile while keeping the truth available to humans and tests.
pub fn truth_headers(truth: &GroundTruth) -> Vec<(String, String)> {
    vec![
        ("truth_a".into(), truth.a.to_string()),
        ("truth_alpha".into(), truth.alpha.to_string()),
        ("truth_b".into(), truth.b.to_string()),
        ("truth_beta".into(), truth.beta.to_string()),
        ("truth_break_eta".into(), truth.break_eta.to_string()),
        ("truth_break_index".into(), truth.break_index.to_string()),
    ]
}

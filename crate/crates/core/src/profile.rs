//! Velocity-profile ingestion: station metadata, raw (y, u) and wall-unit
//! (eta, phi) profiles, file parsing and writing, and the fit-window
//! selection that strips the viscous sublayer and the outer plateau.

use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tablefile;

pub const MIN_PROFILE_SAMPLES: usize = 8;
pub const MIN_WINDOW_SAMPLES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GradientSign {
    Adverse,
    Favourable,
    Zero,
    Unknown,
}

impl GradientSign {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "adverse" => Ok(Self::Adverse),
            "favourable" | "favorable" => Ok(Self::Favourable),
            "zero" => Ok(Self::Zero),
            "unknown" => Ok(Self::Unknown),
            other => Err(Error::Parse(format!(
                "gradient_sign must be adverse|favourable|zero|unknown, got {other:?}"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Adverse => "adverse",
            Self::Favourable => "favourable",
            Self::Zero => "zero",
            Self::Unknown => "unknown",
        }
    }
}

/// Per-station metadata. Velocities are m/s, nu is m^2/s, x is meters with
/// an immaterial origin. re_theta is carried through but used by no formula.
/// u_ext, u_star and nu are required for raw profiles (nondimensionalization
/// and the outer cutoff need them) and optional for wall-unit input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationMeta {
    pub station_id: String,
    pub x: f64,
    #[serde(rename = "U")]
    pub u_ext: Option<f64>,
    pub u_star: Option<f64>,
    pub nu: Option<f64>,
    pub re_theta: Option<f64>,
    pub gradient_sign: GradientSign,
}

impl Default for StationMeta {
    fn default() -> Self {
        Self {
            station_id: String::new(),
            x: 0.0,
            u_ext: None,
            u_star: None,
            nu: None,
            re_theta: None,
            gradient_sign: GradientSign::Unknown,
        }
    }
}

impl StationMeta {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("U", self.u_ext), ("u_star", self.u_star), ("nu", self.nu)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(Error::Parse(format!("header {name} must be positive, got {v}")));
                }
            }
        }
        if let Some(rt) = self.re_theta {
            if !(rt > 0.0) {
                return Err(Error::Parse(format!("header re_theta must be positive, got {rt}")));
            }
        }
        Ok(())
    }
}

/// Dimensional profile: samples are (y in meters, u in m/s), y strictly
/// increasing. u need not be monotone (measurement noise is allowed).
#[derive(Debug, Clone, PartialEq)]
pub struct RawProfile {
    pub meta: StationMeta,
    pub samples: Vec<(f64, f64)>,
}

/// Wall-unit profile: samples are (eta = u_star*y/nu, phi = u/u_star).
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionlessProfile {
    pub meta: StationMeta,
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Raw(RawProfile),
    Dimensionless(DimensionlessProfile),
}

impl Profile {
    pub fn meta(&self) -> &StationMeta {
        match self {
            Profile::Raw(p) => &p.meta,
            Profile::Dimensionless(p) => &p.meta,
        }
    }

    pub fn meta_mut(&mut self) -> &mut StationMeta {
        match self {
            Profile::Raw(p) => &mut p.meta,
            Profile::Dimensionless(p) => &mut p.meta,
        }
    }

    /// Raw profiles are nondimensionalized, wall-unit profiles pass through.
    pub fn into_dimensionless(self) -> DimensionlessProfile {
        match self {
            Profile::Raw(p) => nondimensionalize(&p),
            Profile::Dimensionless(p) => p,
        }
    }
}

fn validate_samples(samples: &[(f64, f64)], abscissa: &str) -> Result<()> {
    if samples.len() < MIN_PROFILE_SAMPLES {
        return Err(Error::TooFewSamples { found: samples.len(), need: MIN_PROFILE_SAMPLES });
    }
    let mut prev = 0.0;
    for (i, &(a, b)) in samples.iter().enumerate() {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Parse(format!("{abscissa} must be positive and finite at sample {i}, got {a}")));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::Parse(format!("velocity must be positive and finite at sample {i}, got {b}")));
        }
        if a <= prev {
            return Err(Error::NonMonotoneWallDistance { index: i });
        }
        prev = a;
    }
    Ok(())
}

impl RawProfile {
    pub fn new(meta: StationMeta, samples: Vec<(f64, f64)>) -> Result<Self> {
        meta.validate()?;
        for (name, v) in [("u_star", meta.u_star), ("nu", meta.nu), ("U", meta.u_ext)] {
            if v.is_none() {
                return Err(Error::Parse(format!("raw profile requires header {name}")));
            }
        }
        validate_samples(&samples, "wall distance")?;
        Ok(Self { meta, samples })
    }
}

impl DimensionlessProfile {
    pub fn new(meta: StationMeta, samples: Vec<(f64, f64)>) -> Result<Self> {
        meta.validate()?;
        validate_samples(&samples, "eta")?;
        Ok(Self { meta, samples })
    }

    pub fn eta(&self, i: usize) -> f64 {
        self.samples[i].0
    }

    pub fn phi(&self, i: usize) -> f64 {
        self.samples[i].1
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Maps each sample as eta = u_star*y/nu, phi = u/u_star. Exact arithmetic
/// on every sample, no fitting or smoothing.
pub fn nondimensionalize(p: &RawProfile) -> DimensionlessProfile {
    let u_star = p.meta.u_star.expect("raw profile carries u_star");
    let nu = p.meta.nu.expect("raw profile carries nu");
    let samples = p
        .samples
        .iter()
        .map(|&(y, u)| (u_star * y / nu, u / u_star))
        .collect();
    DimensionlessProfile { meta: p.meta.clone(), samples }
}

/// Parses a profile file. Header `columns` selects `y,u` (default, SI raw
/// input) or `eta,phi` (wall units). Unknown header keys are ignored.
pub fn parse_profile(text: &str) -> Result<Profile> {
    let t = tablefile::parse(text)?;
    let mut meta = StationMeta::default();
    if let Some(id) = t.header("station_id") {
        meta.station_id = id.to_string();
    }
    meta.x = t.header_f64("x")?.unwrap_or(0.0);
    meta.u_ext = t.header_f64("U")?;
    meta.u_star = t.header_f64("u_star")?;
    meta.nu = t.header_f64("nu")?;
    meta.re_theta = t.header_f64("re_theta")?;
    if let Some(g) = t.header("gradient_sign") {
        meta.gradient_sign = GradientSign::parse(g)?;
    }
    let columns = t.header("columns").unwrap_or("y,u");
    let columns: String = columns.chars().filter(|c| !c.is_whitespace()).collect();
    let samples: Vec<(f64, f64)> = t.rows.iter().map(|r| (r.0, r.1)).collect();
    match columns.as_str() {
        "y,u" => Ok(Profile::Raw(RawProfile::new(meta, samples)?)),
        "eta,phi" => Ok(Profile::Dimensionless(DimensionlessProfile::new(meta, samples)?)),
        other => Err(Error::Parse(format!("columns must be y,u or eta,phi, got {other:?}"))),
    }
}

/// Reads a profile file; a missing station_id header defaults to the file stem.
pub fn read_profile(path: &Path) -> Result<Profile> {
    let text = std::fs::read_to_string(path)?;
    let mut p = parse_profile(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if p.meta().station_id.is_empty() {
        if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
            p.meta_mut().station_id = stem.to_string();
        }
    }
    Ok(p)
}

/// Serializes a profile in the format `parse_profile` reads; extra header
/// pairs are appended verbatim (used for synthetic ground-truth annotations).
pub fn write_profile(p: &Profile, extra_headers: &[(String, String)]) -> String {
    let meta = p.meta();
    let mut headers: Vec<(String, String)> = Vec::new();
    if !meta.station_id.is_empty() {
        headers.push(("station_id".into(), meta.station_id.clone()));
    }
    headers.push(("x".into(), format!("{}", meta.x)));
    if let Some(v) = meta.u_ext {
        headers.push(("U".into(), format!("{v}")));
    }
    if let Some(v) = meta.u_star {
        headers.push(("u_star".into(), format!("{v}")));
    }
    if let Some(v) = meta.nu {
        headers.push(("nu".into(), format!("{v}")));
    }
    if let Some(v) = meta.re_theta {
        headers.push(("re_theta".into(), format!("{v}")));
    }
    headers.push(("gradient_sign".into(), meta.gradient_sign.as_str().into()));
    let columns = match p {
        Profile::Raw(_) => "y,u",
        Profile::Dimensionless(_) => "eta,phi",
    };
    headers.push(("columns".into(), columns.into()));
    headers.extend(extra_headers.iter().cloned());
    let samples = match p {
        Profile::Raw(rp) => &rp.samples,
        Profile::Dimensionless(dp) => &dp.samples,
    };
    tablefile::write(&headers, samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowConfig {
    /// Samples with eta below this are treated as sublayer and excluded.
    pub eta_min: f64,
    /// Samples with phi above outer_fraction * (U/u_star) are treated as the
    /// external-flow plateau and excluded.
    pub outer_fraction: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        Self { eta_min: 30.0, outer_fraction: 0.99 }
    }
}

/// Selects the contiguous intermediate-region sample range for fitting.
///
/// The window starts at the first sample with eta >= eta_min and ends just
/// before the first subsequent sample whose phi exceeds the plateau cutoff;
/// everything from the first plateau crossing on is excluded so the result
/// stays contiguous. The cutoff needs both U and u_star; when either is
/// absent (wall-unit input with minimal headers) only the sublayer bound
/// applies.
pub fn fit_window(p: &DimensionlessProfile, cfg: &WindowConfig) -> Result<Range<usize>> {
    let n = p.samples.len();
    let start = p
        .samples
        .iter()
        .position(|&(eta, _)| eta >= cfg.eta_min)
        .unwrap_or(n);
    let cutoff = match (p.meta.u_ext, p.meta.u_star) {
        (Some(u), Some(us)) => Some(cfg.outer_fraction * u / us),
        _ => None,
    };
    let mut end = n;
    if let Some(cutoff) = cutoff {
        for i in start..n {
            if p.samples[i].1 > cutoff {
                end = i;
                break;
            }
        }
    }
    if end.saturating_sub(start) < MIN_WINDOW_SAMPLES {
        return Err(Error::InsufficientIntermediateRegion {
            remaining: end.saturating_sub(start),
            need: MIN_WINDOW_SAMPLES,
        });
    }
    Ok(start..end)
}

//! Error type shared across the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file. Line numbers are 1-based when known.
    #[error("line {line}: {msg}")]
    ParseAt { line: usize, msg: String },

    #[error("{0}")]
    Parse(String),

    /// Wall-distance (or eta) column must be strictly increasing.
    #[error("non-monotone wall distance at sample {index}")]
    NonMonotoneWallDistance { index: usize },

    #[error("profile has {found} samples, need at least {need}")]
    TooFewSamples { found: usize, need: usize },

    #[error("insufficient intermediate region: {remaining} samples after windowing, need {need}")]
    InsufficientIntermediateRegion { remaining: usize, need: usize },

    /// A fit range with too few samples for the requested operation.
    #[error("range has {found} samples, need at least {need}")]
    RangeTooSmall { found: usize, need: usize },

    #[error("zero variance abscissa")]
    ZeroVarianceAbscissa,

    /// Inversion needs A > 5/2, otherwise ln Re_1 would be non-positive.
    #[error("prefactor below logarithmic floor: A = {a}")]
    PrefactorBelowLogFloor { a: f64 },

    #[error("exponent must be positive, got alpha = {alpha}")]
    NonPositiveAlpha { alpha: f64 },

    #[error("ln Re_Lambda must be positive, got {0}")]
    NonPositiveLnRe(f64),

    #[error("parallel segments")]
    ParallelSegments,

    #[error("pressure series x not strictly increasing at station {index} (duplicate or decreasing x)")]
    NonMonotoneX { index: usize },

    #[error("separate adverse and favourable series")]
    MixedGradientSeries,

    #[error("no stations inside the ln Re_Lambda band [{lo}, {hi}]")]
    EmptyBand { lo: f64, hi: f64 },

    #[error("need at least {need} stations with a second region, found {found}")]
    TooFewRelationPoints { found: usize, need: usize },

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

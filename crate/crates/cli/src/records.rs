//! The records file is the pipeline's persistence layer: a JSON envelope
//! holding the thresholds a run used next to the station records it
//! produced, so later stages and humans can see both.

use std::path::Path;

use serde::{Deserialize, Serialize};

use chevron::fit::BreakConfig;
use chevron::profile::WindowConfig;
use chevron::relation::StationRecord;
use chevron::{Error, Result};

use crate::args::GlobalOpts;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub window: WindowConfig,
    pub break_cfg: BreakConfig,
    pub re_band_tol: f64,
    pub smooth_window: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            window: WindowConfig::default(),
            break_cfg: BreakConfig::default(),
            re_band_tol: 0.3,
            smooth_window: 1,
        }
    }
}

impl From<&GlobalOpts> for RunConfig {
    fn from(o: &GlobalOpts) -> Self {
        RunConfig {
            window: WindowConfig { eta_min: o.eta_min, outer_fraction: o.outer_fraction },
            break_cfg: BreakConfig {
                min_points: o.min_points,
                min_improvement: o.min_improvement,
                min_slope_gap: o.min_slope_gap,
                require_steeper_outer: o.require_steeper_outer,
            },
            re_band_tol: o.re_band_tol,
            smooth_window: o.smooth_window,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordsFile {
    pub config: RunConfig,
    pub records: Vec<StationRecord>,
}

/// Reads a records file: the `{config, records}` envelope, or a bare array
/// of records (then paired with default config).
pub fn load_records(path: &Path) -> Result<RecordsFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if let Ok(file) = serde_json::from_str::<RecordsFile>(&text) {
        return Ok(file);
    }
    match serde_json::from_str::<Vec<StationRecord>>(&text) {
        Ok(records) => Ok(RecordsFile { config: RunConfig::default(), records }),
        Err(e) => Err(Error::Parse(format!("{}: {e}", path.display()))),
    }
}

pub fn save_records(path: &Path, file: &RecordsFile) -> Result<()> {
    let mut text = serde_json::to_string_pretty(file)
        .map_err(|e| Error::Parse(format!("records serialization: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

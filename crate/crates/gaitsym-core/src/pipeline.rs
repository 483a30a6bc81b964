//! End-to-end per-sequence processing shared by the CLI, the evaluation
//! harness and the size sweep.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::histogram::{estimate, normalize, recenter_offset, CylHistogram, HistSize};
use crate::symmetry::{assess, DelaySet, SymmetryReport};

/// Full configuration of the assessment pipeline. The defaults are a 16x16
/// histogram, 120-frame segments, delays in [-50, 50] and recentering on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub hist_size: HistSize,
    pub segment_len: usize,
    pub delays: DelaySet,
    /// Rotate the cylinder so the head region sits on the central column
    /// boundary; the offset is estimated on the first frame and reused.
    pub recenter: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            hist_size: HistSize::new(16, 16).expect("valid default size"),
            segment_len: 120,
            delays: DelaySet::default(),
            recenter: true,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.segment_len < 2 {
            return Err(Error::InvalidConfig(format!(
                "segment_len must be >= 2, got {}",
                self.segment_len
            )));
        }
        if self.delays.max_magnitude() as usize >= self.segment_len {
            return Err(Error::DelayTooLarge {
                delay: self.delays.max_magnitude(),
                len: self.segment_len,
            });
        }
        Ok(())
    }

    pub fn with_hist_size(&self, hist_size: HistSize) -> Self {
        Self {
            hist_size,
            ..self.clone()
        }
    }
}

/// Per-frame histograms of a cloud sequence, as raw counts.
///
/// With `recenter` on, the angular offset is estimated once on the first
/// frame and applied to every frame, so left-right motion is preserved.
pub fn estimate_sequence(
    clouds: &[PointCloud],
    size: HistSize,
    recenter: bool,
) -> Result<Vec<CylHistogram>> {
    let first = clouds.first().ok_or(Error::EmptyInput("cloud sequence"))?;
    let offset = if recenter {
        recenter_offset(&estimate(first, size, 0.0)?)
    } else {
        0.0
    };
    clouds.iter().map(|c| estimate(c, size, offset)).collect()
}

/// Runs histogram estimation, normalization and symmetry assessment on a
/// body-frame cloud sequence.
pub fn process_sequence(clouds: &[PointCloud], cfg: &PipelineConfig) -> Result<SymmetryReport> {
    cfg.validate()?;
    let hists = estimate_sequence(clouds, cfg.hist_size, cfg.recenter)?;
    assess(&hists, cfg.segment_len, &cfg.delays)
}

/// Assesses pre-computed histograms (the container ingestion path); only
/// normalization is applied before scoring.
pub fn process_histograms(
    hists: &[CylHistogram],
    cfg: &PipelineConfig,
) -> Result<SymmetryReport> {
    cfg.validate()?;
    let normalized: Vec<CylHistogram> = hists.iter().map(normalize).collect::<Result<_>>()?;
    assess(&normalized, cfg.segment_len, &cfg.delays)
}

//! Symmetry report serialization: a TOML document with the full effective
//! configuration, plus a flat per-segment CSV for plotting.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::write_atomic;
use crate::error::{Error, Result};
use crate::pipeline::PipelineConfig;
use crate::symmetry::{SegmentScore, SymmetryReport};

/// Sequence-level summary block of a report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub mean_score: f64,
    pub frames_used: usize,
    pub frames_discarded: usize,
}

/// On-disk form of a symmetry report: configuration echo, summary and the
/// per-segment scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub config: PipelineConfig,
    pub summary: ReportSummary,
    pub segments: Vec<SegmentScore>,
}

impl ReportDoc {
    pub fn new(report: &SymmetryReport, config: &PipelineConfig) -> Self {
        Self {
            config: config.clone(),
            summary: ReportSummary {
                mean_score: report.mean_score,
                frames_used: report.frames_used,
                frames_discarded: report.frames_discarded,
            },
            segments: report.per_segment.clone(),
        }
    }
}

pub fn write_report(path: &Path, report: &SymmetryReport, config: &PipelineConfig) -> Result<()> {
    let doc = ReportDoc::new(report, config);
    let text = toml::to_string(&doc)
        .map_err(|e| Error::InvalidConfig(format!("report serialization failed: {e}")))?;
    write_atomic(path, text.as_bytes())
}

pub fn read_report(path: &Path) -> Result<ReportDoc> {
    let text = std::fs::read_to_string(path)?;
    toml::from_str(&text).map_err(|e| super::parse_err(path, 0, e.to_string()))
}

/// One CSV row per segment: `segment_index,score,best_delay,overlap_length`.
pub fn write_segments_csv(path: &Path, report: &SymmetryReport) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "segment_index,score,best_delay,overlap_length")?;
    for SegmentScore {
        segment_index,
        score,
        best_delay,
        overlap_length,
    } in &report.per_segment
    {
        writeln!(out, "{segment_index},{score},{best_delay},{overlap_length}")?;
    }
    write_atomic(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::DelaySet;

    fn sample_report() -> SymmetryReport {
        SymmetryReport {
            hist_size: crate::histogram::HistSize::new(16, 16).unwrap(),
            segment_len: 120,
            delays: DelaySet::range(-50, 50).unwrap(),
            per_segment: vec![
                SegmentScore {
                    segment_index: 0,
                    score: 0.41,
                    best_delay: -8,
                    overlap_length: 112,
                },
                SegmentScore {
                    segment_index: 1,
                    score: 0.37,
                    best_delay: 7,
                    overlap_length: 113,
                },
            ],
            mean_score: 0.39,
            frames_used: 240,
            frames_discarded: 3,
        }
    }

    #[test]
    fn toml_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.toml");
        let report = sample_report();
        let cfg = PipelineConfig::default();
        write_report(&path, &report, &cfg).unwrap();
        let doc = read_report(&path).unwrap();
        assert_eq!(doc, ReportDoc::new(&report, &cfg));
    }

    #[test]
    fn identical_inputs_write_identical_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.toml");
        let b = dir.path().join("b.toml");
        let report = sample_report();
        let cfg = PipelineConfig::default();
        write_report(&a, &report, &cfg).unwrap();
        write_report(&b, &report, &cfg).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn csv_has_one_row_per_segment() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("segments.csv");
        write_segments_csv(&path, &sample_report()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "0,0.41,-8,112");
    }
}

//! Evaluation manifests and ROC result files.
//!
//! A manifest is a CSV of `path,subject_id,gait_type,label` rows (header
//! optional, `#` comments allowed) where `label` is `normal` or `abnormal`
//! and `path` points at a cloud-sequence directory, a histogram container or
//! a generator configuration.

use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{parse_err, write_atomic};
use crate::error::{Error, Result};
use crate::eval::{Label, RocResult, ScoreMode, SweepRow};
use crate::pipeline::PipelineConfig;

/// One dataset row of an evaluation manifest.
#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub subject_id: String,
    pub gait_type: String,
    pub label: Label,
}

/// Reads a manifest. Relative entry paths are resolved against the manifest
/// file's directory.
pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let file = std::fs::File::open(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut entries = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if i == 0 && fields.first().map(|f| f.eq_ignore_ascii_case("path")) == Some(true) {
            continue; // header row
        }
        if fields.len() != 4 {
            return Err(parse_err(
                path,
                i + 1,
                format!(
                    "expected `path,subject_id,gait_type,label`, got {} fields",
                    fields.len()
                ),
            ));
        }
        let entry_path = PathBuf::from(fields[0]);
        let entry_path = if entry_path.is_absolute() {
            entry_path
        } else {
            base.join(entry_path)
        };
        entries.push(ManifestEntry {
            path: entry_path,
            subject_id: fields[1].to_string(),
            gait_type: fields[2].to_string(),
            label: fields[3].parse()?,
        });
    }
    if entries.is_empty() {
        return Err(Error::EmptyInput("manifest"));
    }
    Ok(entries)
}

/// ROC points as `threshold,fpr,tpr` rows.
pub fn write_roc_csv(path: &Path, roc: &RocResult) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "threshold,fpr,tpr")?;
    for p in &roc.points {
        writeln!(out, "{},{},{}", p.threshold, p.fpr, p.tpr)?;
    }
    write_atomic(path, &out)
}

/// Evaluation summary document with the configuration echo.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RocSummary {
    pub mode: ScoreMode,
    pub auc: f64,
    pub eer: f64,
    pub eer_threshold: f64,
    pub n_positive: usize,
    pub n_negative: usize,
    pub config: PipelineConfig,
}

pub fn write_roc_summary(
    path: &Path,
    roc: &RocResult,
    mode: ScoreMode,
    config: &PipelineConfig,
) -> Result<()> {
    let doc = RocSummary {
        mode,
        auc: roc.auc,
        eer: roc.eer,
        eer_threshold: roc.eer_threshold,
        n_positive: roc.n_positive,
        n_negative: roc.n_negative,
        config: config.clone(),
    };
    let text = toml::to_string(&doc)
        .map_err(|e| Error::InvalidConfig(format!("summary serialization failed: {e}")))?;
    write_atomic(path, text.as_bytes())
}

/// Structured sweep document: configuration echo plus one entry per
/// (mode, size).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config: PipelineConfig,
    pub results: Vec<SweepEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepEntry {
    pub mode: ScoreMode,
    pub hist_h: usize,
    pub hist_w: usize,
    pub auc: f64,
    pub eer: f64,
    pub eer_threshold: f64,
}

pub fn write_sweep_summary(
    path: &Path,
    sections: &[(ScoreMode, &[SweepRow])],
    config: &PipelineConfig,
) -> Result<()> {
    let results = sections
        .iter()
        .flat_map(|(mode, rows)| {
            rows.iter().map(|row| SweepEntry {
                mode: *mode,
                hist_h: row.size.rows(),
                hist_w: row.size.cols(),
                auc: row.roc.auc,
                eer: row.roc.eer,
                eer_threshold: row.roc.eer_threshold,
            })
        })
        .collect();
    let doc = SweepSummary {
        config: config.clone(),
        results,
    };
    let text = toml::to_string(&doc)
        .map_err(|e| Error::InvalidConfig(format!("sweep serialization failed: {e}")))?;
    write_atomic(path, text.as_bytes())
}

/// Sweep results as flat `mode,h,w,auc,eer` rows.
pub fn write_sweep_csv(path: &Path, sections: &[(ScoreMode, &[SweepRow])]) -> Result<()> {
    let mut out = Vec::new();
    writeln!(out, "mode,h,w,auc,eer")?;
    for (mode, rows) in sections {
        for row in rows.iter() {
            writeln!(
                out,
                "{},{},{},{},{}",
                mode,
                row.size.rows(),
                row.size.cols(),
                row.roc.auc,
                row.roc.eer
            )?;
        }
    }
    write_atomic(path, &out)
}

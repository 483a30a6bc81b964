//! File formats: ASCII PLY and CSV point clouds, marker files, the `CYLH`
//! histogram container, symmetry reports, evaluation manifests and generator
//! configurations.
//!
//! All writers go through a write-then-rename so a failed run never leaves a
//! partial output file behind.

mod cloud_csv;
mod config;
mod cylh;
mod manifest;
mod markers;
mod ply;
mod report;

pub use cloud_csv::{read_cloud_csv, write_cloud_csv};
pub use config::{
    read_generator_config, read_pipeline_config, write_generator_config, GeneratorConfig,
};
pub use cylh::{
    read_histograms, read_histograms_csv, write_histograms, write_histograms_csv,
};
pub use manifest::{
    read_manifest, write_roc_csv, write_roc_summary, write_sweep_csv, write_sweep_summary,
    ManifestEntry, RocSummary, SweepEntry, SweepSummary,
};
pub use markers::{read_markers, MarkerSet};
pub use ply::{read_ply, write_ply};
pub use report::{read_report, write_report, write_segments_csv, ReportDoc, ReportSummary};

use std::ffi::OsStr;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::geometry::{Frame, PointCloud};

/// Writes via a temporary file in the same directory plus a rename, so a
/// failed run never leaves a partial file at `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut name = path
        .file_name()
        .ok_or_else(|| Error::InvalidConfig(format!("not a file path: {}", path.display())))?
        .to_os_string();
    name.push(".tmp");
    let tmp = path.with_file_name(name);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub(crate) fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

/// Reads one cloud file, picking the parser from the extension
/// (`.ply` or `.csv`/`.xyz`).
pub fn read_cloud(path: &Path, frame: Frame) -> Result<PointCloud> {
    match path.extension().and_then(OsStr::to_str) {
        Some("ply") => read_ply(path, frame),
        Some("csv") | Some("xyz") => read_cloud_csv(path, frame),
        other => Err(Error::InvalidConfig(format!(
            "unsupported cloud extension {:?} for {}",
            other,
            path.display()
        ))),
    }
}

/// Loads a cloud sequence from a directory: every `.ply`/`.csv`/`.xyz` file
/// in lexicographic name order. A `markers.csv` file is skipped (it holds
/// calibration markers, not a frame).
pub fn read_cloud_sequence(dir: &Path, frame: Frame) -> Result<Vec<PointCloud>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            matches!(
                p.extension().and_then(OsStr::to_str),
                Some("ply") | Some("csv") | Some("xyz")
            ) && p.file_name() != Some(OsStr::new("markers.csv"))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::EmptyInput("cloud sequence directory"));
    }
    files.iter().map(|p| read_cloud(p, frame)).collect()
}

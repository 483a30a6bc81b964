//! Input resolution: a sequence path may be a cloud directory, a `CYLH`
//! histogram container or a generator configuration. Cloud and generator
//! inputs can be cached as histogram containers keyed by content digest,
//! histogram size and the recentering flag.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};

use gaitsym_core::geometry::{build_body_frame, transform, Frame, PointCloud};
use gaitsym_core::histogram::CylHistogram;
use gaitsym_core::io;
use gaitsym_core::pipeline::{estimate_sequence, PipelineConfig};
use gaitsym_core::synth;

/// What a sequence path turned out to hold.
pub enum SequenceInput {
    CloudDir(PathBuf),
    Container(PathBuf),
    GeneratorConfig(PathBuf),
}

impl SequenceInput {
    pub fn classify(path: &Path) -> Result<Self> {
        if path.is_dir() {
            return Ok(SequenceInput::CloudDir(path.to_path_buf()));
        }
        if !path.exists() {
            bail!(gaitsym_core::Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("input not found: {}", path.display()),
            )));
        }
        match path.extension().and_then(|e| e.to_str()) {
            Some("cylh") => Ok(SequenceInput::Container(path.to_path_buf())),
            Some("toml") => Ok(SequenceInput::GeneratorConfig(path.to_path_buf())),
            other => bail!(gaitsym_core::Error::InvalidConfig(format!(
                "cannot tell what {} is (extension {:?}); expected a directory, .cylh or .toml",
                path.display(),
                other
            ))),
        }
    }
}

/// Loads the clouds of a directory input, applying the camera-to-body
/// transform when calibration markers are present (`markers.csv` in the
/// directory or an explicit file).
pub fn load_cloud_dir(dir: &Path, markers: Option<&Path>) -> Result<Vec<PointCloud>> {
    let default_markers = dir.join("markers.csv");
    let marker_path = markers.or_else(|| default_markers.exists().then_some(&default_markers));
    match marker_path {
        None => Ok(io::read_cloud_sequence(dir, Frame::Body)?),
        Some(mp) => {
            let markers = io::read_markers(mp)
                .with_context(|| format!("reading markers {}", mp.display()))?;
            let camera_clouds = io::read_cloud_sequence(dir, Frame::Camera)?;
            camera_clouds
                .iter()
                .map(|cloud| {
                    let frame = build_body_frame(&markers.treadmill, markers.walk, cloud)?;
                    Ok(transform(cloud, &frame)?)
                })
                .collect()
        }
    }
}

/// Content digest of an input, the caching key component.
pub fn input_digest(input: &SequenceInput) -> Result<String> {
    let mut hasher = Sha256::new();
    match input {
        SequenceInput::GeneratorConfig(path) | SequenceInput::Container(path) => {
            hasher.update(std::fs::read(path)?);
        }
        SequenceInput::CloudDir(dir) => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            for f in &files {
                hasher.update(f.file_name().unwrap_or_default().as_encoded_bytes());
                hasher.update(std::fs::read(f)?);
            }
        }
    }
    let hex = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>();
    Ok(hex[..16].to_string())
}

fn cache_path(cache_dir: &Path, digest: &str, cfg: &PipelineConfig) -> PathBuf {
    cache_dir.join(format!(
        "{digest}_{}_{}.cylh",
        cfg.hist_size,
        if cfg.recenter { "rc" } else { "raw" }
    ))
}

/// Turns any sequence input into per-frame histograms at the configured
/// size, using and maintaining the container cache when one is given.
///
/// Container inputs bypass estimation entirely; their stored size wins and a
/// mismatch with the requested size is an error.
pub fn resolve_histograms(
    input: &SequenceInput,
    cfg: &PipelineConfig,
    markers: Option<&Path>,
    cache_dir: Option<&Path>,
) -> Result<Vec<CylHistogram>> {
    if let SequenceInput::Container(path) = input {
        let hists = io::read_histograms(path)?;
        if let Some(first) = hists.first() {
            if first.size() != cfg.hist_size {
                bail!(gaitsym_core::Error::InvalidConfig(format!(
                    "container {} holds {} histograms but {} was requested",
                    path.display(),
                    first.size(),
                    cfg.hist_size
                )));
            }
        }
        return Ok(hists);
    }

    let cached = match cache_dir {
        Some(dir) => {
            let digest = input_digest(input)?;
            let path = cache_path(dir, &digest, cfg);
            if path.exists() {
                return Ok(io::read_histograms(&path)?);
            }
            Some(path)
        }
        None => None,
    };

    let clouds = match input {
        SequenceInput::CloudDir(dir) => load_cloud_dir(dir, markers)?,
        SequenceInput::GeneratorConfig(path) => {
            let gen_cfg = io::read_generator_config(path)?;
            synth::generate(&gen_cfg.gait, &gen_cfg.asymmetry, gen_cfg.frames)?
        }
        SequenceInput::Container(_) => unreachable!("handled above"),
    };
    let hists = estimate_sequence(&clouds, cfg.hist_size, cfg.recenter)?;

    if let Some(path) = cached {
        std::fs::create_dir_all(path.parent().expect("cache path has a parent"))?;
        io::write_histograms(&path, &hists)?;
    }
    Ok(hists)
}

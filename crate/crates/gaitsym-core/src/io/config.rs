//! Declarative generator configuration files (TOML).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::write_atomic;
use crate::error::{Error, Result};
use crate::synth::{AsymmetrySpec, GaitParams};

fn default_frames() -> usize {
    1200
}

/// A complete synthetic-sequence description: every field has a default, so
/// a config file only states what differs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    #[serde(default = "default_frames")]
    pub frames: usize,
    #[serde(default)]
    pub gait: GaitParams,
    #[serde(default)]
    pub asymmetry: AsymmetrySpec,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            frames: default_frames(),
            gait: GaitParams::default(),
            asymmetry: AsymmetrySpec::none(),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 {
            return Err(Error::InvalidConfig("frames must be >= 1".into()));
        }
        self.gait.validate()?;
        self.asymmetry.validate()
    }
}

pub fn read_generator_config(path: &Path) -> Result<GeneratorConfig> {
    let text = std::fs::read_to_string(path)?;
    let cfg: GeneratorConfig =
        toml::from_str(&text).map_err(|e| super::parse_err(path, 0, e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads a pipeline configuration file (same TOML family as the generator
/// config); omitted fields take the pipeline defaults.
pub fn read_pipeline_config(path: &Path) -> Result<crate::pipeline::PipelineConfig> {
    let text = std::fs::read_to_string(path)?;
    let cfg: crate::pipeline::PipelineConfig =
        toml::from_str(&text).map_err(|e| super::parse_err(path, 0, e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn write_generator_config(path: &Path, cfg: &GeneratorConfig) -> Result<()> {
    let text = toml::to_string_pretty(cfg)
        .map_err(|e| Error::InvalidConfig(format!("config serialization failed: {e}")))?;
    write_atomic(path, text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histogram::Side;
    use crate::synth::AsymmetryKind;

    #[test]
    fn sparse_config_fills_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gen.toml");
        std::fs::write(
            &path,
            "frames = 240\n[gait]\nseed = 7\npoints_per_frame = 500\n\n[asymmetry]\nkind = \"phase-shift\"\nside = \"left\"\nmagnitude = 0.3\n",
        )
        .unwrap();
        let cfg = read_generator_config(&path).unwrap();
        assert_eq!(cfg.frames, 240);
        assert_eq!(cfg.gait.seed, 7);
        assert_eq!(cfg.gait.points_per_frame, 500);
        assert_eq!(cfg.gait.fps, 13.0);
        assert_eq!(cfg.asymmetry.kind, AsymmetryKind::PhaseShift);
        assert_eq!(cfg.asymmetry.side, Side::Left);
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gen.toml");
        let mut cfg = GeneratorConfig {
            frames: 60,
            ..GeneratorConfig::default()
        };
        cfg.gait.noise_sigma = 0.0;
        write_generator_config(&path, &cfg).unwrap();
        assert_eq!(read_generator_config(&path).unwrap(), cfg);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gen.toml");
        std::fs::write(&path, "frames = 0\n").unwrap();
        assert!(read_generator_config(&path).is_err());
        std::fs::write(
            &path,
            "[asymmetry]\nkind = \"none\"\nside = \"left\"\nmagnitude = 0.5\n",
        )
        .unwrap();
        assert!(read_generator_config(&path).is_err());
    }
}

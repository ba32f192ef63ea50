//! JSON run configuration. Unknown keys are rejected at every level.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AlgebraConfig {
    pub k: usize,
    pub b: usize,
}

impl Default for AlgebraConfig {
    fn default() -> Self {
        Self { k: 1, b: 1 }
    }
}

/// `count` equally spaced points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.count == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config(format!("bad grid {self:?}")));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        let h = (self.stop - self.start) / (self.count - 1) as f64;
        Ok((0..self.count).map(|j| self.start + h * j as f64).collect())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridsConfig {
    pub lambda: Option<GridSpec>,
    pub r: Option<GridSpec>,
    pub xi: Option<GridSpec>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub algebra: AlgebraConfig,
    pub quadrature: QuadratureSpec,
    pub grids: GridsConfig,
    pub output: OutputConfig,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.quadrature.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let cfg = RunConfig::from_json("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_json(r#"{"algebra": {"k": 1, "c": 2}}"#).is_err());
        assert!(RunConfig::from_json(r#"{"colour": 1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"quadrature": {"nodes": 3}}"#).is_err());
    }

    #[test]
    fn nested_fields_parse() {
        let cfg = RunConfig::from_json(
            r#"{"algebra": {"k": 3}, "grids": {"lambda": {"start": 0, "stop": 1, "count": 3}},
                "output": {"format": "json"}, "seed": 9}"#,
        )
        .unwrap();
        assert_eq!(cfg.algebra, AlgebraConfig { k: 3, b: 1 });
        assert_eq!(cfg.grids.lambda.unwrap().points().unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(cfg.output.format, OutputFormat::Json);
        assert_eq!(cfg.seed, Some(9));
    }

    #[test]
    fn invalid_quadrature_is_a_config_error() {
        assert!(matches!(
            RunConfig::from_json(r#"{"quadrature": {"panels": 0}}"#),
            Err(Error::Config(_))
        ));
    }
}

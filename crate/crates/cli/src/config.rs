//! Optional TOML file whose values sit below command-line flags.

use std::path::Path;

use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub n: Option<u32>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub verify: Option<usize>,
    pub out: Option<String>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub portrait: PortraitConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub x: Option<String>,
    pub y: Option<String>,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub svg: Option<String>,
    pub b_form: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortraitConfig {
    pub radius: Option<f64>,
    pub trajectories: Option<usize>,
    pub horizon: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config: {e}")))
    }
}

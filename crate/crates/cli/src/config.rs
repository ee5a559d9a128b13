use std::path::Path;

use serde::{Deserialize, Serialize};
use ternquart::SolverConfig;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Solver tolerances plus output format, loadable from a JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tol_zero: f64,
    pub tol_merge: f64,
    pub tol_pair: f64,
    pub chart_retries: usize,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            tol_zero: s.tol_zero,
            tol_merge: s.tol_merge,
            tol_pair: s.tol_pair,
            chart_retries: s.chart_retries,
            seed: s.seed,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("bad config {}: {e}", path.display())))
    }

    pub fn solver(&self) -> Result<SolverConfig, CliError> {
        let s = SolverConfig {
            tol_zero: self.tol_zero,
            tol_merge: self.tol_merge,
            tol_pair: self.tol_pair,
            chart_retries: self.chart_retries,
            seed: self.seed,
        };
        s.validate().map_err(CliError::Input)?;
        Ok(s)
    }
}

use serde::{Deserialize, Serialize};

/// Numerical tolerances and the seed that drives every randomized chart choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Residual threshold, relative to a form's max coefficient.
    pub tol_zero: f64,
    /// Projective distance under which two roots are merged.
    pub tol_merge: f64,
    /// Maximum distance between the two roots of a tangency pair.
    pub tol_pair: f64,
    /// Number of random coordinate charts tried before giving up.
    pub chart_retries: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_zero: 1e-8,
            tol_merge: 1e-6,
            tol_pair: 1e-5,
            chart_retries: 5,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("tol_zero", self.tol_zero),
            ("tol_merge", self.tol_merge),
            ("tol_pair", self.tol_pair),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if self.chart_retries == 0 {
            return Err("chart_retries must be at least 1".into());
        }
        Ok(())
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Numerical tolerances and discretization knobs shared by every kernel.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Absolute tolerance for algebraic identities and membership checks.
    pub abs_tol: f64,
    /// Per-step local error target of the flow integrator.
    pub ode_tol: f64,
    /// Number of Gauss-Legendre panels used by `quad_integrate`.
    pub quad_nodes: usize,
    /// Maximum truncation order of the chronological series.
    pub series_kmax: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            ode_tol: 1e-10,
            quad_nodes: 64,
            series_kmax: 12,
        }
    }
}

impl ToleranceConfig {
    /// Checks positivity and lower bounds of every knob.
    pub fn validate(&self) -> Result<()> {
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(CoreError::InvalidConfig(format!(
                "abs_tol must be > 0, got {}",
                self.abs_tol
            )));
        }
        if self.ode_tol.is_nan() || self.ode_tol <= 0.0 {
            return Err(CoreError::InvalidConfig(format!(
                "ode_tol must be > 0, got {}",
                self.ode_tol
            )));
        }
        if self.quad_nodes < 2 {
            return Err(CoreError::InvalidConfig(format!(
                "quad_nodes must be >= 2, got {}",
                self.quad_nodes
            )));
        }
        if self.series_kmax < 1 {
            return Err(CoreError::InvalidConfig(format!(
                "series_kmax must be >= 1, got {}",
                self.series_kmax
            )));
        }
        Ok(())
    }
}

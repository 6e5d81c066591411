use serde::{Deserialize, Serialize};

/// Tolerance bands used by the equilibrium and sign classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Residual bound for accepting a state as an equilibrium.
    pub eq: f64,
    /// Eigenvalues below this magnitude count as zero.
    pub sn: f64,
    /// Relative width of the band around a quadratic form's zero set.
    pub q_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq: 1e-10,
            sn: 1e-8,
            q_rel: 1e-9,
        }
    }
}

impl Tolerances {
    /// Absolute half-width of the zero band for a quadratic form of the given scale.
    pub fn q_band(&self, scale: f64) -> f64 {
        self.q_rel * scale.max(1.0)
    }
}

//! Numerical tolerances shared by every module.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Absolute threshold on unit-scaled residuals.
    pub zero: f64,
    /// Rank threshold, relative to the largest singular value.
    pub rank: f64,
    pub cone: f64,
    /// Projector-distance threshold for subspace equality.
    pub sub: f64,
    pub psd: f64,
    /// Eigenvalue clustering gap, scaled by max(1, |x|).
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero: 1e-10,
            rank: 1e-9,
            cone: 1e-10,
            sub: 1e-8,
            psd: 1e-8,
            eig: 1e-8,
        }
    }
}

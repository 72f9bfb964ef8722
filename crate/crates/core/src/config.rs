//! Tolerances and resource caps.
//!
//! Every comparison in the crate takes its threshold from a [`Config`];
//! nothing below hard-codes a tolerance. `COVREP_TOL` and `COVREP_MAX_DIM`
//! override the defaults, CLI flags override the environment.

use crate::error::{CovrepError, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_DIM: usize = 4096;
pub const DEFAULT_K_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Verdict tolerance for normalized residuals, and relative singular
    /// value cutoff for rank decisions.
    pub tol: f64,
    /// Largest ambient dimension any lifted operator may reach.
    pub max_dim: usize,
    /// Default truncation for power chains and tensor levels.
    pub k_max: usize,
    /// Sweep cap for the Jacobi iterations.
    pub max_sweeps: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: DEFAULT_TOL,
            max_dim: DEFAULT_MAX_DIM,
            k_max: DEFAULT_K_MAX,
            max_sweeps: 80,
        }
    }
}

impl Config {
    /// Defaults with `COVREP_TOL` / `COVREP_MAX_DIM` applied.
    pub fn from_env() -> Result<Self> {
        let mut cfg = Config::default();
        if let Ok(raw) = std::env::var("COVREP_TOL") {
            let tol: f64 = raw
                .trim()
                .parse()
                .map_err(|_| CovrepError::InvalidInput(format!("COVREP_TOL={raw:?} is not a number")))?;
            cfg = cfg.with_tol(tol)?;
        }
        if let Ok(raw) = std::env::var("COVREP_MAX_DIM") {
            let cap: usize = raw
                .trim()
                .parse()
                .map_err(|_| CovrepError::InvalidInput(format!("COVREP_MAX_DIM={raw:?} is not a count")))?;
            cfg.max_dim = cap;
        }
        Ok(cfg)
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CovrepError::InvalidInput(format!("tolerance must be finite and >= 0, got {tol}")));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.k_max = k_max.max(1);
        self
    }

    pub fn with_max_dim(mut self, max_dim: usize) -> Self {
        self.max_dim = max_dim;
        self
    }

    /// Absolute singular-value cutoff for a matrix whose largest singular
    /// value is `s_max`.
    pub fn rank_cutoff(&self, s_max: f64) -> f64 {
        self.tol * s_max.max(f64::MIN_POSITIVE)
    }

    /// Threshold used for containment and orthogonality of subspaces
    /// (bases are orthonormal, so this is scale free).
    pub fn subspace_tol(&self) -> f64 {
        (self.tol * 100.0).max(1e-12)
    }

    pub(crate) fn check_dim(&self, what: &str, needed: usize) -> Result<()> {
        if needed > self.max_dim {
            Err(CovrepError::SizeCap {
                what: what.to_string(),
                needed,
                cap: self.max_dim,
            })
        } else {
            Ok(())
        }
    }
}

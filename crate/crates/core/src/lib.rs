//! Finite-dimensional covariant representations `Ṽ: C^n ⊗ C^h → C^h`:
//! pseudoinverses, Cauchy duals, Wold-type decompositions and certifiers.
//!
//! ```
//! use covrep::duality::{cauchy_dual, dual_identity_suite};
//! use covrep::linalg::ComplexMatrix;
//! use covrep::structure::wold_report;
//! use covrep::{Config, CovariantRep};
//!
//! let cfg = Config::default();
//! let v = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])?;
//! let rep = CovariantRep::new(2, 1, v)?;
//! let dual = cauchy_dual(&rep, &cfg)?;
//! assert_eq!(dual.v_tilde(), rep.v_tilde());
//! assert!(dual_identity_suite(&rep, None, &cfg)?.overall_pass());
//! assert_eq!(wold_report(&rep, &cfg)?.wandering.dim(), 1);
//! # Ok::<(), covrep::CovrepError>(())
//! ```

pub mod cli;
pub mod config;
pub mod duality;
pub mod structure;
pub mod error;
pub mod fuzz;
pub mod io;
pub mod linalg;
pub mod properties;
pub mod random;
pub mod rep;
pub mod report;
pub mod shift;

pub use config::Config;
pub use error::{CovrepError, Result};
pub use rep::{check_covariance, gamma, is_partial_isometry, make_rep, CovariantRep};

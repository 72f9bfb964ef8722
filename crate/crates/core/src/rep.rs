//! Covariant representations `Ṽ: E ⊗ H → H` with `E = C^n`.
//!
//! Basis ordering: the flat index of `δ_{i1} ⊗ … ⊗ δ_{ik} ⊗ e_j` is
//! `((i1·n + i2)·n + … + ik)·dim_h + j` (all 0-based). With this ordering
//! `I_{E^{⊗k}} ⊗ Ṽ` is exactly `kron(I_{n^k}, Ṽ)`.

use crate::config::Config;
use crate::error::{CovrepError, Result};
use crate::linalg::{svd_thin, ComplexMatrix};
use crate::report::{Check, CheckReport};

/// Labelled generator matrices.
pub type Generators = Vec<(String, ComplexMatrix)>;

#[derive(Debug, Clone)]
pub struct CovariantRep {
    dim_h: usize,
    n: usize,
    v_tilde: ComplexMatrix,
    sigma_gens: Option<Generators>,
    phi_gens: Option<Generators>,
}

/// Validated constructor.
pub fn make_rep(
    dim_h: usize,
    n: usize,
    v_tilde: ComplexMatrix,
    sigma_gens: Option<Generators>,
    phi_gens: Option<Generators>,
) -> Result<CovariantRep> {
    if n == 0 {
        return Err(CovrepError::InvalidInput("correspondence dimension n must be >= 1".into()));
    }
    let cols = n
        .checked_mul(dim_h)
        .ok_or_else(|| CovrepError::InvalidInput("n·dim_h overflows".into()))?;
    if v_tilde.shape() != (dim_h, cols) {
        return Err(CovrepError::shape(
            "make_rep",
            format!("{dim_h}x{cols}"),
            format!("{}x{}", v_tilde.rows(), v_tilde.cols()),
        ));
    }
    if !v_tilde.is_finite() {
        return Err(CovrepError::InvalidInput("v_tilde has non-finite entries".into()));
    }
    match (&sigma_gens, &phi_gens) {
        (None, None) => {}
        (Some(s), Some(p)) => {
            if s.len() != p.len() {
                return Err(CovrepError::InvalidInput(format!(
                    "{} sigma generators but {} phi generators",
                    s.len(),
                    p.len()
                )));
            }
            for ((ls, ms), (lp, mp)) in s.iter().zip(p) {
                if ls != lp {
                    return Err(CovrepError::InvalidInput(format!("generator labels differ: {ls:?} vs {lp:?}")));
                }
                if ms.shape() != (dim_h, dim_h) {
                    return Err(CovrepError::shape(
                        format!("sigma generator {ls}"),
                        format!("{dim_h}x{dim_h}"),
                        format!("{}x{}", ms.rows(), ms.cols()),
                    ));
                }
                if mp.shape() != (n, n) {
                    return Err(CovrepError::shape(
                        format!("phi generator {lp}"),
                        format!("{n}x{n}"),
                        format!("{}x{}", mp.rows(), mp.cols()),
                    ));
                }
            }
        }
        _ => {
            return Err(CovrepError::InvalidInput(
                "sigma and phi generators must be supplied together".into(),
            ))
        }
    }
    Ok(CovariantRep {
        dim_h,
        n,
        v_tilde,
        sigma_gens,
        phi_gens,
    })
}

impl CovariantRep {
    /// Representation over `B = C` without explicit generators.
    pub fn new(dim_h: usize, n: usize, v_tilde: ComplexMatrix) -> Result<Self> {
        make_rep(dim_h, n, v_tilde, None, None)
    }

    /// Same ambient data and generators, different matrix.
    pub fn with_matrix(&self, v_tilde: ComplexMatrix) -> Result<Self> {
        make_rep(self.dim_h, self.n, v_tilde, self.sigma_gens.clone(), self.phi_gens.clone())
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v_tilde(&self) -> &ComplexMatrix {
        &self.v_tilde
    }

    pub fn sigma_gens(&self) -> Option<&Generators> {
        self.sigma_gens.as_ref()
    }

    pub fn phi_gens(&self) -> Option<&Generators> {
        self.phi_gens.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.v_tilde.max_abs() == 0.0
    }

    /// `1 + ‖Ṽ‖_F`, the scale every residual is divided by.
    pub fn scale(&self) -> f64 {
        1.0 + self.v_tilde.frobenius_norm()
    }

    /// `n^k`, or a size-cap error on overflow.
    pub fn copies(&self, k: usize) -> Result<usize> {
        let k32 = u32::try_from(k).map_err(|_| CovrepError::InvalidInput(format!("level {k} too large")))?;
        self.n.checked_pow(k32).ok_or(CovrepError::SizeCap {
            what: format!("E^(x){k}"),
            needed: usize::MAX,
            cap: usize::MAX,
        })
    }

    /// `dim(E^{⊗k} ⊗ H) = n^k·dim_h`, checked against the size cap.
    pub fn level_dim(&self, k: usize, cfg: &Config) -> Result<usize> {
        let d = self
            .copies(k)?
            .checked_mul(self.dim_h)
            .ok_or(CovrepError::SizeCap {
                what: format!("E^(x){k} (x) H"),
                needed: usize::MAX,
                cap: cfg.max_dim,
            })?;
        cfg.check_dim(&format!("E^(x){k} (x) H"), d)?;
        Ok(d)
    }

    /// Largest `k ≤ want` with `n^k·dim_h` within the size cap.
    pub fn max_level(&self, want: usize, cfg: &Config) -> usize {
        (0..=want).take_while(|&k| self.level_dim(k, cfg).is_ok()).last().unwrap_or(0)
    }

    /// `I_{E^{⊗k}} ⊗ Ṽ = kron(I_{n^k}, Ṽ)`.
    pub fn lift(&self, k: usize, cfg: &Config) -> Result<ComplexMatrix> {
        self.level_dim(k + 1, cfg)?;
        Ok(self.v_tilde.kron_identity_left(self.copies(k)?))
    }

    /// `Ṽ_k: E^{⊗k} ⊗ H → H`, with `Ṽ_0 = I`.
    pub fn power(&self, k: usize, cfg: &Config) -> Result<ComplexMatrix> {
        self.level_dim(k, cfg)?;
        let mut p = ComplexMatrix::identity(self.dim_h);
        for j in 1..=k {
            // Ṽ_j = Ṽ_{j−1}·(I_{E^{⊗(j−1)}} ⊗ Ṽ)
            p = p.mul_kron_identity(self.copies(j - 1)?, &self.v_tilde);
        }
        Ok(p)
    }

    /// `[Ṽ_0, …, Ṽ_k]`.
    pub fn powers(&self, k: usize, cfg: &Config) -> Result<Vec<ComplexMatrix>> {
        self.level_dim(k, cfg)?;
        let mut out = Vec::with_capacity(k + 1);
        out.push(ComplexMatrix::identity(self.dim_h));
        for j in 1..=k {
            let next = out[j - 1].mul_kron_identity(self.copies(j - 1)?, &self.v_tilde);
            out.push(next);
        }
        Ok(out)
    }

    /// `Ṽ ⊕ W` on `H_1 ⊕ H_2`; both summands must share `n`.
    pub fn direct_sum(&self, other: &CovariantRep) -> Result<CovariantRep> {
        if self.n != other.n {
            return Err(CovrepError::InvalidInput(format!(
                "direct sum needs equal n, got {} and {}",
                self.n, other.n
            )));
        }
        let (h1, h2, n) = (self.dim_h, other.dim_h, self.n);
        let h = h1 + h2;
        let mut v = ComplexMatrix::zeros(h, n * h);
        for i in 0..n {
            for j in 0..h1 {
                for r in 0..h1 {
                    v[(r, i * h + j)] = self.v_tilde[(r, i * h1 + j)];
                }
            }
            for j in 0..h2 {
                for r in 0..h2 {
                    v[(h1 + r, i * h + h1 + j)] = other.v_tilde[(r, i * h2 + j)];
                }
            }
        }
        CovariantRep::new(h, n, v)
    }
}

/// Generator-wise covariance `σ(b)Ṽ = Ṽ(φ(b) ⊗ I_H)`.
pub fn check_covariance(rep: &CovariantRep, tol: f64) -> CheckReport {
    let mut report = CheckReport::new();
    let (Some(sig), Some(phi)) = (rep.sigma_gens(), rep.phi_gens()) else {
        report.push(
            Check::identity("covariance", "Lemma.bijection", 0.0, tol)
                .with_detail("no generators supplied: B = C acts by scalars, vacuous pass"),
        );
        return report;
    };
    let v = rep.v_tilde();
    let h = rep.dim_h();
    for ((label, s), (_, p)) in sig.iter().zip(phi) {
        let lhs = s.mul_unchecked(v);
        let rhs = v.mul_unchecked(&p.kron(&ComplexMatrix::identity(h)));
        let residual = lhs.dist(&rhs);
        report.push(
            Check::identity(&format!("covariance[{label}]"), "Lemma.bijection", residual, tol * rep.scale())
                .with_detail("||sigma(b) V - V (phi(b) (x) I)||_F"),
        );
        let herm_s = s.hermitian_defect();
        let herm_p = p.hermitian_defect();
        if herm_p <= tol * (1.0 + p.frobenius_norm()) {
            report.push(
                Check::property(
                    &format!("sigma-hermitian[{label}]"),
                    "Lemma.bijection",
                    herm_s <= tol * (1.0 + s.frobenius_norm()),
                    herm_s,
                    tol,
                )
                .with_detail("hermitian phi(b) should map to hermitian sigma(b)"),
            );
        }
    }
    let nondegenerate = phi.iter().any(|(_, p)| p.max_abs() > 0.0);
    report.push(
        Check::property("phi-nondegenerate", "plumbing", nondegenerate, 0.0, 0.0)
            .with_detail("informational: not enforced"),
    );
    report
}

/// Reduced minimum modulus: smallest singular value above `tol·s_max`,
/// `+∞` for the zero map.
pub fn gamma(rep: &CovariantRep, cfg: &Config) -> Result<f64> {
    if rep.is_zero() || rep.v_tilde().is_empty() {
        return Ok(f64::INFINITY);
    }
    let r = svd_thin(rep.v_tilde())?;
    let cutoff = cfg.rank_cutoff(r.s_max());
    Ok(r
        .singular_values
        .iter()
        .copied()
        .filter(|&s| s > cutoff)
        .fold(f64::INFINITY, f64::min))
}

/// `‖ṼṼ^*Ṽ − Ṽ‖_F ≤ tol·(1 + ‖Ṽ‖)`, with the residual.
pub fn is_partial_isometry(rep: &CovariantRep, tol: f64) -> (bool, f64) {
    let v = rep.v_tilde();
    let vvv = v.mul_unchecked(&v.adjoint()).mul_unchecked(v);
    let residual = vvv.dist(v);
    (residual <= tol * rep.scale(), residual)
}

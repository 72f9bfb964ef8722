//! Modulo-kernel inequalities certified through extreme eigenvalues of the
//! associated quadratic forms, and the implication suite linking concavity
//! of `Ṽ` to hyponormality and contractivity of its Cauchy dual.

use crate::config::Config;
use crate::duality::{cauchy_dual, mp_inverse};
use crate::error::{CovrepError, Result};
use crate::linalg::{corange_relative, hermitian_eigen, spectral_norm, subspace_intersect, ComplexMatrix, Subspace};
use crate::rep::{gamma, CovariantRep};
use crate::report::{Check, CheckReport, MarginSense, PropertyVerdict};

/// Coordinate restriction of certifier domains, used to strip truncation
/// artifacts from finite windows of infinite shifts. `eh` indexes `E ⊗ H`,
/// `e2h` indexes `E^{⊗2} ⊗ H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorMask {
    pub eh: Vec<usize>,
    pub e2h: Vec<usize>,
}

fn mask_level(mask: Option<&InteriorMask>, level: usize, ambient: usize, tol: f64) -> Result<Option<Subspace>> {
    let Some(mask) = mask else { return Ok(None) };
    let idx = match level {
        1 => &mask.eh,
        2 => &mask.e2h,
        _ => return Err(CovrepError::InvalidInput(format!("interior mask does not cover level {level}"))),
    };
    if let Some(&bad) = idx.iter().find(|&&i| i >= ambient) {
        return Err(CovrepError::InvalidInput(format!("mask index {bad} outside dimension {ambient}")));
    }
    Ok(Some(Subspace::coordinate(ambient, idx, tol)))
}

/// Extreme eigenvalue of `B*MB` with its eigenvector mapped back through `B`.
fn certify(name: &str, m: &ComplexMatrix, domain: &Subspace, sense: MarginSense, cfg: &Config) -> Result<PropertyVerdict> {
    let tol = cfg.tol * (1.0 + m.frobenius_norm());
    if domain.is_zero() {
        return Ok(PropertyVerdict::vacuous(name, sense, tol));
    }
    let b = domain.basis();
    let form = b.adjoint_mul(&m.mul_unchecked(b));
    let eig = hermitian_eigen(&form, cfg.max_sweeps)?;
    let (value, y) = match sense {
        MarginSense::LowerBound => eig.min(),
        MarginSense::UpperBound => eig.max(),
    }
    .expect("nonempty domain");
    Ok(PropertyVerdict::from_margin(name, value, sense, tol, b.mul_vec(&y), domain.dim()))
}

fn restrict(domain: Subspace, mask: Option<Subspace>) -> Result<Subspace> {
    match mask {
        Some(c) => subspace_intersect(&domain, &c),
        None => Ok(domain),
    }
}

/// `‖(I_E ⊗ Ṽ*)η‖ ≤ ‖Ṽη‖` for `η ∈ N(Ṽ)^⊥`.
pub fn is_hyponormal_mod(rep: &CovariantRep, mask: Option<&InteriorMask>, cfg: &Config) -> Result<PropertyVerdict> {
    let v = rep.v_tilde();
    let nh = v.cols();
    let a = &v.adjoint_mul(v) - &v.mul_unchecked(&v.adjoint()).kron_identity_left(rep.n());
    let stol = cfg.subspace_tol();
    let domain = restrict(corange_relative(v, cfg.tol)?.with_tol(stol), mask_level(mask, 1, nh, stol)?)?;
    certify("hyponormal-mod", &a, &domain, MarginSense::LowerBound, cfg)
}

/// `‖(I_E ⊗ Ṽ*)η‖ ≤ ‖Ṽη‖` for every `η ∈ E ⊗ H`.
pub fn is_hyponormal(rep: &CovariantRep, cfg: &Config) -> Result<PropertyVerdict> {
    let v = rep.v_tilde();
    let a = &v.adjoint_mul(v) - &v.mul_unchecked(&v.adjoint()).kron_identity_left(rep.n());
    certify("hyponormal", &a, &Subspace::full(v.cols(), cfg.subspace_tol()), MarginSense::LowerBound, cfg)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `Σ_j (−1)^j C(k,j) ‖(I_{E^{⊗(k−j)}} ⊗ Ṽ_j)ξ‖² ≤ 0` on
/// `N(I_{E^{⊗(k−1)}} ⊗ Ṽ)^⊥`; `k = 1` is expansivity modulo the kernel.
pub fn is_n_expansive_mod(
    rep: &CovariantRep,
    k: usize,
    mask: Option<&InteriorMask>,
    cfg: &Config,
) -> Result<PropertyVerdict> {
    if k == 0 {
        return Err(CovrepError::InvalidInput("n-expansive order must be at least 1".into()));
    }
    let dim = rep.level_dim(k, cfg)?;
    let stol = cfg.subspace_tol();
    let co = corange_relative(rep.v_tilde(), cfg.tol)?.with_tol(stol);
    let domain = restrict(co.kron_identity_left(rep.copies(k - 1)?), mask_level(mask, k, dim, stol)?)?;
    let name = format!("{k}-expansive-mod");
    if domain.is_zero() {
        return Ok(PropertyVerdict::vacuous(&name, MarginSense::UpperBound, cfg.tol));
    }
    let b = domain.basis();
    let mut form = ComplexMatrix::zeros(b.cols(), b.cols());
    let mut m_norm = 0.0;
    for j in 0..=k {
        let coef = if j % 2 == 0 { 1.0 } else { -1.0 } * binomial(k, j);
        let lb = if j == 0 {
            b.clone()
        } else {
            let vj = rep.power(j, cfg)?;
            let g = vj.adjoint_mul(&vj);
            m_norm += coef.abs() * g.frobenius_norm() * (rep.copies(k - j)? as f64).sqrt();
            ComplexMatrix::kron_identity_mul(rep.copies(k - j)?, &g, b)
        };
        if j == 0 {
            m_norm += coef.abs() * (dim as f64).sqrt();
        }
        form = &form + &b.adjoint_mul(&lb).scale_real(coef);
    }
    let tol = cfg.tol * (1.0 + m_norm);
    let eig = hermitian_eigen(&form, cfg.max_sweeps)?;
    let (value, y) = eig.max().expect("nonempty domain");
    Ok(PropertyVerdict::from_margin(&name, value, MarginSense::UpperBound, tol, b.mul_vec(&y), domain.dim()))
}

/// `Ṽ_2*Ṽ_2 + middle − 2(I_E ⊗ Ṽ*Ṽ)` on `E^{⊗2} ⊗ H`.
fn concavity_form(rep: &CovariantRep, middle: ComplexMatrix, cfg: &Config) -> Result<ComplexMatrix> {
    let v2 = rep.power(2, cfg)?;
    let g = rep.v_tilde().adjoint_mul(rep.v_tilde()).kron_identity_left(rep.n());
    Ok(&(&v2.adjoint_mul(&v2) + &middle) - &g.scale_real(2.0))
}

/// `‖Ṽ_2ζ‖² + ‖(I_E ⊗ Ṽ†Ṽ)ζ‖² − 2‖(I_E ⊗ Ṽ)ζ‖² ≤ 0` on all of `E^{⊗2} ⊗ H`,
/// equivalent to concavity on `N(I_E ⊗ Ṽ)^⊥`.
pub fn is_concave_mod(rep: &CovariantRep, mask: Option<&InteriorMask>, cfg: &Config) -> Result<PropertyVerdict> {
    let dim = rep.level_dim(2, cfg)?;
    let vd = mp_inverse(rep, cfg)?;
    let middle = vd.mul_unchecked(rep.v_tilde()).kron_identity_left(rep.n());
    let m = concavity_form(rep, middle, cfg)?;
    let stol = cfg.subspace_tol();
    let domain = mask_level(mask, 2, dim, stol)?.unwrap_or_else(|| Subspace::full(dim, stol));
    certify("concave-mod", &m, &domain, MarginSense::UpperBound, cfg)
}

/// `‖Ṽ_2ζ‖² + ‖ζ‖² − 2‖(I_E ⊗ Ṽ)ζ‖² ≤ 0` on all of `E^{⊗2} ⊗ H`.
pub fn is_concave_full(rep: &CovariantRep, mask: Option<&InteriorMask>, cfg: &Config) -> Result<PropertyVerdict> {
    let dim = rep.level_dim(2, cfg)?;
    let m = concavity_form(rep, ComplexMatrix::identity(dim), cfg)?;
    let stol = cfg.subspace_tol();
    let domain = mask_level(mask, 2, dim, stol)?.unwrap_or_else(|| Subspace::full(dim, stol));
    certify("concave", &m, &domain, MarginSense::UpperBound, cfg)
}

/// `(I_{E^{⊗k}} ⊗ Ṽ)N(I_{E^{⊗k}} ⊗ Ṽ)^⊥ ⊆ N(I_{E^{⊗(k−1)}} ⊗ Ṽ)^⊥`. Both sides
/// are `E^{⊗(k−1)} ⊗ (·)` of the `k = 1` spaces, so every level reduces to
/// `E ⊗ R(Ṽ) ⊆ R(Ṽ*)`.
fn kernel_complement_invariance(rep: &CovariantRep, cfg: &Config) -> Result<f64> {
    let v = rep.v_tilde();
    let stol = cfg.subspace_tol();
    let range = crate::linalg::range_relative(v, cfg.tol)?.with_tol(stol);
    let co = corange_relative(v, cfg.tol)?.with_tol(stol);
    range.kron_identity_left(rep.n()).containment_defect(&co)
}

/// Each hypothesis and conclusion is evaluated on its own, then combined
/// into three-valued implication checks.
pub fn theorem_suite(rep: &CovariantRep, mask: Option<&InteriorMask>, cfg: &Config) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let stol = cfg.subspace_tol();
    let dual = cauchy_dual(rep, cfg)?;
    let v = rep.v_tilde();
    let n = rep.n();

    let cm = is_concave_mod(rep, mask, cfg)?;
    let cf = is_concave_full(rep, mask, cfg)?;
    let hyp_self = is_hyponormal_mod(rep, mask, cfg)?;
    let mut hyp_dual = is_hyponormal_mod(&dual, mask, cfg)?;
    hyp_dual.name = "dual:hyponormal-mod".into();
    let exp1 = is_n_expansive_mod(rep, 1, mask, cfg)?;
    let exp2 = is_n_expansive_mod(rep, 2, mask, cfg)?;
    let dual_norm = spectral_norm(dual.v_tilde())?;
    let ctol = cfg.tol * (1.0 + dual_norm);
    let dual_contractive = dual_norm <= 1.0 + ctol;

    report.push(cm.to_check("Eq.D1"));
    report.push(cf.to_check("Def.concave"));
    report.push(hyp_self.to_check("Def.hyponormal-mod"));
    report.push(hyp_dual.to_check("Def.hyponormal-mod"));
    report.push(exp1.to_check("Def.n-expansive-mod"));
    report.push(exp2.to_check("Def.n-expansive-mod"));
    report.push(
        Check::property("dual:contractive", "PropX5", dual_contractive, dual_norm - 1.0, ctol)
            .with_detail(format!("||V'|| = {dual_norm:.6}")),
    );

    report.push(
        Check::theorem("ThmX4", "ThmX4", cm.holds(), hyp_dual.holds(), hyp_dual.margin, hyp_dual.tolerance)
            .with_witness(hyp_dual.witness.clone())
            .with_detail("concave mod N(V) => V' hyponormal mod N(V)"),
    );

    let inv = kernel_complement_invariance(rep, cfg)?;
    let inv_tol = stol * (1.0 + v.cols() as f64);
    let inv_ok = inv <= inv_tol;
    report.push(
        Check::property("PropX5.hypothesis", "PropX5", inv_ok, inv, inv_tol)
            .with_detail("checked for all n (every level reduces to E (x) R(V) in R(V*))"),
    );
    report.push(
        Check::theorem(
            "PropX5",
            "PropX5",
            cm.holds() && inv_ok,
            exp1.holds() && dual_contractive,
            exp1.margin.max(dual_norm - 1.0),
            exp1.tolerance.max(ctol),
        )
        .with_witness(exp1.witness.clone())
        .with_detail(format!("expansive mod {}, ||V'|| = {dual_norm:.6}", exp1.holds())),
    );
    report.push(
        Check::theorem("CorY1", "CorY1", cf.holds(), hyp_dual.holds() && dual_contractive, hyp_dual.margin, hyp_dual.tolerance)
            .with_detail(format!("V' hyponormal mod {}, ||V'|| = {dual_norm:.6}", hyp_dual.holds())),
    );

    // block operator X(ζ, h) = (I_E ⊗ Ṽ)ζ + (I_E ⊗ ṼṼ†)Ṽ†h
    let vd = mp_inverse(rep, cfg)?;
    let lift = v.kron_identity_left(n);
    let second = v.mul_unchecked(&vd).kron_identity_left(n).mul_unchecked(&vd);
    let x = lift.hstack(&second)?;
    let x_norm = spectral_norm(&x)?;
    let xtol = cfg.tol * 10.0 * (1.0 + x_norm);
    let x1 = x_norm <= 2f64.sqrt() + xtol;
    report.push(
        Check::property("Eq.X1", "Eq.X1", x1, x_norm - 2f64.sqrt(), xtol)
            .with_detail(format!("||[I(x)V, (I(x)VVdagger)Vdagger]|| = {x_norm:.6}")),
    );
    report.push(Check::theorem("Cor.X1", "Eq.X1", x1, hyp_self.holds(), hyp_self.margin, hyp_self.tolerance));

    // ‖(I_E ⊗ Ṽ)ζ + η‖² ≤ 2(‖ζ‖² + ‖Ṽη‖²) as Y*Y − 2·diag(I, Ṽ*Ṽ) ≤ 0
    let nh = v.cols();
    let y = lift.hstack(&ComplexMatrix::identity(nh))?;
    let weight = ComplexMatrix::identity(lift.cols()).direct_sum(&v.adjoint_mul(v));
    let q = &y.adjoint_mul(&y) - &weight.scale_real(2.0);
    let ineq = certify("Cor.mixed-ineq", &q, &Subspace::full(q.rows(), stol), MarginSense::UpperBound, cfg)?;
    report.push(ineq.to_check("Cor.mixed"));
    let hyp_full = is_hyponormal(rep, cfg)?;
    let v_norm = spectral_norm(v)?;
    let vtol = cfg.tol * (1.0 + v_norm);
    let contractive = v_norm <= 1.0 + vtol;
    report.push(
        Check::theorem("Cor.mixed", "Cor.mixed", ineq.holds(), hyp_full.holds() && contractive, hyp_full.margin, hyp_full.tolerance)
            .with_detail(format!("hyponormal {}, ||V|| = {v_norm:.6}", hyp_full.holds())),
    );

    report.push(
        Check::consistency("2-expansive-mod=concave-mod", "PropX3", mask.is_none(), exp2.holds() == cm.holds())
            .with_detail(format!("margins {:.3e} / {:.3e}", exp2.margin, cm.margin)),
    );
    let g = gamma(rep, cfg)?;
    report.push(
        Check::consistency("1-expansive-mod=gamma>=1", "Def.n-expansive-mod", mask.is_none(), exp1.holds() == (g >= 1.0 - 1e-10))
            .with_detail(format!("gamma = {g:.12}")),
    );
    Ok(report)
}

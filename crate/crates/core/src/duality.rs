//! Moore-Penrose inverse, Cauchy dual, dagger powers and the identity suites
//! that connect them.

use crate::config::Config;
use crate::error::{CovrepError, Result};
use crate::linalg::{
    kernel_relative, kron_block_residual, onb_kernel, pinv_relative, pinv_with_rank, range_relative, rank, subspace_intersect,
    ComplexMatrix, Subspace,
};
use crate::rep::{is_partial_isometry, CovariantRep};
use crate::report::{Check, CheckKind, CheckReport, Verdict};
use crate::structure::{self, range_chain};

/// Named residuals with verdicts.
#[derive(Debug, Clone)]
pub struct DualityReport {
    pub tolerance: f64,
    pub report: CheckReport,
}

impl DualityReport {
    /// True iff no check failed.
    pub fn overall_pass(&self) -> bool {
        !self.report.checks.iter().any(|c| c.verdict == Verdict::Fail)
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.report.get(name).map(|c| c.margin)
    }
}

/// `Ṽ†`, with singular values at most `tol·s_max` treated as zero.
pub fn mp_inverse(rep: &CovariantRep, cfg: &Config) -> Result<ComplexMatrix> {
    pinv_relative(rep.v_tilde(), cfg.tol)
}

/// Numerical rank of `Ṽ` at the representation cutoff.
pub fn rep_rank(rep: &CovariantRep, cfg: &Config) -> Result<usize> {
    rank(rep.v_tilde(), cfg.tol)
}

/// `S^{(k)} = (I_{E^{⊗(k−1)}} ⊗ S)…(I_E ⊗ S)·S`, with `S^{(0)} = I_H`.
pub fn s_power(rep: &CovariantRep, s: &ComplexMatrix, k: usize, cfg: &Config) -> Result<ComplexMatrix> {
    let (h, n) = (rep.dim_h(), rep.n());
    if s.shape() != (n * h, h) {
        return Err(CovrepError::shape(
            "generalized inverse",
            format!("{}x{}", n * h, h),
            format!("{}x{}", s.rows(), s.cols()),
        ));
    }
    rep.level_dim(k, cfg)?;
    let mut acc = ComplexMatrix::identity(h);
    for j in 0..k {
        acc = ComplexMatrix::kron_identity_mul(rep.copies(j)?, s, &acc);
    }
    Ok(acc)
}

/// `Ṽ^{†(k)}: H → E^{⊗k} ⊗ H`, `k ≥ 1`.
pub fn dagger_power(rep: &CovariantRep, k: usize, cfg: &Config) -> Result<ComplexMatrix> {
    if k == 0 {
        return Err(CovrepError::InvalidInput("dagger power needs k >= 1".into()));
    }
    let d = mp_inverse(rep, cfg)?;
    s_power(rep, &d, k, cfg)
}

/// `Ṽ′ = Ṽ†*`, carrying the generators over.
pub fn cauchy_dual(rep: &CovariantRep, cfg: &Config) -> Result<CovariantRep> {
    rep.with_matrix(mp_inverse(rep, cfg)?.adjoint())
}

/// The defining product `Ṽ(Ṽ*Ṽ)†`, with the Gram pseudoinverse pinned to the
/// rank of `Ṽ`.
pub fn cauchy_dual_defining(rep: &CovariantRep, cfg: &Config) -> Result<ComplexMatrix> {
    let v = rep.v_tilde();
    let gram = v.adjoint_mul(v);
    let r = rep_rank(rep, cfg)?;
    Ok(v.mul_unchecked(&pinv_with_rank(&gram, r)?))
}

/// `‖Ṽ†* − Ṽ(Ṽ*Ṽ)†‖_F`.
pub fn cauchy_dual_cross_check(rep: &CovariantRep, cfg: &Config) -> Result<f64> {
    let a = mp_inverse(rep, cfg)?.adjoint();
    Ok(a.dist(&cauchy_dual_defining(rep, cfg)?))
}

/// Largest containment defect in either direction, or `1` when the
/// dimensions differ.
pub(crate) fn subspace_gap(a: &Subspace, b: &Subspace) -> Result<f64> {
    if a.dim() != b.dim() {
        return Ok(1.0);
    }
    Ok(a.containment_defect(b)?.max(b.containment_defect(a)?))
}

struct Norms {
    v: f64,
    d: f64,
    tol: f64,
}

impl Norms {
    /// `10·tol·(1 + ‖Ṽ‖)^a·(1 + ‖Ṽ†‖)^b`.
    fn tol(&self, a: i32, b: i32) -> f64 {
        10.0 * self.tol * (1.0 + self.v).powi(a) * (1.0 + self.d).powi(b)
    }
}

/// Relative residual `‖A − B‖_F / (1 + max(‖A‖_F, ‖B‖_F))`.
fn eq_check(report: &mut CheckReport, name: &str, anchor: &str, a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
    let scale = 1.0 + a.frobenius_norm().max(b.frobenius_norm());
    report.push(
        Check::identity(name, anchor, a.dist(b) / scale, tol / scale)
            .with_detail(format!("relative to 1 + max norm = {scale:.3e}")),
    );
}

fn subspace_eq_check(report: &mut CheckReport, name: &str, anchor: &str, a: &Subspace, b: &Subspace, tol: f64) -> Result<()> {
    let gap = subspace_gap(a, b)?;
    let t = tol * (1.0 + a.dim().max(b.dim()) as f64);
    report.push(
        Check::identity(name, anchor, gap, t).with_detail(format!("dims {} and {}", a.dim(), b.dim())),
    );
    Ok(())
}

/// Generalized-inverse residuals, the kernel-lifting containments and the
/// power identity `Ṽ_k S^{(k)} Ṽ_k = Ṽ_k`.
pub fn verify_generalized_inverse(rep: &CovariantRep, s: &ComplexMatrix, k_max: usize, cfg: &Config) -> Result<DualityReport> {
    let (h, n) = (rep.dim_h(), rep.n());
    if s.shape() != (n * h, h) {
        return Err(CovrepError::shape(
            "verify_generalized_inverse",
            format!("{}x{}", n * h, h),
            format!("{}x{}", s.rows(), s.cols()),
        ));
    }
    let v = rep.v_tilde();
    let mut report = CheckReport::new();
    let vs = rep.scale();
    let ss = 1.0 + s.frobenius_norm();
    let stol = cfg.subspace_tol();

    let r1 = s.mul_unchecked(v).mul_unchecked(s).dist(s);
    let r2 = v.mul_unchecked(s).mul_unchecked(v).dist(v);
    let t1 = 10.0 * cfg.tol * vs * ss * ss;
    let t2 = 10.0 * cfg.tol * vs * vs * ss;
    report.push(Check::property("ginverse[SVS=S]", "Def.ginverse", r1 <= t1, r1, t1));
    report.push(Check::property("ginverse[VSV=V]", "Def.ginverse", r2 <= t2, r2, t2));
    let is_gi = r1 <= t1 && r2 <= t2;

    let reg = structure::is_regular(rep, cfg)?;
    let rinf = reg.gen_range.clone();
    let regular = reg.regular;
    let ker = kernel_relative(v, cfg.tol)?.with_tol(stol);
    let range = range_relative(v, cfg.tol)?.with_tol(stol);

    // (I_E ⊗ S)N(Ṽ) ⊆ E^{⊗2} ⊗ R^∞
    match rep.level_dim(2, cfg) {
        Ok(_) => {
            let img = ComplexMatrix::kron_identity_mul(n, s, ker.basis());
            let defect = kron_block_residual(n * n, &rinf, &img)?;
            let t = stol * ss * (1.0 + ker.dim() as f64);
            let holds = defect <= t;
            report.push(
                Check::property("d3-containment", "Prop.d3", holds, defect, t)
                    .with_detail("(I (x) S) N(V) in E^(x)2 (x) R^inf"),
            );
            report.push(Check::theorem("d3", "Prop.d3", regular && is_gi, holds, defect, t));
        }
        Err(e) => report.push(Check::not_applicable("d3", "Prop.d3", CheckKind::Theorem, e.to_string())),
    }

    // three-way equivalence over k = 0..K
    let k_eff = (0..=k_max).take_while(|&k| rep.level_dim(k + 1, cfg).is_ok()).last();
    if let Some(k_eff) = k_eff {
        let mut all_inf = true;
        let mut all_rng = true;
        let mut first_fail = None;
        for k in 0..=k_eff {
            let sk = s_power(rep, s, k, cfg)?;
            let img = ComplexMatrix::kron_identity_mul(n, &sk, ker.basis());
            let copies = rep.copies(k + 1)?;
            let t = stol * (1.0 + sk.frobenius_norm()) * (1.0 + ker.dim() as f64);
            let d_inf = kron_block_residual(copies, &rinf, &img)?;
            let d_rng = kron_block_residual(copies, &range, &img)?;
            let (a, b) = (d_inf <= t, d_rng <= t);
            if (!a || !b) && first_fail.is_none() {
                first_fail = Some(k);
            }
            all_inf &= a;
            all_rng &= b;
        }
        let detail = format!(
            "k <= {k_eff}: into R^inf {all_inf}, into R(V) {all_rng}, regular {regular}; first failing k {:?}",
            first_fail
        );
        report.push(Check::property("ginv-equiv[R^inf]", "Prop.ginv-equiv", all_inf, 0.0, stol).with_detail(detail.clone()));
        report.push(Check::property("ginv-equiv[R(V)]", "Prop.ginv-equiv", all_rng, 0.0, stol).with_detail(detail.clone()));
        let applicable = is_gi && k_eff + 1 >= reg.horizon;
        report.push(
            Check::consistency("ginv-equiv", "Prop.ginv-equiv", applicable, all_inf == regular && all_rng == regular)
                .with_detail(format!("{detail}; horizon {}", reg.horizon)),
        );
    } else {
        report.push(Check::not_applicable("ginv-equiv", "Prop.ginv-equiv", CheckKind::Consistency, "size cap"));
    }

    // regular ⇒ Ṽ(E ⊗ R^∞) = R^∞ and S(R^∞) ⊆ E ⊗ R^∞
    let img = rinf.kron_identity_left(n).image_under(v)?.with_tol(stol);
    report.push(Check::conditional_identity(
        "d2(ii)",
        "Prop.d2",
        regular,
        subspace_gap(&img, &rinf)?,
        stol * (1.0 + h as f64),
    ));
    let srinf = s.mul_unchecked(rinf.basis());
    let t = stol * ss * (1.0 + rinf.dim() as f64);
    report.push(Check::theorem(
        "d2(iii)",
        "Prop.d2",
        regular && is_gi,
        kron_block_residual(n, &rinf, &srinf)? <= t,
        kron_block_residual(n, &rinf, &srinf)?,
        t,
    ));
    for k in 1..=k_max.max(1) {
        if rep.level_dim(k, cfg).is_err() {
            report.push(Check::not_applicable(&format!("d2(iv)[k={k}]"), "Prop.d2", CheckKind::Theorem, "size cap"));
            break;
        }
        let vk = rep.power(k, cfg)?;
        let sk = s_power(rep, s, k, cfg)?;
        let res = vk.mul_unchecked(&sk).mul_unchecked(&vk).dist(&vk);
        let nv = 1.0 + vk.frobenius_norm();
        let t = 10.0 * cfg.tol * nv * nv * (1.0 + sk.frobenius_norm());
        report.push(Check::theorem(&format!("d2(iv)[k={k}]"), "Prop.d2", regular && is_gi, res <= t, res, t));
    }
    Ok(DualityReport {
        tolerance: cfg.tol,
        report,
    })
}

/// Cauchy-dual identities, Moore-Penrose properties, the regular-only range
/// identities and (when `u` is given) unitary conjugation.
pub fn dual_identity_suite(rep: &CovariantRep, u: Option<&ComplexMatrix>, cfg: &Config) -> Result<DualityReport> {
    let (h, n) = (rep.dim_h(), rep.n());
    if let Some(u) = u {
        validate_unitary(u, h, cfg)?;
    }
    let v = rep.v_tilde();
    let vs = v.adjoint();
    let vd = mp_inverse(rep, cfg)?;
    let r = rep_rank(rep, cfg)?;
    let dual = vd.adjoint();
    let nm = Norms {
        v: v.frobenius_norm(),
        d: vd.frobenius_norm(),
        tol: cfg.tol,
    };
    let stol = cfg.subspace_tol();
    let mut report = CheckReport::new();

    let vs_dagger = pinv_with_rank(&vs, r)?;
    eq_check(&mut report, "R1.1[V'=V*dagger]", "PropR1.1", &dual, &vs_dagger, nm.tol(1, 2));
    eq_check(&mut report, "R1.1[V'=V(V*V)dagger]", "PropR1.1", &dual, &cauchy_dual_defining(rep, cfg)?, nm.tol(3, 4));
    let dual2 = pinv_with_rank(&dual, r)?.adjoint();
    eq_check(&mut report, "R1.2[V''=V]", "PropR1.2", &dual2, v, nm.tol(2, 2));
    // (Ṽ*)′ from its defining product X(X*X)† with X = Ṽ*
    let vs_dual = vs.mul_unchecked(&pinv_with_rank(&v.mul_unchecked(&vs), r)?);
    eq_check(&mut report, "R1.3[V*'=V'*]", "PropR1.3", &vs_dual, &dual.adjoint(), nm.tol(3, 4));
    let gram = vs.mul_unchecked(v);
    let gram_dual = gram.mul_unchecked(&pinv_with_rank(&gram.mul_unchecked(&gram), r)?);
    eq_check(&mut report, "R1.4[V'*V'=(V*V)']", "PropR1.4", &dual.adjoint().mul_unchecked(&dual), &gram_dual, nm.tol(4, 6));

    let self_dual_res = dual.dist(v);
    let self_dual = self_dual_res <= stol * rep.scale() * (1.0 + nm.d);
    let (pi, pi_res) = is_partial_isometry(rep, stol);
    report.push(
        Check::consistency("R1.5[V'=V iff partial isometry]", "PropR1.5", true, self_dual == pi)
            .with_detail(format!("||V'-V|| = {self_dual_res:.3e}, ||VV*V-V|| = {pi_res:.3e}")),
    );

    let corange = crate::linalg::corange_relative(v, cfg.tol)?.with_tol(stol);
    let range = range_relative(v, cfg.tol)?.with_tol(stol);
    let p_co = corange.projector();
    let p_r = range.projector();
    eq_check(&mut report, "R1.6[V*V'=P_N(V)perp]", "PropR1.6", &vs.mul_unchecked(&dual), &p_co, nm.tol(1, 1));
    eq_check(&mut report, "R1.6[V*'V=P_N(V)perp]", "PropR1.6", &vs_dual.mul_unchecked(v), &p_co, nm.tol(3, 4));
    eq_check(&mut report, "R1.6[V'V*=P_R(V)]", "PropR1.6", &dual.mul_unchecked(&vs), &p_r, nm.tol(1, 1));
    eq_check(&mut report, "R1.6[VV*'=P_R(V)]", "PropR1.6", &v.mul_unchecked(&vs_dual), &p_r, nm.tol(3, 4));

    eq_check(
        &mut report,
        "(V*V)dagger=Vdagger V*dagger",
        "Rem.MPgram",
        &pinv_with_rank(&gram, r)?,
        &vd.mul_unchecked(&vs_dagger),
        nm.tol(2, 4),
    );

    mp_property_checks(&mut report, rep, &vd, r, &nm, stol, cfg)?;
    regular_range_checks(&mut report, rep, &vd, cfg)?;

    match u {
        Some(u) => {
            let iu = u.kron_identity_left(n);
            let w = u.adjoint().mul_unchecked(v).mul_unchecked(&iu);
            let lhs = pinv_relative(&w, cfg.tol)?.adjoint();
            let rhs = u.adjoint().mul_unchecked(&dual).mul_unchecked(&iu);
            eq_check(&mut report, "unitary-conjugation", "Prop.unitary-dual", &lhs, &rhs, nm.tol(1, 2));
        }
        None => report.push(Check::not_applicable(
            "unitary-conjugation",
            "Prop.unitary-dual",
            CheckKind::Identity,
            "no unitary supplied",
        )),
    }
    Ok(DualityReport {
        tolerance: cfg.tol,
        report,
    })
}

fn validate_unitary(u: &ComplexMatrix, h: usize, cfg: &Config) -> Result<()> {
    if u.shape() != (h, h) {
        return Err(CovrepError::shape("unitary", format!("{h}x{h}"), format!("{}x{}", u.rows(), u.cols())));
    }
    let defect = u.adjoint_mul(u).dist(&ComplexMatrix::identity(h));
    if defect > cfg.subspace_tol() * (1.0 + h as f64) {
        return Err(CovrepError::InvalidInput(format!("U is not unitary (||U*U - I|| = {defect:.3e})")));
    }
    Ok(())
}

fn mp_property_checks(
    report: &mut CheckReport,
    rep: &CovariantRep,
    vd: &ComplexMatrix,
    r: usize,
    nm: &Norms,
    stol: f64,
    cfg: &Config,
) -> Result<()> {
    let v = rep.v_tilde();
    let vs = v.adjoint();
    let vvd = v.mul_unchecked(vd);
    let vdv = vd.mul_unchecked(v);
    let sub = |m: &ComplexMatrix| range_relative(m, cfg.tol).map(|s| s.with_tol(stol));
    let ker = |m: &ComplexMatrix| kernel_relative(m, cfg.tol).map(|s| s.with_tol(stol));

    let n_perp = ker(v)?.orthogonal_complement();
    let r_vs = sub(&vs)?;
    subspace_eq_check(report, "MP.1[R(Vdagger)=R(V*)]", "Prop.MP.1", &sub(vd)?, &r_vs, stol)?;
    subspace_eq_check(report, "MP.1[R(V*)=N(V)perp]", "Prop.MP.1", &r_vs, &n_perp, stol)?;
    eq_check(report, "MP.2[VVdagger=P_R(V)]", "Prop.MP.2", &vvd, &sub(v)?.projector(), nm.tol(1, 1));
    eq_check(report, "MP.2[VdaggerV=P_R(V*)]", "Prop.MP.2", &vdv, &r_vs.projector(), nm.tol(1, 1));
    let n_vs = ker(&vs)?;
    subspace_eq_check(report, "MP.3[N(Vdagger)=N(V*)]", "Prop.MP.3", &ker(vd)?, &n_vs, stol)?;
    subspace_eq_check(report, "MP.3[N(VVdagger)=N(V*)]", "Prop.MP.3", &ker(&vvd)?, &n_vs, stol)?;
    let r_v = sub(v)?;
    subspace_eq_check(report, "MP.4[R(VVdagger)=R(V)]", "Prop.MP.4", &sub(&vvd)?, &r_v, stol)?;
    subspace_eq_check(report, "MP.4[R(Vdagger*)=R(V)]", "Prop.MP.4", &sub(&vd.adjoint())?, &r_v, stol)?;
    let n_v = ker(v)?;
    subspace_eq_check(report, "MP.5[N(VdaggerV)=N(V)]", "Prop.MP.5", &ker(&vdv)?, &n_v, stol)?;
    subspace_eq_check(report, "MP.5[N(Vdagger*)=N(V)]", "Prop.MP.5", &ker(&vd.adjoint())?, &n_v, stol)?;
    eq_check(report, "MP.6[V*VVdagger=V*]", "Prop.MP.6", &vs.mul_unchecked(&vvd), &vs, nm.tol(2, 1));
    eq_check(report, "MP.6[VdaggerVV*=V*]", "Prop.MP.6", &vdv.mul_unchecked(&vs), &vs, nm.tol(2, 1));
    eq_check(report, "MP.7[(Vdagger)dagger=V]", "Prop.MP.7", &pinv_with_rank(vd, r)?, v, nm.tol(2, 2));
    eq_check(report, "MP.8[(V*)dagger=(Vdagger)*]", "Prop.MP.8", &pinv_with_rank(&vs, r)?, &vd.adjoint(), nm.tol(1, 2));
    Ok(())
}

/// `N(Ṽ^{†(k)}) ∩ R(Ṽ_k) = {0}` and `R(Ṽ_k) = {h : Ṽ_kṼ^{†(k)}h = h}`;
/// asserted for regular representations, reported for the others.
fn regular_range_checks(report: &mut CheckReport, rep: &CovariantRep, vd: &ComplexMatrix, cfg: &Config) -> Result<()> {
    let h = rep.dim_h();
    let stol = cfg.subspace_tol();
    let reg = structure::is_regular(rep, cfg)?;
    let k_top = rep.max_level(cfg.k_max, cfg).max(1);
    let chain = range_chain(rep, k_top, cfg)?;
    let note = if reg.regular { "" } else { "not regular: exploratory" };
    // N(Ṽ^{†(k)}) = {h : Ṽ†h ∈ E ⊗ N(Ṽ^{†(k−1)})}, which avoids rank decisions
    // on the badly conditioned power itself
    let mut nd = Subspace::zero(h, stol);
    for k in 1..=k_top {
        if rep.level_dim(k, cfg).is_err() {
            break;
        }
        let dk = s_power(rep, vd, k, cfg)?;
        let vk = rep.power(k, cfg)?;
        let perp = nd.orthogonal_complement().projector();
        nd = kernel_relative(&ComplexMatrix::kron_identity_mul(rep.n(), &perp, vd), cfg.tol)?.with_tol(stol);
        let meet = subspace_intersect(&nd, &chain[k])?;
        report.push(
            Check::conditional_identity(
                &format!("N(Vdagger({k}))capR(V_{k})=0"),
                "Prop.reg-dagger.1",
                reg.regular,
                meet.dim() as f64,
                0.0,
            )
            .with_detail(note),
        );
        let pk = vk.mul_unchecked(&dk);
        // I − P_k is idempotent when regular, so its nonzero singular values
        // are >= 1; roundoff in P_k grows like ‖Ṽ_k‖‖Ṽ^{†(k)}‖
        let cutoff = (stol * (1.0 + vk.frobenius_norm()) * (1.0 + dk.frobenius_norm())).min(0.5);
        let fixed = onb_kernel(&(&pk - &ComplexMatrix::identity(h)), Some(cutoff))?.with_tol(stol);
        let gap = subspace_gap(&fixed, &chain[k])?;
        report.push(
            Check::conditional_identity(
                &format!("R(V_{k})=Fix(V_{k}Vdagger({k}))"),
                "Prop.reg-dagger.2",
                reg.regular,
                gap,
                stol * (1.0 + h as f64),
            )
            .with_detail(format!("dim Fix = {}, dim R(V_{k}) = {} {note}", fixed.dim(), chain[k].dim())),
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub struct NDagger {
    pub k: usize,
    pub holds: bool,
    pub residual: f64,
    pub tolerance: f64,
}

/// `‖Ṽ^{†(k)} − Ṽ_k†‖_F` against a conditioning-aware tolerance.
pub fn is_n_dagger(rep: &CovariantRep, k: usize, cfg: &Config) -> Result<NDagger> {
    if k < 2 {
        return Err(CovrepError::InvalidInput("n-dagger needs k >= 2".into()));
    }
    let d = dagger_power(rep, k, cfg)?;
    let vk = rep.power(k, cfg)?;
    let p = pinv_relative(&vk, cfg.tol)?;
    let residual = d.dist(&p);
    let a = 1.0 + p.frobenius_norm().max(d.frobenius_norm());
    let tolerance = cfg.subspace_tol() * a * a * (1.0 + vk.frobenius_norm());
    Ok(NDagger {
        k,
        holds: residual <= tolerance,
        residual,
        tolerance,
    })
}

#[derive(Debug, Clone)]
pub struct HyperDagger {
    pub holds: bool,
    /// Largest level checked; levels beyond it exceeded the size cap.
    pub checked_up_to: usize,
    pub cap_hit: bool,
    pub levels: Vec<NDagger>,
}

/// n-dagger for `2 ≤ k ≤ k_max`, truncated at the size cap.
pub fn is_hyper_dagger(rep: &CovariantRep, k_max: usize, cfg: &Config) -> Result<HyperDagger> {
    let top = rep.max_level(k_max, cfg);
    let mut levels = Vec::new();
    for k in 2..=top {
        levels.push(is_n_dagger(rep, k, cfg)?);
    }
    Ok(HyperDagger {
        holds: levels.iter().all(|l| l.holds),
        checked_up_to: top,
        cap_hit: top < k_max,
        levels,
    })
}

/// Hyper-dagger ⇒ (regular ⇔ `Ṽ†` regular).
pub fn dj1_check(rep: &CovariantRep, cfg: &Config) -> Result<Check> {
    let hd = is_hyper_dagger(rep, cfg.k_max, cfg)?;
    let reg = structure::is_regular(rep, cfg)?.regular;
    let dreg = structure::dagger_regular(rep, cfg)?.holds;
    Ok(Check::theorem("DJ1", "Prop.DJ1", hd.holds, reg == dreg, if reg == dreg { 0.0 } else { 1.0 }, 0.0)
        .with_detail(format!(
            "hyper-dagger {} (k <= {}{}), regular {reg}, dagger regular {dreg}",
            hd.holds,
            hd.checked_up_to,
            if hd.cap_hit { ", cap hit" } else { "" }
        )))
}

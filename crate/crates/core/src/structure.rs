//! Range chains, regularity, wandering subspaces and Wold-type
//! decompositions.
//!
//! Every range `R(Ṽ_k)` is obtained from the recursion
//! `R(Ṽ_k) = Ṽ(E ⊗ R(Ṽ_{k−1}))`, which only ever touches `dim_h`-sized
//! matrices, so chains run to stabilization without hitting the size cap.

use crate::config::Config;
use crate::duality::{cauchy_dual, mp_inverse, s_power, subspace_gap};
use crate::error::{CovrepError, Result};
use crate::linalg::{
    corange_relative, kernel_relative, kron_block_residual, overlap, pinv_relative, range_relative, subspace_intersect,
    subspace_join, ComplexMatrix, Subspace,
};
use crate::rep::CovariantRep;
use crate::report::{Check, CheckKind, CheckReport};

/// `[R(Ṽ_0), …, R(Ṽ_k)]`.
pub fn range_chain(rep: &CovariantRep, k: usize, cfg: &Config) -> Result<Vec<Subspace>> {
    let stol = cfg.subspace_tol();
    let mut out = vec![Subspace::full(rep.dim_h(), stol)];
    for j in 1..=k {
        let next = image_of_lift(rep, &out[j - 1], cfg)?;
        out.push(next);
    }
    Ok(out)
}

/// `Ṽ(E ⊗ M)`.
pub fn image_of_lift(rep: &CovariantRep, m: &Subspace, cfg: &Config) -> Result<Subspace> {
    let stol = cfg.subspace_tol();
    if m.ambient() != rep.dim_h() {
        return Err(CovrepError::AmbientMismatch {
            left: m.ambient(),
            right: rep.dim_h(),
        });
    }
    if m.is_zero() {
        return Ok(Subspace::zero(rep.dim_h(), stol));
    }
    let cols = rep.v_tilde().mul_kron_identity(rep.n(), m.basis());
    Ok(range_relative(&cols, cfg.tol)?.with_tol(stol))
}

#[derive(Debug, Clone)]
pub struct GeneralizedRange {
    pub space: Subspace,
    /// First `k` with `R(Ṽ_0) ∩ … ∩ R(Ṽ_k)` equal to the previous
    /// intersection, or zero.
    pub stabilized_at: usize,
    pub dims: Vec<usize>,
    pub cap_hit: bool,
}

/// `R^∞(Ṽ) = ∩_k R(Ṽ_k)`. The loop runs at least to `dim_h + 1`, where
/// stabilization is guaranteed.
pub fn generalized_range(rep: &CovariantRep, k_max: usize, cfg: &Config) -> Result<GeneralizedRange> {
    let h = rep.dim_h();
    let stol = cfg.subspace_tol();
    let limit = k_max.max(h + 1);
    let mut acc = Subspace::full(h, stol);
    let mut range = acc.clone();
    let mut dims = vec![h];
    for k in 1..=limit {
        range = image_of_lift(rep, &range, cfg)?;
        let next = subspace_intersect(&acc, &range)?;
        dims.push(next.dim());
        let stable = next.dim() == acc.dim() && subspace_gap(&next, &acc)? <= stol * (1.0 + h as f64);
        if stable || next.is_zero() {
            return Ok(GeneralizedRange {
                space: next,
                stabilized_at: k,
                dims,
                cap_hit: false,
            });
        }
        acc = next;
    }
    Ok(GeneralizedRange {
        space: acc,
        stabilized_at: limit,
        dims,
        cap_hit: true,
    })
}

#[derive(Debug, Clone)]
pub struct Regularity {
    /// `N(Ṽ) ⊆ E ⊗ R^∞(Ṽ)`.
    pub regular: bool,
    pub definition_defect: f64,
    pub gen_range: Subspace,
    /// Largest power index used by the aggregated equivalence conditions.
    pub horizon: usize,
    pub report: CheckReport,
}

/// Smallest index past which the quantified conditions can no longer change:
/// beyond the stabilization index, and with `n^p > dim_h` for `n ≥ 2`.
fn horizon(rep: &CovariantRep, stabilized_at: usize) -> usize {
    let (h, n) = (rep.dim_h(), rep.n());
    let p0 = if n == 1 {
        h + 1
    } else {
        let mut p = 1;
        let mut np = n;
        while np <= h {
            p += 1;
            np = np.saturating_mul(n);
        }
        p
    };
    p0.max(stabilized_at).max(1)
}

/// `E^{⊗p} ⊗ N(Ṽ_q*) ⊆ R(Ṽ_p*)`, the complement form of
/// `N(Ṽ_p) ⊆ (I_{E^{⊗p}} ⊗ Ṽ_q)(E^{⊗(p+q)} ⊗ H)`.
/// Returns `(holds, defect)`; `None` when the explicit check exceeds the cap.
fn kernel_lift_condition(
    rep: &CovariantRep,
    p: usize,
    n_q_star: &Subspace,
    rank_p: usize,
    cfg: &Config,
) -> Result<Option<(bool, f64)>> {
    let d = n_q_star.dim();
    if d == 0 {
        return Ok(Some((true, 0.0)));
    }
    let copies = rep.copies(p)?;
    if copies.saturating_mul(d) > rank_p {
        return Ok(Some((false, 1.0)));
    }
    let vp = match rep.power(p, cfg) {
        Ok(m) => m,
        Err(CovrepError::SizeCap { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let co = corange_relative(&vp, cfg.tol)?;
    let x = n_q_star.basis().kron_identity_left(copies);
    let defect = co.residual_of(&x).frobenius_norm();
    Ok(Some((defect <= cfg.subspace_tol() * (1.0 + (copies * d) as f64), defect)))
}

/// Regularity by definition, plus the four aggregated equivalent conditions
/// (quantified over `1 ≤ p, q ≤ horizon`) and their agreement.
pub fn is_regular(rep: &CovariantRep, cfg: &Config) -> Result<Regularity> {
    let (h, n) = (rep.dim_h(), rep.n());
    let stol = cfg.subspace_tol();
    let gr = generalized_range(rep, cfg.k_max, cfg)?;
    let ker = kernel_relative(rep.v_tilde(), cfg.tol)?;
    let defect = kron_block_residual(n, &gr.space, ker.basis())?;
    let regular = defect <= stol * (1.0 + ker.dim() as f64);
    let mut report = CheckReport::new();
    report.push(
        Check::property("regular", "Def.regular", regular, defect, stol)
            .with_detail(format!("N(V) in E (x) R^inf; dim N(V) = {}, dim R^inf = {}", ker.dim(), gr.space.dim())),
    );
    report.push(
        Check::property("closed-range", "Def.regular", true, 0.0, 0.0).with_detail("auto-pass (finite-dimensional)"),
    );

    let k = horizon(rep, gr.stabilized_at);
    let chain = range_chain(rep, 2 * k, cfg)?;
    let ranks: Vec<usize> = chain.iter().map(Subspace::dim).collect();
    let n_star: Vec<Subspace> = chain.iter().map(Subspace::orthogonal_complement).collect();

    let mut c3 = vec![vec![None; k + 1]; k + 1];
    for p in 1..=k {
        for q in 1..=k {
            c3[p][q] = kernel_lift_condition(rep, p, &n_star[q], ranks[p], cfg)?;
        }
    }
    let mut capped = false;
    let mut agg = |pairs: Vec<(usize, usize)>| -> (bool, Option<(usize, usize)>) {
        let mut first = None;
        for (p, q) in pairs {
            match c3[p][q] {
                Some((true, _)) => {}
                Some((false, _)) => {
                    first.get_or_insert((p, q));
                }
                None => capped = true,
            }
        }
        (first.is_none(), first)
    };
    let (c1, f1) = agg((1..=k).map(|q| (1, q)).collect());
    let (c2, f2) = agg((1..=k).map(|p| (p, 1)).collect());
    let (c3all, f3) = agg((1..=k).flat_map(|p| (1..=k).map(move |q| (p, q))).collect());
    // dim N(Ṽ_p) = dim (I ⊗ Ṽ_q)N(Ṽ_{p+q}) as a rank identity
    let mut f4 = None;
    for p in 1..=k {
        for q in 1..=k {
            let np = rep.copies(p)?;
            let lhs = np as i128 * h as i128 - ranks[p] as i128;
            let rhs = np as i128 * ranks[q] as i128 - ranks[p + q] as i128;
            if lhs != rhs && f4.is_none() {
                f4 = Some((p, q));
            }
        }
    }
    let c4 = f4.is_none();
    let cap_note = if capped { "; some pairs exceeded the size cap" } else { "" };
    for (name, holds, first) in [("cc(1)", c1, f1), ("cc(2)", c2, f2), ("cc(3)", c3all, f3), ("cc(4)", c4, f4)] {
        report.push(
            Check::property(name, "Thm.cc", holds, if holds { 0.0 } else { 1.0 }, 0.0)
                .with_detail(format!("p, q <= {k}; first failing (p, q) {first:?}{cap_note}")),
        );
    }
    let all = [regular, c1, c2, c3all, c4];
    report.push(
        Check::consistency("cc-agreement", "Thm.cc", !capped, all.iter().all(|&b| b == regular))
            .with_detail(format!("definition {regular}, (1) {c1}, (2) {c2}, (3) {c3all}, (4) {c4}")),
    );
    Ok(Regularity {
        regular,
        definition_defect: defect,
        gen_range: gr.space,
        horizon: k,
        report,
    })
}

#[derive(Debug, Clone)]
pub struct DaggerRegularity {
    pub holds: bool,
    pub defect: f64,
    pub detail: String,
}

/// `Ṽ†` regular: `E^{⊗p} ⊗ N(Ṽ†) ⊆ R(Ṽ^{†(p)})` for `1 ≤ p ≤ horizon`.
pub fn dagger_regular(rep: &CovariantRep, cfg: &Config) -> Result<DaggerRegularity> {
    let h = rep.dim_h();
    let wand = wandering_subspace(rep, cfg)?;
    if wand.is_zero() {
        return Ok(DaggerRegularity {
            holds: true,
            defect: 0.0,
            detail: "N(Vdagger) = {0}".into(),
        });
    }
    let gr = generalized_range(rep, cfg.k_max, cfg)?;
    let k = horizon(rep, gr.stabilized_at);
    let vd = mp_inverse(rep, cfg)?;
    for p in 1..=k {
        let copies = rep.copies(p)?;
        if copies.saturating_mul(wand.dim()) > h {
            return Ok(DaggerRegularity {
                holds: false,
                defect: 1.0,
                detail: format!("p = {p}: dim E^(x)p (x) N(Vdagger) exceeds rank Vdagger(p)"),
            });
        }
        let dp = match s_power(rep, &vd, p, cfg) {
            Ok(m) => m,
            Err(CovrepError::SizeCap { .. }) => {
                return Ok(DaggerRegularity {
                    holds: true,
                    defect: 0.0,
                    detail: format!("checked p < {p} (size cap)"),
                })
            }
            Err(e) => return Err(e),
        };
        let range = range_relative(&dp, cfg.tol)?;
        let defect = range.residual_of(&wand.basis().kron_identity_left(copies)).frobenius_norm();
        if defect > cfg.subspace_tol() * (1.0 + (copies * wand.dim()) as f64) {
            return Ok(DaggerRegularity {
                holds: false,
                defect,
                detail: format!("p = {p}: containment defect {defect:.3e}"),
            });
        }
    }
    Ok(DaggerRegularity {
        holds: true,
        defect: 0.0,
        detail: format!("checked p <= {k}"),
    })
}

#[derive(Debug, Clone)]
pub struct BiRegularity {
    pub bi_regular: bool,
    pub regular: bool,
    pub dagger_regular: bool,
    pub dual_regular: bool,
    pub report: CheckReport,
}

/// `Ṽ` and `Ṽ†` both regular, cross-checked against regularity of the
/// Cauchy dual, with the sufficient condition "regular and `R^∞` reduces".
pub fn is_bi_regular(rep: &CovariantRep, cfg: &Config) -> Result<BiRegularity> {
    let reg = is_regular(rep, cfg)?;
    let dreg = dagger_regular(rep, cfg)?;
    let dual = cauchy_dual(rep, cfg)?;
    let dual_reg = is_regular(&dual, cfg)?.regular;
    let bi = reg.regular && dreg.holds;
    let mut report = CheckReport::new();
    report.push(Check::property("regular", "Def.regular", reg.regular, reg.definition_defect, cfg.subspace_tol()));
    report.push(
        Check::property("dagger-regular", "Def.biregular", dreg.holds, dreg.defect, cfg.subspace_tol())
            .with_detail(dreg.detail.clone()),
    );
    report.push(Check::property("bi-regular", "Def.biregular", bi, 0.0, 0.0));
    report.push(
        Check::consistency("dagger-regular=dual-regular", "Def.biregular", true, dreg.holds == dual_reg)
            .with_detail(format!("Vdagger regular {}, V' regular {dual_reg}", dreg.holds)),
    );
    let red = reduces_defect(rep, &reg.gen_range, cfg)?;
    let red_ok = red <= reduce_tol(rep, cfg);
    report.push(
        Check::theorem("DS2", "Thm.DS2", reg.regular && red_ok, bi, if bi { 0.0 } else { 1.0 }, 0.0)
            .with_detail(format!("regular {}, R^inf reduces {red_ok}", reg.regular)),
    );
    Ok(BiRegularity {
        bi_regular: bi,
        regular: reg.regular,
        dagger_regular: dreg.holds,
        dual_regular: dual_reg,
        report,
    })
}

/// `𝓔 = H ⊖ Ṽ(E ⊗ H)`.
pub fn wandering_subspace(rep: &CovariantRep, cfg: &Config) -> Result<Subspace> {
    Ok(range_relative(rep.v_tilde(), cfg.tol)?.with_tol(cfg.subspace_tol()).orthogonal_complement())
}

#[derive(Debug, Clone)]
pub struct Brackets {
    pub space: Subspace,
    /// `Ṽ_k(E^{⊗k} ⊗ seed)` for each computed `k`.
    pub levels: Vec<Subspace>,
    /// Dimension of the running join after each `k`.
    pub growth: Vec<usize>,
    /// Index from which the join no longer grows.
    pub saturated_at: Option<usize>,
    pub cap_hit: bool,
}

/// `[seed]_Ṽ = ⋁_k Ṽ_k(E^{⊗k} ⊗ seed)`, truncated at `k_max`. Once one step
/// adds nothing, no later step can (each level is `Ṽ(E ⊗ previous level)`).
pub fn brackets(rep: &CovariantRep, seed: &Subspace, k_max: usize, cfg: &Config) -> Result<Brackets> {
    if seed.ambient() != rep.dim_h() {
        return Err(CovrepError::AmbientMismatch {
            left: seed.ambient(),
            right: rep.dim_h(),
        });
    }
    let stol = cfg.subspace_tol();
    let mut levels = vec![seed.clone().with_tol(stol)];
    let mut join = levels[0].clone();
    let mut growth = vec![join.dim()];
    let mut saturated_at = None;
    for k in 1..=k_max {
        let w = image_of_lift(rep, &levels[k - 1], cfg)?;
        let next = subspace_join(&[join.clone(), w.clone()])?;
        levels.push(w);
        growth.push(next.dim());
        let grew = next.dim() > join.dim();
        join = next;
        if !grew {
            saturated_at = Some(k - 1);
            break;
        }
    }
    Ok(Brackets {
        space: join,
        levels,
        growth,
        cap_hit: saturated_at.is_none(),
        saturated_at,
    })
}

fn reduce_tol(rep: &CovariantRep, cfg: &Config) -> f64 {
    cfg.subspace_tol() * rep.scale() * (1.0 + rep.dim_h() as f64)
}

/// Largest invariance defect of `M` and `M^⊥` under every `V(ξ)` and every
/// supplied `σ` generator.
pub fn reduces_defect(rep: &CovariantRep, m: &Subspace, _cfg: &Config) -> Result<f64> {
    if m.ambient() != rep.dim_h() {
        return Err(CovrepError::AmbientMismatch {
            left: m.ambient(),
            right: rep.dim_h(),
        });
    }
    let v = rep.v_tilde();
    let n = rep.n();
    let perp = m.orthogonal_complement();
    let mut worst: f64 = 0.0;
    for (a, b) in [(m, &perp), (&perp, m)] {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        // components of Ṽ(E ⊗ A) along B = A^⊥
        let img = v.mul_kron_identity(n, a.basis());
        worst = worst.max(b.basis().adjoint_mul(&img).frobenius_norm());
        if let Some(gens) = rep.sigma_gens() {
            for (_, s) in gens {
                worst = worst.max(b.basis().adjoint_mul(&s.mul_unchecked(a.basis())).frobenius_norm());
            }
        }
    }
    Ok(worst)
}

pub fn reduces(rep: &CovariantRep, m: &Subspace, cfg: &Config) -> Result<bool> {
    Ok(reduces_defect(rep, m, cfg)? <= reduce_tol(rep, cfg))
}

#[derive(Debug, Clone)]
pub struct WoldReport {
    pub wandering: Subspace,
    pub brackets: Subspace,
    pub brackets_dual: Subspace,
    pub gen_range: Subspace,
    pub gen_range_dual: Subspace,
    /// Saturation index of `[𝓔]_Ṽ`, `None` on cap hit.
    pub stabilized_at: Option<usize>,
    pub growth: Vec<usize>,
    pub bi_regular: bool,
    pub extended_wold: bool,
    pub report: CheckReport,
}

/// Direct-sum defect of `A ⊕ B = H`: overlap plus dimension mismatch.
fn direct_sum_defect(a: &Subspace, b: &Subspace, h: usize) -> Result<(f64, bool)> {
    let ov = overlap(a, b)?;
    Ok((ov, a.dim() + b.dim() == h))
}

/// Isometry and surjectivity of `Ṽ` restricted to
/// `(E ⊗ R^∞) ∩ N(Ṽ)^⊥ → R^∞`.
fn restriction_unitarity(rep: &CovariantRep, rinf: &Subspace, cfg: &Config) -> Result<(f64, f64)> {
    let stol = cfg.subspace_tol();
    let v = rep.v_tilde();
    let dom = subspace_intersect(
        &rinf.kron_identity_left(rep.n()),
        &corange_relative(v, cfg.tol)?.with_tol(stol),
    )?;
    if dom.is_zero() {
        return Ok((0.0, if rinf.is_zero() { 0.0 } else { 1.0 }));
    }
    let vb = v.mul_unchecked(dom.basis());
    let iso = vb.adjoint_mul(&vb).dist(&ComplexMatrix::identity(dom.dim()));
    let img = range_relative(&vb, cfg.tol)?.with_tol(stol);
    Ok((iso, subspace_gap(&img, rinf)?))
}

struct ExtendedWold {
    holds: bool,
    checks: Vec<Check>,
}

fn extended_wold(
    rep: &CovariantRep,
    wand: &Subspace,
    br: &Brackets,
    rinf: &Subspace,
    prefix: &str,
    cfg: &Config,
) -> Result<ExtendedWold> {
    let h = rep.dim_h();
    let stol = cfg.subspace_tol();
    let t = stol * (1.0 + h as f64);
    let mut checks = Vec::new();
    let wandering = br.levels.iter().skip(1).map(|w| overlap(wand, w)).collect::<Result<Vec<_>>>()?;
    let w_max = wandering.iter().copied().fold(0.0, f64::max);
    checks.push(Check::property(&format!("{prefix}EWD.wandering"), "Def.EWD", w_max <= t, w_max, t));
    let (ov, dims) = direct_sum_defect(&br.space, rinf, h)?;
    let sum_ok = ov <= t && dims;
    checks.push(
        Check::property(&format!("{prefix}EWD.sum"), "Def.EWD", sum_ok, ov, t)
            .with_detail(format!("dims {} + {} vs {h}", br.space.dim(), rinf.dim())),
    );
    let rt = reduce_tol(rep, cfg);
    let r1 = reduces_defect(rep, &br.space, cfg)?;
    let r2 = reduces_defect(rep, rinf, cfg)?;
    checks.push(Check::property(&format!("{prefix}EWD.reduces[[E]]"), "Def.EWD", r1 <= rt, r1, rt));
    checks.push(Check::property(&format!("{prefix}EWD.reduces[R^inf]"), "Def.EWD", r2 <= rt, r2, rt));
    let mut sigma_ok = true;
    if let Some(gens) = rep.sigma_gens() {
        let perp = wand.orthogonal_complement();
        for (label, s) in gens {
            let d = if wand.is_zero() || perp.is_zero() {
                0.0
            } else {
                perp.basis().adjoint_mul(&s.mul_unchecked(wand.basis())).frobenius_norm()
            };
            let ok = d <= rt;
            sigma_ok &= ok;
            checks.push(Check::property(&format!("{prefix}EWD.sigma-invariant[{label}]"), "Def.EWD", ok, d, rt));
        }
    }
    let (iso, surj) = restriction_unitarity(rep, rinf, cfg)?;
    let ut = stol * rep.scale() * (1.0 + h as f64);
    let unit_ok = iso <= ut && surj <= t;
    checks.push(
        Check::property(&format!("{prefix}EWD.unitary"), "Def.EWD", unit_ok, iso.max(surj), ut)
            .with_detail(format!("isometry residual {iso:.3e}, range gap {surj:.3e}")),
    );
    Ok(ExtendedWold {
        holds: w_max <= t && sum_ok && r1 <= rt && r2 <= rt && sigma_ok && unit_ok,
        checks,
    })
}

/// Wandering subspace, brackets, generalized ranges of `Ṽ` and `Ṽ′`, and the
/// decomposition verdicts.
pub fn wold_report(rep: &CovariantRep, cfg: &Config) -> Result<WoldReport> {
    let h = rep.dim_h();
    let n = rep.n();
    let stol = cfg.subspace_tol();
    let t = stol * (1.0 + h as f64);
    let k_lim = cfg.k_max.max(h + 1);
    let v = rep.v_tilde();
    let vd = mp_inverse(rep, cfg)?;
    let dual = cauchy_dual(rep, cfg)?;
    let mut report = CheckReport::new();

    let wand = wandering_subspace(rep, cfg)?;
    let pe = &ComplexMatrix::identity(h) - &v.mul_unchecked(&vd);
    report.push(Check::identity("P_E=I-VVdagger", "Thm.proj.1", wand.projector().dist(&pe), t));
    let wand_dual = wandering_subspace(&dual, cfg)?;
    let br = brackets(rep, &wand, k_lim, cfg)?;
    let brd = brackets(&dual, &wand_dual, k_lim, cfg)?;
    let gr = generalized_range(rep, cfg.k_max, cfg)?.space;
    let grd = generalized_range(&dual, cfg.k_max, cfg)?.space;
    let bireg = is_bi_regular(rep, cfg)?;
    let bi = bireg.bi_regular;
    report.extend(bireg.report.clone());

    for (name, a, b) in [
        ("Prop1[H=[E]_V+R^inf(V')]", &br.space, &grd),
        ("Prop1[H=[E]_V'+R^inf(V)]", &brd.space, &gr),
    ] {
        let (ov, dims) = direct_sum_defect(a, b, h)?;
        report.push(
            Check::theorem(name, "Prop.1", bi, ov <= t && dims, ov, t)
                .with_detail(format!("dims {} + {} vs {h}", a.dim(), b.dim())),
        );
    }

    let ew = extended_wold(rep, &wand, &br, &gr, "", cfg)?;
    report.checks.extend(ew.checks);
    let ewd = extended_wold(&dual, &wand_dual, &brd, &grd, "dual:", cfg)?;
    report.push(Check::property("extended-wold", "Def.EWD", ew.holds, 0.0, 0.0));
    report.push(Check::property("dual:extended-wold", "Def.EWD", ewd.holds, 0.0, 0.0));
    report.push(
        Check::consistency("EWD(V)<=>EWD(V')", "Prop.dual-EWD", bi, ew.holds == ewd.holds)
            .with_detail(format!("V {}, V' {}", ew.holds, ewd.holds)),
    );
    let eq_gap = subspace_gap(&gr, &grd)?.max(subspace_gap(&br.space, &brd.space)?);
    report.push(Check::theorem("dual-EWD-equalities", "Prop.dual-EWD", bi && ew.holds, eq_gap <= t, eq_gap, t));

    // Wold-condition consistency battery
    let reg = bireg.regular;
    let p = gr.projector();
    let pe_inf = p.kron_identity_left(n);
    let vs = v.adjoint();
    let vvs = v.mul_unchecked(&vs);
    let nv = rep.scale();
    let nd = 1.0 + vd.frobenius_norm();
    let rt = stol * nv * nv * nd;
    let m = [
        vvs.mul_unchecked(&p).dist(&p),
        p.mul_unchecked(&vvs).dist(&p.mul_unchecked(&v.mul_unchecked(&vd))),
        vs.mul_unchecked(&p).dist(&vd.mul_unchecked(&p)),
        vs.mul_unchecked(v).mul_unchecked(&pe_inf).dist(&vd.mul_unchecked(v).mul_unchecked(&pe_inf)),
    ];
    let (iso, surj) = restriction_unitarity(rep, &gr, cfg)?;
    let v_ok = iso <= rt && surj <= t;
    let names = ["Rem123(i)", "Rem123(ii)", "Rem123(iii)", "Rem123(iv)"];
    let mut flags = Vec::new();
    for (name, r) in names.iter().zip(m) {
        flags.push(r <= rt);
        report.push(Check::property(name, "Rem.123", r <= rt, r, rt));
    }
    flags.push(v_ok);
    report.push(
        Check::property("Rem123(v)", "Rem.123", v_ok, iso.max(surj), rt)
            .with_detail(format!("isometry residual {iso:.3e}, range gap {surj:.3e}")),
    );
    report.push(
        Check::consistency("Rem123-agreement", "Rem.123", reg, flags.iter().all(|&f| f == flags[0]))
            .with_detail(format!("(i)-(v): {flags:?}")),
    );
    let red_gr = reduces(rep, &gr, cfg)?;
    report.push(
        Check::theorem("Rem123.reduces", "Rem.123", reg && flags[2], red_gr && bi, if red_gr && bi { 0.0 } else { 1.0 }, 0.0)
            .with_detail(format!("R^inf reduces {red_gr}, bi-regular {bi}")),
    );
    // (Ṽ|_{E⊗R^∞})† = Ṽ†|_{R^∞} = Ṽ*|_{R^∞}
    if !gr.is_zero() {
        let q = gr.basis();
        let a = v.mul_kron_identity(n, q);
        let lift = q.kron_identity_left(n);
        let lhs = lift.mul_unchecked(&pinv_relative(&a, cfg.tol)?).mul_unchecked(q);
        let r_d = lhs.dist(&vd.mul_unchecked(q));
        let r_s = lhs.dist(&vs.mul_unchecked(q));
        report.push(Check::theorem(
            "Rem123.2",
            "Rem.123",
            reg && flags[0],
            r_d.max(r_s) <= rt,
            r_d.max(r_s),
            rt,
        ));
    }
    // both generalized ranges reducing ⇒ equal decompositions
    let red_grd = reduces(&dual, &grd, cfg)?;
    let (ov, dims) = direct_sum_defect(&br.space, &gr, h)?;
    let ds5_margin = eq_gap.max(ov);
    report.push(
        Check::theorem("DS5", "Cor.DS5", reg && red_gr && red_grd, ds5_margin <= t && dims, ds5_margin, t)
            .with_detail(format!("R^inf(V) reduces V {red_gr}, R^inf(V') reduces V' {red_grd}")),
    );

    Ok(WoldReport {
        wandering: wand,
        brackets: br.space.clone(),
        brackets_dual: brd.space,
        gen_range: gr,
        gen_range_dual: grd,
        stabilized_at: br.saturated_at,
        growth: br.growth,
        bi_regular: bi,
        extended_wold: ew.holds,
        report,
    })
}

/// The two primary failure conditions and the canonical witnesses for the
/// remaining equivalent conditions.
pub fn wold_failure_witnesses(rep: &CovariantRep, cfg: &Config) -> Result<CheckReport> {
    let h = rep.dim_h();
    let n = rep.n();
    let stol = cfg.subspace_tol();
    let t = stol * (1.0 + h as f64);
    let k_lim = cfg.k_max.max(h + 1);
    let v = rep.v_tilde();
    let vd = mp_inverse(rep, cfg)?;
    let dual = cauchy_dual(rep, cfg)?;
    let bi = is_bi_regular(rep, cfg)?.bi_regular;
    let wand = wandering_subspace(rep, cfg)?;
    let br = brackets(rep, &wand, k_lim, cfg)?;
    let grd = generalized_range(&dual, cfg.k_max, cfg)?.space;
    let range = range_relative(v, cfg.tol)?.with_tol(stol);
    let mut report = CheckReport::new();

    let c1 = !br.space.is_full();
    let c2 = !grd.is_zero();
    let note = if bi { "" } else { "not bi-regular: informational" };
    report.push(Check::property("7way(i)", "Thm.7way", c1, br.space.dim() as f64, 0.0).with_detail("H != [E]_V"));
    report.push(Check::property("7way(ii)", "Thm.7way", c2, grd.dim() as f64, 0.0).with_detail("R^inf(V') != {0}"));
    report.push(Check::consistency("7way(i)<=>(ii)", "Thm.7way", bi, c1 == c2).with_detail(note));
    let hyp2 = bi && c2;
    let hyp1 = bi && c1;

    let contain = |a: &Subspace, b: &Subspace| -> Result<f64> { a.containment_defect(b) };
    let theorem = |report: &mut CheckReport, name: &str, hyp: bool, margin: f64| {
        report.push(Check::theorem(name, "Thm.7way", hyp, margin <= t, margin, t).with_detail(note));
    };

    // (iii), (iv): M = R^∞(Ṽ′)
    let m = &grd;
    report.push(Check::property("7way(iii)[M!=0]", "Thm.7way", !m.is_zero(), m.dim() as f64, 0.0));
    let img = image_of_lift(&dual, m, cfg)?;
    theorem(&mut report, "7way(iii)[M in V'(E(x)M)]", hyp2, contain(m, &img)?);
    theorem(&mut report, "7way(iv)[M in R(V)]", hyp2, contain(m, &range)?);
    let vsm = v.adjoint().mul_unchecked(m.basis());
    theorem(&mut report, "7way(iv)[V*M in E(x)M]", hyp2, kron_block_residual(n, m, &vsm)?);

    // (v), (vi): M = [𝓔]_Ṽ
    let m = &br.space;
    theorem(&mut report, "7way(v)[E in M]", hyp1, contain(&wand, m)?);
    report.push(Check::property("7way(v)[M!=H]", "Thm.7way", !m.is_full(), m.dim() as f64, 0.0));
    theorem(&mut report, "7way(v)[V(E(x)M) in M]", hyp1, contain(&image_of_lift(rep, m, cfg)?, m)?);
    let vd_m = if m.is_zero() {
        Subspace::zero(n * h, stol)
    } else {
        range_relative(&vd.mul_unchecked(m.basis()), cfg.tol)?.with_tol(stol)
    };
    theorem(&mut report, "7way(vi)[E(x)M in Vdagger M]", hyp1, contain(&m.kron_identity_left(n), &vd_m)?);

    // (vii): M1 = ⋁_{k≥1} Ṽ_k(E^{⊗k} ⊗ 𝓔), M2 = R^∞(Ṽ′)
    let m1 = subspace_join(&br.levels[1..].iter().cloned().chain([Subspace::zero(h, stol)]).collect::<Vec<_>>())?;
    let m2 = &grd;
    report.push(
        Check::property("7way(vii)[M1!=0,M2!=0]", "Thm.7way", !m1.is_zero() && !m2.is_zero(), m1.dim() as f64, 0.0)
            .with_detail(format!("dim M1 = {}, dim M2 = {}", m1.dim(), m2.dim())),
    );
    theorem(&mut report, "7way(vii)[V(E(x)M1) in M1]", hyp1, contain(&image_of_lift(rep, &m1, cfg)?, &m1)?);
    let m1e = subspace_join(&[m1.clone(), wand.clone()])?;
    let vd_m1 = vd.mul_unchecked(m1.basis());
    theorem(&mut report, "7way(vii)[Vdagger M1 in E(x)(M1+E)]", hyp1, kron_block_residual(n, &m1e, &vd_m1)?);
    let pm2 = m2.projector();
    let pv = if m2.is_zero() {
        Subspace::zero(h, stol)
    } else {
        range_relative(&pm2.mul_unchecked(&v.mul_kron_identity(n, m2.basis())), cfg.tol)?.with_tol(stol)
    };
    theorem(&mut report, "7way(vii)[P_M2 V(E(x)M2)=M2]", hyp1, subspace_gap(&pv, m2)?);
    let sum = subspace_join(&[m1.clone(), m2.clone()])?;
    let split = overlap(&m1, m2)?.max(subspace_gap(&sum, &range)?);
    theorem(&mut report, "7way(vii)[R(V)=M1+M2]", hyp1, split);
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct ProjectionSequence {
    /// `P_k = Ṽ_kṼ^{†(k)}`, from `P_0 = I`.
    pub p_list: Vec<ComplexMatrix>,
    /// `Q_k = P_k − P_{k+1}`.
    pub q_list: Vec<ComplexMatrix>,
    pub p_limit: ComplexMatrix,
    pub q_limit: ComplexMatrix,
    /// First `k` with `P_{k+1} = P_k`; `None` on cap hit.
    pub stabilized_at: Option<usize>,
}

/// Builds `P_k` through `P_k = Ṽ(I_E ⊗ P_{k−1})Ṽ†` and checks the
/// projection-sequence statements.
pub fn projection_sequence(rep: &CovariantRep, cfg: &Config) -> Result<(ProjectionSequence, CheckReport)> {
    let h = rep.dim_h();
    let n = rep.n();
    let stol = cfg.subspace_tol();
    let t = stol * (1.0 + h as f64);
    let v = rep.v_tilde();
    let vd = mp_inverse(rep, cfg)?;
    let id = ComplexMatrix::identity(h);
    let step = |x: &ComplexMatrix| v.mul_kron_identity(n, x).mul_unchecked(&vd);
    let limit = cfg.k_max.max(h + 1) + 1;
    let ptol = cfg.tol * 100.0 * rep.scale() * (1.0 + vd.frobenius_norm());

    let mut p_list = vec![id.clone()];
    let mut stabilized_at = None;
    for k in 1..=limit {
        let next = step(&p_list[k - 1]);
        if next.dist(&p_list[k - 1]) <= ptol {
            stabilized_at = Some(k - 1);
            break;
        }
        p_list.push(next);
    }
    let q_list: Vec<ComplexMatrix> = p_list.windows(2).map(|w| &w[0] - &w[1]).collect();
    let p_limit = p_list.last().cloned().unwrap_or_else(|| id.clone());
    let q_limit = &id - &p_limit;
    let mut report = CheckReport::new();

    let reg = is_regular(rep, cfg)?;
    let hd = crate::duality::is_hyper_dagger(rep, cfg.k_max, cfg)?;
    let hyp = reg.regular && hd.holds;
    report.push(
        Check::property("hypothesis", "Thm.proj", hyp, 0.0, 0.0).with_detail(format!(
            "regular {}, hyper-dagger {} (k <= {})",
            reg.regular, hd.holds, hd.checked_up_to
        )),
    );
    if stabilized_at.is_none() {
        report.push(Check::not_applicable("P-stabilization", "Thm.proj.2", CheckKind::Theorem, "cap hit"));
    }

    // Q_k = Ṽ_k(I ⊗ P_𝓔)Ṽ^{†(k)} and the telescoping sum hold identically
    let pe = &id - &v.mul_unchecked(&vd);
    let mut tk = pe.clone();
    let mut q_formula: f64 = 0.0;
    let mut tele: f64 = 0.0;
    let mut acc = ComplexMatrix::zeros(h, h);
    for (k, q) in q_list.iter().enumerate() {
        if k > 0 {
            tk = step(&tk);
        }
        q_formula = q_formula.max(q.dist(&tk));
        acc = &acc + q;
        tele = tele.max(acc.dist(&(&id - &p_list[k + 1])));
    }
    let it = ptol * (1.0 + q_list.len() as f64);
    report.push(Check::identity("Q_k=V_k(I(x)P_E)Vdagger(k)", "Thm.proj.3", q_formula, it));
    report.push(Check::identity("sum Q_i=I-P_k", "Thm.proj.3", tele, it));

    let herm_idem = p_list
        .iter()
        .map(|p| p.hermitian_defect().max(p.mul_unchecked(p).dist(p)))
        .fold(0.0, f64::max);
    report.push(Check::theorem("P_k-projections", "Thm.proj.2", hyp, herm_idem <= it, herm_idem, it));
    let rinf_p = reg.gen_range.projector();
    let lim = p_limit.dist(&rinf_p);
    report.push(Check::theorem("P=P_R^inf", "Thm.proj.2", hyp && stabilized_at.is_some(), lim <= t, lim, t));
    let mut orth: f64 = 0.0;
    for i in 0..q_list.len() {
        for j in 0..q_list.len() {
            if i != j {
                orth = orth.max(q_list[i].mul_unchecked(&q_list[j]).frobenius_norm());
            }
        }
    }
    report.push(Check::theorem("Q_nQ_m=0", "Thm.proj.3", hyp, orth <= it, orth, it));
    let q_idem = q_list.iter().map(|q| q.mul_unchecked(q).dist(q)).fold(0.0, f64::max);
    report.push(Check::theorem("Q_k-idempotent", "Thm.proj.3", hyp, q_idem <= it, q_idem, it));
    let rq = range_relative(&q_limit, cfg.tol)?.with_tol(stol);
    let np = kernel_relative(&p_limit, cfg.tol)?.with_tol(stol);
    let gap = subspace_gap(&rq, &np)?;
    report.push(Check::theorem("R(Q)={h:Ph=0}", "Thm.proj.4", hyp, gap <= t, gap, t));
    let rp = range_relative(&p_limit, cfg.tol)?.with_tol(stol);
    let rd = reduces_defect(rep, &rp, cfg)?.max(reduces_defect(rep, &rq, cfg)?);
    let rt = reduce_tol(rep, cfg);
    report.push(Check::theorem("R(P),R(Q)-reduce", "Thm.proj.5", hyp, rd <= rt, rd, rt));

    Ok((
        ProjectionSequence {
            p_list,
            q_list,
            p_limit,
            q_limit,
            stabilized_at,
        },
        report,
    ))
}

/// `(I_E ⊗ Ṽ_iṼ_i*)N(Ṽ) ⊆ N(Ṽ)` for `i ≤ k` implies
/// `Ṽ_{k+1}† = Ṽ^{†(k+1)}` on `R(Ṽ_{k+1})`.
pub fn dagger_power_on_range(rep: &CovariantRep, n_max: usize, cfg: &Config) -> Result<CheckReport> {
    let n = rep.n();
    let stol = cfg.subspace_tol();
    let v = rep.v_tilde();
    let ker = kernel_relative(v, cfg.tol)?;
    let chain = range_chain(rep, n_max + 1, cfg)?;
    let mut report = CheckReport::new();
    report.push(Check::property("RK1.closed-range", "Lem.RK1", true, 0.0, 0.0).with_detail("auto-pass (finite-dimensional)"));
    let mut g = ComplexMatrix::identity(rep.dim_h());
    let mut all_h = true;
    for i in 1..=n_max {
        g = v.mul_kron_identity(n, &g).mul_unchecked(&v.adjoint());
        let defect = v.mul_kron_identity(n, &g).mul_unchecked(ker.basis()).frobenius_norm();
        let ht = stol * rep.scale() * (1.0 + g.frobenius_norm()) * (1.0 + ker.dim() as f64);
        let hi = defect <= ht;
        all_h &= hi;
        report.push(Check::property(&format!("RK1.H[{i}]"), "Thm.RK1", hi, defect, ht));
        let name = format!("RK1.C[{i}]");
        if rep.level_dim(i + 1, cfg).is_err() {
            report.push(Check::not_applicable(&name, "Thm.RK1", CheckKind::Theorem, "size cap"));
            break;
        }
        let a = rep.power(i + 1, cfg)?;
        let pa = pinv_relative(&a, cfg.tol)?;
        let d = crate::duality::dagger_power(rep, i + 1, cfg)?;
        let res = (&pa - &d).mul_unchecked(chain[i + 1].basis()).frobenius_norm();
        let s = 1.0 + pa.frobenius_norm().max(d.frobenius_norm());
        let ct = stol * s * s * (1.0 + a.frobenius_norm());
        report.push(Check::theorem(&name, "Thm.RK1", all_h, res <= ct, res, ct));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::report::Verdict;

    fn ex_a() -> CovariantRep {
        let v = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]]).unwrap();
        CovariantRep::new(2, 2, v).unwrap()
    }

    fn ex_b() -> CovariantRep {
        let v = ComplexMatrix::from_real_rows(&[&[2.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]]).unwrap();
        CovariantRep::new(2, 2, v).unwrap()
    }

    fn ex_c() -> CovariantRep {
        let mut v = ComplexMatrix::zeros(4, 4);
        for m in 0..3 {
            v[(m + 1, m)] = ONE;
        }
        CovariantRep::new(4, 1, v).unwrap()
    }

    fn cfg() -> Config {
        Config::default()
    }

    #[test]
    fn generalized_range_examples() {
        let g = generalized_range(&ex_a(), 8, &cfg()).unwrap();
        assert!(g.space.is_full());
        assert_eq!(g.stabilized_at, 1);
        let g = generalized_range(&ex_c(), 8, &cfg()).unwrap();
        assert!(g.space.is_zero());
        assert_eq!(g.stabilized_at, 4);
        assert!(generalized_range(&ex_b(), 8, &cfg()).unwrap().space.is_full());
    }

    #[test]
    fn regularity_examples() {
        let a = is_regular(&ex_a(), &cfg()).unwrap();
        assert!(a.regular);
        assert!(!a.report.has_falsification(), "{}", a.report.to_text());
        let c = is_regular(&ex_c(), &cfg()).unwrap();
        assert!(!c.regular);
        assert!(!c.report.has_falsification(), "{}", c.report.to_text());
        let li = CovariantRep::new(2, 1, ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 3.0]]).unwrap()).unwrap();
        assert!(is_regular(&li, &cfg()).unwrap().regular);
    }

    #[test]
    fn bi_regularity_examples() {
        let a = is_bi_regular(&ex_a(), &cfg()).unwrap();
        assert!(a.bi_regular);
        assert!(!a.report.has_falsification());
        let c = is_bi_regular(&ex_c(), &cfg()).unwrap();
        assert!(!c.bi_regular && !c.regular);
    }

    #[test]
    fn wandering_and_brackets() {
        let c = cfg();
        assert!(wandering_subspace(&ex_a(), &c).unwrap().is_zero());
        let w = wandering_subspace(&ex_c(), &c).unwrap();
        assert!(w.approx_eq(&Subspace::coordinate(4, &[0], 1e-8), 1e-10).unwrap());
        let z = CovariantRep::new(3, 2, ComplexMatrix::zeros(3, 6)).unwrap();
        assert!(wandering_subspace(&z, &c).unwrap().is_full());
        let b = brackets(&ex_c(), &w, 8, &c).unwrap();
        assert!(b.space.is_full());
        assert_eq!(b.saturated_at, Some(3));
        assert_eq!(b.growth, vec![1, 2, 3, 4, 4]);
        let b0 = brackets(&ex_a(), &Subspace::zero(2, 1e-8), 8, &c).unwrap();
        assert!(b0.space.is_zero());
        assert!(!b0.cap_hit);
    }

    #[test]
    fn reduces_examples() {
        let c = cfg();
        let a = ex_a();
        assert!(reduces(&a, &Subspace::zero(2, 1e-8), &c).unwrap());
        assert!(reduces(&a, &Subspace::full(2, 1e-8), &c).unwrap());
        assert!(reduces(&a, &Subspace::coordinate(2, &[0], 1e-8), &c).unwrap());
        assert!(!reduces(&ex_c(), &Subspace::coordinate(4, &[0], 1e-8), &c).unwrap());
        assert!(reduces(&ex_c(), &Subspace::coordinate(4, &[0], 1e-8).with_tol(1e-8), &c).is_ok());
    }

    #[test]
    fn wold_examples() {
        let c = cfg();
        let a = wold_report(&ex_a(), &c).unwrap();
        assert!(a.brackets.is_zero() && a.gen_range.is_full());
        assert!(a.report.passed("Prop1[H=[E]_V+R^inf(V')]"));
        assert!(a.report.passed("EWD.unitary"));
        assert!(!a.report.has_falsification(), "{}", a.report.to_text());
        let cc = wold_report(&ex_c(), &c).unwrap();
        assert!(cc.brackets.is_full() && cc.gen_range_dual.is_zero());
        assert!(!cc.report.has_falsification(), "{}", cc.report.to_text());
        let b = wold_report(&ex_b(), &c).unwrap();
        assert_eq!(b.report.verdict("Rem123(v)"), Some(Verdict::Fail));
        assert!(!b.report.has_falsification(), "{}", b.report.to_text());
    }

    #[test]
    fn witness_examples() {
        let c = cfg();
        let a = wold_failure_witnesses(&ex_a(), &c).unwrap();
        assert!(a.passed("7way(i)") && a.passed("7way(ii)"));
        assert!(!a.has_falsification(), "{}", a.to_text());
        let cc = wold_failure_witnesses(&ex_c(), &c).unwrap();
        assert!(!cc.passed("7way(i)") && !cc.passed("7way(ii)"));
        let sum = ex_a().direct_sum(&CovariantRep::new(4, 2, {
            let mut v = ComplexMatrix::zeros(4, 8);
            for m in 0..3 {
                v[(m + 1, m)] = ONE;
            }
            v
        }).unwrap()).unwrap();
        let s = wold_failure_witnesses(&sum, &c).unwrap();
        assert!(s.passed("7way(i)") && s.passed("7way(ii)"), "{}", s.to_text());
    }

    #[test]
    fn projection_sequence_examples() {
        let c = cfg();
        let (ps, r) = projection_sequence(&ex_a(), &c).unwrap();
        assert!(ps.p_limit.dist(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(ps.q_limit.max_abs() < 1e-12);
        assert!(!r.has_falsification(), "{}", r.to_text());
        let (ps, r) = projection_sequence(&ex_c(), &c).unwrap();
        assert!(ps.p_limit.max_abs() < 1e-12);
        assert_eq!(ps.q_list.len(), 4);
        assert!(r.passed("sum Q_i=I-P_k"));
        let z = CovariantRep::new(2, 1, ComplexMatrix::zeros(2, 2)).unwrap();
        let (ps, _) = projection_sequence(&z, &c).unwrap();
        assert!(ps.p_list[1].max_abs() == 0.0);
        assert!(ps.q_list[0].dist(&ComplexMatrix::identity(2)) == 0.0);
    }

    #[test]
    fn dagger_on_range_examples() {
        let c = cfg();
        let r = dagger_power_on_range(&ex_a(), 3, &c).unwrap();
        assert!(r.passed("RK1.H[1]") && r.passed("RK1.C[1]"), "{}", r.to_text());
        let li = CovariantRep::new(2, 1, ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 3.0]]).unwrap()).unwrap();
        let r = dagger_power_on_range(&li, 3, &c).unwrap();
        assert!(!r.has_falsification());
        assert!(r.passed("RK1.C[3]"));
    }
}

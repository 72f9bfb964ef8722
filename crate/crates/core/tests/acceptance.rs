//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use covrep::duality::{cauchy_dual, dual_identity_suite, is_hyper_dagger};
use covrep::fuzz::{run_fuzz, FuzzOutcome, FuzzSpec};
use covrep::io::{rep_from_json, rep_to_json};
use covrep::linalg::{
    kernel_relative, penrose_residuals, pinv, range_relative, spectral_norm, ComplexMatrix, C64,
};
use covrep::properties::{is_concave_full, is_concave_mod, is_hyponormal_mod};
use covrep::random::{gaussian, random_rep_with, random_unitary, rng_for, RepKind};
use covrep::report::{CheckKind, Verdict};
use covrep::shift::{
    build_shift, shift_dagger_closed_form, shift_dual_closed_form, zero_at, ShiftKind, WeightedShiftSpec,
};
use covrep::structure::{generalized_range, is_regular, projection_sequence, range_chain, wold_report};
use covrep::{Config, CovariantRep};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ex_a() -> CovariantRep {
    let v = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]]).unwrap();
    CovariantRep::new(2, 2, v).unwrap()
}

fn ex_c() -> CovariantRep {
    build_shift(&WeightedShiftSpec::unit(ShiftKind::Unilateral, 1, (0, 3)).unwrap(), &Config::default())
        .unwrap()
        .rep
}

fn corpus(seed: u64) -> FuzzOutcome {
    run_fuzz(&FuzzSpec::new(200, seed), None, &Config::default()).unwrap()
}

fn penrose() -> Outcome {
    let t0 = Instant::now();
    let mut rng = rng_for(2024, 1);
    let mut worst = 0.0f64;
    for t in 0..500 {
        let (r, c) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let m = match t % 3 {
            0 => gaussian(&mut rng, r, c),
            1 => {
                let k = rng.random_range(0..r.min(c));
                (&gaussian(&mut rng, r, k.max(1)) * &gaussian(&mut rng, k.max(1), c))
                    .scale_real(if k == 0 { 0.0 } else { 1.0 })
            }
            _ => {
                let mut m = gaussian(&mut rng, r, c);
                let j = rng.random_range(0..c);
                for i in 0..r {
                    m[(i, j)] *= 1e-4;
                }
                m
            }
        };
        let w = pinv(&m, None).map_err(|e| e.to_string())?;
        let bound = 1e-10 * (1.0 + spectral_norm(&m).unwrap());
        for (i, res) in penrose_residuals(&m, &w).unwrap().into_iter().enumerate() {
            worst = worst.max(res / bound);
            ensure(res <= bound, || format!("matrix {t} ({r}x{c}): Penrose residual {} = {res:.3e}", i + 1))?;
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    ensure(dt < 5.0, || format!("took {dt:.2}s"))?;
    Ok(format!("500 matrices, worst residual/bound {worst:.2e}, {dt:.2}s"))
}

fn duality_suite() -> Outcome {
    let t0 = Instant::now();
    let cfg = Config::default();
    let mut rng = rng_for(7, 2);
    let mut checked = 0;
    let mut worst = 0.0f64;
    for t in 0..200 {
        let kind = RepKind::ALL[t % RepKind::ALL.len()];
        let h = rng.random_range(1..=4);
        let n = if kind == RepKind::LeftInvertible { 1 } else { rng.random_range(1..=3) };
        let rep = random_rep_with(&mut rng, h, n, kind, &cfg).unwrap();
        let u = random_unitary(&mut rng, h).unwrap();
        let suite = dual_identity_suite(&rep, Some(&u), &cfg).map_err(|e| e.to_string())?;
        for c in &suite.report.checks {
            ensure(!c.is_falsification(), || format!("trial {t} ({kind}): {} failed, residual {:.3e}", c.name, c.margin))?;
            if c.kind == CheckKind::Identity && c.verdict == Verdict::Pass {
                worst = worst.max(c.margin);
                checked += 1;
                ensure(c.margin <= 1e-9, || format!("trial {t}: {} residual {:.3e}", c.name, c.margin))?;
            }
        }
        let dual = cauchy_dual(&rep, &cfg).unwrap();
        let back = cauchy_dual(&dual, &cfg).unwrap();
        let inv = back.v_tilde().dist(rep.v_tilde());
        ensure(inv <= 1e-9, || format!("trial {t}: involution residual {inv:.3e}"))?;
        if kind == RepKind::PartialIsometry {
            let d = dual.v_tilde().dist(rep.v_tilde());
            ensure(d <= 1e-9, || format!("trial {t}: partial isometry V' != V ({d:.3e})"))?;
        }
    }
    let dt = t0.elapsed().as_secs_f64();
    ensure(dt < 10.0, || format!("took {dt:.2}s"))?;
    Ok(format!("200 reps, {checked} identity residuals, worst {worst:.2e}, {dt:.2}s"))
}

fn closed_form_oracle() -> Outcome {
    let cfg = Config::default();
    let mut rng = rng_for(11, 3);
    let mut worst = 0.0f64;
    for t in 0..50 {
        let n = rng.random_range(1..=3);
        let len = rng.random_range(2..=9i64);
        let kind = if rng.random::<bool>() { ShiftKind::Unilateral } else { ShiftKind::Bilateral };
        let a = if kind == ShiftKind::Unilateral { rng.random_range(0..=2i64) } else { rng.random_range(-4..=2i64) };
        let weights = (0..n).map(|_| (0..len).map(|_| rng.random_range(0.1..=3.0)).collect()).collect();
        let spec = WeightedShiftSpec::new(kind, n, (a, a + len - 1), weights).unwrap();
        let s = build_shift(&spec, &cfg).unwrap();
        let cols = s.interior_columns();
        let dual = cauchy_dual(&s.rep, &cfg).unwrap();
        let closed = shift_dual_closed_form(&spec).unwrap();
        let d1 = dual.v_tilde().select_columns(&cols).dist(&closed.select_columns(&cols));
        let dag = covrep::duality::mp_inverse(&s.rep, &cfg).unwrap();
        let d2 = dag.dist(&shift_dagger_closed_form(&spec).unwrap());
        worst = worst.max(d1).max(d2);
        ensure(d1 <= 1e-10, || format!("spec {t}: dual differs on interior by {d1:.3e}"))?;
        ensure(d2 <= 1e-10, || format!("spec {t}: dagger differs by {d2:.3e}"))?;
    }
    Ok(format!("50 specs, worst deviation {worst:.2e}"))
}

fn wold(c: &FuzzOutcome) -> Outcome {
    let cfg = Config::default();
    let mut bi = 0;
    let mut worst = 0.0f64;
    for t in &c.trials {
        for name in ["Prop1[H=[E]_V+R^inf(V')]", "Prop1[H=[E]_V'+R^inf(V)]"] {
            let ch = t.report.get(name).ok_or_else(|| format!("trial {}: {name} missing", t.trial))?;
            ensure(!ch.is_falsification(), || format!("trial {}: {name} FAIL", t.trial))?;
        }
        let w = wold_report(&t.rep, &cfg).unwrap();
        if !w.bi_regular {
            continue;
        }
        bi += 1;
        let h = t.rep.dim_h();
        for (a, b) in [(&w.brackets, &w.gen_range_dual), (&w.brackets_dual, &w.gen_range)] {
            ensure(a.dim() + b.dim() == h, || format!("trial {}: dims {} + {} != {h}", t.trial, a.dim(), b.dim()))?;
            let gram = a.basis().adjoint_mul(b.basis()).frobenius_norm();
            worst = worst.max(gram);
            ensure(gram <= 1e-9, || format!("trial {}: cross-Gram {gram:.3e}", t.trial))?;
        }
    }
    ensure(bi > 0, || "no bi-regular representation in the corpus".into())?;
    Ok(format!("{bi} bi-regular reps of 200, worst cross-Gram {worst:.2e}"))
}

fn consistency(c: &FuzzOutcome) -> Outcome {
    let (mut cc_n, mut rem_n) = (0, 0);
    for t in &c.trials {
        let r = &t.report;
        for agg in ["cc-agreement", "Rem123-agreement"] {
            ensure(!r.get(agg).is_some_and(|x| x.is_falsification()), || format!("trial {}: {agg} FAIL", t.trial))?;
        }
        if r.verdict("cc-agreement") == Some(Verdict::NotApplicable) {
            continue;
        }
        let reg = r.verdict("regular");
        for name in ["cc(1)", "cc(2)", "cc(3)", "cc(4)"] {
            ensure(r.verdict(name) == reg, || format!("trial {}: {name} disagrees with the definition", t.trial))?;
        }
        cc_n += 1;
        if reg == Some(Verdict::Pass) {
            let first = r.verdict("Rem123(i)");
            for name in ["Rem123(ii)", "Rem123(iii)", "Rem123(iv)", "Rem123(v)"] {
                ensure(r.verdict(name) == first, || format!("trial {}: {name} disagrees with Rem123(i)", t.trial))?;
            }
            rem_n += 1;
        }
    }
    Ok(format!("regularity conditions agree on {cc_n} reps; the five conditions agree on {rem_n} regular reps"))
}

fn concavity(c: &FuzzOutcome) -> Outcome {
    let cfg = Config::default();
    let shifts = c.trials.iter().filter(|t| t.kind == RepKind::ConcaveShift).count();
    ensure(shifts >= 50, || format!("only {shifts} concave-shift reps"))?;
    // n = 1 unitaries are concave with equality; they keep the full-form branch nonvacuous
    let mut rng = rng_for(13, 4);
    let extra: Vec<CovariantRep> = (0..10)
        .map(|_| {
            let h = rng.random_range(1..=4);
            CovariantRep::new(h, 1, random_unitary(&mut rng, h).unwrap()).unwrap()
        })
        .collect();
    let (mut mod_pass, mut full_pass) = (0, 0);
    let mut worst = f64::INFINITY;
    let reps = c.trials.iter().map(|t| (t.trial.to_string(), &t.rep)).chain(extra.iter().map(|r| ("unitary".to_string(), r)));
    for (label, rep) in reps {
        let dual = cauchy_dual(rep, &cfg).unwrap();
        if is_concave_mod(rep, None, &cfg).unwrap().holds() {
            mod_pass += 1;
            let m = is_hyponormal_mod(&dual, None, &cfg).unwrap().margin;
            worst = worst.min(m);
            ensure(m >= -1e-8, || format!("rep {label}: dual hyponormal-mod margin {m:.3e}"))?;
        }
        if is_concave_full(rep, None, &cfg).unwrap().holds() {
            full_pass += 1;
            let norm = spectral_norm(dual.v_tilde()).unwrap();
            ensure(norm <= 1.0 + 1e-8, || format!("rep {label}: ||V'|| = {norm}"))?;
        }
    }
    for t in &c.trials {
        for name in ["ThmX4", "CorY1"] {
            ensure(!t.report.get(name).is_some_and(|x| x.is_falsification()), || format!("trial {}: {name} FAIL", t.trial))?;
        }
    }
    ensure(mod_pass > 0 && full_pass > 0, || "vacuous".into())?;
    Ok(format!(
        "{shifts} concave shifts; {mod_pass} concave-mod passes (worst dual margin {worst:.2e}); {full_pass} concave-full passes"
    ))
}

fn dirichlet_example() -> Outcome {
    let cfg = Config::default();
    let spec = zero_at(&WeightedShiftSpec::dirichlet(ShiftKind::Unilateral, 1, (0, 8)).unwrap(), 0).unwrap();
    let s = build_shift(&spec, &cfg).unwrap();
    let mask = s.interior_mask();
    let full = is_concave_full(&s.rep, Some(&mask), &cfg).unwrap();
    ensure(full.verdict == Verdict::Fail, || "concave (full) passed".into())?;
    ensure((full.margin - 1.0).abs() <= 1e-9, || format!("full margin {}", full.margin))?;
    let w = full.witness.as_ref().ok_or("no witness")?;
    let at = spec.coord(0);
    ensure((w[at].norm() - 1.0).abs() <= 1e-9, || format!("witness weight at e_0 is {}", w[at].norm()))?;
    let m = is_concave_mod(&s.rep, Some(&mask), &cfg).unwrap();
    ensure(m.verdict == Verdict::Pass && m.margin <= 1e-9, || format!("concave-mod margin {}", m.margin))?;
    Ok(format!("full margin {:.12}, witness e_0, mod margin {:.2e}", full.margin, m.margin))
}

fn projections(c: &FuzzOutcome) -> Outcome {
    let cfg = Config::default();
    let mut reps = vec![("EX-A".to_string(), ex_a()), ("EX-C".to_string(), ex_c())];
    let mut found = 0;
    for t in &c.trials {
        if found == 20 {
            break;
        }
        if is_hyper_dagger(&t.rep, cfg.k_max, &cfg).unwrap().holds {
            reps.push((format!("trial {}", t.trial), t.rep.clone()));
            found += 1;
        }
    }
    ensure(found == 20, || format!("only {found} hyper-dagger reps"))?;
    for (label, rep) in &reps {
        let (_, report) = projection_sequence(rep, &cfg).map_err(|e| e.to_string())?;
        let get = |name: &str| report.get(name).ok_or_else(|| format!("{label}: {name} missing"));
        for (name, bound) in [("Q_nQ_m=0", 1e-9), ("sum Q_i=I-P_k", 1e-10), ("P=P_R^inf", 1e-9)] {
            let m = get(name)?.margin;
            ensure(m <= bound, || format!("{label}: {name} residual {m:.3e}"))?;
        }
        let red = get("R(P),R(Q)-reduce")?;
        ensure(red.margin <= red.tolerance, || format!("{label}: reduce defect {:.3e}", red.margin))?;
        ensure(!report.has_falsification(), || format!("{label}: falsification"))?;
    }
    Ok(format!("EX-A, EX-C and {found} hyper-dagger reps"))
}

fn n_dagger() -> Outcome {
    let mut spec = FuzzSpec::new(100, 42);
    spec.kinds = vec![RepKind::RankDeficient];
    let out = run_fuzz(&spec, None, &Config::default()).unwrap();
    let hits: Vec<(usize, f64)> = out
        .trials
        .iter()
        .filter_map(|t| t.report.get("n-dagger(2)").map(|c| (t.trial, c)))
        .filter(|(_, c)| c.verdict == Verdict::Fail && c.margin > 1e-6)
        .map(|(i, c)| (i, c.margin))
        .collect();
    ensure(!hits.is_empty(), || "no instance with V_2dagger != Vdagger(2)".into())?;
    ensure(out.counts().falsifications == 0, || "falsification in rank-deficient corpus".into())?;
    Ok(format!("{} of 100 trials; first at trial {} with residual {:.3e}", hits.len(), hits[0].0, hits[0].1))
}

/// Exact row reduction over the rationals.
mod exact {
    use super::*;

    pub type Mat = Vec<Vec<BigRational>>;

    pub fn from_ints(rows: &[Vec<i64>]) -> Mat {
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
        let mut a = m.clone();
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..cols {
                        let d = &f * &a[r][j];
                        a[i][j] = &a[i][j] - d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows {
                break;
            }
        }
        (a, pivots)
    }

    pub fn rank(m: &Mat) -> usize {
        rref(m).1.len()
    }

    /// Columns spanning `R(M)`.
    pub fn range_basis(m: &Mat) -> Mat {
        let (_, piv) = rref(m);
        m.iter().map(|row| piv.iter().map(|&c| row[c].clone()).collect()).collect()
    }

    pub fn kernel_basis(m: &Mat, cols: usize) -> Mat {
        let (r, piv) = rref(m);
        let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
        let mut out = vec![vec![BigRational::zero(); free.len()]; cols];
        for (k, &f) in free.iter().enumerate() {
            out[f][k] = BigRational::from_integer(1.into());
            for (i, &p) in piv.iter().enumerate() {
                out[p][k] = -r[i][f].clone();
            }
        }
        out
    }

    pub fn mul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| (0..inner).fold(BigRational::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                    .collect()
            })
            .collect()
    }

    /// `kron(I_n, B)` for an `h × r` block.
    pub fn kron_identity(n: usize, b: &Mat, h: usize, r: usize) -> Mat {
        let mut out = vec![vec![BigRational::zero(); n * r]; n * h];
        for blk in 0..n {
            for i in 0..h {
                for j in 0..r {
                    out[blk * h + i][blk * r + j] = b[i][j].clone();
                }
            }
        }
        out
    }

    pub fn hstack(a: &Mat, b: &Mat) -> Mat {
        a.iter().zip(b).map(|(x, y)| x.iter().chain(y).cloned().collect()).collect()
    }

    pub fn is_zero(m: &Mat) -> bool {
        m.iter().flatten().all(|x| x.abs().is_zero())
    }
}

fn exact_oracle() -> Outcome {
    use exact::*;
    let cfg = Config::default();
    let mut rng = rng_for(5, 6);
    let mut lines = Vec::new();
    for t in 0..10 {
        let h = 1 + t % 3;
        let n = 1 + (t / 3) % 2;
        let ints: Vec<Vec<i64>> = (0..h)
            .map(|_| (0..n * h).map(|_| if rng.random::<f64>() < 0.5 { 0 } else { rng.random_range(-2..=2) }).collect())
            .collect();
        let q = from_ints(&ints);
        let v = ComplexMatrix::from_rows(
            &ints.iter().map(|r| r.iter().map(|&x| C64::new(x as f64, 0.0)).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        let rep = CovariantRep::new(h, n, v).unwrap();

        let rk = rank(&q);
        let ker = kernel_basis(&q, n * h);
        let mut levels = vec![rk];
        let mut basis = range_basis(&q);
        loop {
            let r = levels[levels.len() - 1];
            let next = if r == 0 {
                0
            } else {
                let lifted = kron_identity(n, &basis, h, r);
                let img = mul(&q, &lifted, n * h, n * r);
                basis = range_basis(&img);
                rank(&img)
            };
            if next == r {
                break;
            }
            levels.push(next);
        }
        let rinf = *levels.last().unwrap();
        let regular = if ker.first().is_none_or(|r| r.is_empty()) || is_zero(&ker) {
            true
        } else if rinf == 0 {
            false
        } else {
            let lifted = kron_identity(n, &basis, h, rinf);
            rank(&hstack(&lifted, &ker)) == rank(&lifted)
        };

        let f_ker = kernel_relative(rep.v_tilde(), cfg.tol).unwrap().dim();
        let f_rng = range_relative(rep.v_tilde(), cfg.tol).unwrap().dim();
        let chain = range_chain(&rep, levels.len(), &cfg).unwrap();
        let f_levels: Vec<usize> = chain[1..].iter().map(|s| s.dim()).collect();
        let f_inf = generalized_range(&rep, cfg.k_max.max(h + 1), &cfg).unwrap().space.dim();
        let f_reg = is_regular(&rep, &cfg).unwrap().regular;
        ensure(f_ker == n * h - rk, || format!("rep {t}: dim N(V) {f_ker} vs exact {}", n * h - rk))?;
        ensure(f_rng == rk, || format!("rep {t}: dim R(V) {f_rng} vs exact {rk}"))?;
        ensure(f_levels == levels, || format!("rep {t}: range chain {f_levels:?} vs exact {levels:?}"))?;
        ensure(f_inf == rinf, || format!("rep {t}: dim R^inf {f_inf} vs exact {rinf}"))?;
        ensure(f_reg == regular, || format!("rep {t}: regular {f_reg} vs exact {regular}"))?;
        lines.push(format!("{h}x{}:{rk}/{rinf}/{}", n * h, if regular { "R" } else { "-" }));
    }
    Ok(format!("10 reps match exactly [{}]", lines.join(" ")))
}

fn cli_contract() -> Outcome {
    let cfg = Config::default();
    let mut rng = rng_for(17, 7);
    for t in 0..100 {
        let kind = RepKind::ALL[t % RepKind::ALL.len()];
        let h = rng.random_range(1..=4);
        let n = if kind == RepKind::LeftInvertible { 1 } else { rng.random_range(1..=3) };
        let rep = random_rep_with(&mut rng, h, n, kind, &cfg).unwrap();
        let back = rep_from_json(&rep_to_json(&rep, serde_json::Value::Null)).map_err(|e| e.to_string())?;
        let same = rep.v_tilde().data().iter().zip(back.v_tilde().data()).all(|(a, b)| {
            a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()
        });
        ensure(same && back.n() == n && back.dim_h() == h, || format!("rep {t} did not round-trip"))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_covrep");
    let path = |name: &str| dir.path().join(name);
    let run = |args: &[&str], env: &[(&str, &str)]| -> i32 {
        let mut cmd = Command::new(bin);
        cmd.args(args).env_remove("COVREP_TOL").env_remove("COVREP_MAX_DIM");
        for (k, v) in env {
            cmd.env(k, v);
        }
        cmd.output().expect("spawn").status.code().unwrap_or(-1)
    };
    let ex_a_path = path("ex_a.json");
    std::fs::write(&ex_a_path, rep_to_json(&ex_a(), serde_json::Value::Null)).unwrap();
    let p = |q: &std::path::Path| q.to_str().unwrap().to_string();

    let t0 = Instant::now();
    let ok = run(&["check", "--input", &p(&ex_a_path), "--battery", "all", "--report", &p(&path("a.json"))], &[]);
    let dt = t0.elapsed().as_secs_f64();
    ensure(ok == 0, || format!("EX-A check exited {ok}"))?;
    ensure(dt < 1.0, || format!("EX-A check took {dt:.2}s"))?;

    let bad_cov = path("cov.json");
    std::fs::write(
        &bad_cov,
        r#"{"dim_h":2,"n":1,"v_tilde":[[[0,0],[1,0]],[[0,0],[0,0]]],
           "sigma_generators":[{"label":"b","matrix":{"rows":2,"cols":2,"data":[[[2,0],[0,0]],[[0,0],[1,0]]]}}],
           "phi_generators":[{"label":"b","matrix":{"rows":1,"cols":1,"data":[[[1,0]]]}}]}"#,
    )
    .unwrap();
    let falsified = run(&["check", "--input", &p(&bad_cov), "--report", &p(&path("c.json"))], &[]);
    ensure(falsified == 1, || format!("covariance violation exited {falsified}"))?;

    let garbage = path("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    let usage = run(&["check", "--input", &p(&garbage)], &[]);
    ensure(usage == 2, || format!("malformed input exited {usage}"))?;
    let n0 = run(&["gen", "shift", "--n", "0", "--window", "0..3", "--unit", "--out", &p(&path("x.json"))], &[]);
    ensure(n0 == 2, || format!("--n 0 exited {n0}"))?;

    let cap = run(
        &["gen", "shift", "--n", "2", "--window", "0..8", "--unit", "--out", &p(&path("y.json"))],
        &[("COVREP_MAX_DIM", "8")],
    );
    ensure(cap == 3, || format!("size cap exited {cap}"))?;
    Ok(format!("100 bit-exact round trips; exit codes 0/1/2/3; EX-A battery {:.0} ms", dt * 1e3))
}

/// Run one criterion; a panic counts as a failure of that criterion only.
fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let fuzz = corpus(42);
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        ("Penrose suite", Box::new(penrose)),
        ("duality identity suite", Box::new(duality_suite)),
        ("shift closed-form oracle", Box::new(closed_form_oracle)),
        ("Wold decomposition", Box::new(|| wold(&fuzz))),
        ("regularity and Wold-condition consistency", Box::new(|| consistency(&fuzz))),
        ("concavity implies dual hyponormality", Box::new(|| concavity(&fuzz))),
        ("Dirichlet zeroing example", Box::new(dirichlet_example)),
        ("projection sequence", Box::new(|| projections(&fuzz))),
        ("n-dagger falsifiability", Box::new(n_dagger)),
        ("exact rational oracle", Box::new(exact_oracle)),
        ("CLI contract", Box::new(cli_contract)),
    ];
    let total = criteria.len();
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        match guarded(f) {
            Ok(msg) => println!("PASS [{:>2}] {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {total} criteria pass ({:.1}s)", total - failed, t0.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

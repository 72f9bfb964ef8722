//! The `covrep` command line.
//!
//! Exit codes: 0 no falsification, 1 falsification found, 2 usage or input
//! error, 3 size cap exceeded.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::Config;
use crate::duality::{cauchy_dual, dj1_check, dual_identity_suite, is_hyper_dagger, mp_inverse};
use crate::error::{CovrepError, Result};
use crate::fuzz::{parse_dims, run_fuzz, FuzzSpec};
use crate::io::{matrix_to_json, rep_to_json, MatrixJson, RepJson, ReportJson};
use crate::linalg::Subspace;
use crate::properties::{theorem_suite, InteriorMask};
use crate::random::RepKind;
use crate::rep::{check_covariance, CovariantRep};
use crate::report::{Check, CheckReport};
use crate::shift::{build_shift, shift_dagger_closed_form, shift_dual_closed_form, zero_at, ShiftKind, WeightedShiftSpec};
use crate::structure::{
    dagger_power_on_range, is_regular, projection_sequence, wold_failure_witnesses, wold_report,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "covrep", version, about = "Verify structural properties of finite-dimensional covariant representations")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a representation file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run certifier batteries on a representation.
    Check(CheckArgs),
    /// Seeded batch fuzzing of the implication suites.
    Fuzz(FuzzArgs),
    /// Write the Cauchy dual as a representation file.
    Dual(IoArgs),
    /// Write the Moore-Penrose inverse as a matrix file.
    Pinv(IoArgs),
    /// Write the Wold-type subspaces and verdicts.
    Wold(IoArgs),
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Truncated weighted shift.
    Shift(ShiftArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Unilateral,
    Bilateral,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["weights", "unit", "dirichlet"]))]
struct ShiftArgs {
    #[arg(long, value_enum, default_value = "unilateral")]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    /// Inclusive index window, e.g. `0..8` or `-2..2`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    window: (i64, i64),
    /// Weight file: triplets `{"i","m","w"}` or a dense array.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// All weights 1.
    #[arg(long)]
    unit: bool,
    /// Weights `sqrt((m+2)/(m+1))`.
    #[arg(long)]
    dirichlet: bool,
    /// Set `w_{i,M0} = 0` for every `i`.
    #[arg(long, allow_hyphen_values = true)]
    zero_at: Option<i64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Battery {
    All,
    Duality,
    Structure,
    Properties,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    battery: Battery,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Truncation for power chains and tensor levels.
    #[arg(long)]
    max_power: Option<usize>,
    /// Restrict property certifiers to the interior recorded by `gen shift`.
    #[arg(long)]
    interior_only: bool,
    /// Report file; stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct FuzzArgs {
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "h<=4,n<=3")]
    dims: String,
    /// Comma-separated kinds; default cycles through all of them.
    #[arg(long, value_delimiter = ',')]
    kinds: Vec<RepKind>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Report file; a summary goes to stdout when omitted. Failing
    /// representations are written next to it.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IoArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    tolerance: Option<f64>,
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad window start {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad window end {b:?}"))?;
    if b < a {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok((a, b))
}

fn exit_code(e: &CovrepError) -> i32 {
    match e {
        CovrepError::SizeCap { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen(GenCommand::Shift(a)) => cmd_gen_shift(a),
        Command::Check(a) => cmd_check(a),
        Command::Fuzz(a) => cmd_fuzz(a),
        Command::Dual(a) => cmd_dual(a),
        Command::Pinv(a) => cmd_pinv(a),
        Command::Wold(a) => cmd_wold(a),
    }
}

fn config(tolerance: Option<f64>, max_power: Option<usize>) -> Result<Config> {
    let mut cfg = Config::from_env()?;
    if let Some(t) = tolerance {
        cfg = cfg.with_tol(t)?;
    }
    if let Some(k) = max_power {
        cfg = cfg.with_k_max(k);
    }
    Ok(cfg)
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CovrepError::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CovrepError::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn load_rep(bytes: &[u8]) -> Result<(CovariantRep, RepJson)> {
    let rj: RepJson = serde_json::from_slice(bytes)
        .map_err(|e| CovrepError::InvalidInput(format!("representation JSON: {e}")))?;
    Ok((rj.to_rep()?, rj))
}

fn cmd_gen_shift(a: ShiftArgs) -> Result<i32> {
    let cfg = config(None, None)?;
    let kind = match a.kind {
        KindArg::Unilateral => ShiftKind::Unilateral,
        KindArg::Bilateral => ShiftKind::Bilateral,
    };
    if a.n == 0 {
        return Err(CovrepError::InvalidInput("--n must be >= 1".into()));
    }
    let len = (a.window.1 - a.window.0 + 1) as usize;
    cfg.check_dim("shift E (x) H", a.n.saturating_mul(len))?;
    let mut spec = if a.unit {
        WeightedShiftSpec::unit(kind, a.n, a.window)?
    } else if a.dirichlet {
        WeightedShiftSpec::dirichlet(kind, a.n, a.window)?
    } else {
        let path = a.weights.as_deref().expect("clap group");
        let text = String::from_utf8(read(path)?)
            .map_err(|_| CovrepError::InvalidInput(format!("{} is not UTF-8", path.display())))?;
        WeightedShiftSpec::new(kind, a.n, a.window, crate::io::parse_weights(&text, a.n, a.window)?)?
    };
    if let Some(m0) = a.zero_at {
        spec = zero_at(&spec, m0)?;
    }
    let s = build_shift(&spec, &cfg)?;
    let mask = s.interior_mask();
    let meta = json!({
        "shift": spec,
        "interior": s.interior,
        "interior_mask": {"eh": mask.eh, "e2h": mask.e2h},
    });
    write(&a.out, &rep_to_json(&s.rep, meta))?;
    Ok(EXIT_OK)
}

fn metadata_mask(meta: &Value) -> Option<InteriorMask> {
    let m = meta.get("interior_mask")?;
    let eh = serde_json::from_value(m.get("eh")?.clone()).ok()?;
    let e2h = serde_json::from_value(m.get("e2h")?.clone()).ok()?;
    Some(InteriorMask { eh, e2h })
}

fn metadata_spec(meta: &Value) -> Option<WeightedShiftSpec> {
    serde_json::from_value(meta.get("shift")?.clone()).ok()
}

/// Closed-form oracles for shifts generated by `gen shift`.
fn shift_oracles(rep: &CovariantRep, spec: &WeightedShiftSpec, cfg: &Config) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    if spec.weights.iter().flatten().all(|&w| w == 0.0) {
        return Ok(report);
    }
    let s = build_shift(spec, cfg)?;
    let t = 10.0 * cfg.tol * (1.0 + rep.scale());
    if s.rep.v_tilde().dist(rep.v_tilde()) > t {
        report.push(Check::not_applicable(
            "shift-closed-forms",
            "Ex.shift",
            crate::report::CheckKind::Identity,
            "matrix differs from the recorded shift spec",
        ));
        return Ok(report);
    }
    let cols = s.interior_columns();
    let dual = cauchy_dual(rep, cfg)?;
    let closed = shift_dual_closed_form(spec)?;
    let defect = dual.v_tilde().select_columns(&cols).dist(&closed.select_columns(&cols));
    report.push(Check::identity("shift-dual=closed-form[interior]", "Ex.shift", defect, t));
    let dag = mp_inverse(rep, cfg)?;
    let defect = dag.dist(&shift_dagger_closed_form(spec)?);
    report.push(Check::identity("shift-dagger=closed-form", "Ex.shift", defect, t));
    Ok(report)
}

/// The selected certifier batteries.
pub fn run_batteries(
    rep: &CovariantRep,
    battery: &str,
    mask: Option<&InteriorMask>,
    shift: Option<&WeightedShiftSpec>,
    cfg: &Config,
) -> Result<CheckReport> {
    let all = battery == "all";
    let mut report = CheckReport::new();
    report.timed(|r| r.extend(check_covariance(rep, cfg.tol)));
    if all || battery == "duality" {
        report.timed(|r| -> Result<()> {
            r.extend(dual_identity_suite(rep, None, cfg)?.report);
            r.push(dj1_check(rep, cfg)?);
            let hd = is_hyper_dagger(rep, cfg.k_max, cfg)?;
            let worst = hd.levels.iter().map(|l| l.residual).fold(0.0, f64::max);
            r.push(
                Check::property("hyper-dagger", "Def.n-dagger", hd.holds, worst, cfg.subspace_tol())
                    .with_detail(format!("k <= {}{}", hd.checked_up_to, if hd.cap_hit { ", cap hit" } else { "" })),
            );
            if let Some(spec) = shift {
                r.extend(shift_oracles(rep, spec, cfg)?);
            }
            Ok(())
        })?;
    }
    if all || battery == "structure" {
        report.timed(|r| -> Result<()> {
            r.extend(is_regular(rep, cfg)?.report);
            r.extend(wold_report(rep, cfg)?.report);
            r.extend(wold_failure_witnesses(rep, cfg)?);
            r.extend(projection_sequence(rep, cfg)?.1);
            r.extend(dagger_power_on_range(rep, cfg.k_max, cfg)?);
            Ok(())
        })?;
    }
    if all || battery == "properties" {
        report.timed(|r| -> Result<()> {
            r.extend(theorem_suite(rep, mask, cfg)?);
            Ok(())
        })?;
    }
    Ok(report)
}

fn cmd_check(a: CheckArgs) -> Result<i32> {
    let cfg = config(a.tolerance, a.max_power)?;
    let bytes = read(&a.input)?;
    let (rep, rj) = load_rep(&bytes)?;
    let mask = if a.interior_only {
        Some(metadata_mask(&rj.metadata).ok_or_else(|| {
            CovrepError::InvalidInput("--interior-only needs an input written by `gen shift`".into())
        })?)
    } else {
        None
    };
    let spec = metadata_spec(&rj.metadata);
    let battery = match a.battery {
        Battery::All => "all",
        Battery::Duality => "duality",
        Battery::Structure => "structure",
        Battery::Properties => "properties",
    };
    let report = run_batteries(&rep, battery, mask.as_ref(), spec.as_ref(), &cfg)?;
    let text = match a.format {
        Format::Json => ReportJson::new(&report, &bytes, cfg.tol).to_json(),
        Format::Text => {
            let c = report.counts();
            format!(
                "{}pass {}  fail {}  falsifications {}  hypothesis-failed {}  n/a {}\n",
                report.to_text(),
                c.pass,
                c.fail,
                c.falsifications,
                c.hypothesis_failed,
                c.not_applicable
            )
        }
    };
    emit(a.report.as_deref(), &text)?;
    Ok(if report.has_falsification() { EXIT_FALSIFIED } else { EXIT_OK })
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_fuzz(a: FuzzArgs) -> Result<i32> {
    let cfg = config(a.tolerance, None)?;
    let (h, n) = parse_dims(&a.dims)?;
    let mut spec = FuzzSpec::new(a.trials, a.seed);
    spec.max_h = h.unwrap_or(spec.max_h);
    spec.max_n = n.unwrap_or(spec.max_n);
    spec.kinds = a.kinds;
    let out = run_fuzz(&spec, a.jobs, &cfg)?;
    let counts = out.counts();
    let mut fixtures = Vec::new();
    if let Some(report_path) = &a.report {
        let stem = report_path.file_stem().and_then(|s| s.to_str()).unwrap_or("fuzz");
        let dir = report_path.parent().unwrap_or(Path::new("."));
        for t in out.failing_trials() {
            let p = dir.join(format!("{stem}.fail-{}.json", t.trial));
            let meta = json!({"seed": spec.seed, "trial": t.trial, "kind": t.kind});
            write(&p, &rep_to_json(&t.rep, meta))?;
            fixtures.push(p.display().to_string());
        }
    }
    let kinds: Vec<String> = out.trials.iter().map(|t| t.kind.to_string()).collect();
    let summary = json!({
        "trials": spec.trials,
        "seed": spec.seed,
        "max_h": spec.max_h,
        "max_n": spec.max_n,
        "kinds": kinds,
        "falsifying_trials": out.failing_trials().map(|t| t.trial).collect::<Vec<_>>(),
        "n_dagger_findings": out.n_dagger_findings(),
        "fixtures": fixtures,
    });
    let line = format!(
        "trials {}  pass {}  hypothesis-failed {}  informational-fail {}  FAIL {}  n-dagger findings {}\n",
        spec.trials,
        counts.pass,
        counts.hypothesis_failed,
        counts.fail - counts.falsifications,
        counts.falsifications,
        out.n_dagger_findings()
    );
    match &a.report {
        Some(p) => {
            let flat = out.flattened();
            let mut rj = ReportJson::new(&flat, spec_digest_input(&spec).as_bytes(), cfg.tol);
            rj.extra = summary;
            write(p, &rj.to_json())?;
            eprint!("{line}");
        }
        None => print!("{line}"),
    }
    Ok(if counts.falsifications > 0 { EXIT_FALSIFIED } else { EXIT_OK })
}

/// Fuzz reports digest the run parameters in place of an input file.
fn spec_digest_input(spec: &FuzzSpec) -> String {
    serde_json::to_string(spec).expect("serializable")
}

fn cmd_dual(a: IoArgs) -> Result<i32> {
    let cfg = config(a.tolerance, None)?;
    let (rep, _) = load_rep(&read(&a.input)?)?;
    let dual = cauchy_dual(&rep, &cfg)?;
    write(&a.out, &rep_to_json(&dual, json!({"derived": "cauchy-dual"})))?;
    Ok(EXIT_OK)
}

fn cmd_pinv(a: IoArgs) -> Result<i32> {
    let cfg = config(a.tolerance, None)?;
    let (rep, _) = load_rep(&read(&a.input)?)?;
    write(&a.out, &matrix_to_json(&mp_inverse(&rep, &cfg)?))?;
    Ok(EXIT_OK)
}

fn subspace_json(s: &Subspace) -> Value {
    json!({"dim": s.dim(), "basis": MatrixJson::from_matrix(s.basis())})
}

fn cmd_wold(a: IoArgs) -> Result<i32> {
    let cfg = config(a.tolerance, None)?;
    let (rep, _) = load_rep(&read(&a.input)?)?;
    let w = wold_report(&rep, &cfg)?;
    let regular = is_regular(&rep, &cfg)?.regular;
    let out = json!({
        "dim_h": rep.dim_h(),
        "wandering": subspace_json(&w.wandering),
        "brackets": subspace_json(&w.brackets),
        "generalized_range": subspace_json(&w.gen_range),
        "generalized_range_dual": subspace_json(&w.gen_range_dual),
        "bracket_growth": w.growth,
        "saturated_at": w.stabilized_at,
        "regular": regular,
        "bi_regular": w.bi_regular,
        "extended_wold": w.extended_wold,
        "falsifications": w.report.falsifications().count(),
    });
    write(&a.out, &serde_json::to_string_pretty(&out).expect("serializable"))?;
    Ok(if w.report.has_falsification() { EXIT_FALSIFIED } else { EXIT_OK })
}

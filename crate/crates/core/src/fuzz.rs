//! Seeded batch fuzzing of the implication suites.
//!
//! Trial `t` draws from stream `t` of the master seed, so results do not
//! depend on the worker count; outcomes are collected in trial order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::duality::{dj1_check, dual_identity_suite, is_n_dagger};
use crate::error::{CovrepError, Result};
use crate::properties::theorem_suite;
use crate::random::{random_rep_with, rng_for, RepKind};
use crate::rep::CovariantRep;
use crate::report::{Check, CheckKind, CheckReport, Verdict, VerdictCounts};
use crate::structure::{is_regular, projection_sequence, wold_failure_witnesses, wold_report};

use rand::Rng;

/// Kinds cycled through when none are requested. Concave shifts appear twice
/// so that a third of the corpus exercises the concavity theorems.
pub const DEFAULT_SCHEDULE: [RepKind; 6] = [
    RepKind::Dense,
    RepKind::ConcaveShift,
    RepKind::RankDeficient,
    RepKind::LeftInvertible,
    RepKind::ConcaveShift,
    RepKind::PartialIsometry,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSpec {
    pub trials: usize,
    pub seed: u64,
    pub max_h: usize,
    pub max_n: usize,
    /// Empty means [`DEFAULT_SCHEDULE`].
    pub kinds: Vec<RepKind>,
}

impl FuzzSpec {
    pub fn new(trials: usize, seed: u64) -> Self {
        FuzzSpec {
            trials,
            seed,
            max_h: 4,
            max_n: 3,
            kinds: Vec::new(),
        }
    }

    fn kind_for(&self, trial: usize) -> RepKind {
        if self.kinds.is_empty() {
            DEFAULT_SCHEDULE[trial % DEFAULT_SCHEDULE.len()]
        } else {
            self.kinds[trial % self.kinds.len()]
        }
    }
}

/// Parse `"h<=4,n<=3"`; either bound may be omitted.
pub fn parse_dims(s: &str) -> Result<(Option<usize>, Option<usize>)> {
    let mut h = None;
    let mut n = None;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, val) = part
            .split_once("<=")
            .ok_or_else(|| CovrepError::InvalidInput(format!("bad dims clause {part:?}; expected e.g. h<=4")))?;
        let v: usize = val
            .trim()
            .parse()
            .map_err(|_| CovrepError::InvalidInput(format!("bad bound in {part:?}")))?;
        if v == 0 {
            return Err(CovrepError::InvalidInput(format!("bound in {part:?} must be >= 1")));
        }
        match key.trim() {
            "h" => h = Some(v),
            "n" => n = Some(v),
            other => return Err(CovrepError::InvalidInput(format!("unknown dimension {other:?}"))),
        }
    }
    Ok((h, n))
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub trial: usize,
    pub kind: RepKind,
    pub rep: CovariantRep,
    pub report: CheckReport,
}

impl TrialOutcome {
    pub fn has_falsification(&self) -> bool {
        self.report.has_falsification()
    }
}

#[derive(Debug, Clone)]
pub struct FuzzOutcome {
    pub spec: FuzzSpec,
    pub trials: Vec<TrialOutcome>,
}

impl FuzzOutcome {
    pub fn counts(&self) -> VerdictCounts {
        let mut c = VerdictCounts::default();
        for t in &self.trials {
            let k = t.report.counts();
            c.pass += k.pass;
            c.fail += k.fail;
            c.falsifications += k.falsifications;
            c.hypothesis_failed += k.hypothesis_failed;
            c.not_applicable += k.not_applicable;
        }
        c
    }

    pub fn failing_trials(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.trials.iter().filter(|t| t.has_falsification())
    }

    /// Trials on which `Ṽ₂† ≠ Ṽ^{†(2)}`.
    pub fn n_dagger_findings(&self) -> usize {
        self.trials
            .iter()
            .filter(|t| t.report.get("n-dagger(2)").is_some_and(|c| c.verdict == Verdict::Fail))
            .count()
    }

    /// Every check, each name prefixed with its trial index.
    pub fn flattened(&self) -> CheckReport {
        let mut out = CheckReport::new();
        for t in &self.trials {
            for c in &t.report.checks {
                let mut c = c.clone();
                c.name = format!("trial{}:{}", t.trial, c.name);
                out.push(c);
            }
        }
        out
    }
}

/// Draw the representation for trial `trial`.
pub fn trial_rep(spec: &FuzzSpec, trial: usize, cfg: &Config) -> Result<(RepKind, CovariantRep)> {
    let kind = spec.kind_for(trial);
    let mut rng = rng_for(spec.seed, trial as u64);
    let h = rng.random_range(1..=spec.max_h.max(1));
    let n = if kind == RepKind::LeftInvertible {
        1
    } else {
        rng.random_range(1..=spec.max_n.max(1))
    };
    Ok((kind, random_rep_with(&mut rng, h, n, kind, cfg)?))
}

fn record(report: &mut CheckReport, suite: &str, r: Result<CheckReport>) -> Result<()> {
    match r {
        Ok(r) => report.extend(r),
        Err(CovrepError::SizeCap { what, needed, cap }) => report.push(Check::not_applicable(
            suite,
            "plumbing",
            CheckKind::Consistency,
            format!("size cap: {what} needs {needed} > {cap}"),
        )),
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Every implication suite on one representation.
pub fn trial_suite(rep: &CovariantRep, cfg: &Config) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    report.timed(|r| record(r, "theorem-suite", theorem_suite(rep, None, cfg)))?;
    report.timed(|r| record(r, "wold", wold_report(rep, cfg).map(|w| w.report)))?;
    report.timed(|r| record(r, "cc", is_regular(rep, cfg).map(|g| g.report)))?;
    report.timed(|r| record(r, "7way", wold_failure_witnesses(rep, cfg)))?;
    report.timed(|r| {
        record(
            r,
            "DJ1",
            dj1_check(rep, cfg).map(|c| {
                let mut one = CheckReport::new();
                one.push(c);
                one
            }),
        )
    })?;
    report.timed(|r| record(r, "duality", dual_identity_suite(rep, None, cfg).map(|d| d.report)))?;
    report.timed(|r| record(r, "projections", projection_sequence(rep, cfg).map(|p| p.1)))?;
    report.timed(|r| {
        record(
            r,
            "n-dagger(2)",
            is_n_dagger(rep, 2, cfg).map(|d| {
                let mut one = CheckReport::new();
                one.push(
                    Check::property("n-dagger(2)", "Def.n-dagger", d.holds, d.residual, d.tolerance)
                        .with_detail("informational: no theorem asserts this in general"),
                );
                one
            }),
        )
    })?;
    Ok(report)
}

fn run_trial(spec: &FuzzSpec, trial: usize, cfg: &Config) -> Result<TrialOutcome> {
    let (kind, rep) = trial_rep(spec, trial, cfg)?;
    let report = trial_suite(&rep, cfg)?;
    Ok(TrialOutcome {
        trial,
        kind,
        rep,
        report,
    })
}

/// Run all trials, on at most `jobs` threads (`None`: rayon's default).
pub fn run_fuzz(spec: &FuzzSpec, jobs: Option<usize>, cfg: &Config) -> Result<FuzzOutcome> {
    let work = || -> Result<Vec<TrialOutcome>> {
        (0..spec.trials).into_par_iter().map(|t| run_trial(spec, t, cfg)).collect()
    };
    let trials = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| CovrepError::InvalidInput(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    Ok(FuzzOutcome {
        spec: spec.clone(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_parse() {
        assert_eq!(parse_dims("h<=4,n<=3").unwrap(), (Some(4), Some(3)));
        assert_eq!(parse_dims(" n <= 2 ").unwrap(), (None, Some(2)));
        assert!(parse_dims("h<4").is_err());
        assert!(parse_dims("k<=2").is_err());
        assert!(parse_dims("h<=0").is_err());
    }

    #[test]
    fn deterministic_and_job_independent() {
        let cfg = Config::default();
        let spec = FuzzSpec::new(12, 5);
        let a = run_fuzz(&spec, Some(1), &cfg).unwrap();
        let b = run_fuzz(&spec, Some(3), &cfg).unwrap();
        assert_eq!(a.trials.len(), 12);
        for (x, y) in a.trials.iter().zip(&b.trials) {
            assert_eq!(x.rep.v_tilde(), y.rep.v_tilde());
            let names = |r: &CheckReport| r.checks.iter().map(|c| (c.name.clone(), c.verdict)).collect::<Vec<_>>();
            assert_eq!(names(&x.report), names(&y.report));
        }
        let bad: Vec<String> = a.flattened().falsifications().map(|c| format!("{} {} {}", c.name, c.margin, c.detail)).collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn empty_run() {
        let out = run_fuzz(&FuzzSpec::new(0, 1), None, &Config::default()).unwrap();
        assert!(out.trials.is_empty());
        assert_eq!(out.counts(), VerdictCounts::default());
    }
}

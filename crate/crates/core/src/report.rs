//! Verdicts, checks and reports shared by every certifier.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::linalg::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The statement is conditional and its hypothesis does not hold.
    HypothesisFailed,
    /// Not evaluated (size cap, or precondition outside the statement's scope).
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::HypothesisFailed => "hypothesis-failed",
            Verdict::NotApplicable => "n/a",
        };
        f.write_str(s)
    }
}

/// What a failing verdict means.
///
/// A `Property` failure describes the input (e.g. "not regular") and is
/// informational. Failures of the other kinds are falsifications: an
/// identity that must always hold, a theorem whose hypothesis holds but whose
/// conclusion does not, or two evaluations that must agree but do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Property,
    Theorem,
    Identity,
    Consistency,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Fixed identifier of the statement under test, or `"plumbing"`.
    pub anchor: String,
    pub kind: CheckKind,
    pub verdict: Verdict,
    /// Residual or signed margin; see `detail` for its meaning.
    pub margin: f64,
    pub tolerance: f64,
    pub witness: Option<Vec<C64>>,
    pub detail: String,
    pub elapsed_s: f64,
}

impl Check {
    fn base(name: &str, anchor: &str, kind: CheckKind, verdict: Verdict, margin: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            anchor: anchor.to_string(),
            kind,
            verdict,
            margin,
            tolerance,
            witness: None,
            detail: String::new(),
            elapsed_s: 0.0,
        }
    }

    /// Identity: passes iff `residual ≤ tolerance`.
    pub fn identity(name: &str, anchor: &str, residual: f64, tolerance: f64) -> Self {
        let v = if residual <= tolerance { Verdict::Pass } else { Verdict::Fail };
        Check::base(name, anchor, CheckKind::Identity, v, residual, tolerance)
    }

    /// Identity guarded by a hypothesis.
    pub fn conditional_identity(name: &str, anchor: &str, hypothesis: bool, residual: f64, tolerance: f64) -> Self {
        let mut c = Check::identity(name, anchor, residual, tolerance);
        if !hypothesis {
            c.verdict = Verdict::HypothesisFailed;
        }
        c
    }

    /// Descriptive property of the input.
    pub fn property(name: &str, anchor: &str, holds: bool, margin: f64, tolerance: f64) -> Self {
        let v = if holds { Verdict::Pass } else { Verdict::Fail };
        Check::base(name, anchor, CheckKind::Property, v, margin, tolerance)
    }

    /// Conditional statement: hypothesis-failed / pass / FAIL.
    pub fn theorem(name: &str, anchor: &str, hypothesis: bool, conclusion: bool, margin: f64, tolerance: f64) -> Self {
        let v = match (hypothesis, conclusion) {
            (false, _) => Verdict::HypothesisFailed,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        };
        Check::base(name, anchor, CheckKind::Theorem, v, margin, tolerance)
    }

    /// Two or more evaluations that must agree.
    pub fn consistency(name: &str, anchor: &str, applicable: bool, agree: bool) -> Self {
        let v = match (applicable, agree) {
            (false, _) => Verdict::HypothesisFailed,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        };
        Check::base(name, anchor, CheckKind::Consistency, v, if agree { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn not_applicable(name: &str, anchor: &str, kind: CheckKind, why: impl Into<String>) -> Self {
        let mut c = Check::base(name, anchor, kind, Verdict::NotApplicable, 0.0, 0.0);
        c.detail = why.into();
        c
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn with_witness(mut self, witness: Option<Vec<C64>>) -> Self {
        self.witness = witness;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// True for falsifications (see [`CheckKind`]).
    pub fn is_falsification(&self) -> bool {
        self.verdict == Verdict::Fail && self.kind != CheckKind::Property
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictCounts {
    pub pass: usize,
    pub fail: usize,
    pub falsifications: usize,
    pub hypothesis_failed: usize,
    pub not_applicable: usize,
}

impl CheckReport {
    pub fn new() -> Self {
        CheckReport::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    /// Run `f`, stamping the elapsed time on every check it appends.
    pub fn timed<T>(&mut self, f: impl FnOnce(&mut CheckReport) -> T) -> T {
        let start_len = self.checks.len();
        let t0 = Instant::now();
        let out = f(self);
        let dt = t0.elapsed();
        let added = self.checks.len() - start_len;
        if added > 0 {
            let each = dt.as_secs_f64() / added as f64;
            for c in &mut self.checks[start_len..] {
                if c.elapsed_s == 0.0 {
                    c.elapsed_s = each;
                }
            }
        }
        out
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.get(name).map(|c| c.verdict)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.verdict(name) == Some(Verdict::Pass)
    }

    pub fn has_falsification(&self) -> bool {
        self.checks.iter().any(Check::is_falsification)
    }

    pub fn falsifications(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.is_falsification())
    }

    pub fn counts(&self) -> VerdictCounts {
        let mut c = VerdictCounts::default();
        for ch in &self.checks {
            match ch.verdict {
                Verdict::Pass => c.pass += 1,
                Verdict::Fail => c.fail += 1,
                Verdict::HypothesisFailed => c.hypothesis_failed += 1,
                Verdict::NotApplicable => c.not_applicable += 1,
            }
            if ch.is_falsification() {
                c.falsifications += 1;
            }
        }
        c
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<18} {:<44} {:<12} margin={:+.3e} tol={:.1e}",
                c.verdict.to_string(),
                c.name,
                c.anchor,
                c.margin,
                c.tolerance
            ));
            if !c.detail.is_empty() {
                out.push_str("  ");
                out.push_str(&c.detail);
            }
            out.push('\n');
        }
        out
    }
}

/// Which side of the margin is the safe one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginSense {
    /// Quantity must be `≥ −tol` (smallest eigenvalue of a form that must be PSD).
    LowerBound,
    /// Quantity must be `≤ tol` (largest eigenvalue of a form that must be NSD).
    UpperBound,
}

/// Outcome of a quadratic-form certifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub name: String,
    pub verdict: Verdict,
    pub margin: f64,
    pub sense: MarginSense,
    pub tolerance: f64,
    /// Extremal vector in the ambient tensor space, present iff failing.
    pub witness: Option<Vec<C64>>,
    /// Dimension of the domain the form was restricted to.
    pub domain_dim: usize,
}

impl PropertyVerdict {
    pub fn from_margin(name: &str, margin: f64, sense: MarginSense, tolerance: f64, witness: Vec<C64>, domain_dim: usize) -> Self {
        let holds = match sense {
            MarginSense::LowerBound => margin >= -tolerance,
            MarginSense::UpperBound => margin <= tolerance,
        };
        PropertyVerdict {
            name: name.to_string(),
            verdict: if holds { Verdict::Pass } else { Verdict::Fail },
            margin,
            sense,
            tolerance,
            witness: if holds { None } else { Some(witness) },
            domain_dim,
        }
    }

    /// Vacuous pass on a zero-dimensional domain.
    pub fn vacuous(name: &str, sense: MarginSense, tolerance: f64) -> Self {
        PropertyVerdict {
            name: name.to_string(),
            verdict: Verdict::Pass,
            margin: 0.0,
            sense,
            tolerance,
            witness: None,
            domain_dim: 0,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_check(&self, anchor: &str) -> Check {
        let sense = match self.sense {
            MarginSense::LowerBound => "min eigenvalue, pass iff >= -tol",
            MarginSense::UpperBound => "max eigenvalue, pass iff <= tol",
        };
        Check::property(&self.name, anchor, self.holds(), self.margin, self.tolerance)
            .with_witness(self.witness.clone())
            .with_detail(format!("{sense}; domain dim {}", self.domain_dim))
    }
}

//! Finite windows of weighted shifts `V_i e_m = w_{i,m} e_{nm+i}`.
//!
//! Targets leaving the window are dropped (the column becomes zero) and the
//! source index is excluded from the interior, where the finite matrix agrees
//! with the infinite shift.

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{CovrepError, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::properties::InteriorMask;
use crate::rep::{make_rep, CovariantRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftKind {
    Unilateral,
    Bilateral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedShiftSpec {
    pub kind: ShiftKind,
    pub n: usize,
    /// Inclusive index window `[a, b]`.
    pub window: (i64, i64),
    /// `weights[i − 1][m − a]`.
    pub weights: Vec<Vec<f64>>,
}

impl WeightedShiftSpec {
    pub fn new(kind: ShiftKind, n: usize, window: (i64, i64), weights: Vec<Vec<f64>>) -> Result<Self> {
        let spec = WeightedShiftSpec {
            kind,
            n,
            window,
            weights,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.window;
        if self.n == 0 {
            return Err(CovrepError::InvalidInput("shift n must be >= 1".into()));
        }
        if a > b {
            return Err(CovrepError::InvalidInput(format!("empty window {a}..{b}")));
        }
        if self.kind == ShiftKind::Unilateral && a < 0 {
            return Err(CovrepError::InvalidInput("unilateral window must start at m >= 0".into()));
        }
        if self.weights.len() != self.n || self.weights.iter().any(|row| row.len() != self.len()) {
            return Err(CovrepError::InvalidInput(format!(
                "weights must be {} rows of {} entries",
                self.n,
                self.len()
            )));
        }
        if self.weights.iter().flatten().any(|w| !w.is_finite()) {
            return Err(CovrepError::InvalidInput("weights must be finite".into()));
        }
        Ok(())
    }

    /// Weight `w ≡ c` on the window.
    pub fn constant(kind: ShiftKind, n: usize, window: (i64, i64), c: f64) -> Result<Self> {
        let len = window_len(window)?;
        Self::new(kind, n, window, vec![vec![c; len]; n])
    }

    pub fn unit(kind: ShiftKind, n: usize, window: (i64, i64)) -> Result<Self> {
        Self::constant(kind, n, window, 1.0)
    }

    /// `w_{i,m} = √((m+2)/(m+1))`, defined for `m ≥ 0`.
    pub fn dirichlet(kind: ShiftKind, n: usize, window: (i64, i64)) -> Result<Self> {
        if window.0 < 0 {
            return Err(CovrepError::InvalidInput("Dirichlet weights need m >= 0".into()));
        }
        let row: Vec<f64> = (window.0..=window.1).map(|m| ((m + 2) as f64 / (m + 1) as f64).sqrt()).collect();
        Self::new(kind, n, window, vec![row; n])
    }

    pub fn len(&self) -> usize {
        (self.window.1 - self.window.0 + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: i64) -> bool {
        (self.window.0..=self.window.1).contains(&m)
    }

    /// `w_{i,m}` for `i ∈ 1..=n`.
    pub fn weight(&self, i: usize, m: i64) -> f64 {
        self.weights[i - 1][(m - self.window.0) as usize]
    }

    pub fn target(&self, i: usize, m: i64) -> i64 {
        self.n as i64 * m + i as i64
    }

    /// Indices whose images under every `V_i` stay in the window.
    pub fn interior(&self) -> Vec<i64> {
        (self.window.0..=self.window.1)
            .filter(|&m| (1..=self.n).all(|i| self.contains(self.target(i, m))))
            .collect()
    }

    /// Indices whose images stay interior, so second powers are exact.
    pub fn interior2(&self) -> Vec<i64> {
        let first = self.interior();
        first
            .iter()
            .copied()
            .filter(|&m| (1..=self.n).all(|i| first.contains(&self.target(i, m))))
            .collect()
    }

    /// Coordinate of `δ_i ⊗ e_m` in `E ⊗ H`.
    pub fn column(&self, i: usize, m: i64) -> usize {
        (i - 1) * self.len() + (m - self.window.0) as usize
    }

    /// Coordinate of `e_m` in `H`.
    pub fn coord(&self, m: i64) -> usize {
        (m - self.window.0) as usize
    }
}

fn window_len(window: (i64, i64)) -> Result<usize> {
    if window.0 > window.1 {
        return Err(CovrepError::InvalidInput(format!("empty window {}..{}", window.0, window.1)));
    }
    Ok((window.1 - window.0 + 1) as usize)
}

/// Copy with `w_{i,m0} = 0` for every `i`.
pub fn zero_at(spec: &WeightedShiftSpec, m0: i64) -> Result<WeightedShiftSpec> {
    if !spec.contains(m0) {
        return Err(CovrepError::InvalidInput(format!(
            "m0 = {m0} outside window {}..{}",
            spec.window.0, spec.window.1
        )));
    }
    let mut out = spec.clone();
    let c = spec.coord(m0);
    for row in &mut out.weights {
        row[c] = 0.0;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ShiftRealization {
    pub rep: CovariantRep,
    pub spec: WeightedShiftSpec,
    /// Basis label `m` of each coordinate of `H`.
    pub index_map: Vec<i64>,
    pub interior: Vec<i64>,
}

impl ShiftRealization {
    /// Columns `δ_i ⊗ e_m` of `E ⊗ H` with `m` interior.
    pub fn interior_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = (1..=self.spec.n)
            .flat_map(|i| self.interior.iter().map(move |&m| (i, m)))
            .map(|(i, m)| self.spec.column(i, m))
            .collect();
        cols.sort_unstable();
        cols
    }

    /// Coordinate restriction to interior indices at the first two tensor levels.
    pub fn interior_mask(&self) -> InteriorMask {
        let (n, h) = (self.spec.n, self.spec.len());
        let inner = self.spec.interior2();
        let mut e2h = Vec::new();
        for b in 0..n * n {
            for &m in &inner {
                e2h.push(b * h + self.spec.coord(m));
            }
        }
        e2h.sort_unstable();
        InteriorMask {
            eh: self.interior_columns(),
            e2h,
        }
    }
}

/// Realizes the spec as `Ṽ` with `σ(b) = b·I_H`.
pub fn build_shift(spec: &WeightedShiftSpec, cfg: &Config) -> Result<ShiftRealization> {
    spec.validate()?;
    let h = spec.len();
    let n = spec.n;
    cfg.check_dim("shift E (x) H", n.saturating_mul(h))?;
    let mut v = ComplexMatrix::zeros(h, n * h);
    for i in 1..=n {
        for m in spec.window.0..=spec.window.1 {
            let t = spec.target(i, m);
            if spec.contains(t) {
                v[(spec.coord(t), spec.column(i, m))] = C64::new(spec.weight(i, m), 0.0);
            }
        }
    }
    let sigma = vec![("1".to_string(), ComplexMatrix::identity(h))];
    let phi = vec![("1".to_string(), ComplexMatrix::identity(n))];
    let rep = make_rep(h, n, v, Some(sigma), Some(phi))?;
    Ok(ShiftRealization {
        rep,
        spec: spec.clone(),
        index_map: (spec.window.0..=spec.window.1).collect(),
        interior: spec.interior(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dd1Entry {
    pub i: usize,
    pub m: i64,
    pub w: f64,
    pub w_next: f64,
    /// `w²·w_next² − 2w² + 1`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dd1Scan {
    pub entries: Vec<Dd1Entry>,
    /// Largest margin over nonzero-weight positions.
    pub max_margin: f64,
}

impl Dd1Scan {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_margin <= tol
    }
}

/// Per-pair concavity inequality `w_{i,m}² w_{i,nm+i}² − 2w_{i,m}² + 1 ≤ 0`
/// over pairs inside the window; zero-weight positions are skipped.
pub fn dd1_scan(spec: &WeightedShiftSpec) -> Result<Dd1Scan> {
    spec.validate()?;
    let mut entries = Vec::new();
    for i in 1..=spec.n {
        for m in spec.window.0..=spec.window.1 {
            let t = spec.target(i, m);
            let w = spec.weight(i, m);
            if !spec.contains(t) || w == 0.0 {
                continue;
            }
            let w_next = spec.weight(i, t);
            entries.push(Dd1Entry {
                i,
                m,
                w,
                w_next,
                margin: w * w * w_next * w_next - 2.0 * w * w + 1.0,
            });
        }
    }
    let max_margin = entries.iter().map(|e| e.margin).fold(f64::NEG_INFINITY, f64::max);
    Ok(Dd1Scan { entries, max_margin })
}

fn require_nondegenerate(spec: &WeightedShiftSpec) -> Result<()> {
    spec.validate()?;
    if spec.weights.iter().flatten().all(|&w| w == 0.0) {
        return Err(CovrepError::InvalidInput("all weights are zero".into()));
    }
    Ok(())
}

/// `V_i′e_m = (1/w_{i,m}) e_{nm+i}` at nonzero weights with in-window target,
/// zero elsewhere.
pub fn shift_dual_closed_form(spec: &WeightedShiftSpec) -> Result<ComplexMatrix> {
    require_nondegenerate(spec)?;
    let h = spec.len();
    let mut out = ComplexMatrix::zeros(h, spec.n * h);
    for i in 1..=spec.n {
        for m in spec.window.0..=spec.window.1 {
            let (t, w) = (spec.target(i, m), spec.weight(i, m));
            if w != 0.0 && spec.contains(t) {
                out[(spec.coord(t), spec.column(i, m))] = C64::new(1.0 / w, 0.0);
            }
        }
    }
    Ok(out)
}

/// `Ṽ†e_{nm+i} = (1/w_{i,m}) δ_i ⊗ e_m`, zero on basis vectors outside the range.
pub fn shift_dagger_closed_form(spec: &WeightedShiftSpec) -> Result<ComplexMatrix> {
    require_nondegenerate(spec)?;
    let h = spec.len();
    let mut out = ComplexMatrix::zeros(spec.n * h, h);
    for i in 1..=spec.n {
        for m in spec.window.0..=spec.window.1 {
            let (t, w) = (spec.target(i, m), spec.weight(i, m));
            if w != 0.0 && spec.contains(t) {
                out[(spec.column(i, m), spec.coord(t))] = C64::new(1.0 / w, 0.0);
            }
        }
    }
    Ok(out)
}

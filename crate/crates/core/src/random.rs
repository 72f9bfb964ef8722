//! Seeded random representations for property tests and fuzzing.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{CovrepError, Result};
use crate::linalg::{svd_thin, ComplexMatrix, C64};
use crate::rep::CovariantRep;
use crate::shift::{build_shift, ShiftKind, WeightedShiftSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepKind {
    Dense,
    RankDeficient,
    LeftInvertible,
    PartialIsometry,
    ConcaveShift,
}

impl RepKind {
    pub const ALL: [RepKind; 5] = [
        RepKind::Dense,
        RepKind::RankDeficient,
        RepKind::LeftInvertible,
        RepKind::PartialIsometry,
        RepKind::ConcaveShift,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RepKind::Dense => "dense",
            RepKind::RankDeficient => "rank-deficient",
            RepKind::LeftInvertible => "left-invertible",
            RepKind::PartialIsometry => "partial-isometry",
            RepKind::ConcaveShift => "concave-shift",
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RepKind {
    type Err = CovrepError;

    fn from_str(s: &str) -> Result<Self> {
        RepKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| CovrepError::InvalidInput(format!("unknown kind {s:?}")))
    }
}

/// Generator for stream `stream` of master seed `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("shape")
}

/// Unitary factor `UW*` of a Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, h: usize) -> Result<ComplexMatrix> {
    let f = svd_thin(&gaussian(rng, h, h))?;
    Ok(f.left.mul_unchecked(&f.right_adjoint))
}

pub fn random_rep(seed: u64, dim_h: usize, n: usize, kind: RepKind, cfg: &Config) -> Result<CovariantRep> {
    random_rep_with(&mut rng_for(seed, 0), dim_h, n, kind, cfg)
}

/// `left-invertible` requires `n = 1`; `rank-deficient` always has a
/// nontrivial kernel.
pub fn random_rep_with(
    rng: &mut impl Rng,
    dim_h: usize,
    n: usize,
    kind: RepKind,
    cfg: &Config,
) -> Result<CovariantRep> {
    if dim_h == 0 || n == 0 {
        return Err(CovrepError::InvalidInput("dim_h and n must be >= 1".into()));
    }
    cfg.check_dim("random rep E (x) H", n.saturating_mul(dim_h))?;
    let nh = n * dim_h;
    let v = match kind {
        RepKind::Dense => gaussian(rng, dim_h, nh),
        RepKind::RankDeficient => {
            let r_max = if n >= 2 { dim_h } else { dim_h - 1 };
            if r_max == 0 {
                ComplexMatrix::zeros(dim_h, nh)
            } else {
                let r = rng.random_range(1..=r_max);
                gaussian(rng, dim_h, r).mul_unchecked(&gaussian(rng, r, nh))
            }
        }
        RepKind::LeftInvertible => {
            if n != 1 {
                return Err(CovrepError::InvalidInput("left-invertible kind needs n = 1".into()));
            }
            let shift = ComplexMatrix::identity(dim_h).scale_real(2.0 * (dim_h as f64).sqrt());
            &gaussian(rng, dim_h, dim_h) + &shift
        }
        RepKind::PartialIsometry => {
            let f = svd_thin(&gaussian(rng, dim_h, nh))?;
            let r = rng.random_range(1..=dim_h);
            let idx: Vec<usize> = (0..r).collect();
            f.left.select_columns(&idx).mul_unchecked(&f.right_adjoint.select_rows(&idx))
        }
        RepKind::ConcaveShift => return concave_shift(rng, dim_h, n, cfg),
    };
    CovariantRep::new(dim_h, n, v)
}

/// Unilateral shift on `[0, dim_h − 1]` with weights drawn in increasing `m`.
/// Every `t ≥ 1` is `np + j` for exactly one earlier `(j, p)`, and concavity
/// couples `w_{j,p}` with all of `w_{1,t}, …, w_{n,t}`, so each weight at `t`
/// is drawn with `w² ∈ [1, 2 − 1/w_{j,p}²]`.
fn concave_shift(rng: &mut impl Rng, dim_h: usize, n: usize, cfg: &Config) -> Result<CovariantRep> {
    let mut weights = vec![vec![0.0; dim_h]; n];
    for t in 0..dim_h {
        let upper = if t == 0 {
            2.0
        } else {
            let (p, j) = ((t - 1) / n, (t - 1) % n);
            2.0 - 1.0 / (weights[j][p] * weights[j][p])
        };
        for row in weights.iter_mut() {
            let w2: f64 = 1.0 + rng.random::<f64>() * (upper - 1.0);
            row[t] = w2.sqrt();
        }
    }
    let spec = WeightedShiftSpec::new(ShiftKind::Unilateral, n, (0, dim_h as i64 - 1), weights)?;
    Ok(build_shift(&spec, cfg)?.rep)
}

//! JSON interchange: representations, matrices, weight files and reports.
//!
//! Every float is written as a C99 hex-float string (`"0x1.8p+1"`), which
//! round-trips bit-exactly, next to a decimal mirror for human readers.
//! Readers accept either a hex string or a plain JSON number.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CovrepError, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::rep::{make_rep, CovariantRep, Generators};
use crate::report::{Check, CheckKind, CheckReport, Verdict, VerdictCounts};
use crate::shift::{ShiftKind, WeightedShiftSpec};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// C99 `%a` rendering of `x`; non-finite values become `inf`, `-inf`, `nan`.
pub fn hexfloat(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let mant = bits & ((1u64 << 52) - 1);
    if exp == 0 && mant == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, e) = if exp == 0 { (0, -1022) } else { (1, exp - 1023) };
    let frac = format!("{mant:013x}");
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}0x{lead}p{e:+}")
    } else {
        format!("{sign}0x{lead}.{frac}p{e:+}")
    }
}

pub fn parse_hexfloat(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "+inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        "nan" => return Ok(f64::NAN),
        _ => {}
    }
    hexf_parse::parse_hexf64(s.trim(), false)
        .map_err(|e| CovrepError::InvalidInput(format!("bad hex float {s:?}: {e}")))
}

/// A float read from either a hex string or a JSON number.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Hex(String),
    Dec(f64),
}

impl Num {
    pub fn hex(x: f64) -> Self {
        Num::Hex(hexfloat(x))
    }

    pub fn value(&self) -> Result<f64> {
        match self {
            Num::Hex(s) => parse_hexfloat(s),
            Num::Dec(x) => Ok(*x),
        }
    }
}

/// Entry `[re, im]`.
pub type EntryJson = [Num; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<EntryJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decimal: Option<Vec<Vec<[f64; 2]>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let (r, c) = m.shape();
        let data = (0..r)
            .map(|i| (0..c).map(|j| [Num::hex(m[(i, j)].re), Num::hex(m[(i, j)].im)]).collect())
            .collect();
        let all_finite = m.is_finite();
        let decimal = all_finite.then(|| {
            (0..r)
                .map(|i| (0..c).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect()
        });
        MatrixJson {
            rows: r,
            cols: c,
            data,
            decimal,
        }
    }

    /// The hex `data` field is authoritative; `decimal` is ignored on read.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        read_entries(&self.data, self.rows, self.cols, "matrix")
    }
}

fn read_entries(rows: &[Vec<EntryJson>], r: usize, c: usize, what: &str) -> Result<ComplexMatrix> {
    if rows.len() != r {
        return Err(CovrepError::shape(what, format!("{r} rows"), rows.len()));
    }
    let mut data = Vec::with_capacity(r * c);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != c {
            return Err(CovrepError::shape(what, format!("{c} columns in row {i}"), row.len()));
        }
        for (j, [re, im]) in row.iter().enumerate() {
            let (re, im) = (re.value()?, im.value()?);
            if !re.is_finite() || !im.is_finite() {
                return Err(CovrepError::NonFinite { row: i, col: j });
            }
            data.push(C64::new(re, im));
        }
    }
    ComplexMatrix::new(r, c, data)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub label: String,
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepJson {
    pub dim_h: usize,
    pub n: usize,
    pub v_tilde: Vec<Vec<EntryJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_tilde_decimal: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_generators: Option<Vec<GeneratorJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_generators: Option<Vec<GeneratorJson>>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub metadata: Value,
}

fn gens_to_json(g: Option<&Generators>) -> Option<Vec<GeneratorJson>> {
    g.map(|gs| {
        gs.iter()
            .map(|(label, m)| GeneratorJson {
                label: label.clone(),
                matrix: MatrixJson::from_matrix(m),
            })
            .collect()
    })
}

fn gens_from_json(g: &Option<Vec<GeneratorJson>>) -> Result<Option<Generators>> {
    g.as_ref()
        .map(|gs| {
            gs.iter()
                .map(|gj| Ok((gj.label.clone(), gj.matrix.to_matrix()?)))
                .collect::<Result<Generators>>()
        })
        .transpose()
}

impl RepJson {
    pub fn from_rep(rep: &CovariantRep, metadata: Value) -> Self {
        let m = MatrixJson::from_matrix(rep.v_tilde());
        RepJson {
            dim_h: rep.dim_h(),
            n: rep.n(),
            v_tilde: m.data,
            v_tilde_decimal: m.decimal,
            sigma_generators: gens_to_json(rep.sigma_gens()),
            phi_generators: gens_to_json(rep.phi_gens()),
            metadata,
        }
    }

    pub fn to_rep(&self) -> Result<CovariantRep> {
        let cols = self
            .n
            .checked_mul(self.dim_h)
            .ok_or_else(|| CovrepError::InvalidInput("n·dim_h overflows".into()))?;
        let v = read_entries(&self.v_tilde, self.dim_h, cols, "v_tilde")?;
        make_rep(
            self.dim_h,
            self.n,
            v,
            gens_from_json(&self.sigma_generators)?,
            gens_from_json(&self.phi_generators)?,
        )
    }
}

pub fn rep_to_json(rep: &CovariantRep, metadata: Value) -> String {
    serde_json::to_string_pretty(&RepJson::from_rep(rep, metadata)).expect("serializable")
}

pub fn rep_from_json(text: &str) -> Result<CovariantRep> {
    let rj: RepJson =
        serde_json::from_str(text).map_err(|e| CovrepError::InvalidInput(format!("representation JSON: {e}")))?;
    rj.to_rep()
}

pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string_pretty(&MatrixJson::from_matrix(m)).expect("serializable")
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let mj: MatrixJson =
        serde_json::from_str(text).map_err(|e| CovrepError::InvalidInput(format!("matrix JSON: {e}")))?;
    mj.to_matrix()
}

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn real_weight(v: &Value) -> Result<f64> {
    let x = match v {
        Value::Number(x) => x.as_f64(),
        Value::String(s) => Some(parse_hexfloat(s)?),
        Value::Array(_) | Value::Object(_) => {
            return Err(CovrepError::InvalidInput(
                "weights must be real scalars (complex weights are not supported)".into(),
            ))
        }
        _ => None,
    };
    x.filter(|x| x.is_finite())
        .ok_or_else(|| CovrepError::InvalidInput(format!("bad weight {v}")))
}

/// Parse a weight file for an `n`-variable shift on `window`.
///
/// Accepted forms:
/// * `[{"i": 1, "m": -2, "w": 0.5}, …]` triplets, `i` 1-based, every `(i, m)`
///   in the window present exactly once;
/// * `[w_a, …, w_b]`, used for every `i`;
/// * `[[w_{1,a}, …], …, [w_{n,a}, …]]`;
/// * `{"weights": <either array form>}`, optionally with `"window": [a, b]`
///   which must match.
pub fn parse_weights(text: &str, n: usize, window: (i64, i64)) -> Result<Vec<Vec<f64>>> {
    let v: Value = serde_json::from_str(text).map_err(|e| CovrepError::InvalidInput(format!("weights JSON: {e}")))?;
    weights_from_value(&v, n, window)
}

fn weights_from_value(v: &Value, n: usize, window: (i64, i64)) -> Result<Vec<Vec<f64>>> {
    let (a, b) = window;
    if b < a {
        return Err(CovrepError::InvalidInput(format!("empty window {a}..{b}")));
    }
    let len = (b - a + 1) as usize;
    let bad = |msg: String| CovrepError::InvalidInput(msg);
    match v {
        Value::Object(obj) => {
            if let Some(w) = obj.get("window") {
                let pair: (i64, i64) = serde_json::from_value(w.clone())
                    .map_err(|e| bad(format!("weights window: {e}")))?;
                if pair != window {
                    return Err(bad(format!("weights file window {pair:?} does not match {window:?}")));
                }
            }
            let inner = obj.get("weights").ok_or_else(|| bad("weights object lacks \"weights\"".into()))?;
            weights_from_value(inner, n, window)
        }
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            let mut out = vec![vec![None; len]; n];
            for item in items {
                let i = item.get("i").and_then(Value::as_i64).ok_or_else(|| bad(format!("triplet {item} lacks integer i")))?;
                let m = item.get("m").and_then(Value::as_i64).ok_or_else(|| bad(format!("triplet {item} lacks integer m")))?;
                let w = real_weight(item.get("w").ok_or_else(|| bad(format!("triplet {item} lacks w")))?)?;
                if i < 1 || i as usize > n {
                    return Err(bad(format!("triplet index i={i} outside 1..={n}")));
                }
                if m < a || m > b {
                    return Err(bad(format!("triplet index m={m} outside {a}..={b}")));
                }
                let slot = &mut out[i as usize - 1][(m - a) as usize];
                if slot.is_some() {
                    return Err(bad(format!("duplicate weight for (i={i}, m={m})")));
                }
                *slot = Some(w);
            }
            out.into_iter()
                .enumerate()
                .map(|(i, row)| {
                    row.into_iter()
                        .enumerate()
                        .map(|(k, w)| w.ok_or_else(|| bad(format!("missing weight for (i={}, m={})", i + 1, a + k as i64))))
                        .collect()
                })
                .collect()
        }
        Value::Array(items) if items.iter().all(Value::is_array) && !items.is_empty() => {
            if items.len() != n {
                return Err(bad(format!("{} weight rows for n = {n}", items.len())));
            }
            items.iter().map(|row| flat_row(row, len)).collect()
        }
        Value::Array(_) => {
            let row = flat_row(v, len)?;
            Ok(vec![row; n])
        }
        _ => Err(bad("unrecognised weights JSON".into())),
    }
}

fn flat_row(v: &Value, len: usize) -> Result<Vec<f64>> {
    let items = v.as_array().expect("array");
    if items.len() != len {
        return Err(CovrepError::InvalidInput(format!("{} weights for a window of {len} indices", items.len())));
    }
    items.iter().map(real_weight).collect()
}

pub fn spec_to_json(spec: &WeightedShiftSpec) -> String {
    let triplets: Vec<Value> = (1..=spec.n)
        .flat_map(|i| {
            (spec.window.0..=spec.window.1)
                .map(move |m| serde_json::json!({"i": i, "m": m, "w": spec.weight(i, m)}))
        })
        .collect();
    let kind = match spec.kind {
        ShiftKind::Unilateral => "unilateral",
        ShiftKind::Bilateral => "bilateral",
    };
    serde_json::to_string_pretty(&serde_json::json!({
        "kind": kind,
        "n": spec.n,
        "window": [spec.window.0, spec.window.1],
        "weights": triplets,
    }))
    .expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub anchor: String,
    pub kind: CheckKind,
    pub verdict: Verdict,
    pub margin: String,
    pub margin_decimal: Option<f64>,
    pub tolerance: String,
    pub tolerance_decimal: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<EntryJson>>,
    pub detail: String,
    pub elapsed_s: f64,
}

impl CheckJson {
    pub fn from_check(c: &Check) -> Self {
        CheckJson {
            name: c.name.clone(),
            anchor: c.anchor.clone(),
            kind: c.kind,
            verdict: c.verdict,
            margin: hexfloat(c.margin),
            margin_decimal: c.margin.is_finite().then_some(c.margin),
            tolerance: hexfloat(c.tolerance),
            tolerance_decimal: c.tolerance,
            witness: c
                .witness
                .as_ref()
                .map(|w| w.iter().map(|z| [Num::hex(z.re), Num::hex(z.im)]).collect()),
            detail: c.detail.clone(),
            elapsed_s: c.elapsed_s,
        }
    }

    pub fn to_check(&self) -> Result<Check> {
        let witness = self
            .witness
            .as_ref()
            .map(|w| w.iter().map(|[re, im]| Ok(C64::new(re.value()?, im.value()?))).collect::<Result<Vec<_>>>())
            .transpose()?;
        Ok(Check {
            name: self.name.clone(),
            anchor: self.anchor.clone(),
            kind: self.kind,
            verdict: self.verdict,
            margin: parse_hexfloat(&self.margin)?,
            tolerance: parse_hexfloat(&self.tolerance)?,
            witness,
            detail: self.detail.clone(),
            elapsed_s: self.elapsed_s,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub tool_version: String,
    pub input_digest: String,
    pub tolerance: f64,
    pub counts: VerdictCounts,
    pub checks: Vec<CheckJson>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub extra: Value,
}

impl ReportJson {
    pub fn new(report: &CheckReport, input: &[u8], tolerance: f64) -> Self {
        ReportJson {
            tool_version: TOOL_VERSION.to_string(),
            input_digest: sha256_hex(input),
            tolerance,
            counts: report.counts(),
            checks: report.checks.iter().map(CheckJson::from_check).collect(),
            extra: Value::Null,
        }
    }

    pub fn to_report(&self) -> Result<CheckReport> {
        Ok(CheckReport {
            checks: self.checks.iter().map(CheckJson::to_check).collect::<Result<_>>()?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

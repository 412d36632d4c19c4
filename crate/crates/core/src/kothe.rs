//! Köthe matrices, truncated sequence vectors, the weighted-sup seminorms
//! `‖x‖_k = sup_j a_{j,k} |x_j|` and the matrix conditions (S) and (M).
//!
//! Indices `j` and levels `k` are 1-based throughout, matching the usual
//! notation for echelon spaces. Everything is evaluated at a finite index
//! truncation `J`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default index truncation.
pub const DEFAULT_TRUNCATION: usize = 200;
/// Default threshold for "the ratio tends to zero".
pub const DEFAULT_TOL: f64 = 1e-3;
/// Fraction of the index range used as the tail window.
pub const TAIL_FRACTION: f64 = 0.25;

/// Growth of the block factor in the (M)-but-not-(S) matrix.
const MNOTS_BLOCK_SLOPE: f64 = 1.0 / 20.0;

/// How the weights `a_{j,k}` are produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weights {
    /// `a_{j,k} = 1` for `j <= k`, else 0 (gives `C^N`).
    Cn,
    /// `a_{j,k} = j^k` (gives the space `s`).
    S,
    /// `a_{j,k} = 1` (gives the Banach space `c_0`).
    Constant,
    /// Pair-indexed matrix satisfying (M) but not (S), flattened to `N`
    /// along Cantor diagonals: `a_{(n,i),k} = (1 + n/20)^k i^{(k-n)+}`.
    MNotS,
    /// Explicit rows `table[j-1][k-1]`; levels past the last column repeat it.
    Table(Vec<Vec<f64>>),
}

/// A Köthe matrix `A = (a_{j,k})`, nonnegative and nondecreasing in `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KotheMatrix {
    pub name: String,
    pub weights: Weights,
    pub default_truncation: usize,
}

/// Inverse of the Cantor enumeration used by [`Weights::MNotS`]:
/// `1 -> (1,1), 2 -> (1,2), 3 -> (2,1), 4 -> (1,3), ...`.
pub fn pair_of_index(j: usize) -> (usize, usize) {
    assert!(j >= 1, "indices are 1-based");
    let mut d = 2usize;
    let mut start = 1usize;
    // diagonal d holds d-1 pairs
    while start + (d - 1) <= j {
        start += d - 1;
        d += 1;
    }
    let n = j - start + 1;
    (n, d - n)
}

impl KotheMatrix {
    pub fn new(name: impl Into<String>, weights: Weights) -> Self {
        Self { name: name.into(), weights, default_truncation: DEFAULT_TRUNCATION }
    }

    pub fn with_truncation(mut self, j: usize) -> Self {
        self.default_truncation = j;
        self
    }

    /// `ln a_{j,k}`; `-inf` for a zero weight.
    pub fn log_weight(&self, j: usize, k: usize) -> f64 {
        debug_assert!(j >= 1 && k >= 1);
        match &self.weights {
            Weights::Cn => {
                if j <= k {
                    0.0
                } else {
                    f64::NEG_INFINITY
                }
            }
            Weights::S => k as f64 * (j as f64).ln(),
            Weights::Constant => 0.0,
            Weights::MNotS => {
                let (n, i) = pair_of_index(j);
                let block = (1.0 + n as f64 * MNOTS_BLOCK_SLOPE).ln();
                let inner = k.saturating_sub(n) as f64 * (i as f64).ln();
                k as f64 * block + inner
            }
            Weights::Table(rows) => {
                let w = rows
                    .get(j - 1)
                    .and_then(|row| row.get(k - 1).or_else(|| row.last()))
                    .copied()
                    .unwrap_or(0.0);
                if w > 0.0 {
                    w.ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub fn weight(&self, j: usize, k: usize) -> f64 {
        match &self.weights {
            Weights::S => (j as f64).powi(k as i32),
            Weights::Table(rows) => rows
                .get(j - 1)
                .and_then(|row| row.get(k - 1).or_else(|| row.last()))
                .copied()
                .unwrap_or(0.0)
                .max(0.0),
            _ => self.log_weight(j, k).exp(),
        }
    }

    /// `a_{j,k} / a_{j,m}` with the convention `0/0 := 0`.
    pub fn ratio(&self, j: usize, k: usize, m: usize) -> f64 {
        let lk = self.log_weight(j, k);
        let lm = self.log_weight(j, m);
        if lk == f64::NEG_INFINITY {
            0.0
        } else if lm == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            (lk - lm).exp()
        }
    }

    /// Checks monotonicity in the level and eventual positivity up to
    /// `(j_max, k_max)`.
    pub fn validate(&self, j_max: usize, k_max: usize) -> Result<()> {
        for j in 1..=j_max {
            let mut positive = false;
            for k in 1..=k_max {
                let a = self.log_weight(j, k);
                if a.is_nan() {
                    return Err(Error::Invariant(format!("weight a_({j},{k}) is NaN")));
                }
                if k < k_max && a > self.log_weight(j, k + 1) + 1e-12 {
                    return Err(Error::Invariant(format!("weights decrease in level at j = {j}, k = {k}")));
                }
                positive |= a > f64::NEG_INFINITY;
            }
            if !positive {
                return Err(Error::Invariant(format!("row j = {j} has no positive weight up to level {k_max}")));
            }
        }
        Ok(())
    }
}

/// The named matrices shipped with the crate: `cn`, `s`, `constant`, `m-not-s`.
pub fn builtin_matrix(name: &str) -> Result<KotheMatrix> {
    let weights = match name {
        "cn" => Weights::Cn,
        "s" => Weights::S,
        "constant" => Weights::Constant,
        "m-not-s" => Weights::MNotS,
        _ => return Err(Error::Unknown { kind: "matrix", name: name.to_string() }),
    };
    Ok(KotheMatrix::new(name, weights))
}

pub const BUILTIN_MATRICES: [&str; 4] = ["s", "constant", "cn", "m-not-s"];

/// A sequence truncated at `J = entries.len()`; `entries[j-1]` holds `x_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeqVector {
    pub entries: Vec<Complex64>,
}

impl SeqVector {
    pub fn zeros(truncation: usize) -> Self {
        Self { entries: vec![Complex64::new(0.0, 0.0); truncation] }
    }

    /// The unit vector `e_{j0}`.
    pub fn basis(j0: usize, truncation: usize) -> Self {
        let mut v = Self::zeros(truncation.max(j0));
        v.entries[j0 - 1] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_fn(truncation: usize, f: impl Fn(usize) -> Complex64) -> Self {
        Self { entries: (1..=truncation).map(f).collect() }
    }

    pub fn from_real_fn(truncation: usize, f: impl Fn(usize) -> f64) -> Self {
        Self::from_fn(truncation, |j| Complex64::new(f(j), 0.0))
    }

    pub fn truncation(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, j: usize) -> Complex64 {
        self.entries.get(j - 1).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.norm() == 0.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { entries: self.entries.iter().map(|z| z * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation().max(other.truncation());
        Self::from_fn(n, |j| self.get(j) + other.get(j))
    }
}

/// `‖x‖_k = max_{j<=J} a_{j,k} |x_j|`.
pub fn seminorm_eval(a: &KotheMatrix, k: usize, x: &SeqVector) -> Result<f64> {
    let mut best = 0.0f64;
    let mut any_weight = false;
    for (idx, z) in x.entries.iter().enumerate() {
        let lw = a.log_weight(idx + 1, k);
        if lw == f64::NEG_INFINITY {
            continue;
        }
        any_weight = true;
        let r = z.norm();
        if r > 0.0 {
            let w = a.weight(idx + 1, k);
            let v = if w.is_finite() { w * r } else { (lw + r.ln()).exp() };
            best = best.max(v);
        }
    }
    if !any_weight && !x.is_zero() {
        return Err(Error::DegenerateSeminorm { level: k });
    }
    Ok(best)
}

/// Per-level outcome of the (S) checker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelVerdict {
    HoldsWith(usize),
    Fails,
}

impl LevelVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, LevelVerdict::HoldsWith(_))
    }
}

fn tail_start(truncation: usize) -> usize {
    let w = ((truncation as f64) * TAIL_FRACTION).ceil() as usize;
    truncation.saturating_sub(w.max(2)) + 1
}

/// Whether `a_{j,k}/a_{j,m}` is below `tol` and nonincreasing on the tail window.
pub fn tail_ratio_vanishes(a: &KotheMatrix, k: usize, m: usize, truncation: usize, tol: f64) -> bool {
    let start = tail_start(truncation);
    let ratios: Vec<f64> = (start..=truncation).map(|j| a.ratio(j, k, m)).collect();
    let below = ratios.iter().all(|&r| r < tol);
    let nonincreasing = ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300);
    below && nonincreasing
}

/// Condition (S) at truncation: for every `k <= k_max` the smallest
/// `m` in `k..=m_max` whose tail ratios vanish.
pub fn check_condition_s(a: &KotheMatrix, k_max: usize, m_max: usize, truncation: usize, tol: f64) -> Result<Vec<LevelVerdict>> {
    if k_max > m_max {
        return Err(Error::InvalidArgument(format!("k_max = {k_max} exceeds m_max = {m_max}")));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    Ok((1..=k_max)
        .map(|k| {
            (k..=m_max)
                .find(|&m| tail_ratio_vanishes(a, k, m, truncation, tol))
                .map_or(LevelVerdict::Fails, LevelVerdict::HoldsWith)
        })
        .collect())
}

/// An index subset, represented by a membership rule and clipped to `[1, J]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexSubset {
    All,
    /// `{start, start + step, ...}`
    Progression { start: usize, step: usize },
    Explicit(Vec<usize>),
}

impl IndexSubset {
    pub fn members(&self, truncation: usize) -> Vec<usize> {
        match self {
            IndexSubset::All => (1..=truncation).collect(),
            IndexSubset::Progression { start, step } => {
                (*start..=truncation).step_by((*step).max(1)).collect()
            }
            IndexSubset::Explicit(v) => v.iter().copied().filter(|&j| j >= 1 && j <= truncation).collect(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            IndexSubset::All => "all".into(),
            IndexSubset::Progression { start, step } => format!("{start}+{step}N"),
            IndexSubset::Explicit(v) => format!("explicit[{}]", v.len()),
        }
    }
}

/// Full index set, evens/odds and all progressions with step at most 5.
pub fn default_subset_family() -> Vec<IndexSubset> {
    let mut out = vec![IndexSubset::All];
    for step in 2..=5 {
        for start in 1..=step {
            out.push(IndexSubset::Progression { start, step });
        }
    }
    out
}

/// One row of the (M) checker output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MVerdict {
    pub subset: String,
    pub level: usize,
    pub verdict: LevelVerdict,
}

/// Condition (M) at truncation: for each subset `I` and level `n <= n_max`,
/// the smallest `k <= k_max` with `min_{j in I} a_{j,n}/a_{j,k} < tol`.
pub fn check_condition_m(
    a: &KotheMatrix,
    subsets: &[IndexSubset],
    n_max: usize,
    k_max: usize,
    truncation: usize,
    tol: f64,
) -> Result<Vec<MVerdict>> {
    let mut out = Vec::new();
    for subset in subsets {
        let members = subset.members(truncation);
        if members.is_empty() {
            return Err(Error::VacuousSubset(subset.label()));
        }
        for n in 1..=n_max {
            let verdict = (n..=k_max)
                .find(|&k| {
                    members
                        .iter()
                        .map(|&j| a.ratio(j, n, k))
                        .fold(f64::INFINITY, f64::min)
                        < tol
                })
                .map_or(LevelVerdict::Fails, LevelVerdict::HoldsWith);
            out.push(MVerdict { subset: subset.label(), level: n, verdict });
        }
    }
    Ok(out)
}

/// Summary of both matrix conditions at a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixConditions {
    pub s: bool,
    pub m: bool,
}

/// Default parameters used by the scenario pipeline.
pub const COND_K_MAX: usize = 5;
pub const COND_M_MAX: usize = 10;
pub const COND_M_LEVEL_CAP: usize = 24;

pub fn matrix_conditions(a: &KotheMatrix, truncation: usize) -> Result<MatrixConditions> {
    let s = check_condition_s(a, COND_K_MAX, COND_M_MAX, truncation, DEFAULT_TOL)?
        .iter()
        .all(LevelVerdict::holds);
    let m = check_condition_m(a, &default_subset_family(), COND_K_MAX, COND_M_LEVEL_CAP, truncation, DEFAULT_TOL)?
        .iter()
        .all(|v| v.verdict.holds());
    Ok(MatrixConditions { s, m })
}

/// Conditions at `J` and `2J`; `sensitive` is set when they disagree.
pub fn matrix_conditions_refined(a: &KotheMatrix, truncation: usize) -> Result<(MatrixConditions, bool)> {
    let base = matrix_conditions(a, truncation)?;
    let fine = matrix_conditions(a, 2 * truncation)?;
    Ok((base, base != fine))
}

/// JSON shape `{"matrix": name-or-inline-table, "truncation": J}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub matrix: MatrixRef,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
}

fn default_truncation() -> usize {
    DEFAULT_TRUNCATION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixRef {
    Named(String),
    Inline(Vec<Vec<f64>>),
}

impl MatrixSpec {
    pub fn build(&self) -> Result<KotheMatrix> {
        let m = match &self.matrix {
            MatrixRef::Named(name) => builtin_matrix(name)?,
            MatrixRef::Inline(rows) => KotheMatrix::new("inline", Weights::Table(rows.clone())),
        };
        Ok(m.with_truncation(self.truncation))
    }
}

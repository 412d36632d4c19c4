//! Diagonal (multiplication) semigroups `T(t)x = (e^{q_j t} x_j)_j` on
//! sequence spaces, with closed-form oracles for their stability class.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kothe::{self, KotheMatrix, LevelVerdict, SeqVector, Weights};
use crate::seminorm::SeminormTag;
use crate::Verdicts;

/// Margin used to decide `sup_j Re q_j < 0`.
pub const ORACLE_MARGIN: f64 = 1e-6;

/// Closed-form families of exponents `q_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentPreset {
    /// `q_j = -coef / j^power + i * imag * j`
    PowerLaw { coef: f64, power: f64, imag: f64 },
    /// `q_j = c`
    Constant { re: f64, im: f64 },
    /// Explicit `(re, im)` pairs; the last entry repeats past the table.
    Table { values: Vec<(f64, f64)>, limit_zero: bool },
}

impl ExponentPreset {
    /// Parses `-1/j`, `-1/j^2`, `-1/sqrt(j)`, `constant:<re>` and
    /// `power:<coef>:<power>[:<imag>]`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let unknown = || Error::Unknown { kind: "exponent preset", name: s.to_string() };
        match s {
            "-1/j" => return Ok(Self::PowerLaw { coef: 1.0, power: 1.0, imag: 0.0 }),
            "-1/j^2" => return Ok(Self::PowerLaw { coef: 1.0, power: 2.0, imag: 0.0 }),
            "-1/sqrt(j)" => return Ok(Self::PowerLaw { coef: 1.0, power: 0.5, imag: 0.0 }),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("constant:") {
            let re: f64 = rest.parse().map_err(|_| unknown())?;
            return Ok(Self::Constant { re, im: 0.0 });
        }
        if let Some(rest) = s.strip_prefix("power:") {
            let parts: Vec<f64> = rest.split(':').map(str::parse).collect::<std::result::Result<_, _>>().map_err(|_| unknown())?;
            return match parts.as_slice() {
                [c, p] => Ok(Self::PowerLaw { coef: *c, power: *p, imag: 0.0 }),
                [c, p, i] => Ok(Self::PowerLaw { coef: *c, power: *p, imag: *i }),
                _ => Err(unknown()),
            };
        }
        Err(unknown())
    }

    pub fn q(&self, j: usize) -> Complex64 {
        match self {
            Self::PowerLaw { coef, power, imag } => Complex64::new(-coef / (j as f64).powf(*power), imag * j as f64),
            Self::Constant { re, im } => Complex64::new(*re, *im),
            Self::Table { values, .. } => {
                let (re, im) = values.get(j - 1).or(values.last()).copied().unwrap_or((0.0, 0.0));
                Complex64::new(re, im)
            }
        }
    }

    fn limit_zero(&self) -> bool {
        match self {
            Self::PowerLaw { coef, power, .. } => *coef != 0.0 && *power > 0.0,
            Self::Constant { re, .. } => *re == 0.0,
            Self::Table { limit_zero, .. } => *limit_zero,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::PowerLaw { coef, power, imag } if *imag == 0.0 => format!("-{coef}/j^{power}"),
            Self::PowerLaw { coef, power, imag } => format!("-{coef}/j^{power}+{imag}ij"),
            Self::Constant { re, .. } => format!("constant:{re}"),
            Self::Table { values, .. } => format!("table[{}]", values.len()),
        }
    }
}

/// `q_j` with its truncation and declared properties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentSequence {
    pub preset: ExponentPreset,
    pub truncation: usize,
    pub all_re_negative: bool,
    pub re_limit_zero: bool,
    pub re_sup: f64,
}

impl ExponentSequence {
    pub fn new(preset: ExponentPreset, truncation: usize) -> Self {
        let re_sup = (1..=truncation).map(|j| preset.q(j).re).fold(f64::NEG_INFINITY, f64::max);
        let all_re_negative = (1..=truncation).all(|j| preset.q(j).re < 0.0);
        let re_limit_zero = preset.limit_zero();
        Self { preset, truncation, all_re_negative, re_limit_zero, re_sup }
    }

    pub fn q(&self, j: usize) -> Complex64 {
        self.preset.q(j)
    }

    pub fn with_truncation(&self, truncation: usize) -> Self {
        Self::new(self.preset.clone(), truncation)
    }

    /// Checks the declared flags against the truncated values.
    pub fn validate(&self) -> Result<()> {
        for j in 1..=self.truncation {
            let re = self.q(j).re;
            if re > self.re_sup + 1e-15 {
                return Err(Error::Invariant(format!("Re q_{j} = {re} exceeds declared re_sup {}", self.re_sup)));
            }
            if self.all_re_negative && re >= 0.0 {
                return Err(Error::Invariant(format!("Re q_{j} = {re} is not negative")));
            }
        }
        Ok(())
    }
}

/// The sequence space carrying a diagonal semigroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeqSpace {
    C0(KotheMatrix),
    /// Finite sequences with the sup norm.
    PhiSupnorm,
    /// Finite sequences with the direct-sum topology, represented by a
    /// finite surrogate family of its continuous seminorms.
    PhiDirectSum,
}

impl SeqSpace {
    pub fn label(&self) -> String {
        match self {
            SeqSpace::C0(a) => format!("c0({})", a.name),
            SeqSpace::PhiSupnorm => "phi[sup]".into(),
            SeqSpace::PhiDirectSum => "phi[direct-sum]".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalSemigroup {
    pub exponents: ExponentSequence,
    pub space: SeqSpace,
}

impl DiagonalSemigroup {
    pub fn new(exponents: ExponentSequence, space: SeqSpace) -> Self {
        Self { exponents, space }
    }

    pub fn truncation(&self) -> usize {
        self.exponents.truncation
    }

    pub fn with_truncation(&self, truncation: usize) -> Self {
        Self { exponents: self.exponents.with_truncation(truncation), space: self.space.clone() }
    }

    /// Evaluates a sequence seminorm of `x`.
    pub fn seminorm(&self, tag: &SeminormTag, x: &SeqVector) -> Result<f64> {
        match (tag, &self.space) {
            (SeminormTag::KotheSup(k), SeqSpace::C0(a)) => kothe::seminorm_eval(a, *k, x),
            (SeminormTag::KotheSup(_), _) | (SeminormTag::WeightedSup(_), SeqSpace::PhiSupnorm) => {
                Ok(x.entries.iter().map(|z| z.norm()).fold(0.0, f64::max))
            }
            (SeminormTag::SumAbs, SeqSpace::PhiDirectSum) => Ok(x.entries.iter().map(|z| z.norm()).sum()),
            (SeminormTag::WeightedSup(v), _) => Ok(x
                .entries
                .iter()
                .enumerate()
                .map(|(i, z)| v.at_index(i + 1) * z.norm())
                .fold(0.0, f64::max)),
            (tag, space) => Err(Error::Incompatible(format!("{} on {}", tag.label(), space.label()))),
        }
    }
}

/// `T(t)x`, entrywise `e^{q_j t} x_j`.
pub fn diag_apply(s: &DiagonalSemigroup, t: f64, x: &SeqVector) -> Result<SeqVector> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(SeqVector::from_fn(x.truncation(), |j| {
        let z = x.get(j);
        if z == Complex64::new(0.0, 0.0) {
            z
        } else {
            (s.exponents.q(j) * t).exp() * z
        }
    }))
}

/// Outcome of a strong-continuity probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityCheck {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub holds: bool,
}

/// Samples `‖T(t)x - x‖` along decreasing `t_probe` and checks that the
/// values fall to the tolerance.
pub fn strong_continuity_check(s: &DiagonalSemigroup, x: &SeqVector, seminorm: &SeminormTag, t_probe: &[f64], tol: f64) -> Result<ContinuityCheck> {
    if t_probe.windows(2).any(|w| w[1] >= w[0]) || t_probe.iter().any(|&t| t <= 0.0) {
        return Err(Error::InvalidArgument("t_probe must be positive and strictly decreasing".into()));
    }
    let mut values = Vec::with_capacity(t_probe.len());
    for &t in t_probe {
        let tx = diag_apply(s, t, x)?;
        let diff = tx.add(&x.scale(-1.0));
        values.push(s.seminorm(seminorm, &diff)?);
    }
    let scale = s.seminorm(seminorm, x)?.max(1.0);
    let holds = values.last().is_none_or(|&v| v <= tol * scale);
    Ok(ContinuityCheck { times: t_probe.to_vec(), values, holds })
}

/// `sup_{‖x‖_m <= 1} ‖T(t)x‖_k = max_j (a_{j,k}/a_{j,m}) e^{t Re q_j}` with `0/0 := 0`.
pub fn ball_operator_norm(a: &KotheMatrix, k: usize, m: usize, s: &DiagonalSemigroup, t: f64) -> f64 {
    (1..=s.truncation())
        .map(|j| {
            let r = a.ratio(j, k, m);
            if r == 0.0 {
                0.0
            } else {
                r * (t * s.exponents.q(j).re).exp()
            }
        })
        .fold(0.0, f64::max)
}

/// The failure witness for condition (S): unit vectors `e_{j_n}/a_{j_n,m}`
/// and times `t_n = 1/|Re q_{j_n}|` at which the ball norm stays above `C/e`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub level: usize,
    pub m: usize,
    pub constant: f64,
    pub indices: Vec<usize>,
    /// Coefficient `1/a_{j_n,m}` of the witness vector `x^(n)`.
    pub coefficients: Vec<f64>,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub lower_bound: f64,
}

/// Emits the (S)-failure witness at level `k` for every `m` in `k..=m_max`.
pub fn witness_search_s_failure(a: &KotheMatrix, k: usize, m_max: usize, s: &DiagonalSemigroup) -> Result<Vec<WitnessRecord>> {
    if !s.exponents.re_limit_zero || !s.exponents.all_re_negative {
        return Err(Error::NoWitness("exponents must be negative and accumulate at zero".into()));
    }
    let truncation = s.truncation();
    let verdicts = kothe::check_condition_s(a, k, m_max.max(k), truncation, kothe::DEFAULT_TOL)?;
    if let Some(LevelVerdict::HoldsWith(m)) = verdicts.last() {
        return Err(Error::NoWitness(format!("condition (S) holds at level {k} with m = {m}")));
    }
    let start = truncation - ((truncation as f64) * kothe::TAIL_FRACTION).ceil() as usize + 1;
    let mut out = Vec::new();
    for m in k..=m_max {
        let mut tail: Vec<(usize, f64)> = (start..=truncation)
            .map(|j| (j, a.ratio(j, k, m)))
            .filter(|(_, r)| *r >= kothe::DEFAULT_TOL && r.is_finite())
            .collect();
        if tail.is_empty() {
            continue;
        }
        // Keep the last eight indices; `tail` is ascending in `j`.
        tail.drain(..tail.len().saturating_sub(8));
        let constant = tail.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let mut rec = WitnessRecord {
            level: k,
            m,
            constant,
            indices: Vec::new(),
            coefficients: Vec::new(),
            times: Vec::new(),
            values: Vec::new(),
            lower_bound: constant / std::f64::consts::E,
        };
        for (j, _) in tail {
            let t = 1.0 / s.exponents.q(j).re.abs();
            rec.indices.push(j);
            rec.coefficients.push(1.0 / a.weight(j, m));
            rec.times.push(t);
            rec.values.push(ball_operator_norm(a, k, m, s, t));
        }
        out.push(rec);
    }
    if out.is_empty() {
        return Err(Error::NoWitness(format!("no tail ratios above tolerance at level {k}")));
    }
    Ok(out)
}

/// Closed-form classification and its certificates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdicts: Verdicts,
    /// Global rate for uniform exponential stability.
    pub omega: Option<f64>,
    /// Per-level rates for pseudo uniform exponential stability.
    pub omega_per_level: Vec<(usize, f64)>,
    pub reasons: Vec<String>,
}

/// Levels `1..=5` each see only an initial segment of indices.
fn seminorm_supports_finite(a: &KotheMatrix, truncation: usize) -> bool {
    (1..=5).all(|k| (truncation / 2..=truncation).all(|j| a.log_weight(j, k) == f64::NEG_INFINITY))
}

/// Exact verdicts from closed forms, at truncation.
pub fn classify_diagonal_oracle(s: &DiagonalSemigroup) -> Result<OracleReport> {
    let exps = &s.exponents;
    let j = exps.truncation;
    let mut reasons = Vec::new();
    if exps.re_sup >= 0.0 {
        reasons.push(format!("Re q_j = {} >= 0 for some j: not strongly stable", exps.re_sup));
        return Ok(OracleReport { verdicts: Verdicts::all(false), omega: None, omega_per_level: vec![], reasons });
    }
    if exps.re_sup <= -ORACLE_MARGIN && !exps.re_limit_zero {
        let omega = exps.re_sup.abs() / 2.0;
        reasons.push(format!("Re q_j <= {} bounded away from zero", exps.re_sup));
        return Ok(OracleReport { verdicts: Verdicts::all(true), omega: Some(omega), omega_per_level: vec![], reasons });
    }
    if !exps.re_limit_zero {
        return Err(Error::NoOracle("exponents neither bounded away from nor accumulating at zero".into()));
    }
    let v = match &s.space {
        SeqSpace::PhiSupnorm => {
            reasons.push("finite sequences with sup norm: omega depends on the support".into());
            Verdicts::from_array([false, false, true, true, false, false, true])
        }
        SeqSpace::PhiDirectSum => {
            reasons.push("bounded sets have bounded support; sum-abs seminorm blocks uniform omega".into());
            Verdicts::from_array([false, false, true, true, true, true, true])
        }
        SeqSpace::C0(a) => {
            if seminorm_supports_finite(a, j) {
                let per_level = (1..=5)
                    .map(|k| {
                        let top = (1..=k.min(j)).map(|i| exps.q(i).re).fold(f64::NEG_INFINITY, f64::max);
                        (k, top.abs() / 2.0)
                    })
                    .collect();
                reasons.push("every level sees finitely many coordinates: pseudo uniform".into());
                return Ok(OracleReport {
                    verdicts: Verdicts::from_array([false, true, false, true, true, true, true]),
                    omega: None,
                    omega_per_level: per_level,
                    reasons,
                });
            }
            let full_level = (1..=5).any(|k| (1..=j).all(|i| a.log_weight(i, k) > f64::NEG_INFINITY));
            if !full_level {
                return Err(Error::NoOracle(format!("{}: no level with full support", a.name)));
            }
            let conds = kothe::matrix_conditions(a, j)?;
            reasons.push(format!("a level with full support and Re q_j -> 0: not pseudo strongly exponentially stable; (S) = {}, (M) = {}", conds.s, conds.m));
            let superpoly = if !conds.s {
                false
            } else if matches!(a.weights, Weights::S) && matches!(exps.preset, ExponentPreset::PowerLaw { .. }) {
                reasons.push("polynomial weights absorb a power-law exponent: super polynomial".into());
                true
            } else {
                return Err(Error::NoOracle(format!("{}: (S) holds but no closed form for the polynomial rate", a.name)));
            };
            let uniform = if conds.m {
                true
            } else if matches!(a.weights, Weights::Constant) {
                false
            } else {
                return Err(Error::NoOracle(format!("{}: (M) fails but space is not normed", a.name)));
            };
            Verdicts::from_array([false, false, false, false, superpoly, uniform, true])
        }
    };
    Ok(OracleReport { verdicts: v, omega: None, omega_per_level: vec![], reasons })
}

//! Tags naming the seminorms, weights and bounded-set generators that make
//! up the finite families a scenario declares.

use serde::{Deserialize, Serialize};

/// Nonnegative weight `v`, evaluated at a real point or at a sequence index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightFn {
    One,
    /// `(1 + |x|)^power`
    Poly { power: f64 },
    /// `exp(rate * |x|)`
    Exp { rate: f64 },
    /// `table[j-1]` on sequences; piecewise constant in `|x|` on functions.
    Table(Vec<f64>),
}

impl WeightFn {
    pub fn at(&self, x: f64) -> f64 {
        match self {
            WeightFn::One => 1.0,
            WeightFn::Poly { power } => (1.0 + x.abs()).powf(*power),
            WeightFn::Exp { rate } => (rate * x.abs()).exp(),
            WeightFn::Table(v) => {
                let idx = (x.abs().floor() as usize).min(v.len().saturating_sub(1));
                v.get(idx).copied().unwrap_or(0.0).max(0.0)
            }
        }
    }

    /// Weight at the 1-based sequence index `j`.
    pub fn at_index(&self, j: usize) -> f64 {
        match self {
            WeightFn::Table(v) => v.get(j - 1).copied().unwrap_or(0.0).max(0.0),
            other => other.at(j as f64),
        }
    }

    pub fn label(&self) -> String {
        match self {
            WeightFn::One => "1".into(),
            WeightFn::Poly { power } => format!("(1+|x|)^{power}"),
            WeightFn::Exp { rate } => format!("exp({rate}|x|)"),
            WeightFn::Table(v) => format!("table[{}]", v.len()),
        }
    }
}

/// One continuous seminorm of a declared family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeminormTag {
    /// `‖x‖_k = sup_j a_{j,k}|x_j|` of the ambient Köthe matrix.
    KotheSup(usize),
    /// `sum_j |x_j|`
    SumAbs,
    /// `|f(s)|`
    PointEval(f64),
    /// `sup_{|s| <= n} |f(s)|`
    CompactSup(f64),
    /// `sup_s v(s)|f(s)|` (on sequences: `sup_j v(j)|x_j|`)
    WeightedSup(WeightFn),
    /// `max_{k,n <= N} sup_x |x^k f^{(n)}(x)|`
    SchwartzN(usize),
    /// `(∫ (1+x^2)^n |f(x)|^2 dx)^{1/2}`
    SobolevFourier(usize),
}

impl SeminormTag {
    pub fn label(&self) -> String {
        match self {
            SeminormTag::KotheSup(k) => format!("kothe-sup[k={k}]"),
            SeminormTag::SumAbs => "sum-abs".into(),
            SeminormTag::PointEval(s) => format!("point-eval[s={s}]"),
            SeminormTag::CompactSup(n) => format!("compact-sup[n={n}]"),
            SeminormTag::WeightedSup(v) => format!("weighted-sup[v={}]", v.label()),
            SeminormTag::SchwartzN(n) => format!("schwartz[N={n}]"),
            SeminormTag::SobolevFourier(n) => format!("sobolev-fourier[n={n}]"),
        }
    }
}

/// How a bounded set is generated. The set is always a finite family at a
/// given truncation; `truncation` in the evaluators fixes its size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundedSetGen {
    /// Explicit list of point labels (indices into the scenario's probes).
    FiniteList(Vec<usize>),
    /// Unit vectors `e_j`, `j` in `from..=J` (or `..=to` when set).
    BasisFamily { from: usize, to: Option<usize> },
    /// Singletons `{e_j}` for `j` on a geometric ladder up to `J`.
    BasisLadder,
    /// Hat functions `f_n`, `n` on the ladder `2..=J`.
    HatFamily,
    /// `k^{1/2} 1_{[0,1/k]}`, `k` on the ladder up to `J`.
    IndicatorFamily,
    /// Tents of height 1 and half width 1 centred at `direction * j`, for
    /// `j` in `1..=count`, or `1..=J/10` when `count` is unset.
    TranslatedBumps { direction: f64, count: Option<usize> },
    /// Order interval `{x : |x_j| <= y_j}` of a positive sequence `y`.
    OrderInterval(SeqProfile),
}

impl BoundedSetGen {
    pub fn label(&self) -> String {
        match self {
            BoundedSetGen::FiniteList(v) => format!("finite{v:?}"),
            BoundedSetGen::BasisFamily { from, to } => match to {
                Some(t) => format!("basis[{from}..={t}]"),
                None => format!("basis[{from}..=J]"),
            },
            BoundedSetGen::BasisLadder => "basis-ladder".into(),
            BoundedSetGen::HatFamily => "hats".into(),
            BoundedSetGen::IndicatorFamily => "indicators".into(),
            BoundedSetGen::TranslatedBumps { direction, count } => match count {
                Some(c) => format!("bumps[{direction}*j, j<={c}]"),
                None => format!("bumps[{direction}*j, j<=J/10]"),
            },
            BoundedSetGen::OrderInterval(y) => format!("order-interval[{}]", y.label()),
        }
    }
}

/// Closed-form sequences used as probe points and order-interval bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeqProfile {
    /// `e_j`
    Basis(usize),
    Ones,
    /// `j^{-p}`
    Power(f64),
    /// `exp(-rate * j)`
    Exp(f64),
    /// `exp(-sqrt(j))`
    ExpSqrt,
    /// `exp(-(n + i))` where `j` enumerates the pair `(n, i)`.
    PairExp,
    /// Finitely supported: `1/j` for `j <= len`.
    Harmonic(usize),
}

impl SeqProfile {
    pub fn at(&self, j: usize) -> f64 {
        let x = j as f64;
        match self {
            SeqProfile::Basis(j0) => f64::from(u8::from(j == *j0)),
            SeqProfile::Ones => 1.0,
            SeqProfile::Power(p) => x.powf(-p),
            SeqProfile::Exp(r) => (-r * x).exp(),
            SeqProfile::ExpSqrt => (-x.sqrt()).exp(),
            SeqProfile::PairExp => {
                let (n, i) = crate::kothe::pair_of_index(j);
                (-((n + i) as f64)).exp()
            }
            SeqProfile::Harmonic(len) => {
                if j <= *len {
                    1.0 / x
                } else {
                    0.0
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            SeqProfile::Basis(j) => format!("e_{j}"),
            SeqProfile::Ones => "ones".into(),
            SeqProfile::Power(p) => format!("j^-{p}"),
            SeqProfile::Exp(r) => format!("exp(-{r}j)"),
            SeqProfile::ExpSqrt => "exp(-sqrt j)".into(),
            SeqProfile::PairExp => "exp(-(n+i))".into(),
            SeqProfile::Harmonic(len) => format!("1/j[j<={len}]"),
        }
    }
}

/// `1, 2, 5, 10, 20, 50, ...` up to and including `limit`.
pub fn ladder(limit: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut base = 1usize;
    'outer: loop {
        for m in [1usize, 2, 5] {
            let v = base * m;
            if v > limit {
                break 'outer;
            }
            out.push(v);
        }
        base *= 10;
    }
    if out.last() != Some(&limit) && limit > 0 {
        out.push(limit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_contains_limit() {
        assert_eq!(ladder(200), vec![1, 2, 5, 10, 20, 50, 100, 200]);
        assert_eq!(ladder(400), vec![1, 2, 5, 10, 20, 50, 100, 200, 400]);
        assert_eq!(ladder(1), vec![1]);
    }

    #[test]
    fn weights_nonnegative() {
        for w in [WeightFn::One, WeightFn::Poly { power: 2.0 }, WeightFn::Exp { rate: -0.5 }, WeightFn::Table(vec![1.0, -2.0])] {
            for x in [-3.0, 0.0, 0.5, 7.0] {
                assert!(w.at(x) >= 0.0);
            }
        }
    }
}

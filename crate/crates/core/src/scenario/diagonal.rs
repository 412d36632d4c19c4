use crate::certify::Evolution;
use crate::error::{Error, Result};
use crate::kothe::builtin_matrix;
use crate::seminorm::{ladder, BoundedSetGen, SeminormTag, SeqProfile};
use crate::seq::{ball_operator_norm, classify_diagonal_oracle, DiagonalSemigroup, ExponentPreset, ExponentSequence, SeqSpace};
use crate::stability::{Instance, Target, TimeGrid};

use super::SemigroupSpec;

pub const PER_DECADE: usize = 16;
pub const T_MIN: f64 = 1e-2;
/// Default horizon is this multiple of `2J`.
pub const HORIZON_FACTOR: f64 = 50.0;

pub fn parse_space(s: &str) -> Result<SeqSpace> {
    match s {
        "phi-supnorm" => Ok(SeqSpace::PhiSupnorm),
        "phi-direct-sum" => Ok(SeqSpace::PhiDirectSum),
        _ => match s.strip_prefix("c0:") {
            Some(m) => Ok(SeqSpace::C0(builtin_matrix(m)?)),
            None => Err(Error::Unknown { kind: "space", name: s.to_string() }),
        },
    }
}

#[derive(Debug, Clone)]
pub struct DiagonalEvolution {
    base: DiagonalSemigroup,
    seminorms: Vec<SeminormTag>,
    ladder_levels: bool,
    points: Vec<SeqProfile>,
    sets: Vec<BoundedSetGen>,
    t_max: Option<f64>,
}

enum Reduce {
    Max,
    Sum,
}

enum DiagTarget {
    Vector(Vec<f64>),
    Basis(Vec<usize>),
}

struct DiagInstance {
    re: Vec<f64>,
    seminorms: Vec<(String, Reduce, Vec<f64>)>,
    points: Vec<(String, Vec<f64>)>,
    sets: Vec<(String, DiagTarget)>,
}

impl DiagonalEvolution {
    pub fn from_spec(spec: &SemigroupSpec, t_max: Option<f64>) -> Result<Self> {
        let SemigroupSpec::Diagonal { space, exponents, seminorms, ladder_levels, points, sets } = spec else {
            return Err(Error::Incompatible("not a diagonal semigroup".into()));
        };
        let exps = ExponentSequence::new(ExponentPreset::parse(exponents)?, 2);
        let base = DiagonalSemigroup::new(exps, parse_space(space)?);
        Ok(Self { base, seminorms: seminorms.clone(), ladder_levels: *ladder_levels, points: points.clone(), sets: sets.clone(), t_max })
    }

    pub fn semigroup(&self, truncation: usize) -> DiagonalSemigroup {
        self.base.with_truncation(truncation)
    }

    fn tags(&self, truncation: usize) -> Vec<SeminormTag> {
        let mut tags = self.seminorms.clone();
        if self.ladder_levels {
            for k in ladder(truncation) {
                let t = SeminormTag::KotheSup(k);
                if !tags.contains(&t) {
                    tags.push(t);
                }
            }
        }
        tags
    }

    fn log_weights(&self, tag: &SeminormTag, n: usize) -> Result<(Reduce, Vec<f64>)> {
        let space = &self.base.space;
        let w: Vec<f64> = match (tag, space) {
            (SeminormTag::KotheSup(k), SeqSpace::C0(a)) => (1..=n).map(|j| a.log_weight(j, *k)).collect(),
            (SeminormTag::KotheSup(_), _) | (SeminormTag::SumAbs, SeqSpace::PhiDirectSum) => vec![0.0; n],
            (SeminormTag::WeightedSup(v), _) => (1..=n).map(|j| v.at_index(j).ln()).collect(),
            (tag, space) => return Err(Error::Incompatible(format!("{} on {}", tag.label(), space.label()))),
        };
        let r = if matches!(tag, SeminormTag::SumAbs) { Reduce::Sum } else { Reduce::Max };
        Ok((r, w))
    }

    fn set_targets(&self, gen: &BoundedSetGen, n: usize) -> Result<Vec<(String, DiagTarget)>> {
        let profile = |y: &SeqProfile| (1..=n).map(|j| y.at(j).abs().ln()).collect::<Vec<_>>();
        Ok(match gen {
            BoundedSetGen::OrderInterval(y) => vec![(gen.label(), DiagTarget::Vector(profile(y)))],
            BoundedSetGen::FiniteList(v) => vec![(gen.label(), DiagTarget::Basis(v.clone()))],
            BoundedSetGen::BasisFamily { from, to } => {
                let hi = to.unwrap_or(n).min(n);
                vec![(gen.label(), DiagTarget::Basis((*from..=hi).collect()))]
            }
            BoundedSetGen::BasisLadder => ladder(n).into_iter().map(|m| (format!("basis[1..={m}]"), DiagTarget::Basis((1..=m).collect()))).collect(),
            other => return Err(Error::Incompatible(format!("{} in a sequence space", other.label()))),
        })
    }
}

impl Instance for DiagInstance {
    fn seminorms(&self) -> Vec<String> {
        self.seminorms.iter().map(|s| s.0.clone()).collect()
    }
    fn points(&self) -> Vec<String> {
        self.points.iter().map(|s| s.0.clone()).collect()
    }
    fn sets(&self) -> Vec<String> {
        self.sets.iter().map(|s| s.0.clone()).collect()
    }
    fn value(&self, q: usize, target: Target, t: f64) -> Result<f64> {
        let (_, reduce, lw) = &self.seminorms[q];
        let terms: Box<dyn Iterator<Item = f64>> = match target {
            Target::Point(i) => Box::new(self.points[i].1.iter().enumerate().map(|(j, lx)| lw[j] + lx + t * self.re[j])),
            Target::Set(i) => match &self.sets[i].1 {
                DiagTarget::Vector(lx) => Box::new(lx.iter().enumerate().map(|(j, lx)| lw[j] + lx + t * self.re[j])),
                DiagTarget::Basis(idx) => Box::new(idx.iter().filter(|&&j| j >= 1 && j <= self.re.len()).map(|&j| lw[j - 1] + t * self.re[j - 1])),
            },
        };
        let terms = terms.filter(|l| *l > f64::NEG_INFINITY).map(f64::exp);
        Ok(match reduce {
            Reduce::Max => terms.fold(0.0, f64::max),
            Reduce::Sum => terms.sum(),
        })
    }
}

impl Evolution for DiagonalEvolution {
    fn instance(&self, truncation: usize) -> Result<Box<dyn Instance + '_>> {
        let sg = self.semigroup(truncation);
        sg.exponents.validate()?;
        let n = truncation;
        let re = (1..=n).map(|j| sg.exponents.q(j).re).collect();
        let seminorms = self
            .tags(n)
            .iter()
            .map(|tag| self.log_weights(tag, n).map(|(r, w)| (tag.label(), r, w)))
            .collect::<Result<Vec<_>>>()?;
        let points = self.points.iter().map(|y| (y.label(), (1..=n).map(|j| y.at(j).abs().ln()).collect())).collect();
        let mut sets = Vec::new();
        for g in &self.sets {
            sets.extend(self.set_targets(g, n)?);
        }
        Ok(Box::new(DiagInstance { re, seminorms, points, sets }))
    }

    fn time_grid(&self, truncation: usize) -> Result<TimeGrid> {
        let t_max = self.t_max.unwrap_or(HORIZON_FACTOR * 2.0 * truncation as f64);
        TimeGrid::log(T_MIN, t_max, PER_DECADE)
    }

    fn ball_levels(&self, truncation: usize) -> Vec<usize> {
        if !matches!(self.base.space, SeqSpace::C0(_)) {
            return Vec::new();
        }
        self.tags(truncation)
            .iter()
            .filter_map(|t| match t {
                SeminormTag::KotheSup(k) => Some(*k),
                _ => None,
            })
            .collect()
    }

    fn ball_norm(&self, truncation: usize, k: usize, m: usize, t: f64) -> Option<f64> {
        match &self.base.space {
            SeqSpace::C0(a) => Some(ball_operator_norm(a, k, m, &self.semigroup(truncation), t)),
            _ => None,
        }
    }

    fn notes(&self, truncation: usize) -> Vec<String> {
        match classify_diagonal_oracle(&self.semigroup(truncation)) {
            Ok(r) => vec![format!("closed-form oracle: {}", r.verdicts.code())],
            Err(e) => vec![format!("closed-form oracle unavailable: {e}")],
        }
    }
}

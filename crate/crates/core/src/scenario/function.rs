use num_complex::Complex64;

use crate::certify::Evolution;
use crate::error::{Error, Result};
use crate::field::{mu_q, mu_rate, transport_apply, Multiplied, ScalarField};
use crate::func::{schwartz_seminorm, shift_apply, weighted_sup, Family, GridFunction, Profile, ShiftVariant};
use crate::heat::{heat_apply_fourier, indicator_member, sobolev_fourier_seminorm, FourierProfile};
use crate::seminorm::{ladder, BoundedSetGen, SeminormTag};
use crate::stability::{Instance, Target, TimeGrid};

use super::{FunctionSet, SemigroupSpec};

const T_MIN: f64 = 1e-2;
const PER_DECADE: usize = 16;
const SHIFT_HORIZON_FACTOR: f64 = 50.0;
const TRANSPORT_T_MAX: f64 = 200.0;
const MULTIPLY_T_MAX: f64 = 2e4;
/// Indicator members `f_k` start to spread at `t ~ k^2`.
const HEAT_HORIZON_FACTOR: f64 = 50.0;
const BUMP_HALF_WIDTH: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Shift(ShiftVariant),
    Transport(ScalarField),
    Multiply(ScalarField),
    Heat(Complex64),
}

#[derive(Debug, Clone)]
pub struct FunctionEvolution {
    kind: Kind,
    seminorms: Vec<SeminormTag>,
    points: Vec<Family>,
    sets: Vec<FunctionSet>,
    t_max: Option<f64>,
}

fn profile_seminorm<P: Profile + ?Sized>(tag: &SeminormTag, p: &P) -> Result<f64> {
    match tag {
        SeminormTag::PointEval(s) => Ok(p.deriv(*s, 0).abs()),
        SeminormTag::CompactSup(n) => weighted_sup(p, 0, -n, *n, |_| 1.0),
        SeminormTag::WeightedSup(v) => weighted_sup(p, 0, f64::NEG_INFINITY, f64::INFINITY, |x| v.at(x)),
        SeminormTag::SchwartzN(n) => schwartz_seminorm(p, *n),
        other => Err(Error::Incompatible(format!("{} on {}", other.label(), p.label()))),
    }
}

struct FnInstance<'a> {
    evo: &'a FunctionEvolution,
    sets: Vec<(String, Vec<Family>)>,
}

impl Instance for FnInstance<'_> {
    fn seminorms(&self) -> Vec<String> {
        self.evo.seminorms.iter().map(SeminormTag::label).collect()
    }
    fn points(&self) -> Vec<String> {
        self.evo.points.iter().map(Family::label).collect()
    }
    fn sets(&self) -> Vec<String> {
        self.sets.iter().map(|s| s.0.clone()).collect()
    }
    fn value(&self, q: usize, target: Target, t: f64) -> Result<f64> {
        let tag = &self.evo.seminorms[q];
        match target {
            Target::Point(i) => self.evo.eval(tag, &self.evo.points[i], t),
            Target::Set(i) => self.sets[i].1.iter().try_fold(0.0f64, |m, f| Ok(m.max(self.evo.eval(tag, f, t)?))),
        }
    }
}

impl FunctionEvolution {
    pub fn from_spec(spec: &SemigroupSpec, t_max: Option<f64>) -> Result<Self> {
        let (kind, seminorms, points, sets) = match spec {
            SemigroupSpec::Shift { variant, seminorms, points, sets } => (Kind::Shift(*variant), seminorms, points, sets),
            SemigroupSpec::Transport { q, seminorms, points, sets } => (Kind::Transport(q.clone()), seminorms, points, sets),
            SemigroupSpec::Multiply { q, seminorms, points, sets } => (Kind::Multiply(q.clone()), seminorms, points, sets),
            SemigroupSpec::Heat { q_re, q_im, seminorms, points, sets } => (Kind::Heat(Complex64::new(*q_re, *q_im)), seminorms, points, sets),
            SemigroupSpec::Diagonal { .. } => return Err(Error::Incompatible("diagonal semigroup on a function space".into())),
        };
        if let Kind::Transport(q) | Kind::Multiply(q) = &kind {
            if !q.nonpositive() {
                return Err(Error::InvalidArgument(format!("{} must be nonpositive", q.label())));
            }
        }
        Ok(Self { kind, seminorms: seminorms.clone(), points: points.clone(), sets: sets.clone(), t_max })
    }

    /// `q(T(t)f)`.
    pub fn eval(&self, tag: &SeminormTag, f: &Family, t: f64) -> Result<f64> {
        match &self.kind {
            Kind::Shift(v) => profile_seminorm(tag, &shift_apply(t, &GridFunction::new(f.clone(), *v))?),
            Kind::Transport(q) => profile_seminorm(tag, &transport_apply(q, t, &GridFunction::on_line(f.clone()))?),
            Kind::Multiply(q) => {
                if t < 0.0 {
                    return Err(Error::NegativeTime(t));
                }
                profile_seminorm(tag, &Multiplied { q: q.clone(), t, f: GridFunction::on_line(f.clone()) })
            }
            Kind::Heat(q) => {
                let p = heat_apply_fourier(&FourierProfile::new(f.clone(), *q), t)?;
                match tag {
                    SeminormTag::SobolevFourier(n) => sobolev_fourier_seminorm(&p, *n),
                    _ => profile_seminorm(tag, &p),
                }
            }
        }
    }

    fn members(&self, set: &FunctionSet, truncation: usize) -> Result<Vec<(String, Vec<Family>)>> {
        let gen = match set {
            FunctionSet::Members { label, members } => return Ok(vec![(label.clone(), members.clone())]),
            FunctionSet::Gen(g) => g,
        };
        let members = match gen {
            BoundedSetGen::HatFamily => ladder(truncation).into_iter().map(|n| Family::Hat { n }).collect(),
            BoundedSetGen::IndicatorFamily => ladder(truncation).into_iter().map(indicator_member).collect(),
            BoundedSetGen::TranslatedBumps { direction, count } => {
                let c = count.unwrap_or(truncation / 10).max(1);
                (1..=c).map(|j| Family::Tent { c: direction * j as f64, w: BUMP_HALF_WIDTH, height: 1.0 }).collect()
            }
            other => return Err(Error::Incompatible(format!("{} in a function space", other.label()))),
        };
        Ok(vec![(gen.label(), members)])
    }

    fn default_t_max(&self, truncation: usize) -> f64 {
        match self.kind {
            Kind::Shift(_) => SHIFT_HORIZON_FACTOR * 2.0 * truncation as f64,
            Kind::Transport(_) => TRANSPORT_T_MAX,
            Kind::Multiply(_) => MULTIPLY_T_MAX,
            Kind::Heat(_) => HEAT_HORIZON_FACTOR * (2.0 * truncation as f64).powi(2),
        }
    }

    fn has_gen(&self, g: &BoundedSetGen) -> bool {
        self.sets.iter().any(|s| matches!(s, FunctionSet::Gen(x) if x == g))
    }
}

impl Evolution for FunctionEvolution {
    fn instance(&self, truncation: usize) -> Result<Box<dyn Instance + '_>> {
        let mut sets = Vec::new();
        for s in &self.sets {
            sets.extend(self.members(s, truncation)?);
        }
        Ok(Box::new(FnInstance { evo: self, sets }))
    }

    fn time_grid(&self, truncation: usize) -> Result<TimeGrid> {
        TimeGrid::log(T_MIN, self.t_max.unwrap_or(self.default_t_max(truncation)), PER_DECADE)
    }

    fn notes(&self, truncation: usize) -> Vec<String> {
        let mut out = Vec::new();
        if self.has_gen(&BoundedSetGen::HatFamily) {
            let n = *ladder(truncation).last().unwrap_or(&1);
            let peak = Family::Hat { n }.deriv(1.0 - 1.0 / n as f64, 0);
            out.push(format!("hat family is not sup-bounded: f_{n}(1 - 1/{n}) = {peak}"));
        }
        if let Kind::Transport(q) = &self.kind {
            let t = self.t_max.unwrap_or(TRANSPORT_T_MAX);
            match (mu_q(q, t, 4.0 * t), mu_rate(q, t)) {
                (Ok(m), Ok((rate, flag))) => {
                    let loc = if m.not_localized || flag { " (sup not localized)" } else { "" };
                    out.push(format!("mu_q({t}) = {:.6e}, mu rate = {rate:.6e}{loc}", m.value));
                }
                (Err(e), _) | (_, Err(e)) => out.push(format!("mu_q unavailable: {e}")),
            }
        }
        if let Kind::Heat(q) = self.kind {
            if self.has_gen(&BoundedSetGen::IndicatorFamily) {
                for k in [2usize, 10, 100] {
                    let p = FourierProfile::new(indicator_member(k), Complex64::new(0.0, q.im));
                    let v = heat_apply_fourier(&p, k as f64 / 2.0).and_then(|p| sobolev_fourier_seminorm(&p, 0));
                    if let Ok(v) = v {
                        out.push(format!("indicator witness k = {k}: |T(k/2) f_k|_0^2 = {:.6} (q = 0 part)", v * v));
                    }
                }
            }
        }
        out
    }
}

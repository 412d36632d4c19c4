//! Time grids, scaling families, sampled trajectories and the convergence
//! tests that decide "tends to zero" at finite truncation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_decay, DecayClass, ZERO_FLOOR};

/// Relative level a series must reach to count as converged outright.
pub const EPS_REL: f64 = 1e-3;
/// Settle-time growth between truncations that counts as drift.
pub const DRIFT_FACTOR: f64 = 1.6;
/// Absolute settle-time growth required in addition to `DRIFT_FACTOR`.
pub const DRIFT_MIN_GAP: f64 = 1.0;
/// Allowed shrink of the exponential rate between truncations.
pub const OMEGA_SHRINK: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub samples: Vec<f64>,
    pub tail_fraction: f64,
}

impl TimeGrid {
    /// Log-spaced grid over `[t_min, t_max]`.
    pub fn log(t_min: f64, t_max: f64, per_decade: usize) -> Result<Self> {
        if !(t_min > 0.0 && t_max / t_min >= 1e3) {
            return Err(Error::InvalidArgument(format!("time grid [{t_min}, {t_max}] spans less than three decades")));
        }
        if per_decade < 2 {
            return Err(Error::InvalidArgument("time grid needs at least 2 samples per decade".into()));
        }
        let decades = (t_max / t_min).log10();
        let n = (decades * per_decade as f64).ceil() as usize + 1;
        let samples = (0..n).map(|i| t_min * (t_max / t_min).powf(i as f64 / (n - 1) as f64)).collect();
        Ok(Self { samples, tail_fraction: crate::fit::TAIL_WINDOW })
    }

    pub fn t_max(&self) -> f64 {
        *self.samples.last().unwrap_or(&0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalingFamily {
    Exponential(Vec<f64>),
    Polynomial(Vec<f64>),
}

impl ScalingFamily {
    /// 33 log-spaced rates in `[2^-10, 2^4]`.
    pub fn default_omegas() -> Self {
        ScalingFamily::Exponential((0..33).map(|i| 2f64.powf(-10.0 + 14.0 * i as f64 / 32.0)).collect())
    }

    pub fn default_alphas() -> Self {
        ScalingFamily::Polynomial(vec![1.1, 1.5, 2.0, 3.0, 5.0])
    }

    pub fn params(&self) -> &[f64] {
        match self {
            ScalingFamily::Exponential(v) | ScalingFamily::Polynomial(v) => v,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.params();
        let bad = match self {
            ScalingFamily::Exponential(_) => p.iter().any(|&w| w <= 0.0),
            ScalingFamily::Polynomial(_) => p.iter().any(|&a| a <= 1.0),
        };
        if p.is_empty() || bad || p.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("scaling grid must be nonempty, strictly increasing and in range".into()));
        }
        Ok(())
    }
}

/// Scaling `h(t)`: `e^{ωt}` or `t^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    Exp(f64),
    Pow(f64),
}

/// `h(t) y`, computed in the log domain; zeros stay zero.
pub fn scaled(h: Scaling, t: f64, y: f64) -> f64 {
    if y.abs() <= ZERO_FLOOR {
        return 0.0;
    }
    let lh = match h {
        Scaling::Exp(w) => w * t,
        Scaling::Pow(a) => a * t.ln(),
    };
    (lh + y.abs().ln()).exp()
}

/// Raw values below this before a zero are taken as underflow, not as
/// annihilation.
pub const UNDERFLOW_ZONE: f64 = 1e-200;

/// Scales a series; zeros reached by underflow are replaced by the
/// log-linear extrapolation of the last two positive samples so that a
/// growing scale cannot be masked by a vanished value.
pub fn scale_series(h: Scaling, times: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut prev: Option<(f64, f64)> = None;
    let mut last: Option<(f64, f64)> = None;
    times
        .iter()
        .zip(ys)
        .map(|(&t, &y)| {
            if y.abs() > ZERO_FLOOR {
                prev = last;
                last = Some((t, y.abs().ln()));
                return scaled(h, t, y);
            }
            match (prev, last) {
                (Some((t0, l0)), Some((t1, l1))) if l1 < UNDERFLOW_ZONE.ln() => {
                    let slope = ((l1 - l0) / (t1 - t0)).min(0.0);
                    let lh = match h {
                        Scaling::Exp(w) => w * t,
                        Scaling::Pow(a) => a * t.ln(),
                    };
                    (lh + l1 + slope * (t - t1)).exp()
                }
                _ => 0.0,
            }
        })
        .collect()
}

/// What a seminorm is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Point(usize),
    Set(usize),
}

/// A semigroup with its finite seminorm, point and bounded-set families at
/// one truncation.
pub trait Instance: Sync {
    fn seminorms(&self) -> Vec<String>;
    fn points(&self) -> Vec<String>;
    fn sets(&self) -> Vec<String>;
    /// `q(T(t)x)` for a point; `sup_{b in B} q(T(t)b)` for a set.
    fn value(&self, q: usize, target: Target, t: f64) -> Result<f64>;
}

/// `q(h(t)T(t)target)` over the grid.
pub fn trajectory(inst: &dyn Instance, q: usize, target: Target, grid: &TimeGrid, scaling: Option<Scaling>) -> Result<Vec<f64>> {
    grid.samples
        .iter()
        .map(|&t| {
            let y = inst.value(q, target, t)?;
            // Overflow to +inf is a legitimate divergence; NaN is a bug.
            if y.is_nan() {
                return Err(Error::Invariant(format!("NaN value at t = {t}")));
            }
            Ok(match scaling {
                Some(h) => scaled(h, t, y),
                None => y,
            })
        })
        .collect()
}

/// One sampled series with its identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub seminorm: String,
    pub target: String,
    pub q: usize,
    pub kind: Target,
    pub values: Vec<f64>,
}

impl Series {
    pub fn key(&self) -> (String, String) {
        (self.seminorm.clone(), self.target.clone())
    }
}

/// All point and set trajectories of an instance. Every point also enters
/// the set family as its singleton.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampled {
    pub seminorms: Vec<String>,
    pub points: Vec<String>,
    pub sets: Vec<String>,
    pub times: Vec<f64>,
    pub point_series: Vec<Series>,
    pub set_series: Vec<Series>,
}

pub fn sample(inst: &dyn Instance, grid: &TimeGrid) -> Result<Sampled> {
    let seminorms = inst.seminorms();
    let points = inst.points();
    let sets = inst.sets();
    if seminorms.is_empty() {
        return Err(Error::InvalidArgument("empty seminorm family".into()));
    }
    let mut jobs = Vec::new();
    for q in 0..seminorms.len() {
        jobs.extend((0..points.len()).map(|x| (q, Target::Point(x))));
        jobs.extend((0..sets.len()).map(|b| (q, Target::Set(b))));
    }
    let series: Vec<Series> = jobs
        .par_iter()
        .map(|&(q, target)| {
            let values = trajectory(inst, q, target, grid, None)?;
            let label = match target {
                Target::Point(x) => points[x].clone(),
                Target::Set(b) => sets[b].clone(),
            };
            Ok(Series { seminorm: seminorms[q].clone(), target: label, q, kind: target, values })
        })
        .collect::<Result<_>>()?;
    let mut point_series = Vec::new();
    let mut set_series = Vec::new();
    for s in series {
        match s.kind {
            Target::Point(_) => {
                set_series.push(Series { target: format!("{{{}}}", s.target), ..s.clone() });
                point_series.push(s);
            }
            Target::Set(_) => set_series.push(s),
        }
    }
    Ok(Sampled { seminorms, points, sets, times: grid.samples.clone(), point_series, set_series })
}

fn peak(ys: &[f64]) -> f64 {
    ys.iter().cloned().fold(0.0, f64::max)
}

/// Whether a sampled series tends to zero on the window: identically
/// annihilated, or ending below `EPS_REL` of its peak, or with a tail that
/// fits a decaying class and does not increase.
pub fn converges(times: &[f64], ys: &[f64]) -> bool {
    if ys.iter().any(|y| !y.is_finite()) {
        return false;
    }
    let p = peak(ys);
    if p <= ZERO_FLOOR {
        return true;
    }
    let last = *ys.last().unwrap_or(&0.0);
    if last <= EPS_REL * p {
        return true;
    }
    let est = fit_decay(times, ys);
    if est.annihilated {
        return true;
    }
    let tail = &est.tail_values;
    est.class.decays() && tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12))
}

/// Last time the series is at or above `lambda * peak`, interpolated
/// log-linearly at the downward crossing.
pub fn settle_time(times: &[f64], ys: &[f64], lambda: f64) -> f64 {
    let p = peak(ys);
    if p <= ZERO_FLOOR {
        return times.first().copied().unwrap_or(0.0);
    }
    let level = lambda * p;
    let Some(i) = ys.iter().rposition(|&y| y >= level) else {
        return times[0];
    };
    if i + 1 >= ys.len() {
        return times[i];
    }
    let (y0, y1) = (ys[i], ys[i + 1]);
    if y1 <= ZERO_FLOOR || y0 <= level {
        return times[i];
    }
    let f = (y0.ln() - level.ln()) / (y0.ln() - y1.ln());
    (times[i].ln() + f * (times[i + 1].ln() - times[i].ln())).exp()
}

fn reaches_eps(ys: &[f64]) -> bool {
    let p = peak(ys);
    p <= ZERO_FLOOR || ys.last().is_some_and(|&l| l <= EPS_REL * p)
}

/// Settle-time drift between the same item at `J` and `2J`.
pub fn drifts(times: &[f64], at_j: &[f64], at_2j: &[f64]) -> bool {
    let lambda = if reaches_eps(at_j) && reaches_eps(at_2j) { EPS_REL } else { 0.5 };
    let s1 = settle_time(times, at_j, lambda);
    let s2 = settle_time(times, at_2j, lambda);
    s2 > DRIFT_FACTOR * s1 && s2 > s1 + DRIFT_MIN_GAP
}

/// Largest rate on the grid for which every scaled series converges.
pub fn omega_star(times: &[f64], items: &[&[f64]], omegas: &[f64]) -> Option<f64> {
    omegas
        .iter()
        .rev()
        .find(|&&w| items.iter().all(|ys| converges(times, &scale_series(Scaling::Exp(w), times, ys))))
        .copied()
}

/// Unscaled tail exponential or annihilated.
pub fn exponential_tail(times: &[f64], ys: &[f64]) -> std::result::Result<(), DecayClass> {
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(DecayClass::Divergent);
    }
    let p = peak(ys);
    if p <= ZERO_FLOOR {
        return Ok(());
    }
    let n = ys.iter().rposition(|y| y.abs() > ZERO_FLOOR).map_or(0, |i| i + 1);
    if n < ys.len() && ys[n - 1].abs() >= UNDERFLOW_ZONE {
        return Ok(());
    }
    let est = fit_decay(&times[..n], &ys[..n]);
    match est.class {
        _ if est.annihilated => Ok(()),
        DecayClass::Exponential { .. } => Ok(()),
        c => Err(c),
    }
}

//! Quantifier-block search for the seven stability properties at a
//! truncation `J`, cross-checked against `2J`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::stability::{
    converges, drifts, exponential_tail, omega_star, sample, scale_series, Instance, Sampled, Scaling, ScalingFamily, Series, TimeGrid,
    OMEGA_SHRINK,
};
use crate::verdict::{Property, Verdicts};

/// Largest gap `m - k` tried by the ball criterion.
pub const BALL_LEVEL_GAP: usize = 8;

/// Hypothesis flags declared by a scenario; never inferred.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub barrelled: bool,
    pub mackey_complete: bool,
    pub baire: bool,
    pub montel: bool,
    pub exponentially_bounded: bool,
}

impl Hypotheses {
    /// Whether `(iv) => (v)` applies.
    pub fn conditional_edge(&self) -> bool {
        self.mackey_complete && self.barrelled && self.exponentially_bounded
    }
}

/// A semigroup with desk-scale families at every truncation.
pub trait Evolution: Sync {
    fn instance(&self, truncation: usize) -> Result<Box<dyn Instance + '_>>;
    /// One grid shared by `J` and `2J`.
    fn time_grid(&self, truncation: usize) -> Result<TimeGrid>;
    /// Levels on which the exact ball norm is available.
    fn ball_levels(&self, _truncation: usize) -> Vec<usize> {
        Vec::new()
    }
    /// `sup_{p_m(x) <= 1} p_k(T(t)x)`.
    fn ball_norm(&self, _truncation: usize, _k: usize, _m: usize, _t: f64) -> Option<f64> {
        None
    }
    /// Scenario-specific diagnostics for the report.
    fn notes(&self, _truncation: usize) -> Vec<String> {
        Vec::new()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    /// (i): one rate for every seminorm and bounded set.
    pub omega: Option<f64>,
    /// (ii): rate per seminorm.
    pub omega_per_seminorm: BTreeMap<String, f64>,
    /// (iii): rate per point.
    pub omega_per_point: BTreeMap<String, f64>,
    /// (iv): rate per `seminorm | point`.
    pub omega_per_pair: BTreeMap<String, f64>,
    /// (v): largest exponent on the grid that passed.
    pub alpha: Option<f64>,
    /// (v) via ball norms: level `k` to the `m` that worked.
    pub ball_levels: BTreeMap<usize, usize>,
    /// Per bounded set: one rate for all seminorms.
    pub omega_per_set: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub property: String,
    pub seminorm: String,
    pub target: String,
    pub reason: String,
    pub truncation: usize,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub verdicts: Verdicts,
    pub certificates: Certificates,
    pub witnesses: Vec<Witness>,
    /// Properties whose verdict at `J` alone differs from the `J`/`2J` one.
    pub truncation_sensitive: Vec<Property>,
    /// Beyond (i)-(vii): `∀B ∃ω ∀q`.
    pub per_set_exponential: bool,
}

/// Both truncations sampled on one grid.
pub struct Context {
    pub truncation: usize,
    pub times: Vec<f64>,
    pub at_j: Sampled,
    pub at_2j: Sampled,
    pub omegas: ScalingFamily,
    pub alphas: ScalingFamily,
}

impl Context {
    pub fn new(evo: &dyn Evolution, truncation: usize) -> Result<Self> {
        let grid = evo.time_grid(truncation)?;
        let at_j = sample(evo.instance(truncation)?.as_ref(), &grid)?;
        let at_2j = sample(evo.instance(2 * truncation)?.as_ref(), &grid)?;
        Ok(Self {
            truncation,
            times: grid.samples,
            at_j,
            at_2j,
            omegas: ScalingFamily::default_omegas(),
            alphas: ScalingFamily::default_alphas(),
        })
    }
}

struct BlockResult {
    holds: bool,
    sensitive: bool,
    certs: BTreeMap<String, f64>,
    witness: Option<Witness>,
}

fn witness(p: &str, s: &Series, reason: String, truncation: usize, times: &[f64]) -> Witness {
    Witness {
        property: p.to_string(),
        seminorm: s.seminorm.clone(),
        target: s.target.clone(),
        reason,
        truncation,
        times: times.to_vec(),
        values: s.values.clone(),
    }
}

type Grouping = fn(&Series) -> String;

fn groups(series: &[Series], key: Grouping) -> BTreeMap<String, Vec<&Series>> {
    let mut out: BTreeMap<String, Vec<&Series>> = BTreeMap::new();
    for s in series {
        out.entry(key(s)).or_default().push(s);
    }
    out
}

/// `∀ outer ∃ω ∀ inner`, outer identities given by `key`.
fn exists_omega(ctx: &Context, p: &str, j: &[Series], j2: &[Series], key: Grouping) -> BlockResult {
    let t = &ctx.times;
    let g1 = groups(j, key);
    let g2 = groups(j2, key);
    let mut res = BlockResult { holds: true, sensitive: false, certs: BTreeMap::new(), witness: None };
    let fail = |res: &mut BlockResult, w: Witness, j_alone: bool| {
        if res.holds {
            res.holds = false;
            res.witness = Some(w);
        }
        res.sensitive |= j_alone;
    };
    for (id, items2) in &g2 {
        let items1 = g1.get(id).cloned().unwrap_or_default();
        // Exponential tails at both truncations.
        let mut gated = true;
        for (s, jt) in items1.iter().map(|s| (s, ctx.truncation)).chain(items2.iter().map(|s| (s, 2 * ctx.truncation))) {
            if let Err(c) = exponential_tail(t, &s.values) {
                fail(&mut res, witness(p, s, format!("tail is not exponential: {c:?}"), jt, t), false);
                gated = false;
                break;
            }
        }
        if !gated {
            continue;
        }
        let v1: Vec<&[f64]> = items1.iter().map(|s| s.values.as_slice()).collect();
        let v2: Vec<&[f64]> = items2.iter().map(|s| s.values.as_slice()).collect();
        let w2 = omega_star(t, &v2, ctx.omegas.params());
        let w1 = if items1.is_empty() { w2 } else { omega_star(t, &v1, ctx.omegas.params()) };
        let (Some(w1), Some(w2)) = (w1, w2) else {
            let s = items2[0];
            fail(&mut res, witness(p, s, format!("no rate on the grid for {id}"), 2 * ctx.truncation, t), w1.is_some());
            continue;
        };
        if !items1.is_empty() && w2 < w1 / OMEGA_SHRINK {
            let s = items2[0];
            fail(&mut res, witness(p, s, format!("rate for {id} shrinks with truncation: {w1:.4e} at J, {w2:.4e} at 2J"), 2 * ctx.truncation, t), true);
            continue;
        }
        let mut drifted = false;
        for s1 in &items1 {
            if let Some(s2) = items2.iter().find(|s2| s2.key() == s1.key()) {
                if drifts(t, &s1.values, &s2.values) {
                    fail(&mut res, witness(p, s2, "settle time drifts with truncation".into(), 2 * ctx.truncation, t), true);
                    drifted = true;
                    break;
                }
            }
        }
        if !drifted {
            res.certs.insert(id.clone(), w1.min(w2));
        }
    }
    res
}

/// `∀` over every item, optionally scaled.
fn for_all(ctx: &Context, p: &str, j: &[Series], j2: &[Series], scaling: Option<Scaling>) -> BlockResult {
    let t = &ctx.times;
    let mut res = BlockResult { holds: true, sensitive: false, certs: BTreeMap::new(), witness: None };
    let apply = |s: &Series| match scaling {
        Some(h) => scale_series(h, t, &s.values),
        None => s.values.clone(),
    };
    for s2 in j2 {
        let y2 = apply(s2);
        let s1 = j.iter().find(|s1| s1.key() == s2.key());
        let y1 = s1.map(apply);
        let ok1 = y1.as_ref().is_none_or(|y| converges(t, y));
        let reason = if !converges(t, &y2) {
            Some("does not tend to zero on the window at 2J")
        } else if !ok1 {
            Some("does not tend to zero on the window at J")
        } else if y1.as_ref().is_some_and(|y| drifts(t, y, &y2)) {
            Some("settle time drifts with truncation")
        } else {
            None
        };
        if let Some(r) = reason {
            res.sensitive |= ok1 && r != "does not tend to zero on the window at J";
            if res.holds {
                let mut w = witness(p, s2, r.into(), 2 * ctx.truncation, t);
                w.values = y2;
                res.witness = Some(w);
            }
            res.holds = false;
        }
    }
    res
}

/// `∀k ∃m <= k + BALL_LEVEL_GAP`: `t^α` times the ball norm tends to zero
/// at both truncations without drift, for every `α`.
fn ball_superpoly(evo: &dyn Evolution, ctx: &Context) -> Option<(bool, BTreeMap<usize, usize>, Option<Witness>)> {
    let levels = evo.ball_levels(ctx.truncation);
    if levels.is_empty() {
        return None;
    }
    let t = &ctx.times;
    let series = |trunc: usize, k: usize, m: usize| -> Option<Vec<f64>> { t.iter().map(|&s| evo.ball_norm(trunc, k, m, s)).collect() };
    let mut found = BTreeMap::new();
    for &k in &levels {
        let mut ok_m = None;
        let mut last = None;
        for m in k..=k + BALL_LEVEL_GAP {
            let (a, b) = (series(ctx.truncation, k, m)?, series(2 * ctx.truncation, k, m)?);
            let pass = ctx.alphas.params().iter().all(|&al| {
                let (sa, sb) = (scale_series(Scaling::Pow(al), t, &a), scale_series(Scaling::Pow(al), t, &b));
                converges(t, &sa) && converges(t, &sb) && !drifts(t, &sa, &sb)
            });
            if pass {
                ok_m = Some(m);
                break;
            }
            last = Some(b);
        }
        match ok_m {
            Some(m) => {
                found.insert(k, m);
            }
            None => {
                let w = Witness {
                    property: Property::Superpoly.roman().into(),
                    seminorm: format!("level {k}"),
                    target: format!("unit balls of levels {k}..={}", k + BALL_LEVEL_GAP),
                    reason: "ball norm times t^alpha does not tend to zero for any m".into(),
                    truncation: 2 * ctx.truncation,
                    times: t.clone(),
                    values: last.unwrap_or_default(),
                };
                return Some((false, found, Some(w)));
            }
        }
    }
    Some((true, found, None))
}

fn by_seminorm(s: &Series) -> String {
    s.seminorm.clone()
}
fn by_target(s: &Series) -> String {
    s.target.clone()
}
fn by_pair(s: &Series) -> String {
    format!("{} | {}", s.seminorm, s.target)
}
fn single(_: &Series) -> String {
    "all".into()
}

/// Decides (i)-(vii) and the per-set variant.
pub fn certify(evo: &dyn Evolution, truncation: usize, hyp: &Hypotheses) -> Result<(Outcome, Context)> {
    let ctx = Context::new(evo, truncation)?;
    let outcome = certify_context(evo, &ctx, hyp);
    Ok((outcome, ctx))
}

pub fn certify_context(evo: &dyn Evolution, ctx: &Context, hyp: &Hypotheses) -> Outcome {
    let (sj, s2) = (&ctx.at_j, &ctx.at_2j);
    let mut v = Verdicts::all(false);
    let mut certs = Certificates::default();
    let mut witnesses = Vec::new();
    let mut sensitive = Vec::new();
    let mut record = |p: Property, r: &BlockResult, v: &mut Verdicts| {
        v.set(p, r.holds);
        if r.sensitive && !r.holds {
            sensitive.push(p);
        }
        if let Some(w) = &r.witness {
            witnesses.push(w.clone());
        }
    };

    let r1 = exists_omega(ctx, "i", &sj.set_series, &s2.set_series, single);
    record(Property::UniformExp, &r1, &mut v);
    if r1.holds {
        let w = r1.certs.get("all").copied();
        certs.omega = w;
        // (i) hands its rate to (ii) and (iii) without a new search.
        let w = w.unwrap_or(0.0);
        v.pseudo_uniform_exp = true;
        v.strong_exp = true;
        certs.omega_per_seminorm = sj.seminorms.iter().map(|q| (q.clone(), w)).collect();
        certs.omega_per_point = sj.points.iter().map(|x| (x.clone(), w)).collect();
    } else {
        let r2 = exists_omega(ctx, "ii", &sj.set_series, &s2.set_series, by_seminorm);
        record(Property::PseudoUniformExp, &r2, &mut v);
        if r2.holds {
            certs.omega_per_seminorm = r2.certs;
        }
        let r3 = exists_omega(ctx, "iii", &sj.point_series, &s2.point_series, by_target);
        record(Property::StrongExp, &r3, &mut v);
        if r3.holds {
            certs.omega_per_point = r3.certs;
        }
    }
    let r4 = exists_omega(ctx, "iv", &sj.point_series, &s2.point_series, by_pair);
    record(Property::PseudoStrongExp, &r4, &mut v);
    if r4.holds {
        certs.omega_per_pair = r4.certs;
    }

    let mut r5 = BlockResult { holds: true, sensitive: false, certs: BTreeMap::new(), witness: None };
    for &a in ctx.alphas.params() {
        let r = for_all(ctx, "v", &sj.set_series, &s2.set_series, Some(Scaling::Pow(a)));
        if !r.holds {
            r5 = r;
            break;
        }
        certs.alpha = Some(a);
    }
    if r5.holds && hyp.barrelled && hyp.exponentially_bounded {
        if let Some((ok, levels, w)) = ball_superpoly(evo, ctx) {
            certs.ball_levels = levels;
            if !ok {
                r5.holds = false;
                r5.witness = w;
                certs.alpha = None;
            }
        }
    }
    if !r5.holds {
        certs.alpha = None;
    }
    record(Property::Superpoly, &r5, &mut v);
    let r6 = for_all(ctx, "vi", &sj.set_series, &s2.set_series, None);
    record(Property::Uniform, &r6, &mut v);
    let r7 = for_all(ctx, "vii", &sj.point_series, &s2.point_series, None);
    record(Property::Strong, &r7, &mut v);

    let rb = exists_omega(ctx, "per-set", &sj.set_series, &s2.set_series, by_target);
    if rb.holds {
        certs.omega_per_set = rb.certs;
    }
    Outcome { verdicts: v, certificates: certs, witnesses, truncation_sensitive: sensitive, per_set_exponential: rb.holds }
}

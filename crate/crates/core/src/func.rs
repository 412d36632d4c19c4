//! Real functions on the line: closed-form families with analytic
//! derivatives, shifts, and grid suprema.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default half width of the evaluation window.
pub const DEFAULT_RADIUS: f64 = 20.0;
/// Boundary values above this reject the window.
pub const TAIL_TOL: f64 = 1e-10;
const SUP_GRID: usize = 2000;
const RADIUS_DOUBLINGS: usize = 6;

/// Closed-form families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `P(x - c) exp(-a (x - c)^2)`, `P` given by ascending coefficients.
    GaussPoly { coeffs: Vec<f64>, a: f64, c: f64 },
    /// The hat `f_n`: zero off `[1-2/n, 1)`, peak `n` at `1-1/n`.
    Hat { n: usize },
    /// Piecewise-linear tent of the given height on `[c-w, c+w]`.
    Tent { c: f64, w: f64, height: f64 },
    /// `height` on `[lo, hi]`, zero elsewhere.
    Indicator { lo: f64, hi: f64, height: f64 },
    Constant(f64),
    /// Linear interpolation; constant beyond the end knots.
    PiecewiseLinear { knots: Vec<f64>, values: Vec<f64> },
}

impl Family {
    pub fn label(&self) -> String {
        match self {
            Family::GaussPoly { coeffs, a, c } => format!("gauss-poly{coeffs:?}[a={a},c={c}]"),
            Family::Hat { n } => format!("hat[n={n}]"),
            Family::Tent { c, w, height } => format!("tent[c={c},w={w},h={height}]"),
            Family::Indicator { lo, hi, height } => format!("indicator[{lo},{hi}]*{height}"),
            Family::Constant(v) => format!("constant[{v}]"),
            Family::PiecewiseLinear { knots, .. } => format!("piecewise-linear[{} knots]", knots.len()),
        }
    }

    /// Closed support, when bounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Family::Hat { n } => Some((1.0 - 2.0 / *n as f64, 1.0)),
            Family::Tent { c, w, .. } => Some((c - w, c + w)),
            Family::Indicator { lo, hi, .. } => Some((*lo, *hi)),
            _ => None,
        }
    }

    /// Points where the function or a derivative jumps.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Family::Hat { n } => {
                let n = *n as f64;
                vec![1.0 - 2.0 / n, 1.0 - 1.0 / n, 1.0]
            }
            Family::Tent { c, w, .. } => vec![c - w, *c, c + w],
            Family::Indicator { lo, hi, .. } => vec![*lo, *hi],
            Family::PiecewiseLinear { knots, .. } => knots.clone(),
            _ => vec![],
        }
    }

    /// Whether derivatives of every order are available in closed form.
    pub fn smooth(&self) -> bool {
        matches!(self, Family::GaussPoly { .. } | Family::Constant(_))
    }

    /// `n`-th derivative at `x`. Piecewise families give the one-sided
    /// derivative from the right for `n = 1` and zero beyond.
    pub fn deriv(&self, x: f64, n: usize) -> f64 {
        match self {
            Family::GaussPoly { coeffs, a, c } => gauss_poly_deriv(coeffs, *a, x - c, n),
            Family::Constant(v) => {
                if n == 0 {
                    *v
                } else {
                    0.0
                }
            }
            Family::Hat { n: m } => {
                let m = *m as f64;
                let (l, p, r) = (1.0 - 2.0 / m, 1.0 - 1.0 / m, 1.0);
                match n {
                    0 if (l..p).contains(&x) => m * m * (x - l),
                    0 if (p..r).contains(&x) => -m * m * (x - r),
                    1 if (l..p).contains(&x) => m * m,
                    1 if (p..r).contains(&x) => -m * m,
                    _ => 0.0,
                }
            }
            Family::Tent { c, w, height } => {
                let d = x - c;
                if d.abs() >= *w {
                    return 0.0;
                }
                match n {
                    0 => height * (1.0 - d.abs() / w),
                    1 => -height * d.signum() / w,
                    _ => 0.0,
                }
            }
            Family::Indicator { lo, hi, height } => {
                if n == 0 && (*lo..=*hi).contains(&x) {
                    *height
                } else {
                    0.0
                }
            }
            Family::PiecewiseLinear { knots, values } => piecewise_linear(knots, values, x, n),
        }
    }
}

/// Derivatives of `P(y) e^{-a y^2}`: writing the `n`-th derivative as
/// `P_n(y) e^{-a y^2}`, `P_{n+1} = P_n' - 2 a y P_n`.
fn gauss_poly_deriv(coeffs: &[f64], a: f64, y: f64, n: usize) -> f64 {
    let mut p = coeffs.to_vec();
    for _ in 0..n {
        let mut next = vec![0.0; p.len() + 1];
        for (i, &ci) in p.iter().enumerate() {
            if i > 0 {
                next[i - 1] += i as f64 * ci;
            }
            next[i + 1] -= 2.0 * a * ci;
        }
        p = next;
    }
    let poly = p.iter().rev().fold(0.0, |acc, &ci| acc * y + ci);
    poly * (-a * y * y).exp()
}

fn piecewise_linear(knots: &[f64], values: &[f64], x: f64, n: usize) -> f64 {
    if knots.is_empty() {
        return 0.0;
    }
    let last = knots.len() - 1;
    if x <= knots[0] || x >= knots[last] {
        let v = if x <= knots[0] { values[0] } else { values[last] };
        return if n == 0 { v } else { 0.0 };
    }
    let i = knots.partition_point(|&k| k <= x) - 1;
    let slope = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
    match n {
        0 => values[i] + slope * (x - knots[i]),
        1 => slope,
        _ => 0.0,
    }
}

/// Where a shifted function lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftVariant {
    /// `C(R)`: `f(s - t)`.
    FullLine,
    /// Functions on `(-inf, 0]`: `f(s - t)` for `s <= 0`.
    LeftHalf,
    /// Functions on `[0, inf)` with `f(0) = 0`: `f(s - t)` for `s >= t`,
    /// zero otherwise.
    RightHalfZero,
}

impl ShiftVariant {
    pub fn domain(self) -> (f64, f64) {
        match self {
            ShiftVariant::FullLine => (f64::NEG_INFINITY, f64::INFINITY),
            ShiftVariant::LeftHalf => (f64::NEG_INFINITY, 0.0),
            ShiftVariant::RightHalfZero => (0.0, f64::INFINITY),
        }
    }
}

/// A family member translated right by `shift` on a domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub family: Family,
    pub shift: f64,
    pub variant: ShiftVariant,
}

impl GridFunction {
    pub fn new(family: Family, variant: ShiftVariant) -> Self {
        Self { family, shift: 0.0, variant }
    }

    pub fn on_line(family: Family) -> Self {
        Self::new(family, ShiftVariant::FullLine)
    }

    pub fn label(&self) -> String {
        self.family.label()
    }

    /// `n`-th derivative at `s`; zero off the domain.
    pub fn deriv(&self, s: f64, n: usize) -> f64 {
        let (lo, hi) = self.variant.domain();
        if s < lo || s > hi {
            return 0.0;
        }
        let y = s - self.shift;
        if self.variant == ShiftVariant::RightHalfZero && y < 0.0 {
            return 0.0;
        }
        self.family.deriv(y, n)
    }

    pub fn value(&self, s: f64) -> f64 {
        self.deriv(s, 0)
    }

    /// Support intersected with the domain; `None` when unbounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        let (lo, hi) = self.variant.domain();
        let (a, b) = match self.family.support() {
            Some((a, b)) => (a + self.shift, b + self.shift),
            None if lo.is_finite() && hi.is_finite() => (lo, hi),
            None => return None,
        };
        Some((a.max(lo), b.min(hi)))
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.family.breakpoints().into_iter().map(|b| b + self.shift).collect();
        let (lo, hi) = self.variant.domain();
        v.extend([lo, hi, self.shift].into_iter().filter(|b| b.is_finite()));
        v
    }
}

/// Right shift by `t`.
pub fn shift_apply(t: f64, f: &GridFunction) -> Result<GridFunction> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(GridFunction { shift: f.shift + t, ..f.clone() })
}

/// Grid maximum of `g` on `[lo, hi]`, sampled uniformly plus at `extra`,
/// refined by golden-section search around the best sample.
pub fn grid_sup<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, extra: &[f64]) -> f64 {
    if hi < lo {
        return 0.0;
    }
    let mut pts: Vec<f64> = (0..=SUP_GRID).map(|i| lo + (hi - lo) * i as f64 / SUP_GRID as f64).collect();
    for &e in extra {
        if (lo..=hi).contains(&e) {
            pts.extend([e, (e - 1e-12).max(lo), (e + 1e-12).min(hi)]);
        }
    }
    let mut best = (lo, f64::NEG_INFINITY);
    for &x in &pts {
        let v = g(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let h = (hi - lo) / SUP_GRID as f64;
    let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        let (gc, gd) = (g(c), g(d));
        best.1 = best.1.max(gc).max(gd);
        if gc >= gd {
            b = d;
        } else {
            a = c;
        }
    }
    best.1.max(0.0)
}

/// A real function with derivative access, as seen by the seminorms.
pub trait Profile {
    /// `n`-th derivative at `x`.
    fn deriv(&self, x: f64, n: usize) -> f64;
    /// Highest derivative order available.
    fn max_order(&self) -> usize;
    /// Bounded support, when known.
    fn support(&self) -> Option<(f64, f64)>;
    /// Where the mass sits; the evaluation window is centred here.
    fn center(&self) -> f64;
    fn breakpoints(&self) -> Vec<f64>;
    /// Whether the function is nonzero at infinity.
    fn persistent(&self) -> bool {
        false
    }
    fn label(&self) -> String;
}

impl Profile for GridFunction {
    fn deriv(&self, x: f64, n: usize) -> f64 {
        GridFunction::deriv(self, x, n)
    }
    fn max_order(&self) -> usize {
        if self.family.smooth() {
            usize::MAX
        } else {
            0
        }
    }
    fn support(&self) -> Option<(f64, f64)> {
        GridFunction::support(self)
    }
    fn center(&self) -> f64 {
        match &self.family {
            Family::GaussPoly { c, .. } => c + self.shift,
            _ => self.shift,
        }
    }
    fn breakpoints(&self) -> Vec<f64> {
        GridFunction::breakpoints(self)
    }
    fn persistent(&self) -> bool {
        match &self.family {
            Family::Constant(v) => *v != 0.0,
            Family::PiecewiseLinear { values, .. } => values.first().is_some_and(|v| *v != 0.0) || values.last().is_some_and(|v| *v != 0.0),
            _ => false,
        }
    }
    fn label(&self) -> String {
        GridFunction::label(self)
    }
}

/// `sup_{s in [lo, hi]} w(s) |f^{(n)}(s)|` over the part of the window
/// where `f` lives. An unbounded window on an unboundedly supported `f`
/// starts at `DEFAULT_RADIUS` around its centre and doubles until the
/// boundary values fall below `TAIL_TOL`.
pub fn weighted_sup<P: Profile + ?Sized, W: Fn(f64) -> f64>(f: &P, n: usize, lo: f64, hi: f64, w: W) -> Result<f64> {
    if n > f.max_order() {
        return Err(Error::Incompatible(format!("{} has no derivative of order {n}", f.label())));
    }
    let g = |s: f64| w(s) * f.deriv(s, n).abs();
    let bps = f.breakpoints();
    if let Some((a, b)) = f.support() {
        return Ok(grid_sup(g, a.max(lo), b.min(hi), &bps));
    }
    if lo.is_finite() && hi.is_finite() {
        return Ok(grid_sup(g, lo, hi, &bps));
    }
    let c = f.center();
    let mut r = DEFAULT_RADIUS;
    for _ in 0..=RADIUS_DOUBLINGS {
        let a = lo.max(c - r);
        let b = hi.min(c + r);
        let boundary = [a, b].iter().filter(|x| (*x - c).abs() >= r * 0.5).map(|&x| g(x)).fold(0.0, f64::max);
        if boundary <= TAIL_TOL && !f.persistent() {
            return Ok(grid_sup(g, a, b, &bps));
        }
        r *= 2.0;
    }
    Err(Error::RadiusTooSmall { radius: r, boundary: g(c + r) })
}

/// `max_{k,n <= order} sup_x |x^k f^{(n)}(x)|`.
pub fn schwartz_seminorm<P: Profile + ?Sized>(f: &P, order: usize) -> Result<f64> {
    let mut out: f64 = 0.0;
    for n in 0..=order {
        for k in 0..=order {
            let v = weighted_sup(f, n, f64::NEG_INFINITY, f64::INFINITY, |x| x.abs().powi(k as i32))?;
            out = out.max(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> GridFunction {
        GridFunction::on_line(Family::GaussPoly { coeffs: vec![1.0], a: 1.0, c: 0.0 })
    }

    #[test]
    fn hat_knots() {
        for n in [2usize, 3, 10, 100] {
            let h = Family::Hat { n };
            let nf = n as f64;
            assert_eq!(h.deriv(1.0 - 2.0 / nf, 0), 0.0);
            assert!((h.deriv(1.0 - 1.0 / nf, 0) - nf).abs() < 1e-9 * nf);
            assert_eq!(h.deriv(1.0, 0), 0.0);
        }
    }

    #[test]
    fn hat_shift_witness() {
        for n in [2usize, 5, 50, 200] {
            let f = GridFunction::new(Family::Hat { n }, ShiftVariant::RightHalfZero);
            let g = shift_apply(1.0 / n as f64, &f).unwrap();
            assert!((g.value(1.0) - n as f64).abs() < 1e-9 * n as f64);
        }
    }

    #[test]
    fn right_half_annihilates() {
        let f = GridFunction::new(Family::Tent { c: 1.0, w: 1.0, height: 1.0 }, ShiftVariant::RightHalfZero);
        let g = shift_apply(3.0, &f).unwrap();
        for s in [0.0, 1.0, 2.0, 3.0] {
            assert_eq!(g.value(s), 0.0);
        }
        assert_eq!(shift_apply(0.0, &f).unwrap(), f);
        assert!(shift_apply(-1.0, &f).is_err());
    }

    #[test]
    fn gauss_derivatives_match_differences() {
        let f = Family::GaussPoly { coeffs: vec![0.5, -1.0, 2.0], a: 0.7, c: 0.3 };
        let h = 1e-4;
        for x in [-2.0, -0.5, 0.0, 0.4, 1.7] {
            for n in 0..3 {
                let fd = (f.deriv(x + h, n) - f.deriv(x - h, n)) / (2.0 * h);
                assert!((fd - f.deriv(x, n + 1)).abs() < 1e-6, "x={x} n={n}");
            }
        }
    }

    #[test]
    fn schwartz_examples() {
        assert!((schwartz_seminorm(&gauss(), 0).unwrap() - 1.0).abs() < 1e-12);
        assert!((schwartz_seminorm(&gauss(), 1).unwrap() - 1.0).abs() < 1e-12);
        let df = weighted_sup(&gauss(), 1, f64::NEG_INFINITY, f64::INFINITY, |_| 1.0).unwrap();
        assert!((df - (2.0 / std::f64::consts::E).sqrt()).abs() < 1e-10);
        let xf = weighted_sup(&gauss(), 0, f64::NEG_INFINITY, f64::INFINITY, |x| x.abs()).unwrap();
        assert!((xf - (2.0 * std::f64::consts::E).powf(-0.5)).abs() < 1e-10);
        for t in [0.5, 7.0, 100.0] {
            let g = shift_apply(t, &gauss()).unwrap();
            assert!((schwartz_seminorm(&g, 0).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(schwartz_seminorm(&GridFunction::on_line(Family::Constant(1.0)), 0).is_err());
    }

    #[test]
    fn gaussian_tail_bound() {
        for k in 1..=6 {
            for t in [0.1, 1.0, 10.0] {
                let g = GridFunction::on_line(Family::GaussPoly { coeffs: vec![1.0], a: 2.0 * t, c: 0.0 });
                let sup = weighted_sup(&g, 0, f64::NEG_INFINITY, f64::INFINITY, |x| x.abs().powi(k)).unwrap();
                let kf = k as f64;
                let oracle = (kf / (4.0 * std::f64::consts::E * t)).powf(kf / 2.0);
                assert!((sup - oracle).abs() <= 1e-9 * oracle);
                assert!(sup <= t.powf(-kf / 2.0) * (kf / (2.0 * std::f64::consts::E)).powf(kf / 2.0));
            }
        }
    }
}

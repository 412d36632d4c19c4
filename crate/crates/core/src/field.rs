//! Coefficient fields `q(x)` and the transport semigroup
//! `[T(t)f](x) = exp(∫_x^{x+t} q) f(x+t)`, plus pointwise multiplication
//! semigroups `e^{q(x) t} f(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{grid_sup, GridFunction, Profile};
use crate::quad;

/// Quadrature tolerance for integrating factors without antiderivative.
pub const FACTOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarField {
    Constant(f64),
    /// `sin x - 1`
    SinMinusOne,
    /// `-1/(1+x^2)`
    NegLorentz,
    /// `-1/|x|` for `|x| >= 1`, completed on `(-1, 1)` by the even quartic
    /// `-15/8 + 5/4 x^2 - 3/8 x^4` that matches value and two derivatives.
    InverseAbs,
}

impl ScalarField {
    pub fn label(&self) -> String {
        match self {
            ScalarField::Constant(c) => format!("constant[{c}]"),
            ScalarField::SinMinusOne => "sin(x)-1".into(),
            ScalarField::NegLorentz => "-1/(1+x^2)".into(),
            ScalarField::InverseAbs => "-1/|x| (quartic core)".into(),
        }
    }

    /// `n`-th derivative of `q`, `n <= 2`.
    pub fn deriv(&self, x: f64, n: usize) -> f64 {
        match (self, n) {
            (ScalarField::Constant(c), 0) => *c,
            (ScalarField::Constant(_), _) => 0.0,
            (ScalarField::SinMinusOne, 0) => x.sin() - 1.0,
            (ScalarField::SinMinusOne, 1) => x.cos(),
            (ScalarField::SinMinusOne, _) => -x.sin(),
            (ScalarField::NegLorentz, 0) => -1.0 / (1.0 + x * x),
            (ScalarField::NegLorentz, 1) => 2.0 * x / (1.0 + x * x).powi(2),
            (ScalarField::NegLorentz, _) => (2.0 - 6.0 * x * x) / (1.0 + x * x).powi(3),
            (ScalarField::InverseAbs, n) => {
                let a = x.abs();
                let s = x.signum();
                if a >= 1.0 {
                    match n {
                        0 => -1.0 / a,
                        1 => s / (a * a),
                        _ => -2.0 / (a * a * a),
                    }
                } else {
                    match n {
                        0 => -15.0 / 8.0 + 1.25 * x * x - 0.375 * x.powi(4),
                        1 => 2.5 * x - 1.5 * x.powi(3),
                        _ => 2.5 - 4.5 * x * x,
                    }
                }
            }
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.deriv(x, 0)
    }

    /// Closed-form antiderivative, when one is implemented.
    pub fn antiderivative(&self, x: f64) -> Option<f64> {
        match self {
            ScalarField::Constant(c) => Some(c * x),
            ScalarField::SinMinusOne => Some(-x.cos() - x),
            ScalarField::NegLorentz => Some(-x.atan()),
            ScalarField::InverseAbs => None,
        }
    }

    /// Declared `sup |q|`.
    pub fn sup_abs(&self) -> f64 {
        match self {
            ScalarField::Constant(c) => c.abs(),
            ScalarField::SinMinusOne => 2.0,
            ScalarField::NegLorentz => 1.0,
            ScalarField::InverseAbs => 15.0 / 8.0,
        }
    }

    /// Declared `q <= 0`.
    pub fn nonpositive(&self) -> bool {
        match self {
            ScalarField::Constant(c) => *c <= 0.0,
            _ => true,
        }
    }

    /// Checks the declared bound and sign by sampling on `[-r, r]`.
    pub fn verify_declared(&self, r: f64, samples: usize) -> Result<()> {
        for i in 0..=samples {
            let x = -r + 2.0 * r * i as f64 / samples as f64;
            let v = self.value(x);
            if v.abs() > self.sup_abs() * (1.0 + 1e-12) {
                return Err(Error::Invariant(format!("|q({x})| = {} exceeds declared {}", v.abs(), self.sup_abs())));
            }
            if self.nonpositive() && v > 0.0 {
                return Err(Error::Invariant(format!("q({x}) = {v} > 0")));
            }
        }
        Ok(())
    }

    /// `∫_a^b q`.
    pub fn window_integral(&self, a: f64, b: f64) -> Result<f64> {
        if let (Some(qa), Some(qb)) = (self.antiderivative(a), self.antiderivative(b)) {
            return Ok(qb - qa);
        }
        let mut total = 0.0;
        // Split at the kinks of the piecewise definition.
        let mut mid: Vec<f64> = [-1.0, 1.0].into_iter().filter(|&c| c > a.min(b) && c < a.max(b)).collect();
        if a > b {
            mid.reverse();
        }
        let mut cuts = vec![a];
        cuts.extend(mid);
        cuts.push(b);
        for w in cuts.windows(2) {
            total += quad::integrate(|x| self.value(x), w[0], w[1], FACTOR_TOL, FACTOR_TOL)?.value;
        }
        Ok(total)
    }
}

/// `T(t)f` for the transport semigroup, with derivatives up to order 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Transported {
    pub q: ScalarField,
    pub t: f64,
    pub f: GridFunction,
}

impl Transported {
    fn factor(&self, x: f64) -> f64 {
        self.q.window_integral(x, x + self.t).map(f64::exp).unwrap_or(f64::NAN)
    }
}

impl Profile for Transported {
    fn deriv(&self, x: f64, n: usize) -> f64 {
        let g = self.factor(x);
        let h = |k| self.f.deriv(x + self.t, k);
        let p1 = self.q.deriv(x + self.t, 0) - self.q.deriv(x, 0);
        match n {
            0 => g * h(0),
            1 => g * (p1 * h(0) + h(1)),
            2 => {
                let p2 = self.q.deriv(x + self.t, 1) - self.q.deriv(x, 1);
                g * ((p2 + p1 * p1) * h(0) + 2.0 * p1 * h(1) + h(2))
            }
            _ => f64::NAN,
        }
    }
    fn max_order(&self) -> usize {
        self.f.max_order().min(2)
    }
    fn support(&self) -> Option<(f64, f64)> {
        GridFunction::support(&self.f).map(|(a, b)| (a - self.t, b - self.t))
    }
    fn center(&self) -> f64 {
        self.f.center() - self.t
    }
    fn breakpoints(&self) -> Vec<f64> {
        GridFunction::breakpoints(&self.f).into_iter().map(|b| b - self.t).collect()
    }
    fn persistent(&self) -> bool {
        self.f.persistent()
    }
    fn label(&self) -> String {
        format!("transport[{}]({})", self.q.label(), self.f.label())
    }
}

/// The transport semigroup applied to `f`.
pub fn transport_apply(q: &ScalarField, t: f64, f: &GridFunction) -> Result<Transported> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    // Surface quadrature failures here rather than as NaN later.
    q.window_integral(0.0, t)?;
    Ok(Transported { q: q.clone(), t, f: f.clone() })
}

/// `e^{q(x) t} f(x)`, derivatives up to order 2.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplied {
    pub q: ScalarField,
    pub t: f64,
    pub f: GridFunction,
}

impl Profile for Multiplied {
    fn deriv(&self, x: f64, n: usize) -> f64 {
        let t = self.t;
        let g = (self.q.value(x) * t).exp();
        let q1 = self.q.deriv(x, 1) * t;
        let h = |k| self.f.deriv(x, k);
        match n {
            0 => g * h(0),
            1 => g * (q1 * h(0) + h(1)),
            2 => g * ((self.q.deriv(x, 2) * t + q1 * q1) * h(0) + 2.0 * q1 * h(1) + h(2)),
            _ => f64::NAN,
        }
    }
    fn max_order(&self) -> usize {
        self.f.max_order().min(2)
    }
    fn support(&self) -> Option<(f64, f64)> {
        GridFunction::support(&self.f)
    }
    fn center(&self) -> f64 {
        self.f.center()
    }
    fn breakpoints(&self) -> Vec<f64> {
        let mut b = GridFunction::breakpoints(&self.f);
        b.extend([-1.0, 1.0]);
        b
    }
    fn label(&self) -> String {
        format!("multiply[{}]({})", self.q.label(), self.f.label())
    }
}

/// `μ_q(t)` with its localization flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub value: f64,
    /// The window integral still increases toward the edge of the search
    /// radius; `value` is then the analytic limit when one is known.
    pub not_localized: bool,
}

/// Largest edge excess, relative to the interior maximum, that still counts
/// as localized.
const LOCALIZE_TOL: f64 = 1e-6;

/// `sup_x ∫_x^{x+t} q` over `[-r, r]`: grid maximum refined by golden-section search.
pub fn mu_q(q: &ScalarField, t: f64, r: f64) -> Result<MuEstimate> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(MuEstimate { value: 0.0, not_localized: false });
    }
    if let ScalarField::Constant(c) = q {
        return Ok(MuEstimate { value: c * t, not_localized: false });
    }
    let w = |x: f64| q.window_integral(x, x + t).unwrap_or(f64::NEG_INFINITY);
    let value = grid_sup_signed(&w, -r, r);
    let inner = grid_sup_signed(&w, -r / 2.0, r / 2.0);
    let edge = w(r).max(w(-r));
    // Still rising toward the boundary: the supremum is not attained inside.
    let not_localized = value - inner > LOCALIZE_TOL * t || edge >= value - LOCALIZE_TOL * t;
    if not_localized {
        if let ScalarField::NegLorentz | ScalarField::InverseAbs = q {
            // q < 0 and q -> 0 at infinity: the window integrals tend to 0.
            return Ok(MuEstimate { value: 0.0, not_localized: true });
        }
    }
    Ok(MuEstimate { value, not_localized })
}

fn grid_sup_signed<F: Fn(f64) -> f64>(w: &F, lo: f64, hi: f64) -> f64 {
    let shift = 1e6;
    grid_sup(|x| w(x) + shift, lo, hi, &[]) - shift
}

/// `min |μ_q(t)|/t` over the last decade of a log grid ending at `t_max`.
pub fn mu_rate(q: &ScalarField, t_max: f64) -> Result<(f64, bool)> {
    let mut out = f64::INFINITY;
    let mut flag = false;
    for i in 0..=10 {
        let t = t_max * 10f64.powf(-(i as f64) / 10.0);
        let m = mu_q(q, t, 4.0 * t.max(10.0))?;
        flag |= m.not_localized;
        out = out.min(m.value.abs() / t);
    }
    Ok((out, flag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{schwartz_seminorm, Family};

    fn gauss() -> GridFunction {
        GridFunction::on_line(Family::GaussPoly { coeffs: vec![1.0], a: 1.0, c: 0.0 })
    }

    #[test]
    fn declared_bounds_hold() {
        for q in [ScalarField::Constant(-1.0), ScalarField::SinMinusOne, ScalarField::NegLorentz, ScalarField::InverseAbs] {
            q.verify_declared(50.0, 20001).unwrap();
        }
    }

    #[test]
    fn inverse_abs_is_c2() {
        let q = ScalarField::InverseAbs;
        for n in 0..3 {
            for x in [-1.0f64, 1.0] {
                let below = q.deriv(x * (1.0 - 1e-12), n);
                let above = q.deriv(x * (1.0 + 1e-12), n);
                assert!((below - above).abs() < 1e-9, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn transport_examples() {
        let f = gauss();
        let z = transport_apply(&ScalarField::Constant(0.0), 1.5, &f).unwrap();
        let m = transport_apply(&ScalarField::Constant(-1.0), 1.5, &f).unwrap();
        for x in [-3.0, -1.5, 0.0, 0.7] {
            assert!((z.deriv(x, 0) - f.value(x + 1.5)).abs() < 1e-15);
            assert!((m.deriv(x, 0) - (-1.5f64).exp() * f.value(x + 1.5)).abs() < 1e-15);
        }
        let q = ScalarField::SinMinusOne;
        for (x, t) in [(0.3, 2.0), (-4.0, 7.5), (10.0, 0.1)] {
            let fac = q.window_integral(x, x + t).unwrap().exp();
            let oracle = (f64::cos(x) - f64::cos(x + t) - t).exp();
            assert!((fac - oracle).abs() < 1e-13);
        }
        assert!(transport_apply(&q, -1.0, &f).is_err());
    }

    #[test]
    fn quadrature_factor_matches_pieces() {
        let q = ScalarField::InverseAbs;
        let v = q.window_integral(-2.0, 3.0).unwrap();
        let oracle = -(2f64.ln()) - 2.0 * (15.0 / 8.0 - 5.0 / 12.0 + 3.0 / 40.0) - 3f64.ln();
        assert!((v - oracle).abs() < 1e-10);
    }

    #[test]
    fn transport_evolution_law() {
        let f = gauss();
        for q in [ScalarField::SinMinusOne, ScalarField::NegLorentz] {
            let (s, t) = (0.7, 2.3);
            let st = transport_apply(&q, s + t, &f).unwrap();
            for x in [-3.0, -1.0, 0.5] {
                // T(s)T(t)f(x) = exp(∫_x^{x+s} q) [T(t)f](x+s)
                let inner = transport_apply(&q, t, &f).unwrap();
                let two = q.window_integral(x, x + s).unwrap().exp() * inner.deriv(x + s, 0);
                assert!((two - st.deriv(x, 0)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn transport_derivatives_match_differences() {
        let tr = transport_apply(&ScalarField::SinMinusOne, 1.3, &gauss()).unwrap();
        let h = 1e-4;
        for x in [-2.0, -1.3, 0.2] {
            for n in 0..2 {
                let fd = (tr.deriv(x + h, n) - tr.deriv(x - h, n)) / (2.0 * h);
                assert!((fd - tr.deriv(x, n + 1)).abs() < 1e-6);
            }
        }
        let mu = Multiplied { q: ScalarField::InverseAbs, t: 2.0, f: gauss() };
        for x in [-2.5, -0.4, 0.3, 1.6] {
            for n in 0..2 {
                let fd = (mu.deriv(x + h, n) - mu.deriv(x - h, n)) / (2.0 * h);
                assert!((fd - mu.deriv(x, n + 1)).abs() < 1e-6);
            }
        }
        assert!(schwartz_seminorm(&tr, 2).unwrap() > 0.0);
    }

    #[test]
    fn mu_examples() {
        let m = mu_q(&ScalarField::Constant(-1.0), 3.0, 20.0).unwrap();
        assert_eq!(m.value, -3.0);
        let q = ScalarField::SinMinusOne;
        for t in [0.5, 1.0, 3.0, 10.0, 31.4, 50.0] {
            let m = mu_q(&q, t, 20.0).unwrap();
            let oracle = 2.0 * (t / 2.0).sin().abs() - t;
            assert!((m.value - oracle).abs() < 1e-6, "t={t}");
            assert!(m.value <= 2.0 - t + 1e-12);
        }
        let m = mu_q(&ScalarField::NegLorentz, 5.0, 40.0).unwrap();
        assert!(m.not_localized && m.value == 0.0);
        assert!(mu_rate(&q, 500.0).unwrap().0 >= 0.9);
        let (r, flag) = mu_rate(&ScalarField::NegLorentz, 500.0).unwrap();
        assert!(r == 0.0 && flag);
    }

    #[test]
    fn mu_subadditive() {
        let q = ScalarField::SinMinusOne;
        for (s, t) in [(0.5, 1.0), (2.0, 3.5), (7.0, 0.3)] {
            let a = mu_q(&q, s + t, 20.0).unwrap().value;
            let b = mu_q(&q, s, 20.0).unwrap().value + mu_q(&q, t, 20.0).unwrap().value;
            assert!(a <= b + 1e-9);
        }
    }
}

//! The scaled Gaussian semigroup on the Fourier side:
//! `[T̂(t)f](x) = e^{qt - x^2 t} f(x)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{Family, Profile};
use crate::quad;

/// Quadrature tolerance for Sobolev seminorms.
pub const SOBOLEV_TOL: f64 = 1e-10;
const START_RADIUS: f64 = 8.0;
const RADIUS_DOUBLINGS: usize = 8;

/// A Fourier-side profile `scale * e^{-x^2 time} f̂(x)` with the constant
/// `q` of the perturbed heat equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierProfile {
    pub f_hat: Family,
    pub q: Complex64,
    pub scale: Complex64,
    pub time: f64,
}

impl FourierProfile {
    pub fn new(f_hat: Family, q: Complex64) -> Self {
        Self { f_hat, q, scale: Complex64::new(1.0, 0.0), time: 0.0 }
    }

    /// The Gaussian `e^{-a x^2}` merged with the multiplier, when `f̂` is
    /// centred Gauss-polynomial.
    fn merged(&self) -> Option<Family> {
        match &self.f_hat {
            Family::GaussPoly { coeffs, a, c } if *c == 0.0 => Some(Family::GaussPoly { coeffs: coeffs.clone(), a: a + self.time, c: 0.0 }),
            _ => None,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.deriv(x, 0)
    }

    fn bounded_support(&self) -> Option<(f64, f64)> {
        self.f_hat.support()
    }
}

impl Profile for FourierProfile {
    /// Derivatives of `|scale| e^{-x^2 time} f̂(x)`; `scale` is constant in `x`.
    fn deriv(&self, x: f64, n: usize) -> f64 {
        let s = self.scale.norm();
        match self.merged() {
            Some(g) => s * g.deriv(x, n),
            None if n == 0 => s * (-x * x * self.time).exp() * self.f_hat.deriv(x, 0),
            None => f64::NAN,
        }
    }
    fn max_order(&self) -> usize {
        if self.merged().is_some() {
            usize::MAX
        } else {
            0
        }
    }
    fn support(&self) -> Option<(f64, f64)> {
        self.bounded_support()
    }
    fn center(&self) -> f64 {
        0.0
    }
    fn breakpoints(&self) -> Vec<f64> {
        self.f_hat.breakpoints()
    }
    fn persistent(&self) -> bool {
        matches!(self.f_hat, Family::Constant(v) if v != 0.0) && self.time == 0.0
    }
    fn label(&self) -> String {
        format!("heat[q={}]({})", self.q, self.f_hat.label())
    }
}

/// `e^{qt - x^2 t}` at `x`.
pub fn heat_multiplier(q: Complex64, x: f64, t: f64) -> Complex64 {
    (q * t - x * x * t).exp()
}

pub fn heat_apply_fourier(p: &FourierProfile, t: f64) -> Result<FourierProfile> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    Ok(FourierProfile { scale: p.scale * (p.q * t).exp(), time: p.time + t, ..p.clone() })
}

/// `(∫ (1+x^2)^n |f(x)|^2 dx)^{1/2}`.
pub fn sobolev_fourier_seminorm(p: &FourierProfile, n: usize) -> Result<f64> {
    let g = |x: f64| (1.0 + x * x).powi(n as i32) * p.value(x).powi(2);
    if let Some((a, b)) = p.bounded_support() {
        let r = quad::integrate(g, a, b, 0.0, SOBOLEV_TOL)?;
        return Ok(r.value.max(0.0).sqrt());
    }
    let mut r = START_RADIUS;
    for _ in 0..=RADIUS_DOUBLINGS {
        let boundary = g(r).max(g(-r));
        if boundary.is_finite() && boundary <= SOBOLEV_TOL * 1e-3 {
            let mut total = 0.0;
            for w in [-r, -1.0, 0.0, 1.0, r].windows(2) {
                total += quad::integrate(g, w[0], w[1], 0.0, SOBOLEV_TOL)?.value;
            }
            return Ok(total.max(0.0).sqrt());
        }
        r *= 2.0;
    }
    Err(Error::RadiusTooSmall { radius: r, boundary: g(r) })
}

/// `f_k = k^{1/2} 1_{[0,1/k]}`.
pub fn indicator_member(k: usize) -> Family {
    Family::Indicator { lo: 0.0, hi: 1.0 / k as f64, height: (k as f64).sqrt() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::schwartz_seminorm;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn multiplier_examples() {
        assert!((heat_multiplier(c(0.0), 1.0, 1.0).re - (-1f64).exp()).abs() < 1e-15);
        for (x, s, t) in [(0.3, 0.5, 1.2), (2.0, 3.0, 0.1)] {
            let q = Complex64::new(-0.4, 2.0);
            let lhs = heat_multiplier(q, x, s) * heat_multiplier(q, x, t);
            assert!((lhs - heat_multiplier(q, x, s + t)).norm() < 1e-14);
        }
        let p = FourierProfile::new(Family::GaussPoly { coeffs: vec![1.0, 0.5], a: 1.0, c: 0.0 }, c(-1.0));
        let p0 = heat_apply_fourier(&p, 0.0).unwrap();
        for x in [-1.0, 0.0, 2.0] {
            assert_eq!(p0.value(x), p.value(x));
        }
        assert!(heat_apply_fourier(&p, -0.1).is_err());
    }

    #[test]
    fn indicator_seminorms() {
        let one = FourierProfile::new(Family::Indicator { lo: 0.0, hi: 1.0, height: 1.0 }, c(0.0));
        assert!((sobolev_fourier_seminorm(&one, 0).unwrap() - 1.0).abs() < 1e-12);
        for k in [1usize, 2, 10, 100] {
            let f = FourierProfile::new(indicator_member(k), c(0.0));
            for n in 0..5 {
                let v = sobolev_fourier_seminorm(&f, n).unwrap();
                assert!(v * v <= 2f64.powi(n as i32) + 1e-12);
            }
        }
    }

    /// `k ∫_0^{1/k} e^{-k x^2} dx` by its Taylor series.
    fn witness_series(k: f64) -> f64 {
        let u = 1.0 / k;
        let mut term = u;
        let mut sum = 0.0;
        for m in 0..60 {
            sum += term / (2 * m + 1) as f64;
            term *= -k * u * u / (m + 1) as f64;
        }
        k * sum
    }

    #[test]
    fn witness_number() {
        for k in [2usize, 10, 100] {
            let f = FourierProfile::new(indicator_member(k), c(0.0));
            let v = sobolev_fourier_seminorm(&heat_apply_fourier(&f, k as f64 / 2.0).unwrap(), 0).unwrap();
            assert!(v * v >= 1.0 - (-1f64).exp());
            assert!((v * v - witness_series(k as f64)).abs() < 1e-8);
        }
    }

    #[test]
    fn contraction_on_sobolev() {
        let p = FourierProfile::new(Family::GaussPoly { coeffs: vec![1.0], a: 0.5, c: 0.0 }, Complex64::new(-0.3, 1.0));
        for n in 0..4 {
            let base = sobolev_fourier_seminorm(&p, n).unwrap();
            for t in [0.1, 1.0, 5.0, 20.0] {
                let v = sobolev_fourier_seminorm(&heat_apply_fourier(&p, t).unwrap(), n).unwrap();
                assert!(v <= (-0.3 * t).exp() * base * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn schwartz_side_gaussian() {
        let p = FourierProfile::new(Family::GaussPoly { coeffs: vec![1.0], a: 1.0, c: 0.0 }, c(0.0));
        for t in [0.0, 1.0, 50.0] {
            let v = schwartz_seminorm(&heat_apply_fourier(&p, t).unwrap(), 0).unwrap();
            assert!((v - 1.0).abs() < 1e-12);
        }
    }
}

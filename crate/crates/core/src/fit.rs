//! Decay-class estimation on the tail of a sampled series.

use serde::{Deserialize, Serialize};

/// Values at or below this are treated as exact zeros.
pub const ZERO_FLOOR: f64 = 1e-280;
/// Minimum coefficient of determination for a winning regression.
pub const MIN_R2: f64 = 0.99;
/// Fraction of the samples forming the tail window.
pub const TAIL_WINDOW: f64 = 0.4;
const MIN_TAIL: usize = 8;
/// Stretched exponents `s` in `-ln y = b + c t^s` at or above this count
/// as exponential.
const EXPONENTIAL_STRETCH: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayClass {
    Exponential { omega: f64 },
    Polynomial { alpha: f64 },
    SuperpolySubexp { stretch: f64 },
    Bounded,
    Divergent,
}

impl DecayClass {
    pub fn decays(self) -> bool {
        matches!(self, DecayClass::Exponential { .. } | DecayClass::Polynomial { .. } | DecayClass::SuperpolySubexp { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub class: DecayClass,
    pub fit_quality: f64,
    pub annihilated: bool,
    pub tail_times: Vec<f64>,
    pub tail_values: Vec<f64>,
    pub warning: Option<String>,
}

struct LineFit {
    slope: f64,
    intercept: f64,
    r2: f64,
}

fn line_fit(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { (sxy * sxy / (sxx * syy)).min(1.0) } else { 1.0 };
    LineFit { slope, intercept, r2 }
}

fn poly_basis(t: f64) -> f64 {
    t.ln_1p()
}

/// Classifies the tail of `values` sampled at increasing `times`.
pub fn fit_decay(times: &[f64], values: &[f64]) -> RateEstimate {
    assert_eq!(times.len(), values.len(), "times and values differ in length");
    let n = times.len();
    let w = ((n as f64 * TAIL_WINDOW).ceil() as usize).max(MIN_TAIL).min(n);
    let tt = &times[n - w..];
    let tv = &values[n - w..];
    let mut est = RateEstimate {
        class: DecayClass::Bounded,
        fit_quality: 0.0,
        annihilated: false,
        tail_times: tt.to_vec(),
        tail_values: tv.to_vec(),
        warning: None,
    };
    if tv.iter().all(|v| v.abs() <= ZERO_FLOOR) {
        est.annihilated = true;
        est.fit_quality = 1.0;
        return est;
    }
    // Underflow inside the tail: fit on the leading positive part.
    let (px, py): (Vec<f64>, Vec<f64>) = tt.iter().zip(tv).filter(|(_, v)| v.abs() > ZERO_FLOOR).map(|(t, v)| (*t, -v.abs().ln())).unzip();
    let reaches_zero = tv.last().is_some_and(|v| v.abs() <= ZERO_FLOOR);
    if px.len() < 4 {
        est.annihilated = reaches_zero;
        est.fit_quality = if reaches_zero { 1.0 } else { 0.0 };
        if !reaches_zero {
            est.warning = Some("too few positive tail samples".into());
        }
        return est;
    }
    let exp = line_fit(&px, &py);
    let pb: Vec<f64> = px.iter().map(|&t| poly_basis(t)).collect();
    let poly = line_fit(&pb, &py);
    let mut best_s = 1.0;
    let mut best = line_fit(&px, &py);
    for i in 1..=40 {
        let s = i as f64 / 20.0;
        let xs: Vec<f64> = px.iter().map(|t| t.powf(s)).collect();
        let f = line_fit(&xs, &py);
        if f.r2 > best.r2 + 1e-12 {
            best = f;
            best_s = s;
        }
    }
    let rising = py.first().zip(py.last()).is_some_and(|(a, b)| b < a);
    if rising && exp.slope < 0.0 && poly.slope < 0.0 {
        let growth = py[0] - py[py.len() - 1];
        if growth > 1e-6 * py[0].abs().max(1.0) {
            est.class = DecayClass::Divergent;
            est.fit_quality = exp.r2.max(poly.r2);
            return est;
        }
    }
    let spread = py.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - py.iter().cloned().fold(f64::INFINITY, f64::min);
    if spread < 1e-3 {
        est.class = DecayClass::Bounded;
        est.fit_quality = 1.0;
        return est;
    }
    if poly.r2 >= best.r2 - 1e-9 && poly.slope > 0.0 && poly.r2 >= MIN_R2 {
        est.class = DecayClass::Polynomial { alpha: poly.slope };
        est.fit_quality = poly.r2;
        return est;
    }
    if best.r2 >= MIN_R2 && best.slope > 0.0 {
        if best_s >= EXPONENTIAL_STRETCH {
            // Local rate at the end of the window.
            let omega = if best_s == 1.0 { best.slope } else { best.slope * best_s * px[px.len() - 1].powf(best_s - 1.0) };
            est.class = DecayClass::Exponential { omega };
            est.fit_quality = best.r2;
            return est;
        }
        if subexp_bracketed(&px, &py) {
            est.class = DecayClass::SuperpolySubexp { stretch: best_s };
            est.fit_quality = best.r2;
            return est;
        }
    }
    if exp.slope > 0.0 && exp.r2 >= MIN_R2 {
        est.class = DecayClass::Exponential { omega: exp.slope };
        est.fit_quality = exp.r2;
    } else if poly.slope > 0.0 && poly.r2 >= MIN_R2 {
        est.class = DecayClass::Polynomial { alpha: poly.slope };
        est.fit_quality = poly.r2;
    } else {
        est.class = DecayClass::Bounded;
        est.fit_quality = exp.r2.max(poly.r2);
        est.warning = Some("tail fits no decay class".into());
    }
    est
}

/// Fits on the first half of the tail, extrapolated to the last sample: the
/// polynomial fit must under-predict the decay and the exponential fit must
/// over-predict it.
fn subexp_bracketed(px: &[f64], py: &[f64]) -> bool {
    let h = px.len() / 2;
    if h < 2 {
        return false;
    }
    let last_t = px[px.len() - 1];
    let last_z = py[py.len() - 1];
    let pb: Vec<f64> = px[..h].iter().map(|&t| poly_basis(t)).collect();
    let poly = line_fit(&pb, &py[..h]);
    let exp = line_fit(&px[..h], &py[..h]);
    poly.intercept + poly.slope * poly_basis(last_t) < last_z && exp.intercept + exp.slope * last_t > last_z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn separates_classes() {
        let t = log_grid(0.1, 100.0, 20);
        let e: Vec<f64> = t.iter().map(|t| (-2.0 * t).exp()).collect();
        match fit_decay(&t, &e).class {
            DecayClass::Exponential { omega } => assert!((1.98..=2.02).contains(&omega)),
            c => panic!("{c:?}"),
        }
        let p: Vec<f64> = t.iter().map(|t| (1.0 + t).powi(-3)).collect();
        match fit_decay(&t, &p).class {
            DecayClass::Polynomial { alpha } => assert!((2.95..=3.05).contains(&alpha)),
            c => panic!("{c:?}"),
        }
        let s: Vec<f64> = t.iter().map(|t| (-t.sqrt()).exp()).collect();
        assert!(matches!(fit_decay(&t, &s).class, DecayClass::SuperpolySubexp { .. }));
    }

    #[test]
    fn annihilated_and_divergent() {
        let t = log_grid(0.01, 100.0, 30);
        let z: Vec<f64> = t.iter().map(|&t| if t < 1.0 { 1.0 - t } else { 0.0 }).collect();
        let r = fit_decay(&t, &z);
        assert!(r.annihilated && r.class == DecayClass::Bounded);
        let g: Vec<f64> = t.iter().map(|t| t.exp()).collect();
        assert_eq!(fit_decay(&t, &g).class, DecayClass::Divergent);
        let c = vec![0.7; 30];
        let r = fit_decay(&t, &c);
        assert!(r.class == DecayClass::Bounded && !r.annihilated);
    }

    #[test]
    fn underflowing_exponential_is_exponential() {
        let t = log_grid(0.01, 2e4, 60);
        let v: Vec<f64> = t.iter().map(|t| (-t / 20.0).exp()).collect();
        match fit_decay(&t, &v).class {
            DecayClass::Exponential { omega } => assert!((omega - 0.05).abs() < 1e-6),
            DecayClass::Bounded => assert!(fit_decay(&t, &v).annihilated),
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn stretched_exponential_is_between() {
        let t = log_grid(0.01, 2e3, 80);
        let v: Vec<f64> = t.iter().map(|t| (-0.5 * t.powf(2.0 / 3.0)).exp()).collect();
        let est = fit_decay(&t, &v);
        assert!(matches!(est.class, DecayClass::SuperpolySubexp { .. }), "{:?}", est.class);
    }
}

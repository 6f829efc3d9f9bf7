//! Gamma and upper incomplete gamma functions.
//!
//! `upper_incomplete_gamma` accepts negative shape parameters, which show up
//! in the interference integrals when the path-loss exponent is below 2.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("upper incomplete gamma diverges for s = {s} <= 0 at x = 0")]
    Divergent { s: f64 },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("series for Gamma({s}, {x}) did not converge")]
    NoConvergence { s: f64, x: f64 },
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 10_000;

/// Natural log of |Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let s = (std::f64::consts::PI * x).sin().abs();
        std::f64::consts::PI.ln() - s.ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        let t = x + LANCZOS_G + 0.5;
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
    }
}

/// Γ(x) for real x that is not a non-positive integer.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        ln_gamma(x).exp()
    }
}

/// Γ(s, x) = ∫_x^∞ t^{s-1} e^{-t} dt.
pub fn upper_incomplete_gamma(s: f64, x: f64) -> Result<f64, SpecialError> {
    if !(x >= 0.0) || !s.is_finite() {
        return Err(SpecialError::Domain(format!("s = {s}, x = {x}")));
    }
    if x == 0.0 {
        if s <= 0.0 {
            return Err(SpecialError::Divergent { s });
        }
        return Ok(gamma(s));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x >= 1.0 && x >= s + 1.0 || (s <= 0.0 && x >= 1.0) {
        return continued_fraction(s, x);
    }
    if s > 0.0 {
        let lower = lower_series(s, x)?;
        return Ok(gamma(s) - lower);
    }
    // s <= 0 and x < 1: step up to a positive shape and recur back down.
    // Γ(s, x) = (Γ(s+1, x) - x^s e^{-x}) / s
    let frac = s - s.floor();
    let (mut value, start) = if frac == 0.0 {
        (exp_integral_e1(x), 0.0)
    } else {
        let base = frac; // in (0, 1)
        (gamma(base) - lower_series(base, x)?, base)
    };
    let mut cur = start;
    while cur - 1.0 >= s - 1e-12 {
        let next = cur - 1.0;
        value = (value - x.powf(next) * (-x).exp()) / next;
        cur = next;
    }
    Ok(value)
}

/// γ(s, x) = ∫_0^x t^{s-1} e^{-t} dt for s > 0.
pub fn lower_incomplete_gamma(s: f64, x: f64) -> Result<f64, SpecialError> {
    if !(s > 0.0) || !(x >= 0.0) {
        return Err(SpecialError::Domain(format!("s = {s}, x = {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < s + 1.0 {
        lower_series(s, x)
    } else {
        Ok(gamma(s) - continued_fraction(s, x)?)
    }
}

/// γ(s, x) via the power series, s > 0.
fn lower_series(s: f64, x: f64) -> Result<f64, SpecialError> {
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut n = s;
    for _ in 0..MAX_ITER {
        n += 1.0;
        term *= x / n;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            return Ok(sum * (s * x.ln() - x).exp());
        }
    }
    Err(SpecialError::NoConvergence { s, x })
}

/// Modified Lentz evaluation of the continued fraction for Γ(s, x).
fn continued_fraction(s: f64, x: f64) -> Result<f64, SpecialError> {
    const TINY: f64 = 1e-300;
    let scale = s * x.ln() - x;
    // e^{−x}x^s underflows and the fraction is ≈ 1/x
    if scale - x.ln() < -745.0 {
        return Ok(0.0);
    }
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() <= 2.0 * f64::EPSILON {
            return Ok(scale.exp() * h);
        }
    }
    Err(SpecialError::NoConvergence { s, x })
}

/// E1(x) = Γ(0, x) for 0 < x < 1 via its convergent series.
fn exp_integral_e1(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-18 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// 1 − (1 + x) e^{−x}, accurate for small x.
pub fn one_minus_one_plus_x_exp(x: f64) -> f64 {
    if x.abs() < 1e-3 {
        let x2 = x * x;
        x2 * (0.5 - x / 3.0 + x2 / 8.0 - x2 * x / 30.0 + x2 * x2 * 5.0 / 720.0)
    } else {
        -(-x).exp_m1() - x * (-x).exp()
    }
}

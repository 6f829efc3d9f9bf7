//! Interference models as virtual channel-gain masks, and the SINR they induce.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::propagation::db_to_linear;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterferenceError {
    #[error("invalid model specification `{0}`")]
    BadModel(String),
    #[error("SINR undefined: zero signal over zero interference plus noise")]
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelSpec {
    PhyM,
    Ibm { r_ibm: f64 },
    Prm { r_prm: f64 },
    /// Keeps interferers whose channel gain (without antennas) exceeds `eps_gain`.
    Tim { eps_gain: f64 },
}

impl ModelSpec {
    /// PRM radius written as (1+Δ)·d₀.
    pub fn prm_from_delta(delta: f64, d0: f64) -> Result<Self, InterferenceError> {
        if !(delta >= 0.0) || !(d0 > 0.0) {
            return Err(InterferenceError::BadModel(format!("prm delta {delta}, d0 {d0}")));
        }
        Ok(ModelSpec::Prm { r_prm: (1.0 + delta) * d0 })
    }

    pub fn validate(&self) -> Result<(), InterferenceError> {
        let ok = match *self {
            ModelSpec::PhyM => true,
            ModelSpec::Ibm { r_ibm } => r_ibm > 0.0,
            ModelSpec::Prm { r_prm } => r_prm > 0.0,
            ModelSpec::Tim { eps_gain } => eps_gain > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(InterferenceError::BadModel(self.to_string()))
        }
    }

    /// Whether interference beyond `radius` is still counted by this model.
    pub fn counts_beyond(&self, radius: f64) -> bool {
        match *self {
            ModelSpec::PhyM => true,
            ModelSpec::Ibm { r_ibm } => r_ibm >= radius,
            ModelSpec::Prm { .. } | ModelSpec::Tim { .. } => false,
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::PhyM => write!(f, "phym"),
            ModelSpec::Ibm { r_ibm } => write!(f, "ibm:{r_ibm}"),
            ModelSpec::Prm { r_prm } => write!(f, "prm:{r_prm}"),
            ModelSpec::Tim { eps_gain } => write!(f, "tim:{}", 10.0 * eps_gain.log10()),
        }
    }
}

/// Parses `phym`, `ibm:<m>`, `prm:<m>`, `tim:<dB>`. `ibm:inf` is allowed.
impl FromStr for ModelSpec {
    type Err = InterferenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InterferenceError::BadModel(s.to_string());
        let lower = s.trim().to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n.trim().to_string(), Some(a.trim().parse::<f64>().map_err(|_| bad())?)),
            None => (lower.clone(), None),
        };
        let m = match (name.as_str(), arg) {
            ("phym", None) => ModelSpec::PhyM,
            ("ibm", Some(r)) => ModelSpec::Ibm { r_ibm: r },
            ("prm", Some(r)) => ModelSpec::Prm { r_prm: r },
            ("tim", Some(db)) => ModelSpec::Tim { eps_gain: db_to_linear(db) },
            _ => return Err(bad()),
        };
        m.validate().map_err(|_| bad())?;
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LinkBudgetTerm {
    pub tx_power: f64,
    pub tx_gain: f64,
    pub channel_gain: f64,
    pub rx_gain: f64,
    pub distance: f64,
}

impl LinkBudgetTerm {
    #[inline]
    pub fn received_power(&self) -> f64 {
        self.tx_power * self.tx_gain * self.channel_gain * self.rx_gain
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinrPair {
    pub gamma_x: f64,
    pub gamma_y: f64,
}

/// The virtual gain a_k: 0, 1 or +∞.
pub fn virtual_mask(model: &ModelSpec, term: &LinkBudgetTerm) -> f64 {
    match *model {
        ModelSpec::PhyM => 1.0,
        ModelSpec::Ibm { r_ibm } => {
            if term.distance <= r_ibm {
                1.0
            } else {
                0.0
            }
        }
        ModelSpec::Prm { r_prm } => {
            if term.distance <= r_prm {
                f64::INFINITY
            } else {
                0.0
            }
        }
        ModelSpec::Tim { eps_gain } => {
            if term.channel_gain > eps_gain {
                1.0
            } else {
                0.0
            }
        }
    }
}

pub fn sinr(model: &ModelSpec, signal: &LinkBudgetTerm, interferers: &[LinkBudgetTerm], noise: f64) -> Result<f64, InterferenceError> {
    sinr_with_background(model, signal, interferers, 0.0, noise)
}

/// SINR with an extra interference power added after the per-term sum.
///
/// Terms are accumulated in input order and masked terms are skipped rather
/// than multiplied by zero, so a model that keeps a subset of another model's
/// terms never ends up with a larger floating-point sum. A term under an
/// infinite PRM mask forces the SINR to 0 if it carries power (0·∞ = 0).
pub fn sinr_with_background(
    model: &ModelSpec,
    signal: &LinkBudgetTerm,
    interferers: &[LinkBudgetTerm],
    background: f64,
    noise: f64,
) -> Result<f64, InterferenceError> {
    let num = signal.received_power();
    let mut sum = 0.0;
    for t in interferers {
        let a = virtual_mask(model, t);
        if a == 0.0 {
            continue;
        }
        let pw = t.received_power();
        if a.is_infinite() {
            if pw > 0.0 {
                return Ok(0.0);
            }
            continue;
        }
        sum += pw;
    }
    let den = sum + background + noise;
    if den == 0.0 {
        if num == 0.0 {
            return Err(InterferenceError::Undefined);
        }
        return Ok(f64::INFINITY);
    }
    Ok(num / den)
}

/// H₁ (outage) iff γ < β.
#[inline]
pub fn outage(gamma: f64, beta: f64) -> bool {
    gamma < beta
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(d: f64, g: f64) -> LinkBudgetTerm {
        LinkBudgetTerm { tx_power: 0.1, tx_gain: 1.0, channel_gain: g, rx_gain: 1.0, distance: d }
    }

    #[test]
    fn masks() {
        let t = term(40.0, 1e-12);
        assert_eq!(virtual_mask(&ModelSpec::PhyM, &t), 1.0);
        assert_eq!(virtual_mask(&ModelSpec::Prm { r_prm: 40.0 }, &t), f64::INFINITY);
        assert_eq!(virtual_mask(&ModelSpec::Prm { r_prm: 40.0 }, &term(40.01, 1e-12)), 0.0);
        let tim = ModelSpec::Tim { eps_gain: 1e-13 };
        assert_eq!(virtual_mask(&tim, &t), 1.0);
        assert_eq!(virtual_mask(&tim, &term(40.0, 1e-14)), 0.0);
    }

    #[test]
    fn snr_without_interferers() {
        let s = term(20.0, 1e-7);
        let g = sinr(&ModelSpec::PhyM, &s, &[], 1e-12).unwrap();
        assert_eq!(g, 0.1 * 1e-7 / 1e-12);
        let far = [term(100.0, 1e-9)];
        assert_eq!(sinr(&ModelSpec::Ibm { r_ibm: 50.0 }, &s, &far, 1e-12).unwrap(), g);
    }

    #[test]
    fn prm_is_two_valued() {
        let s = term(20.0, 1e-7);
        let snr = sinr(&ModelSpec::PhyM, &s, &[], 1e-12).unwrap();
        let m = ModelSpec::Prm { r_prm: 30.0 };
        assert_eq!(sinr(&m, &s, &[term(25.0, 1e-9)], 1e-12).unwrap(), 0.0);
        assert_eq!(sinr(&m, &s, &[term(35.0, 1e-9)], 1e-12).unwrap(), snr);
        // a powerless term inside the radius does not trigger the mask
        assert_eq!(sinr(&m, &s, &[term(25.0, 0.0)], 1e-12).unwrap(), snr);
    }

    #[test]
    fn outage_is_strict() {
        assert!(!outage(3.0, 3.0));
        assert!(outage(0.0, 3.0));
        assert!(!outage(f64::INFINITY, 3.0));
    }

    #[test]
    fn undefined_sinr_rejected() {
        let s = term(20.0, 0.0);
        assert_eq!(sinr(&ModelSpec::PhyM, &s, &[], 0.0), Err(InterferenceError::Undefined));
    }

    #[test]
    fn model_parse() {
        assert_eq!("ibm:60".parse::<ModelSpec>().unwrap(), ModelSpec::Ibm { r_ibm: 60.0 });
        assert_eq!("PRM:40".parse::<ModelSpec>().unwrap(), ModelSpec::Prm { r_prm: 40.0 });
        assert_eq!("phym".parse::<ModelSpec>().unwrap(), ModelSpec::PhyM);
        assert!("ibm:-1".parse::<ModelSpec>().is_err());
        assert!("ibm".parse::<ModelSpec>().is_err());
        let ModelSpec::Tim { eps_gain } = "tim:-130".parse::<ModelSpec>().unwrap() else { panic!() };
        assert!((eps_gain / 1e-13 - 1.0).abs() < 1e-12);
        assert_eq!(ModelSpec::prm_from_delta(1.0, 20.0).unwrap(), ModelSpec::Prm { r_prm: 40.0 });
    }
}

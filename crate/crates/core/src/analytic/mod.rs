//! Closed-form outage probabilities, region measures and bounds.
//!
//! * [`scenario1`]: omnidirectional antennas, Rayleigh fading, modified power law.
//! * [`scenario2`]: sector antennas with exponential LoS blockage.
//! * [`scenario3`]: deterministic channel, ζ threshold and Chernoff bounds.

pub mod scenario1;
pub mod scenario2;
pub mod scenario3;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::propagation::{db_to_linear, dbm_to_watts};
use crate::quadrature::{QuadratureError, QuadratureSpec};
use crate::special::SpecialError;

pub use scenario1::{s1_cond_phym_given_prm_ok, s1_index, s1_outage};
pub use scenario2::{far_field, region_measure, s2_cond_phym_given_prm_ok, s2_index, s2_outage};
pub use scenario3::{s3_chernoff_ibm_lower, s3_chernoff_phym_upper, s3_prm_index_bounds, zeta_threshold, TauSearch};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("zeta = {0:e} <= 0: the link fails on noise alone at this threshold")]
    NonPositiveZeta(f64),
    #[error("PRM radius {r_prm} exceeds the zero-false-alarm radius {r_max}")]
    PrmRadiusTooLarge { r_prm: f64, r_max: f64 },
    #[error("bound optimisation did not converge: {0}")]
    Optimisation(String),
}

impl AnalyticError {
    /// Whether the failure is numeric rather than a parameter problem.
    pub fn is_numeric(&self) -> bool {
        matches!(self, AnalyticError::Quadrature(_) | AnalyticError::Special(_) | AnalyticError::Optimisation(_))
    }
}

/// Which model a closed form is evaluated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalyticModel {
    Ibm,
    PhyM,
    Prm,
}

impl std::str::FromStr for AnalyticModel {
    type Err = AnalyticError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ibm" => Ok(AnalyticModel::Ibm),
            "phym" => Ok(AnalyticModel::PhyM),
            "prm" => Ok(AnalyticModel::Prm),
            other => Err(AnalyticError::InvalidParams(format!("unknown analytic model `{other}`"))),
        }
    }
}

/// A probability together with the quadrature settings that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticResult {
    pub value: f64,
    pub quad: QuadratureSpec,
}

/// Index components assembled from closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticIndex {
    pub p_fa: f64,
    pub p_md: f64,
    pub xi: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario1Params {
    pub lambda_t: f64,
    pub d0: f64,
    pub alpha: f64,
    pub c: f64,
    pub a: f64,
    pub p: f64,
    pub sigma: f64,
    pub beta: f64,
    pub r_ibm: f64,
    pub r_prm: f64,
}

impl Scenario1Params {
    /// Omnidirectional sub-6 GHz setting with the given inter-transmitter distance.
    pub fn reference(d_t: f64) -> Self {
        Scenario1Params {
            lambda_t: 1.0 / (d_t * d_t),
            d0: 20.0,
            alpha: 3.6,
            c: db_to_linear(-22.7),
            a: 1.0,
            p: dbm_to_watts(20.0),
            sigma: dbm_to_watts(-111.0),
            beta: db_to_linear(5.0),
            r_ibm: 60.0,
            r_prm: 40.0,
        }
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        let bad = |m: &str| Err(AnalyticError::InvalidParams(m.to_string()));
        if !(self.lambda_t >= 0.0 && self.lambda_t.is_finite()) {
            return bad("lambda_t must be finite and >= 0");
        }
        if !(self.a > 0.0 && self.d0 >= self.a) {
            return bad("need d0 >= a > 0");
        }
        if !(self.alpha > 0.0 && self.c > 0.0 && self.p > 0.0 && self.sigma >= 0.0 && self.beta > 0.0) {
            return bad("alpha, c, p, beta must be positive and sigma non-negative");
        }
        if !(self.r_ibm >= self.a) {
            return bad("need r_ibm >= a");
        }
        if !(self.r_prm >= self.a) {
            return bad("need r_prm >= a");
        }
        Ok(())
    }

    /// β d₀^α, the scale multiplying h r^{−α} in the exponentials.
    pub fn s_scale(&self) -> f64 {
        self.beta * self.d0.powf(self.alpha)
    }

    /// σ β d₀^α / (p c).
    pub fn noise_exponent(&self) -> f64 {
        self.sigma * self.s_scale() / (self.p * self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario2Params {
    pub base: Scenario1Params,
    pub theta: f64,
    pub eps_lambda_o: f64,
}

impl Scenario2Params {
    /// 28 GHz LoS setting with beamwidth `theta`.
    pub fn reference(d_t: f64, theta: f64) -> Self {
        Scenario2Params {
            base: Scenario1Params {
                lambda_t: 1.0 / (d_t * d_t),
                d0: 20.0,
                alpha: 2.0,
                c: db_to_linear(-61.4),
                a: 1.0,
                p: dbm_to_watts(20.0),
                sigma: dbm_to_watts(-84.0),
                beta: db_to_linear(5.0),
                r_ibm: 80.0,
                r_prm: 40.0,
            },
            theta,
            eps_lambda_o: 0.008,
        }
    }

    pub fn validate(&self) -> Result<(), AnalyticError> {
        self.base.validate()?;
        if !(self.theta > 0.0 && self.theta <= std::f64::consts::TAU) {
            return Err(AnalyticError::InvalidParams(format!("theta = {} outside (0, 2π]", self.theta)));
        }
        if !(self.eps_lambda_o >= 0.0 && self.eps_lambda_o.is_finite()) {
            return Err(AnalyticError::InvalidParams(format!("eps_lambda_o = {}", self.eps_lambda_o)));
        }
        Ok(())
    }

    /// θ² λ_t / (2π): the intensity prefactor of potential interferers.
    pub fn g_factor(&self) -> f64 {
        self.theta * self.theta * self.base.lambda_t / std::f64::consts::TAU
    }

    /// (θ/2π)², the noise reduction from the two main-lobe gains.
    pub fn beam_factor(&self) -> f64 {
        let f = self.theta / std::f64::consts::TAU;
        f * f
    }
}

/// Clamp a probability into [0, 1], logging when the excursion exceeds the tolerance budget.
pub(crate) fn clamp_probability(p: f64, quad: &QuadratureSpec) -> f64 {
    let slack = 10.0 * quad.abs_tol.max(quad.rel_tol);
    if p < -slack || p > 1.0 + slack {
        log::warn!("probability {p} outside [0, 1] by more than the quadrature tolerance; clamped");
    }
    p.clamp(0.0, 1.0)
}

/// 1 − e^{−x} without cancellation.
#[inline]
pub(crate) fn one_minus_exp(x: f64) -> f64 {
    -(-x).exp_m1()
}

/// Assemble (p_fa, p_md, ξ, S) for a PRM test model from
/// Pr[γ^PRM<β], Pr[γ^PhyM<β | γ^PRM≥β] and Pr[γ^PhyM<β].
pub(crate) fn prm_index(p_prm: f64, p_cond: f64, p_phym: f64) -> AnalyticIndex {
    let xi = 1.0 - p_phym;
    let p_fa = if xi > 0.0 { (1.0 - (1.0 - p_prm) * (1.0 - p_cond) / xi).clamp(0.0, 1.0) } else { 0.0 };
    let p_md = if p_phym > 0.0 { ((1.0 - p_prm) * p_cond / p_phym).clamp(0.0, 1.0) } else { 0.0 };
    AnalyticIndex { p_fa, p_md, xi, value: crate::similarity::index_value(p_fa, p_md, xi) }
}

/// Assemble the index for an IBM test model (no false alarms).
pub(crate) fn ibm_index(p_ibm: f64, p_phym: f64) -> AnalyticIndex {
    let xi = 1.0 - p_phym;
    let p_md = if p_phym > 0.0 { (1.0 - p_ibm / p_phym).clamp(0.0, 1.0) } else { 0.0 };
    AnalyticIndex { p_fa: 0.0, p_md, xi, value: crate::similarity::index_value(0.0, p_md, xi) }
}

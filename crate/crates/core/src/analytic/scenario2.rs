//! Sector antennas and exponential LoS blockage.
//!
//! Potential interferers (LoS, aligned towards the receiver, inside its main
//! lobe) form a Poisson process with radial intensity θλ_t e^{−kr}/2π over a
//! sector of angle θ, k = ελ_o. Only the product ελ_o enters any formula.

use super::{clamp_probability, ibm_index, one_minus_exp, prm_index, AnalyticError, AnalyticIndex, AnalyticModel, AnalyticResult, Scenario2Params};
use crate::quadrature::{expect_exponential, integrate, integrate_to_infinity, QuadratureSpec};
use crate::special::one_minus_one_plus_x_exp;

/// ∫_0^R r e^{−kr} dr.
pub(crate) fn radial_mass(k: f64, r: f64) -> f64 {
    if r.is_infinite() {
        return if k > 0.0 { 1.0 / (k * k) } else { f64::INFINITY };
    }
    if k == 0.0 {
        0.5 * r * r
    } else {
        one_minus_one_plus_x_exp(k * r) / (k * k)
    }
}

/// Mean number of potential interferers inside 𝓑(θ, 0, R).
pub fn region_measure(theta: f64, lambda_t: f64, eps_lambda_o: f64, r: f64) -> f64 {
    theta * theta * lambda_t / std::f64::consts::TAU * radial_mass(eps_lambda_o, r)
}

/// Mean count beyond R and the probability that 𝓑(θ, R, ∞) is empty.
pub fn far_field(theta: f64, lambda_t: f64, eps_lambda_o: f64, r: f64) -> (f64, f64) {
    let k = eps_lambda_o;
    let measure = if k == 0.0 {
        if lambda_t > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    } else if r.is_infinite() {
        0.0
    } else {
        theta * theta * lambda_t / (std::f64::consts::TAU * k * k) * (1.0 + k * r) * (-k * r).exp()
    };
    (measure, (-measure).exp())
}

/// ∫_lo^hi (1 − e^{−u r^{−α}}) e^{−kr} r dr. The infinite upper limit uses
/// w = e^{−kr} unless blockage is too weak for that map to resolve r.
pub(crate) fn radial_interference(u: f64, alpha: f64, k: f64, lo: f64, hi: f64, quad: &QuadratureSpec) -> Result<f64, AnalyticError> {
    if hi <= lo {
        return Ok(0.0);
    }
    let f = |r: f64| one_minus_exp(u * r.powf(-alpha)) * (-k * r).exp() * r;
    let v = if hi.is_finite() {
        integrate(f, lo, hi, quad)?.value
    } else if k * lo.max(1.0) >= 1e-4 {
        let w_lo = (-k * lo).exp();
        integrate(
            |w: f64| {
                if w <= 0.0 {
                    return 0.0;
                }
                let r = -w.ln() / k;
                one_minus_exp(u * r.powf(-alpha)) * r / k
            },
            0.0,
            w_lo,
            quad,
        )?
        .value
    } else {
        if alpha <= 2.0 {
            return Err(AnalyticError::InvalidParams(format!(
                "interference from an unblocked plane diverges for alpha = {alpha} <= 2"
            )));
        }
        integrate_to_infinity(f, lo, quad)?.value
    };
    Ok(v)
}

fn interference_exponent(params: &Scenario2Params, lo: f64, hi: f64, include_near: bool, quad: &QuadratureSpec) -> Result<f64, AnalyticError> {
    let b = &params.base;
    if b.lambda_t == 0.0 {
        return Ok(0.0);
    }
    let k = params.eps_lambda_o;
    let s = b.s_scale();
    let m_a = radial_mass(k, b.a);
    let e = expect_exponential::<_, AnalyticError>(
        |h| {
            let u = s * h;
            let near = if include_near { one_minus_exp(u) * m_a } else { 0.0 };
            Ok(near + radial_interference(u, b.alpha, k, lo, hi, quad)?)
        },
        quad,
    )?;
    Ok(params.g_factor() * e.value)
}

pub fn s2_outage(model: AnalyticModel, params: &Scenario2Params, quad: &QuadratureSpec) -> Result<AnalyticResult, AnalyticError> {
    params.validate()?;
    quad.validate()?;
    let b = &params.base;
    let noise = b.noise_exponent() * params.beam_factor();
    let value = match model {
        AnalyticModel::Prm => one_minus_exp(region_measure(params.theta, b.lambda_t, params.eps_lambda_o, b.r_prm)),
        AnalyticModel::Ibm => one_minus_exp(noise + interference_exponent(params, b.a, b.r_ibm, true, quad)?),
        AnalyticModel::PhyM => one_minus_exp(noise + interference_exponent(params, b.a, f64::INFINITY, true, quad)?),
    };
    Ok(AnalyticResult { value: clamp_probability(value, quad), quad: *quad })
}

/// The PhyM outage written as θ²λ/(2πk²)·E_h[1 − e^{−u}(1−(1+ka)e^{−ka}) − k²∫_a^∞ e^{−u r^{−α}−kr} r dr].
/// Algebraically equal to [`s2_outage`] for PhyM; loses precision as k → 0.
pub fn s2_phym_outage_direct(params: &Scenario2Params, quad: &QuadratureSpec) -> Result<AnalyticResult, AnalyticError> {
    params.validate()?;
    let b = &params.base;
    let k = params.eps_lambda_o;
    if !(k > 0.0) {
        return Err(AnalyticError::InvalidParams("direct form needs eps_lambda_o > 0".into()));
    }
    let s = b.s_scale();
    let e = expect_exponential::<_, AnalyticError>(
        |h| {
            let u = s * h;
            let tail = integrate_to_infinity(|r| (-u * r.powf(-b.alpha) - k * r).exp() * r, b.a, quad)?.value;
            Ok(1.0 - (-u).exp() * one_minus_one_plus_x_exp(k * b.a) - k * k * tail)
        },
        quad,
    )?;
    let noise = b.noise_exponent() * params.beam_factor();
    let exponent = noise + params.g_factor() / (k * k) * e.value;
    Ok(AnalyticResult { value: clamp_probability(one_minus_exp(exponent), quad), quad: *quad })
}

/// Pr[γ^PhyM < β | no potential interferer inside r_prm].
pub fn s2_cond_phym_given_prm_ok(params: &Scenario2Params, quad: &QuadratureSpec) -> Result<AnalyticResult, AnalyticError> {
    params.validate()?;
    quad.validate()?;
    let b = &params.base;
    let noise = b.noise_exponent() * params.beam_factor();
    let interf = if b.r_prm.is_infinite() { 0.0 } else { interference_exponent(params, b.r_prm, f64::INFINITY, false, quad)? };
    Ok(AnalyticResult { value: clamp_probability(one_minus_exp(noise + interf), quad), quad: *quad })
}

pub fn s2_index(model: AnalyticModel, params: &Scenario2Params, quad: &QuadratureSpec) -> Result<AnalyticIndex, AnalyticError> {
    let p_phym = s2_outage(AnalyticModel::PhyM, params, quad)?.value;
    match model {
        AnalyticModel::Ibm => Ok(ibm_index(s2_outage(AnalyticModel::Ibm, params, quad)?.value, p_phym)),
        AnalyticModel::Prm => {
            let p_prm = s2_outage(AnalyticModel::Prm, params, quad)?.value;
            let p_cond = s2_cond_phym_given_prm_ok(params, quad)?.value;
            Ok(prm_index(p_prm, p_cond, p_phym))
        }
        AnalyticModel::PhyM => Ok(ibm_index(p_phym, p_phym)),
    }
}

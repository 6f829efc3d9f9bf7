//! Omnidirectional network with Rayleigh fading.
//!
//! With signal fading h₀ ~ Exp(1), Pr[γ < β] = 1 − E[e^{−s I'}] − noise part,
//! and the PGFL of the interferer field gives the exponent
//! πλ E_h[a²(1−e^{−u}) + 2∫_a^R (1−e^{−u r^{−α}}) r dr], u = β d₀^α h.
//! The radial integral is evaluated in closed form with incomplete gamma
//! functions after integrating by parts.

use std::f64::consts::PI;

use super::{clamp_probability, ibm_index, one_minus_exp, prm_index, AnalyticError, AnalyticIndex, AnalyticModel, AnalyticResult, Scenario1Params};
use crate::quadrature::{expect_exponential, QuadratureSpec};
use crate::special::{lower_incomplete_gamma, upper_incomplete_gamma};

/// E_h of the bracketed interference term for interferers up to radius `r_max`
/// (which may be infinite for α > 2).
fn interference_bracket(params: &Scenario1Params, r_max: f64, quad: &QuadratureSpec) -> Result<f64, AnalyticError> {
    let alpha = params.alpha;
    let k = 1.0 - 2.0 / alpha;
    let s = params.s_scale();
    let a = params.a;
    let a_pow = a.powf(-alpha);
    if r_max.is_infinite() && alpha <= 2.0 {
        return Err(AnalyticError::InvalidParams(format!(
            "aggregate interference over the whole plane diverges for alpha = {alpha} <= 2"
        )));
    }
    let r_pow = if r_max.is_infinite() { 0.0 } else { r_max.powf(-alpha) };
    let out = expect_exponential::<_, AnalyticError>(
        |h| {
            let u = s * h;
            let near = a * a * ((-u * a_pow).exp() - (-u).exp());
            let edge = if r_max.is_infinite() { 0.0 } else { r_max * r_max * one_minus_exp(u * r_pow) };
            let diff = if k > 0.0 {
                lower_incomplete_gamma(k, u * a_pow)? - if r_pow > 0.0 { lower_incomplete_gamma(k, u * r_pow)? } else { 0.0 }
            } else {
                upper_incomplete_gamma(k, u * r_pow)? - upper_incomplete_gamma(k, u * a_pow)?
            };
            Ok(near + edge + u.powf(2.0 / alpha) * diff)
        },
        quad,
    );
    out.map(|v| v.value)
}

/// Outage probability under IBM (interferers up to r_ibm), PhyM (whole plane)
/// or PRM (any interferer inside r_prm).
pub fn s1_outage(model: AnalyticModel, params: &Scenario1Params, quad: &QuadratureSpec) -> Result<AnalyticResult, AnalyticError> {
    params.validate()?;
    quad.validate()?;
    let value = match model {
        AnalyticModel::Prm => one_minus_exp(params.lambda_t * PI * params.r_prm * params.r_prm),
        AnalyticModel::Ibm | AnalyticModel::PhyM => {
            let r_max = if model == AnalyticModel::Ibm { params.r_ibm } else { f64::INFINITY };
            let noise = params.noise_exponent();
            let interf = if params.lambda_t == 0.0 { 0.0 } else { PI * params.lambda_t * interference_bracket(params, r_max, quad)? };
            one_minus_exp(noise + interf)
        }
    };
    Ok(AnalyticResult { value: clamp_probability(value, quad), quad: *quad })
}

/// Pr[γ^PhyM < β | no interferer inside r_prm].
pub fn s1_cond_phym_given_prm_ok(params: &Scenario1Params, quad: &QuadratureSpec) -> Result<AnalyticResult, AnalyticError> {
    params.validate()?;
    quad.validate()?;
    let alpha = params.alpha;
    if alpha <= 2.0 {
        return Err(AnalyticError::InvalidParams(format!("alpha = {alpha} <= 2: far-field interference diverges")));
    }
    let noise = params.noise_exponent();
    let interf = if params.lambda_t == 0.0 || params.r_prm.is_infinite() {
        0.0
    } else {
        let k = 1.0 - 2.0 / alpha;
        let s = params.s_scale();
        let r = params.r_prm;
        let r_pow = r.powf(-alpha);
        let e = expect_exponential::<_, AnalyticError>(
            |h| {
                let u = s * h;
                Ok(u.powf(2.0 / alpha) * lower_incomplete_gamma(k, u * r_pow)? - r * r * one_minus_exp(u * r_pow))
            },
            quad,
        )?;
        PI * params.lambda_t * e.value
    };
    Ok(AnalyticResult { value: clamp_probability(one_minus_exp(noise + interf), quad), quad: *quad })
}

pub fn s1_index(model: AnalyticModel, params: &Scenario1Params, quad: &QuadratureSpec) -> Result<AnalyticIndex, AnalyticError> {
    let p_phym = s1_outage(AnalyticModel::PhyM, params, quad)?.value;
    match model {
        AnalyticModel::Ibm => Ok(ibm_index(s1_outage(AnalyticModel::Ibm, params, quad)?.value, p_phym)),
        AnalyticModel::Prm => {
            let p_prm = s1_outage(AnalyticModel::Prm, params, quad)?.value;
            let p_cond = s1_cond_phym_given_prm_ok(params, quad)?.value;
            Ok(prm_index(p_prm, p_cond, p_phym))
        }
        AnalyticModel::PhyM => Ok(ibm_index(p_phym, p_phym)),
    }
}

//! Deterministic channel (h = 1) with sector antennas and exponential LoS
//! blockage, zero side-lobe gain.
//!
//! Outage reduces to a threshold event on I = Σ d_k^{−α·1(d_k ≥ a)} over
//! potential interferers: γ < β ⟺ I > ζ. Chernoff bounds on that event
//! follow from the Laplace functional of the Poisson field.

use serde::{Deserialize, Serialize};

use super::scenario2::{radial_mass, region_measure};
use super::{one_minus_exp, AnalyticError, Scenario2Params};
use crate::quadrature::{integrate, integrate_to_infinity, QuadratureSpec};

/// ζ = d₀^{−α}/β − σ/(pc)·(θ/2π)² and the critical PRM radius ζ^{−1/α}.
pub fn zeta_threshold(params: &Scenario2Params) -> Result<(f64, f64), AnalyticError> {
    let b = &params.base;
    let zeta = b.d0.powf(-b.alpha) / b.beta - b.sigma / (b.p * b.c) * params.beam_factor();
    if !(zeta > 0.0) {
        return Err(AnalyticError::NonPositiveZeta(zeta));
    }
    Ok((zeta, zeta.powf(-1.0 / b.alpha)))
}

/// Search over τ: `points` log-spaced values on [lo·ζ⁻¹, hi·ζ⁻¹], then
/// golden-section refinement around the best grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauSearch {
    pub points: usize,
    pub lo_factor: f64,
    pub hi_factor: f64,
    pub refine_iters: usize,
}

impl Default for TauSearch {
    fn default() -> Self {
        TauSearch { points: 121, lo_factor: 1e-6, hi_factor: 1e6, refine_iters: 60 }
    }
}

/// Minimum of a (typically convex) function of ln τ.
fn minimise<F: FnMut(f64) -> Result<f64, AnalyticError>>(mut f: F, zeta: f64, search: &TauSearch) -> Result<(f64, f64), AnalyticError> {
    if search.points < 3 || !(search.lo_factor > 0.0 && search.hi_factor > search.lo_factor) {
        return Err(AnalyticError::InvalidParams(format!("{search:?}")));
    }
    let lo = (search.lo_factor / zeta).ln();
    let hi = (search.hi_factor / zeta).ln();
    let step = (hi - lo) / (search.points - 1) as f64;
    let mut best = (f64::INFINITY, lo);
    let mut best_i = 0;
    let mut values = Vec::with_capacity(search.points);
    for i in 0..search.points {
        let x = lo + step * i as f64;
        let v = f(x)?;
        let v = if v.is_nan() { f64::INFINITY } else { v };
        values.push(v);
        if v < best.0 {
            best = (v, x);
            best_i = i;
        }
    }
    if !best.0.is_finite() {
        return Err(AnalyticError::Optimisation("objective not finite anywhere on the tau grid".into()));
    }
    // golden section on the bracketing cell pair
    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = lo + step * (best_i + 1).min(search.points - 1) as f64;
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..search.refine_iters {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        }
    }
    for (v, x) in [(f1, x1), (f2, x2)] {
        if v < best.0 {
            best = (v, x);
        }
    }
    Ok((best.0, best.1.exp()))
}

/// Lower bound on Pr[γ^IBM < β]: 1 − inf_τ e^{τζ} E[e^{−τI}].
pub fn s3_chernoff_ibm_lower(params: &Scenario2Params, r_ibm: f64, search: &TauSearch, quad: &QuadratureSpec) -> Result<f64, AnalyticError> {
    params.validate()?;
    let (zeta, _) = zeta_threshold(params)?;
    let b = &params.base;
    if !(r_ibm >= b.a) {
        return Err(AnalyticError::InvalidParams(format!("r_ibm = {r_ibm} < a")));
    }
    if b.lambda_t == 0.0 {
        return Ok(0.0);
    }
    let k = params.eps_lambda_o;
    let g = params.g_factor();
    let m_a = radial_mass(k, b.a);
    let alpha = b.alpha;
    let objective = |ln_tau: f64| -> Result<f64, AnalyticError> {
        let tau = ln_tau.exp();
        let far = integrate(|r| one_minus_exp(tau * r.powf(-alpha)) * r * (-k * r).exp(), b.a, r_ibm, quad)?.value;
        Ok(tau * zeta - g * (one_minus_exp(tau) * m_a + far))
    };
    let (best, _) = minimise(objective, zeta, search)?;
    // τ → 0 gives exponent 0, so the bound is never negative
    Ok(one_minus_exp(-best.min(0.0)).max(0.0))
}

/// Upper bound on Pr[γ^PhyM < β]: inf_τ e^{−τζ} E[e^{τI}], capped at 1.
pub fn s3_chernoff_phym_upper(params: &Scenario2Params, search: &TauSearch, quad: &QuadratureSpec) -> Result<f64, AnalyticError> {
    params.validate()?;
    let (zeta, _) = zeta_threshold(params)?;
    let b = &params.base;
    if b.lambda_t == 0.0 {
        return Ok(0.0);
    }
    let k = params.eps_lambda_o;
    if !(k > 0.0) && b.alpha <= 2.0 {
        return Err(AnalyticError::InvalidParams("unblocked plane with alpha <= 2 has infinite interference".into()));
    }
    let g = params.g_factor();
    let m_a = radial_mass(k, b.a);
    let alpha = b.alpha;
    let objective = |ln_tau: f64| -> Result<f64, AnalyticError> {
        let tau = ln_tau.exp();
        if tau > 700.0 {
            return Ok(f64::INFINITY);
        }
        let far = integrate_to_infinity(|r| (tau * r.powf(-alpha)).exp_m1() * r * (-k * r).exp(), b.a, quad)?.value;
        Ok(-tau * zeta + g * (tau.exp_m1() * m_a + far))
    };
    let (best, _) = minimise(objective, zeta, search)?;
    Ok(best.exp().min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrmIndexBounds {
    pub lower: f64,
    pub upper: f64,
    pub p_prm_outage: f64,
    /// Estimate of Pr[γ^PhyM ≥ β] used in the lower bound.
    pub p_phym_success: f64,
}

/// max(Pr[γ^PRM<β], Pr[γ^PhyM≥β]) ≤ S ≤ 1 for r_prm within the
/// zero-false-alarm range. Without an external estimate of Pr[γ^PhyM≥β]
/// the Chernoff upper bound on Pr[γ^PhyM<β] supplies a valid one.
pub fn s3_prm_index_bounds(
    params: &Scenario2Params,
    phym_success: Option<f64>,
    search: &TauSearch,
    quad: &QuadratureSpec,
) -> Result<PrmIndexBounds, AnalyticError> {
    params.validate()?;
    let (_, r_max) = zeta_threshold(params)?;
    let b = &params.base;
    if !(b.r_prm > 0.0 && b.r_prm <= r_max * (1.0 + 1e-12)) {
        return Err(AnalyticError::PrmRadiusTooLarge { r_prm: b.r_prm, r_max });
    }
    let p_prm = one_minus_exp(region_measure(params.theta, b.lambda_t, params.eps_lambda_o, b.r_prm));
    let p_succ = match phym_success {
        Some(v) => v,
        None => 1.0 - s3_chernoff_phym_upper(params, search, quad)?,
    };
    Ok(PrmIndexBounds { lower: p_prm.max(p_succ), upper: 1.0, p_prm_outage: p_prm, p_phym_success: p_succ })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(d_t: f64) -> Scenario2Params {
        let mut p = Scenario2Params::reference(d_t, PI / 9.0);
        let (_, r) = zeta_threshold(&p).unwrap();
        p.base.r_prm = r;
        p.base.r_ibm = 2.0 * r;
        p
    }

    #[test]
    fn zeta_noise_free() {
        let mut p = params(30.0);
        p.base.sigma = 0.0;
        let (_, r) = zeta_threshold(&p).unwrap();
        assert_relative_eq!(r, p.base.d0 * p.base.beta.powf(1.0 / p.base.alpha), max_relative = 1e-12);
    }

    #[test]
    fn zeta_boundary_rejected() {
        let mut p = params(30.0);
        let b = &p.base;
        p.base.beta = b.d0.powf(-b.alpha) * b.p * b.c / (b.sigma * p.beam_factor());
        assert!(matches!(zeta_threshold(&p), Err(AnalyticError::NonPositiveZeta(_))) || zeta_threshold(&p).unwrap().0 < 1e-18);
        p.base.beta *= 1.01;
        assert!(matches!(zeta_threshold(&p), Err(AnalyticError::NonPositiveZeta(_))));
    }

    #[test]
    fn reference_radius() {
        let (zeta, r) = zeta_threshold(&params(30.0)).unwrap();
        assert!((zeta - 7.9e-4).abs() < 0.05e-4, "{zeta}");
        assert!((r - 35.6).abs() < 0.2, "{r}");
    }

    #[test]
    fn bounds_vacuous_without_interferers() {
        let mut p = params(30.0);
        p.base.lambda_t = 0.0;
        let q = QuadratureSpec::default();
        let s = TauSearch::default();
        assert_eq!(s3_chernoff_ibm_lower(&p, p.base.r_ibm, &s, &q).unwrap(), 0.0);
        assert_eq!(s3_chernoff_phym_upper(&p, &s, &q).unwrap(), 0.0);
    }

    #[test]
    fn bounds_are_probabilities_and_ordered() {
        let q = QuadratureSpec::default();
        let s = TauSearch::default();
        for &d_t in &[10.0, 30.0, 80.0] {
            let p = params(d_t);
            let lo = s3_chernoff_ibm_lower(&p, p.base.r_ibm, &s, &q).unwrap();
            let hi = s3_chernoff_phym_upper(&p, &s, &q).unwrap();
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
            // IBM outage ≤ PhyM outage, so the lower bound cannot exceed the upper one
            assert!(lo <= hi + 1e-12, "{lo} > {hi}");
        }
    }

    #[test]
    fn prm_bounds_reject_large_radius() {
        let mut p = params(30.0);
        p.base.r_prm *= 1.1;
        let err = s3_prm_index_bounds(&p, Some(0.5), &TauSearch::default(), &QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, AnalyticError::PrmRadiusTooLarge { .. }));
    }

    #[test]
    fn prm_lower_bound_grows_with_density() {
        let q = QuadratureSpec::default();
        let s = TauSearch::default();
        let mut last = 0.0;
        for &d_t in &[100.0, 30.0, 10.0, 3.0, 1.0] {
            let p = params(d_t);
            let b = s3_prm_index_bounds(&p, Some(0.0), &s, &q).unwrap();
            assert!(b.lower >= last);
            last = b.lower;
        }
        assert!(last > 0.99);
    }

    #[test]
    fn prm_lower_bound_shrinks_with_beamwidth() {
        // 1 − e^{−θ² C} at a fixed radius
        let mut p = params(30.0);
        let r = p.base.r_prm;
        let mut vals = vec![];
        for &th in &[PI / 9.0, PI / 18.0, PI / 36.0] {
            p.theta = th;
            p.base.r_prm = r.min(zeta_threshold(&p).unwrap().1);
            p.base.r_prm = r;
            let m = region_measure(th, p.base.lambda_t, p.eps_lambda_o, r);
            vals.push(m / (th * th));
        }
        assert_relative_eq!(vals[0], vals[1], max_relative = 1e-12);
        assert_relative_eq!(vals[1], vals[2], max_relative = 1e-12);
    }
}

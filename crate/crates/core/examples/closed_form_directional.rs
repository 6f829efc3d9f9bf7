//! Sector antennas with exponential LoS blockage: far-field statistics and
//! closed-form index of IBM and PRM.
//!
//! cargo run --example closed_form_directional -- [d_t] [theta_deg]

use ims_core::analytic::{far_field, s2_index, s2_outage, AnalyticModel, Scenario2Params};
use ims_core::quadrature::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let d_t: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(30.0);
    let theta_deg: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20.0);
    let quad = QuadratureSpec::default();
    let p = Scenario2Params::reference(d_t, theta_deg.to_radians());

    println!("potential interferers beyond R (mean count, Pr[none]):");
    for r in [0.0, 50.0, 100.0, 200.0, 400.0] {
        let (m, empty) = far_field(p.theta, p.base.lambda_t, p.eps_lambda_o, r);
        println!("  R = {r:>5}: {m:.4}  {empty:.4}");
    }

    println!("Pr[PhyM outage] = {:.6}", s2_outage(AnalyticModel::PhyM, &p, &quad)?.value);
    for r in [20.0, 40.0, 80.0] {
        let mut q = p;
        q.base.r_ibm = r;
        q.base.r_prm = r;
        let ibm = s2_index(AnalyticModel::Ibm, &q, &quad)?;
        let prm = s2_index(AnalyticModel::Prm, &q, &quad)?;
        println!("r = {r:>4}: S(IBM) = {:.5}, S(PRM) = {:.5}", ibm.value, prm.value);
    }
    Ok(())
}

//! Closed-form outage probabilities and similarity index for the
//! omnidirectional Rayleigh network, as a function of the model radius.
//!
//! cargo run --example closed_form_scenario1 -- [d_t]

use ims_core::analytic::{s1_index, s1_outage, AnalyticModel, Scenario1Params};
use ims_core::quadrature::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d_t: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(80.0);
    let quad = QuadratureSpec::default();
    let base = Scenario1Params::reference(d_t);
    let phym = s1_outage(AnalyticModel::PhyM, &base, &quad)?.value;
    println!("d_t = {d_t} m, Pr[PhyM outage] = {phym:.5}");
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "r", "S(IBM)", "S(PRM)", "pfa(PRM)", "pmd(PRM)");
    for r in [10.0, 20.0, 40.0, 60.0, 80.0, 100.0] {
        let mut p = base;
        p.r_ibm = r;
        p.r_prm = r;
        let ibm = s1_index(AnalyticModel::Ibm, &p, &quad)?;
        let prm = s1_index(AnalyticModel::Prm, &p, &quad)?;
        println!("{r:>6} {:>10.5} {:>10.5} {:>10.5} {:>10.5}", ibm.value, prm.value, prm.p_fa, prm.p_md);
    }
    Ok(())
}

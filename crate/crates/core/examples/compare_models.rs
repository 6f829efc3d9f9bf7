//! Several simplified models scored against the physical model on the same
//! topologies, next to the closed forms where they exist.
//!
//! cargo run --release --example compare_models

use ims_core::analytic::{s1_index, AnalyticModel};
use ims_core::interference::ModelSpec;
use ims_core::montecarlo::{run_models, RunOptions, Scenario, ScenarioConfig};
use ims_core::propagation::db_to_linear;
use ims_core::quadrature::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ScenarioConfig::preset(Scenario::S1);
    cfg.d_t = 30.0;
    cfg.trials = 100_000;
    let models = [
        ModelSpec::Ibm { r_ibm: 20.0 },
        ModelSpec::Ibm { r_ibm: 60.0 },
        ModelSpec::Prm { r_prm: 20.0 },
        ModelSpec::Prm { r_prm: 60.0 },
        ModelSpec::Tim { eps_gain: db_to_linear(-130.0) },
    ];
    let (reports, _) = run_models(&cfg, &models, &RunOptions { skip_distances: true, ..Default::default() })?;
    let quad = QuadratureSpec::default();
    for r in &reports {
        let mut p = cfg.scenario1_params();
        let exact = match r.model_x {
            ModelSpec::Ibm { r_ibm } => {
                p.r_ibm = r_ibm;
                Some(s1_index(AnalyticModel::Ibm, &p, &quad)?.value)
            }
            ModelSpec::Prm { r_prm } => {
                p.r_prm = r_prm;
                Some(s1_index(AnalyticModel::Prm, &p, &quad)?.value)
            }
            _ => None,
        };
        let exact = exact.map_or("-".to_string(), |v| format!("{v:.5}"));
        println!("{:<12} S = {:.5} ± {:.5}  closed form {exact}", r.model_x.to_string(), r.index.value, r.index_se);
    }
    Ok(())
}

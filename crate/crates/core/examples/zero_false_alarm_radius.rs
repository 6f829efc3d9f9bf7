//! Deterministic directional channel: the largest protocol-model radius that
//! never raises a false alarm, Chernoff bounds, and a Monte Carlo check.
//!
//! cargo run --example zero_false_alarm_radius -- [d_t]

use ims_core::analytic::{s3_chernoff_ibm_lower, s3_chernoff_phym_upper, s3_prm_index_bounds, zeta_threshold, TauSearch};
use ims_core::montecarlo::{run_with, ModelChoice, RunOptions, Scenario, ScenarioConfig};
use ims_core::quadrature::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d_t: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(30.0);
    let mut cfg = ScenarioConfig::preset(Scenario::S3);
    cfg.d_t = d_t;
    cfg.model_x = ModelChoice::PrmZeta;
    cfg.trials = 200_000;

    let params = cfg.scenario2_params();
    let (zeta, r_max) = zeta_threshold(&params)?;
    println!("zeta = {zeta:.4e}, zero-false-alarm PRM radius = {r_max:.3} m");

    let quad = QuadratureSpec::default();
    let search = TauSearch::default();
    println!("Pr[IBM(2r) outage] >= {:.4}", s3_chernoff_ibm_lower(&params, 2.0 * r_max, &search, &quad)?);
    println!("Pr[PhyM outage]    <= {:.4}", s3_chernoff_phym_upper(&params, &search, &quad)?);

    let r = run_with(&cfg, &RunOptions { skip_distances: true, ..Default::default() })?;
    let b = s3_prm_index_bounds(&params, Some(r.stats.xi), &search, &quad)?;
    println!(
        "{} trials: false alarms = {}, S = {:.6} (lower bound {:.6})",
        r.trials, r.stats.counts.false_alarms, r.index.value, b.lower
    );
    Ok(())
}

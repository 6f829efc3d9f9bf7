//! Sweep one scalar and print the index curve.
//!
//! cargo run --release --example sweep_parameter -- [param] [v1,v2,...]

use ims_core::montecarlo::{sweep, RunOptions, Scenario, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let param = args.next().unwrap_or_else(|| "r_ibm".into());
    let values: Vec<f64> = match args.next() {
        Some(v) => v.split(',').map(str::parse).collect::<Result<_, _>>()?,
        None => vec![10.0, 20.0, 40.0, 60.0, 80.0, 100.0],
    };
    let mut cfg = ScenarioConfig::preset(Scenario::S1);
    cfg.trials = 20_000;
    for p in sweep(&cfg, &param, &values, &RunOptions::default())? {
        println!("{param} = {:>8}: S = {:.5} ± {:.5}", p.value, p.report.index.value, p.report.index_se);
    }
    Ok(())
}

//! mmWave network with rectangular obstacles: score the simplified channel
//! (opaque obstacles, no reflections, no side lobes) of one experiment row.
//!
//! cargo run --release --example mmwave_simplifications -- [row 1..12] [trials]

use ims_core::montecarlo::reproduce::MMWAVE_EXPERIMENTS;
use ims_core::montecarlo::{run_with, RunOptions, Scenario, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let row: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let e = MMWAVE_EXPERIMENTS.get(row.wrapping_sub(1)).ok_or("row must be 1..12")?;
    let mut cfg = ScenarioConfig::preset(Scenario::S4);
    e.apply(&mut cfg);
    cfg.trials = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2_000);

    println!(
        "row {row}: l_o = {} dB, r = {}, z = {} dB, theta = {} deg, d_t = {} m, d_o = {} m",
        e.l_o_db, e.refl_coeff, e.z_db, e.theta_deg, e.d_t, e.d_o
    );
    println!("simplified: l_o = {} dB, r = {}, z = {} dB", e.x_l_o_db, e.x_refl_coeff, e.x_z_db);
    let r = run_with(&cfg, &RunOptions { skip_distances: true, ..Default::default() })?;
    println!("S = {:.4} ± {:.4} over {} topologies ({:.1} s)", r.index.value, r.index_se, r.trials, r.wall_time_s);
    Ok(())
}

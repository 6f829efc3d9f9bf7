//! One Monte Carlo run of a preset: error probabilities, index, SINR
//! histogram distances and rates.
//!
//! cargo run --release --example monte_carlo_run -- [s1|s2|s3|s4] [trials]

use ims_core::montecarlo::{run, Scenario, ScenarioConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let scenario: Scenario = args.next().unwrap_or_else(|| "s1".into()).parse()?;
    let mut cfg = ScenarioConfig::preset(scenario);
    cfg.trials = args.next().map(|s| s.parse()).transpose()?.unwrap_or(if scenario == Scenario::S4 { 2_000 } else { 50_000 });

    let r = run(&cfg)?;
    let s = &r.stats;
    println!("{} vs {} in {scenario}, {} trials, radius {:.0} m", r.model_x, r.model_y, r.trials, r.truncation_radius);
    println!("S = {:.5} ± {:.5}", r.index.value, r.index_se);
    println!("p_fa = {:.5} ± {:.5}, p_md = {:.5} ± {:.5}, xi = {:.4}", s.p_fa, s.se_fa, s.p_md, s.se_md, s.xi);
    if let Some(d) = r.distances {
        println!("rho = {:.4}, D_B = {:.4}, KL(y||x) = {:.4}", d.rho, d.bhattacharyya_distance, d.kl_yx);
    }
    println!("rates: x {:.4}, y {:.4} bit/s/Hz", r.throughput.rate_x, r.throughput.rate_y);
    println!("{:.2} s", r.wall_time_s);
    Ok(())
}

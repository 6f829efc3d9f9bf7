//! Fit the constant channel gain that best mimics a fading channel, averaged
//! over thresholds 0..10 dB, and compare it with E[h^{2/α}] = Γ(1 + 2/α).
//!
//! cargo run --release --example fit_deterministic_channel -- [fading] [alpha] [trials]

use ims_core::montecarlo::experiments::{default_beta_grid, fit_c0};
use ims_core::montecarlo::{RunOptions, Scenario, ScenarioConfig};
use ims_core::propagation::FadingKind;
use ims_core::special::gamma;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let fading: FadingKind = args.next().unwrap_or_else(|| "rayleigh".into()).parse()?;
    let alpha: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3.6);
    let mut cfg = ScenarioConfig::preset(Scenario::S1);
    cfg.trials = args.next().map(|s| s.parse()).transpose()?.unwrap_or(5_000);

    let f = fit_c0(&cfg, fading, alpha, &default_beta_grid(), &RunOptions::default())?;
    let m = &f.at_optimum;
    println!("{fading}, alpha = {alpha}: c0 = {:.4} (Gamma(1+2/alpha) = {:.4})", f.c0, gamma(1.0 + 2.0 / alpha));
    println!("mean S = {:.4}, rho = {:.4}, throughput deviation = {:.2}%", m.mean_index, m.rho, m.deviation_pct);
    for (b, s) in m.beta_db.iter().zip(&m.index) {
        println!("  beta = {b:>4} dB: S = {s:.4}");
    }
    Ok(())
}

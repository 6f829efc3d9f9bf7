//! Data behind a figure or table, written as CSV to stdout.
//!
//! cargo run --release --example reproduce_target -- fig5 [trials]

use ims_core::montecarlo::{base_config, reproduce, RunOptions, Target};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let target: Target = args.next().unwrap_or_else(|| "fig5".into()).parse()?;
    let trials: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2_000);
    let base = base_config(target, &|c| {
        c.trials = trials;
        Ok(())
    })?;
    let t = reproduce(target, &base, &RunOptions { skip_distances: true, ..Default::default() })?;
    print!("{}", t.to_csv_string()?);
    eprintln!("{target}: {} rows", t.rows.len());
    Ok(())
}

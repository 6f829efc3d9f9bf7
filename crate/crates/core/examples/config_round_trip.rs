//! Flat key = value configuration: parse, override, validate, print.
//!
//! cargo run --example config_round_trip -- [file.cfg]

use ims_core::montecarlo::ScenarioConfig;

const SAMPLE: &str = "\
# Scenario 1 with an interference ball of 40 m
scenario = s1
d_t = 50
model_x = ibm:40
beta_db = 3
trials = 1000
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SAMPLE.to_string(),
    };
    let mut cfg = ScenarioConfig::from_kv_str(&text)?;
    cfg.set("seed", "7")?;
    cfg.validate()?;
    println!("model x = {}, model y = {}, lambda_t = {:.3e} /m^2", cfg.model_x()?, cfg.model_y()?, cfg.lambda_t());
    print!("{}", cfg.to_kv_string());

    if let Err(e) = ScenarioConfig::from_kv_str("scenario = s1\nbogus = 1\n") {
        println!("rejected: {e}");
    }
    Ok(())
}

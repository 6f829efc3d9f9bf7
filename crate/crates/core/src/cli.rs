//! The `ims` command line.
//!
//! Verbs: `run`, `sweep`, `analytic`, `fit-c0`, `reproduce`, `selfcheck`.
//! Exit codes: 0 on success, 1 on a configuration or usage error, 2 when a
//! numerical routine fails to converge or a self-check fails.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::analytic::{
    s1_index, s2_index, s3_chernoff_ibm_lower, s3_chernoff_phym_upper, s3_prm_index_bounds, zeta_threshold, AnalyticModel, TauSearch,
};
use crate::interference::ModelSpec;
use crate::montecarlo::experiments::{default_beta_grid, fit_c0};
use crate::montecarlo::reproduce::ALPHA2_RADIUS;
use crate::montecarlo::output::{timestamp, write_outputs, Format, Sidecar, Table};
use crate::montecarlo::{
    fold_trials, reproduce, run_with, sweep, ConfigError, MonteCarloError, RunOptions, Scenario, ScenarioConfig, Target, TrialSampler, Truncation,
};
use crate::propagation::{FadingKind, SectorAntenna};
use crate::quadrature::QuadratureSpec;
use crate::similarity::{example1_column, EXAMPLE1_Y, EXAMPLE1_Z};
use crate::special::{gamma, upper_incomplete_gamma};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ims", version, about = "Similarity of simplified interference models to the physical SINR model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One Monte Carlo run.
    Run(Common),
    /// One run per value of a scalar parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary (e.g. r_ibm, d_t, beta_db).
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Closed-form index for scenarios 1–3.
    Analytic {
        #[command(flatten)]
        common: Common,
        /// ibm, prm or phym.
        #[arg(long, default_value = "prm")]
        model: String,
    },
    /// Fit the deterministic channel constant that best mimics a fading channel.
    #[command(name = "fit-c0")]
    FitC0 {
        #[command(flatten)]
        common: Common,
        /// Fading of the reference model (rayleigh, nakagami:<m>, ...); defaults to the configured one.
        #[arg(long)]
        fading: Option<String>,
        /// Path-loss exponent; defaults to the configured one.
        #[arg(long)]
        alpha: Option<f64>,
        /// Thresholds in dB to average over.
        #[arg(long, value_delimiter = ',')]
        betas: Vec<f64>,
    },
    /// Data behind a figure or table.
    Reproduce {
        /// fig2 … fig7, table2 or table3.
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Fast invariant checks.
    Selfcheck,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Flat key = value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Preset to start from when no configuration file sets one (s1..s4).
    #[arg(long)]
    pub scenario: Option<String>,
    /// Override one key; repeatable.
    #[arg(long = "set", value_name = "K=V")]
    pub set: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Upper bound on worker threads.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Run(#[from] MonteCarloError),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0} self-check(s) failed")]
    Selfcheck(usize),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Run(e.into())
    }
}

impl From<crate::analytic::AnalyticError> for CliError {
    fn from(e: crate::analytic::AnalyticError) -> Self {
        CliError::Run(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Run(e) if e.is_numeric() => EXIT_NUMERIC,
            CliError::Selfcheck(_) => EXIT_NUMERIC,
            _ => EXIT_CONFIG,
        }
    }
}

impl Common {
    /// Preset, then configuration file, then `--set`, then `--seed`/`--trials`.
    pub fn config(&self, default: Scenario) -> Result<ScenarioConfig, CliError> {
        let scenario = match &self.scenario {
            Some(s) => s.parse::<Scenario>().map_err(|e| ConfigError::BadValue { key: "scenario".into(), value: s.clone(), reason: e })?,
            None => default,
        };
        let mut cfg = match &self.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|source| CliError::Read { path: p.clone(), source })?;
                let text = if text.trim_start().starts_with('{') { sidecar_to_kv(&text)? } else { text };
                ScenarioConfig::from_kv_str(&format!("scenario = {scenario}\n{text}"))?
            }
            None => ScenarioConfig::preset(scenario),
        };
        for kv in &self.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects K=V, got `{kv}`")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.trials {
            cfg.trials = n;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions { threads: self.threads, skip_distances: false }
    }

    fn emit(&self, verb: &str, table: &Table, sidecar: &Sidecar) -> Result<(), CliError> {
        let paths = write_outputs(&self.out, verb, &timestamp(), table, sidecar, self.format)?;
        for p in paths {
            log::info!("wrote {}", p.display());
        }
        Ok(())
    }
}

/// The `config` object of a JSON sidecar as `key = value` lines.
fn sidecar_to_kv(text: &str) -> Result<String, CliError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(MonteCarloError::from)?;
    let map = v.get("config").and_then(|c| c.as_object()).ok_or_else(|| CliError::Usage("JSON config lacks a `config` object".into()))?;
    let mut out = String::new();
    for (k, v) in map {
        let v = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
        out.push_str(&format!("{k} = {v}\n"));
    }
    Ok(out)
}

/// One-line summary of a run.
pub fn summary_line(index: f64, index_se: f64, p_fa: f64, se_fa: f64, p_md: f64, se_md: f64, xi: f64) -> String {
    format!("S={index:.6} (se {index_se:.2e}) p_fa={p_fa:.6} (se {se_fa:.2e}) p_md={p_md:.6} (se {se_md:.2e}) xi={xi:.6}")
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Run(c) => cmd_run(c),
        Command::Sweep { common, param, values } => cmd_sweep(common, param, values),
        Command::Analytic { common, model } => cmd_analytic(common, model),
        Command::FitC0 { common, fading, alpha, betas } => cmd_fit(common, fading.as_deref(), *alpha, betas),
        Command::Reproduce { target, common } => cmd_reproduce(common, target),
        Command::Selfcheck => cmd_selfcheck(),
    }
}

fn cmd_run(c: &Common) -> Result<(), CliError> {
    let cfg = c.config(Scenario::S1)?;
    let r = run_with(&cfg, &c.run_options())?;
    let s = &r.stats;
    println!("{}", summary_line(r.index.value, r.index_se, s.p_fa, s.se_fa, s.p_md, s.se_md, s.xi));
    c.emit("run", &Table::from_reports(std::slice::from_ref(&r)), &Sidecar::new("run", &cfg))
}

fn cmd_sweep(c: &Common, param: &str, values: &[f64]) -> Result<(), CliError> {
    let cfg = c.config(Scenario::S1)?;
    let pts = sweep(&cfg, param, values, &c.run_options())?;
    for p in &pts {
        let r = &p.report;
        let s = &r.stats;
        println!("{}={} {}", p.param, p.value, summary_line(r.index.value, r.index_se, s.p_fa, s.se_fa, s.p_md, s.se_md, s.xi));
    }
    let values: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    let side = Sidecar::new("sweep", &cfg).arg("param", param).arg("values", values.join(","));
    c.emit("sweep", &Table::from_sweep(&pts), &side)
}

fn cmd_analytic(c: &Common, model: &str) -> Result<(), CliError> {
    let cfg = c.config(Scenario::S1)?;
    let m: AnalyticModel = model.parse()?;
    let quad = QuadratureSpec::default();
    let mut t = Table::new(&["scenario", "model", "radius", "index", "p_fa", "p_md", "xi"]);
    let (radius, idx) = match cfg.scenario {
        Scenario::S1 => {
            let p = cfg.scenario1_params();
            let r = if m == AnalyticModel::Prm { p.r_prm } else { p.r_ibm };
            (r, s1_index(m, &p, &quad)?)
        }
        Scenario::S2 | Scenario::S3 => {
            let p = cfg.scenario2_params();
            let r = if m == AnalyticModel::Prm { p.base.r_prm } else { p.base.r_ibm };
            (r, s2_index(m, &p, &quad)?)
        }
        Scenario::S4 => return Err(CliError::Usage("no closed form for scenario s4; use `run`".into())),
    };
    println!("{}", summary_line(idx.value, 0.0, idx.p_fa, 0.0, idx.p_md, 0.0, idx.xi));
    t.push(vec![cfg.scenario.to_string().into(), model.into(), radius.into(), idx.value.into(), idx.p_fa.into(), idx.p_md.into(), idx.xi.into()]);
    let mut side = Sidecar::new("analytic", &cfg).arg("model", model);
    if cfg.scenario == Scenario::S3 {
        let p = cfg.scenario2_params();
        let search = TauSearch::default();
        let (zeta, r_max) = zeta_threshold(&p)?;
        let upper = s3_chernoff_phym_upper(&p, &search, &quad)?;
        let lower = s3_chernoff_ibm_lower(&p, p.base.r_ibm, &search, &quad)?;
        println!("zeta={zeta:.6e} r_max={r_max:.4} chernoff: Pr[PhyM outage]<={upper:.6} Pr[IBM outage]>={lower:.6}");
        if p.base.r_prm <= r_max {
            let b = s3_prm_index_bounds(&p, None, &search, &quad)?;
            println!("PRM index in [{:.6}, 1]", b.lower);
            side = side.arg("prm_index_lower", b.lower);
        }
        side = side.arg("zeta", zeta).arg("r_max", r_max).arg("chernoff_phym_upper", upper).arg("chernoff_ibm_lower", lower);
    }
    c.emit("analytic", &t, &side)
}

fn cmd_fit(c: &Common, fading: Option<&str>, alpha: Option<f64>, betas: &[f64]) -> Result<(), CliError> {
    let mut cfg = c.config(Scenario::S1)?;
    let fading: FadingKind = match fading {
        Some(f) => f.parse::<FadingKind>().map_err(MonteCarloError::from)?,
        None => cfg.fading,
    };
    let alpha = alpha.unwrap_or(cfg.alpha);
    if alpha <= 2.0 && cfg.truncation == Truncation::Auto {
        log::info!("alpha <= 2: using a {ALPHA2_RADIUS} m network radius");
        cfg.truncation = Truncation::Fixed(ALPHA2_RADIUS);
    }
    let grid = if betas.is_empty() { default_beta_grid() } else { betas.to_vec() };
    let f = fit_c0(&cfg, fading, alpha, &grid, &c.run_options())?;
    let m = &f.at_optimum;
    println!(
        "c0={:.6} mean S={:.6} rho={:.6} deviation={:.3}% (reference {} alpha={})",
        f.c0, m.mean_index, m.rho, m.deviation_pct, fading, alpha
    );
    let mut t = Table::new(&["beta_db", "index"]);
    for (b, s) in m.beta_db.iter().zip(&m.index) {
        t.push(vec![(*b).into(), (*s).into()]);
    }
    let grid: Vec<String> = grid.iter().map(|b| b.to_string()).collect();
    let side = Sidecar::new("fit-c0", &cfg)
        .arg("fading", fading)
        .arg("alpha", alpha)
        .arg("betas", grid.join(","))
        .arg("c0", f.c0)
        .arg("mean_index", m.mean_index)
        .arg("rho", m.rho)
        .arg("deviation_pct", m.deviation_pct);
    c.emit("fit-c0", &t, &side)
}

fn cmd_reproduce(c: &Common, target: &str) -> Result<(), CliError> {
    let target: Target = target.parse().map_err(CliError::Usage)?;
    let cfg = c.config(target.scenario())?;
    let start = Instant::now();
    let t = reproduce(target, &cfg, &c.run_options())?;
    println!("{target}: {} rows in {:.1} s", t.rows.len(), start.elapsed().as_secs_f64());
    c.emit(&format!("reproduce-{target}"), &t, &Sidecar::new("reproduce", &cfg).arg("target", target))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name: name.to_string(), passed, detail }
}

/// The invariant suite behind `ims selfcheck`.
pub fn selfcheck() -> Vec<CheckResult> {
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for theta_deg in [10.0, 20.0, 45.0, 90.0, 180.0, 360.0] {
        for z in [0.0, 0.01, 0.1, 0.3] {
            let theta = theta_deg * std::f64::consts::PI / 180.0;
            let a = SectorAntenna::new(theta, z).expect("valid antenna");
            let mean = (theta * a.main_gain() + (std::f64::consts::TAU - theta) * a.z) / std::f64::consts::TAU;
            worst = worst.max((mean - 1.0).abs());
        }
    }
    out.push(check("antenna gain averages to one", worst < 1e-12, format!("max deviation {worst:.1e}")));

    for s in [Scenario::S1, Scenario::S2, Scenario::S3, Scenario::S4] {
        let mut cfg = ScenarioConfig::preset(s);
        cfg.trials = if s == Scenario::S4 { 200 } else { 1000 };
        let res = TrialSampler::new(&cfg).and_then(|sampler| {
            let ibm = ModelSpec::Ibm { r_ibm: 60.0 };
            fold_trials(
                &sampler,
                cfg.trials,
                None,
                || 0u64,
                |bad, _, real| {
                    if real.sinr_y(&ModelSpec::PhyM) > real.sinr_y(&ibm) {
                        *bad += 1;
                    }
                },
                |a, b| a + b,
            )
        });
        let (ok, detail) = match res {
            Ok(0) => (true, format!("{} topologies", cfg.trials)),
            Ok(n) => (false, format!("{n} of {} topologies violate", cfg.trials)),
            Err(e) => (false, e.to_string()),
        };
        out.push(check(&format!("{s}: PhyM SINR never exceeds IBM SINR"), ok, detail));
    }

    let spots = [(0.5, std::f64::consts::PI.sqrt()), (5.0, 24.0), (1.5, 0.5 * std::f64::consts::PI.sqrt())];
    let err = spots.iter().map(|&(x, v)| (gamma(x) / v - 1.0).abs()).fold(0.0, f64::max);
    let inc = upper_incomplete_gamma(1.0, 2.0).map(|v| (v / (-2.0f64).exp() - 1.0).abs()).unwrap_or(f64::INFINITY);
    let inc2 = upper_incomplete_gamma(0.5, 1.0).map(|v| (v / 0.2788055852806619 - 1.0).abs()).unwrap_or(f64::INFINITY);
    out.push(check("gamma function spot values", err < 1e-12 && inc < 1e-12 && inc2 < 1e-10, format!("rel err {:.1e}", err.max(inc).max(inc2))));

    let y = example1_column(&EXAMPLE1_Y);
    let z = example1_column(&EXAMPLE1_Z);
    let got = [y.euclidean, z.euclidean, y.bhattacharyya_distance, z.bhattacharyya_distance, y.kl_divergence, z.kl_divergence];
    let want = [0.324, 0.255, 0.033, 0.045, 0.059, 0.098];
    let ok = got.iter().zip(&want).all(|(g, w)| (g - w).abs() <= 1e-3 + 1e-12);
    out.push(check("discrete comparison example", ok, format!("{got:.3?}")));
    out
}

fn cmd_selfcheck() -> Result<(), CliError> {
    let start = Instant::now();
    let results = selfcheck();
    let mut failed = 0;
    for r in &results {
        println!("{} {} ({})", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        failed += usize::from(!r.passed);
    }
    println!("{} checks, {failed} failed, {:.1} s", results.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        return Err(CliError::Selfcheck(failed));
    }
    Ok(())
}

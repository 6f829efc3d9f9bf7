//! Seeded trial generation and parallel aggregation.
//!
//! Trial `i` draws from a ChaCha8 stream keyed by the run seed with stream
//! number `i`, so every trial is reproducible on its own and results do not
//! depend on how trials are spread over threads. Trials are grouped in fixed
//! blocks whose partial results are merged in block order.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{poisson_count, sample_exponential_ppp, AnnulusSector};
use crate::interference::{sinr_with_background, InterferenceError, LinkBudgetTerm, ModelSpec, SinrPair};
use crate::propagation::{db_to_linear, FadingKind, FadingSampler, PathLossLaw, SectorAntenna};
use crate::similarity::{
    bhattacharyya, bhattacharyya_index_bounds, kl_divergence, similarity_index, ErrorStats, Histogram, IndexResult, LogBase,
    OutageCounts,
};

use super::config::{Scenario, ScenarioConfig, Truncation};
use super::mmwave::{MmWaveParams, MmWaveScratch, SideParams};
use super::MonteCarloError;

/// Trials per work unit.
pub const BLOCK: u64 = 2048;

/// Target standard deviation of the neglected far-field interference in
/// scenario 1, relative to the signal power at threshold.
pub const TAIL_REL_STD: f64 = 1e-3;

/// Mass of the exponential LoS field left beyond the truncation radius.
pub const LOS_TAIL_MASS: f64 = 1e-6;

/// Largest radius the automatic rule will choose.
pub const MAX_AUTO_RADIUS: f64 = 20_000.0;

/// One sampled topology: the typical link and interferer terms as seen by
/// the reference model y and by the test model x.
#[derive(Debug, Clone, Default)]
pub struct Realization {
    pub y_signal: LinkBudgetTerm,
    pub x_signal: LinkBudgetTerm,
    pub y_terms: Vec<LinkBudgetTerm>,
    /// Unused when `x_shares_y` is set.
    pub x_terms: Vec<LinkBudgetTerm>,
    pub x_shares_y: bool,
    /// Mean interference from beyond `radius`, added for models that count it.
    pub y_background: f64,
    pub x_background: f64,
    pub radius: f64,
    pub noise: f64,
}

impl Realization {
    pub fn clear(&mut self) {
        self.y_terms.clear();
        self.x_terms.clear();
        self.y_background = 0.0;
        self.x_background = 0.0;
    }

    pub fn x_terms(&self) -> &[LinkBudgetTerm] {
        if self.x_shares_y {
            &self.y_terms
        } else {
            &self.x_terms
        }
    }

    fn eval(&self, model: &ModelSpec, signal: &LinkBudgetTerm, terms: &[LinkBudgetTerm], background: f64) -> f64 {
        let bg = if model.counts_beyond(self.radius) { background } else { 0.0 };
        match sinr_with_background(model, signal, terms, bg, self.noise) {
            Ok(g) => g,
            // no signal and nothing else: treat as outage
            Err(InterferenceError::Undefined) => 0.0,
            Err(e) => unreachable!("{e}"),
        }
    }

    pub fn sinr_y(&self, model: &ModelSpec) -> f64 {
        self.eval(model, &self.y_signal, &self.y_terms, self.y_background)
    }

    pub fn sinr_x(&self, model: &ModelSpec) -> f64 {
        self.eval(model, &self.x_signal, self.x_terms(), self.x_background)
    }

    pub fn pair(&self, model_x: &ModelSpec, model_y: &ModelSpec) -> SinrPair {
        SinrPair { gamma_x: self.sinr_x(model_x), gamma_y: self.sinr_y(model_y) }
    }
}

/// Mean of a unit-scale fading draw.
fn fading_mean(kind: FadingKind) -> f64 {
    match kind {
        FadingKind::Rayleigh | FadingKind::Nakagami { .. } => 1.0,
        FadingKind::Deterministic { c0 } => c0,
        FadingKind::LogNormalShadow { sigma_db } => {
            let s = sigma_db * std::f64::consts::LN_10 / 10.0;
            (0.5 * s * s).exp()
        }
    }
}

/// E[h²] of a fading draw.
fn fading_second_moment(kind: FadingKind) -> f64 {
    match kind {
        FadingKind::Rayleigh => 2.0,
        FadingKind::Nakagami { m } => 1.0 + 1.0 / m,
        FadingKind::Deterministic { c0 } => c0 * c0,
        FadingKind::LogNormalShadow { sigma_db } => {
            let s = sigma_db * std::f64::consts::LN_10 / 10.0;
            (2.0 * s * s).exp()
        }
    }
}

#[derive(Debug, Clone)]
struct OmniSampler {
    lambda: f64,
    radius: f64,
    law: PathLossLaw,
    power: f64,
    d0: f64,
    y: FadingSampler,
    x: Option<FadingSampler>,
    x_signal: bool,
    y_background: f64,
    x_background: f64,
}

#[derive(Debug, Clone)]
struct SectorSampler {
    intensity: f64,
    k: f64,
    region: AnnulusSector,
    law: PathLossLaw,
    power: f64,
    gain: f64,
    d0: f64,
    y: FadingSampler,
    x: Option<FadingSampler>,
    x_signal: bool,
}

#[derive(Debug, Clone)]
enum Kind {
    Omni(OmniSampler),
    Sector(SectorSampler),
    MmWave(MmWaveParams),
}

/// Turns a trial index into a [`Realization`].
#[derive(Debug, Clone)]
pub struct TrialSampler {
    key: [u8; 32],
    kind: Kind,
    radius: f64,
    noise: f64,
}

/// Per-worker scratch space.
#[derive(Debug, Default)]
pub struct Scratch {
    mmwave: MmWaveScratch,
}

fn largest_finite_radius(cfg: &ScenarioConfig) -> Result<f64, MonteCarloError> {
    let mut r = cfg.d0;
    for m in [cfg.model_x()?, cfg.model_y()?] {
        match m {
            ModelSpec::Ibm { r_ibm } if r_ibm.is_finite() => r = r.max(r_ibm),
            ModelSpec::Prm { r_prm } if r_prm.is_finite() => r = r.max(r_prm),
            _ => {}
        }
    }
    Ok(r)
}

/// Truncation radius the engine will use for `cfg`.
pub fn truncation_radius(cfg: &ScenarioConfig) -> Result<f64, MonteCarloError> {
    if let Truncation::Fixed(r) = cfg.truncation {
        return Ok(r);
    }
    let floor = 2.0 * largest_finite_radius(cfg)?;
    let r = match cfg.scenario {
        Scenario::S4 => return Ok(500.0),
        Scenario::S1 => {
            if cfg.alpha <= 2.0 {
                return Err(MonteCarloError::Config(super::ConfigError::Invalid(format!(
                    "alpha = {} <= 2: the plane-wide interference diverges; set truncation_radius",
                    cfg.alpha
                ))));
            }
            // std of the interference beyond R: sqrt(πλ E[h²] p² c² R^{2−2α}/(α−1));
            // keep it below TAIL_REL_STD of the signal power at threshold, p c d0^{−α}/β
            let m2 = fading_second_moment(cfg.fading).max(cfg.x_fading.map_or(0.0, fading_second_moment));
            let rhs = cfg.beta() * cfg.d0.powf(cfg.alpha) / TAIL_REL_STD * (PI * cfg.lambda_t() * m2 / (cfg.alpha - 1.0)).sqrt();
            rhs.powf(1.0 / (cfg.alpha - 1.0))
        }
        Scenario::S2 | Scenario::S3 => {
            let k = cfg.eps_lambda_o;
            if k == 0.0 {
                return Err(MonteCarloError::Config(super::ConfigError::Invalid(
                    "eps_lambda_o = 0: no blockage to truncate the field; set truncation_radius".into(),
                )));
            }
            // solve (1 + x) e^{−x} = LOS_TAIL_MASS for x = kR
            let mut x = 10.0f64;
            for _ in 0..100 {
                let f = (1.0 + x).ln() - x - LOS_TAIL_MASS.ln();
                let df = 1.0 / (1.0 + x) - 1.0;
                x -= f / df;
            }
            x / k
        }
    };
    if r > MAX_AUTO_RADIUS {
        log::warn!("automatic truncation radius {r:.0} m capped at {MAX_AUTO_RADIUS} m");
    }
    Ok(r.min(MAX_AUTO_RADIUS).max(floor))
}

impl TrialSampler {
    pub fn new(cfg: &ScenarioConfig) -> Result<Self, MonteCarloError> {
        cfg.validate()?;
        let radius = truncation_radius(cfg)?;
        let law = PathLossLaw::new(cfg.c(), cfg.alpha, cfg.a)?;
        let y = FadingSampler::new(cfg.fading)?;
        let x = cfg.x_fading.map(FadingSampler::new).transpose()?;
        let kind = match cfg.scenario {
            Scenario::S1 => {
                let lambda = cfg.lambda_t();
                let tail = |mean_h: f64| {
                    if cfg.far_field_mean && cfg.alpha > 2.0 {
                        2.0 * PI * lambda * cfg.power() * cfg.c() * mean_h * radius.powf(2.0 - cfg.alpha) / (cfg.alpha - 2.0)
                    } else {
                        0.0
                    }
                };
                Kind::Omni(OmniSampler {
                    lambda,
                    radius,
                    law,
                    power: cfg.power(),
                    d0: cfg.d0,
                    y,
                    x,
                    x_signal: cfg.x_fading_signal,
                    y_background: tail(fading_mean(cfg.fading)),
                    x_background: tail(fading_mean(cfg.x_fading.unwrap_or(cfg.fading))),
                })
            }
            Scenario::S2 | Scenario::S3 => {
                let theta = cfg.theta();
                Kind::Sector(SectorSampler {
                    intensity: cfg.lambda_t() * theta / std::f64::consts::TAU,
                    k: cfg.eps_lambda_o,
                    region: AnnulusSector::new(theta, 0.0, radius)?,
                    law,
                    power: cfg.power(),
                    gain: SectorAntenna::new(theta, 0.0)?.main_gain(),
                    d0: cfg.d0,
                    y,
                    x,
                    x_signal: cfg.x_fading_signal,
                })
            }
            Scenario::S4 => {
                let theta = cfg.theta();
                let side = |l_o_db: f64, refl: f64, z_db: f64| -> Result<SideParams, MonteCarloError> {
                    Ok(SideParams { l_o_db, refl_coeff: refl, antenna: SectorAntenna::new(theta, db_to_linear(z_db))? })
                };
                Kind::MmWave(MmWaveParams {
                    lambda_t: cfg.lambda_t(),
                    lambda_o: cfg.lambda_o(),
                    window: radius,
                    d0: cfg.d0,
                    power: cfg.power(),
                    noise: cfg.noise(),
                    c_db: cfg.c_db,
                    alpha: cfg.alpha,
                    a: cfg.a,
                    reflector_prob: cfg.reflector_prob,
                    shadow_sigma_db: cfg.shadow_sigma_db,
                    y: side(cfg.l_o_db, cfg.refl_coeff, cfg.z_db)?,
                    x: side(
                        cfg.x_l_o_db.unwrap_or(cfg.l_o_db),
                        cfg.x_refl_coeff.unwrap_or(cfg.refl_coeff),
                        cfg.x_z_db.unwrap_or(cfg.z_db),
                    )?,
                })
            }
        };
        let mut key = [0u8; 32];
        ChaCha8Rng::seed_from_u64(cfg.seed).fill(&mut key);
        Ok(TrialSampler { key, kind, radius, noise: cfg.noise() })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Generator for one trial.
    pub fn rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(trial);
        rng
    }

    pub fn sample(&self, trial: u64, scratch: &mut Scratch, out: &mut Realization) -> Result<(), MonteCarloError> {
        let mut rng = self.rng(trial);
        out.clear();
        out.radius = self.radius;
        out.noise = self.noise;
        match &self.kind {
            Kind::Omni(s) => {
                out.x_shares_y = s.x.is_none();
                let h0 = s.y.sample(&mut rng);
                let g0 = s.law.gain(s.d0);
                out.y_signal = term(s.power, 1.0, g0 * h0, s.d0);
                out.x_signal = match &s.x {
                    Some(x) if s.x_signal => term(s.power, 1.0, g0 * x.sample(&mut rng), s.d0),
                    _ => out.y_signal,
                };
                out.y_background = s.y_background;
                out.x_background = s.x_background;
                let n = poisson_count(s.lambda * PI * s.radius * s.radius, &mut rng);
                for _ in 0..n {
                    let r = s.radius * rng.random::<f64>().sqrt();
                    let g = s.law.gain(r);
                    let h = s.y.sample(&mut rng);
                    out.y_terms.push(term(s.power, 1.0, g * h, r));
                    if let Some(x) = &s.x {
                        out.x_terms.push(term(s.power, 1.0, g * x.sample(&mut rng), r));
                    }
                }
            }
            Kind::Sector(s) => {
                out.x_shares_y = s.x.is_none();
                let h0 = s.y.sample(&mut rng);
                let g0 = s.law.gain(s.d0);
                out.y_signal = sector_term(s, g0 * h0, s.d0);
                out.x_signal = match &s.x {
                    Some(x) if s.x_signal => sector_term(s, g0 * x.sample(&mut rng), s.d0),
                    _ => out.y_signal,
                };
                let field = sample_exponential_ppp(s.intensity, s.k, &s.region, &mut rng)?;
                for p in &field.points {
                    let g = s.law.gain(p.r);
                    let h = s.y.sample(&mut rng);
                    out.y_terms.push(sector_term(s, g * h, p.r));
                    if let Some(x) = &s.x {
                        out.x_terms.push(sector_term(s, g * x.sample(&mut rng), p.r));
                    }
                }
            }
            Kind::MmWave(p) => p.sample(&mut rng, &mut scratch.mmwave, out)?,
        }
        Ok(())
    }
}

fn term(power: f64, gain: f64, channel: f64, distance: f64) -> LinkBudgetTerm {
    LinkBudgetTerm { tx_power: power, tx_gain: gain, channel_gain: channel, rx_gain: gain, distance }
}

fn sector_term(s: &SectorSampler, channel: f64, distance: f64) -> LinkBudgetTerm {
    term(s.power, s.gain, channel, distance)
}

/// Folds `step` over every trial. Block results are combined left to right,
/// so the result depends only on the sampler and the number of trials.
pub fn fold_trials<A, I, F, M>(
    sampler: &TrialSampler,
    trials: u64,
    threads: Option<usize>,
    init: I,
    step: F,
    merge: M,
) -> Result<A, MonteCarloError>
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, u64, &Realization) + Sync,
    M: Fn(A, A) -> A,
{
    let blocks = trials.div_ceil(BLOCK);
    let work = || -> Vec<Result<A, MonteCarloError>> {
        (0..blocks)
            .into_par_iter()
            .map_init(
                || (Scratch::default(), Realization::default()),
                |(scratch, real), b| {
                    let mut acc = init();
                    let end = ((b + 1) * BLOCK).min(trials);
                    for t in b * BLOCK..end {
                        sampler.sample(t, scratch, real)?;
                        step(&mut acc, t, real);
                    }
                    Ok(acc)
                },
            )
            .collect()
    };
    let parts = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| MonteCarloError::ThreadPool(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut acc = init();
    for p in parts {
        acc = merge(acc, p?);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceStats {
    /// Bhattacharyya coefficient of the two SINR histograms.
    pub rho: f64,
    pub bhattacharyya_distance: f64,
    /// D(f_y ‖ f_x), natural log.
    pub kl_yx: f64,
    /// Bounds on the index implied by ρ and ξ.
    pub bound_lower: f64,
    pub bound_upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    /// E[log₂(1 + γ^x)]
    pub rate_x: f64,
    /// E[log₂(1 + γ^y)]
    pub rate_y: f64,
    /// |rate_x − rate_y| / rate_y in percent; `None` when rate_y is 0.
    pub deviation_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub seed: u64,
    pub trials: u64,
    pub model_x: ModelSpec,
    pub model_y: ModelSpec,
    pub truncation_radius: f64,
    pub stats: ErrorStats,
    pub index: IndexResult,
    pub index_se: f64,
    pub distances: Option<DistanceStats>,
    pub throughput: Throughput,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub threads: Option<usize>,
    /// Skip the SINR histograms.
    pub skip_distances: bool,
}

/// Outcome of one test model against the reference on a shared set of realizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model_x: ModelSpec,
    pub stats: ErrorStats,
    pub index: IndexResult,
    pub index_se: f64,
    pub distances: Option<DistanceStats>,
    pub throughput: Throughput,
}

#[derive(Debug, Clone)]
struct ModelAcc {
    counts: OutageCounts,
    hist_x: Histogram,
    rate_x: f64,
}

#[derive(Debug, Clone)]
struct MultiAcc {
    models: Vec<ModelAcc>,
    hist_y: Histogram,
    rate_y: f64,
}

impl MultiAcc {
    fn new(n: usize) -> Self {
        let m = ModelAcc { counts: OutageCounts::default(), hist_x: Histogram::sinr_db(), rate_x: 0.0 };
        MultiAcc { models: vec![m; n], hist_y: Histogram::sinr_db(), rate_y: 0.0 }
    }

    fn merge(self, o: MultiAcc) -> MultiAcc {
        MultiAcc {
            models: self
                .models
                .into_iter()
                .zip(o.models)
                .map(|(a, b)| ModelAcc { counts: a.counts.merge(b.counts), hist_x: a.hist_x.merge(&b.hist_x), rate_x: a.rate_x + b.rate_x })
                .collect(),
            hist_y: self.hist_y.merge(&o.hist_y),
            rate_y: self.rate_y + o.rate_y,
        }
    }
}

pub fn run(cfg: &ScenarioConfig) -> Result<RunReport, MonteCarloError> {
    run_with(cfg, &RunOptions::default())
}

pub fn run_with(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<RunReport, MonteCarloError> {
    let start = Instant::now();
    let (reports, radius) = run_models(cfg, &[cfg.model_x()?], opts)?;
    let r = reports.into_iter().next().expect("one model in, one report out");
    Ok(RunReport {
        config: cfg.clone(),
        seed: cfg.seed,
        trials: cfg.trials,
        model_x: r.model_x,
        model_y: cfg.model_y()?,
        truncation_radius: radius,
        index_se: r.index_se,
        stats: r.stats,
        index: r.index,
        distances: r.distances,
        throughput: r.throughput,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Evaluates several test models against `cfg`'s reference model on the same
/// realizations. `cfg.model_x` is ignored. Also returns the truncation radius.
pub fn run_models(cfg: &ScenarioConfig, models_x: &[ModelSpec], opts: &RunOptions) -> Result<(Vec<ModelReport>, f64), MonteCarloError> {
    let sampler = TrialSampler::new(cfg)?;
    let my = cfg.model_y()?;
    let beta = cfg.beta();
    let hist = !opts.skip_distances;
    let acc = fold_trials(
        &sampler,
        cfg.trials,
        opts.threads,
        || MultiAcc::new(models_x.len()),
        |acc, _, real| {
            let gamma_y = real.sinr_y(&my);
            for (m, a) in models_x.iter().zip(acc.models.iter_mut()) {
                let pair = SinrPair { gamma_x: real.sinr_x(m), gamma_y };
                a.counts.record(pair, beta);
                if hist {
                    a.hist_x.add_linear(pair.gamma_x);
                }
                a.rate_x += (1.0 + pair.gamma_x).log2();
            }
            if hist {
                acc.hist_y.add_linear(gamma_y);
            }
            acc.rate_y += (1.0 + gamma_y).log2();
        },
        MultiAcc::merge,
    )?;
    let n = cfg.trials as f64;
    let rate_y = acc.rate_y / n;
    let fy = acc.hist_y.mass();
    let mut out = Vec::with_capacity(models_x.len());
    for (m, a) in models_x.iter().zip(acc.models) {
        let stats = a.counts.stats(cfg.beta_db)?;
        let distances = if hist {
            let fx = a.hist_x.mass();
            let (rho, bd) = bhattacharyya(&fx, &fy)?;
            let (lo, hi) = bhattacharyya_index_bounds(stats.xi, rho)?;
            Some(DistanceStats { rho, bhattacharyya_distance: bd, kl_yx: kl_divergence(&fy, &fx, LogBase::Natural)?, bound_lower: lo, bound_upper: hi })
        } else {
            None
        };
        let rate_x = a.rate_x / n;
        let deviation_pct = if rate_y > 0.0 { Some((rate_x - rate_y).abs() / rate_y * 100.0) } else { None };
        out.push(ModelReport {
            model_x: *m,
            index: similarity_index(&stats, None),
            index_se: stats.index_se(),
            stats,
            distances,
            throughput: Throughput { rate_x, rate_y, deviation_pct },
        });
    }
    Ok((out, sampler.radius()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(s: Scenario) -> ScenarioConfig {
        let mut c = ScenarioConfig::preset(s);
        c.trials = 3000;
        c
    }

    #[test]
    fn identical_models_agree_exactly() {
        for s in [Scenario::S1, Scenario::S2, Scenario::S3] {
            let mut c = small(s);
            c.model_x = c.model_y;
            let r = run(&c).unwrap();
            assert_eq!(r.index.value, 1.0);
            assert_eq!(r.throughput.deviation_pct, Some(0.0));
        }
        let mut c = small(Scenario::S4);
        c.trials = 200;
        c.x_refl_coeff = None;
        let r = run(&c).unwrap();
        assert_eq!(r.index.value, 1.0);
    }

    #[test]
    fn result_independent_of_thread_count() {
        let mut c = small(Scenario::S1);
        c.trials = 5000;
        let a = run_with(&c, &RunOptions { threads: Some(1), ..Default::default() }).unwrap();
        let b = run_with(&c, &RunOptions { threads: Some(3), ..Default::default() }).unwrap();
        assert_eq!(a.stats, b.stats);
        assert_eq!(a.throughput, b.throughput);
        assert_eq!(a.distances, b.distances);
    }

    #[test]
    fn trial_streams_are_reproducible() {
        let c = small(Scenario::S2);
        let s = TrialSampler::new(&c).unwrap();
        let mut scratch = Scratch::default();
        let (mut a, mut b) = (Realization::default(), Realization::default());
        s.sample(17, &mut scratch, &mut a).unwrap();
        s.sample(3, &mut scratch, &mut b).unwrap();
        s.sample(17, &mut scratch, &mut b).unwrap();
        assert_eq!(a.y_terms, b.y_terms);
        assert_eq!(a.y_signal, b.y_signal);
    }

    #[test]
    fn auto_radius_rules() {
        let c = ScenarioConfig::preset(Scenario::S2);
        let r = truncation_radius(&c).unwrap();
        let x = 0.008 * r;
        assert!(((1.0 + x) * (-x).exp() - LOS_TAIL_MASS).abs() < 1e-12);
        let c1 = ScenarioConfig::preset(Scenario::S1);
        assert!(truncation_radius(&c1).unwrap() > 120.0);
        let mut bad = c1.clone();
        bad.alpha = 2.0;
        assert!(truncation_radius(&bad).is_err());
    }
}

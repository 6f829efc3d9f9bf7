//! Flat key-value scenario configuration.
//!
//! One `key = value` pair per line, `#` starts a comment. Lengths in metres,
//! powers and gains in dB/dBm (keys ending in `_db`/`_dbm`), angles in degrees
//! (`theta_deg`). Setting `scenario` first loads that preset; later keys
//! override it.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{zeta_threshold, Scenario1Params, Scenario2Params};
use crate::interference::ModelSpec;
use crate::propagation::{db_to_linear, dbm_to_watts, FadingKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("unknown key `{key}`; known keys: {known}")]
    UnknownKey { key: String, known: String },
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("`{0}` is not sweepable; sweepable keys: {1}")]
    NotSweepable(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// Omnidirectional antennas, fading, power-law path loss.
    S1,
    /// Sector antennas, exponential LoS probability, Rayleigh fading.
    S2,
    /// As S2 with a deterministic channel.
    S3,
    /// Rectangular obstacles, reflections, shadowing, side lobes.
    S4,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scenario::S1 => "s1",
            Scenario::S2 => "s2",
            Scenario::S3 => "s3",
            Scenario::S4 => "s4",
        };
        f.write_str(s)
    }
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s1" | "1" => Ok(Scenario::S1),
            "s2" | "2" => Ok(Scenario::S2),
            "s3" | "3" => Ok(Scenario::S3),
            "s4" | "4" => Ok(Scenario::S4),
            other => Err(format!("unknown scenario `{other}` (expected s1..s4)")),
        }
    }
}

/// Interference model choice, possibly resolved against the other parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelChoice {
    Fixed(ModelSpec),
    /// PRM with the largest radius that cannot raise a false alarm under a
    /// deterministic sector channel (`prm:zeta`).
    PrmZeta,
}

impl fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelChoice::Fixed(m) => m.fmt(f),
            ModelChoice::PrmZeta => f.write_str("prm:zeta"),
        }
    }
}

impl FromStr for ModelChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("prm:zeta") {
            return Ok(ModelChoice::PrmZeta);
        }
        s.parse::<ModelSpec>().map(ModelChoice::Fixed).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Truncation {
    Auto,
    Fixed(f64),
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Auto => f.write_str("auto"),
            Truncation::Fixed(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub d_t: f64,
    pub d_o: f64,
    pub d0: f64,
    pub alpha: f64,
    pub c_db: f64,
    pub a: f64,
    pub p_dbm: f64,
    pub sigma_dbm: f64,
    pub beta_db: f64,
    pub theta_deg: f64,
    pub z_db: f64,
    pub eps_lambda_o: f64,
    pub l_o_db: f64,
    pub refl_coeff: f64,
    pub reflector_prob: f64,
    pub shadow_sigma_db: f64,
    /// Fading of every link under the reference model.
    pub fading: FadingKind,
    pub model_x: ModelChoice,
    pub model_y: ModelChoice,
    /// Replaces the fading of the test model when set.
    pub x_fading: Option<FadingKind>,
    /// Whether `x_fading` also replaces the fading of the typical link.
    pub x_fading_signal: bool,
    pub x_l_o_db: Option<f64>,
    pub x_refl_coeff: Option<f64>,
    pub x_z_db: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub truncation: Truncation,
    /// Add the mean of the interference beyond the truncation radius (S1 only).
    pub far_field_mean: bool,
}

/// Keys accepted by [`ScenarioConfig::set`] besides `scenario`.
pub const KEYS: &[&str] = &[
    "d_t",
    "lambda_t",
    "d_o",
    "lambda_o",
    "d0",
    "alpha",
    "c_db",
    "a",
    "p_dbm",
    "sigma_dbm",
    "beta_db",
    "theta_deg",
    "z_db",
    "eps_lambda_o",
    "l_o_db",
    "refl_coeff",
    "reflector_prob",
    "shadow_sigma_db",
    "fading",
    "model_x",
    "model_y",
    "r_ibm",
    "r_prm",
    "delta",
    "eps_db",
    "x_fading",
    "x_fading_signal",
    "c0",
    "x_l_o_db",
    "x_refl_coeff",
    "x_z_db",
    "trials",
    "seed",
    "truncation_radius",
    "far_field_mean",
];

/// Scalar keys that [`crate::montecarlo::sweep`] can vary.
pub const SWEEPABLE: &[&str] = &[
    "d_t",
    "lambda_t",
    "d_o",
    "lambda_o",
    "d0",
    "alpha",
    "c_db",
    "p_dbm",
    "sigma_dbm",
    "beta_db",
    "theta_deg",
    "z_db",
    "eps_lambda_o",
    "l_o_db",
    "refl_coeff",
    "shadow_sigma_db",
    "r_ibm",
    "r_prm",
    "delta",
    "eps_db",
    "c0",
    "x_l_o_db",
    "x_refl_coeff",
    "x_z_db",
    "truncation_radius",
];

pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::preset(Scenario::S1)
    }
}

impl ScenarioConfig {
    pub fn preset(scenario: Scenario) -> Self {
        let s1 = ScenarioConfig {
            scenario: Scenario::S1,
            d_t: 80.0,
            d_o: f64::INFINITY,
            d0: 20.0,
            alpha: 3.6,
            c_db: -22.7,
            a: 1.0,
            p_dbm: 20.0,
            sigma_dbm: -111.0,
            beta_db: 5.0,
            theta_deg: 360.0,
            z_db: f64::NEG_INFINITY,
            eps_lambda_o: 0.0,
            l_o_db: f64::INFINITY,
            refl_coeff: 0.0,
            reflector_prob: 0.1,
            shadow_sigma_db: 0.0,
            fading: FadingKind::Rayleigh,
            model_x: ModelChoice::Fixed(ModelSpec::Ibm { r_ibm: 60.0 }),
            model_y: ModelChoice::Fixed(ModelSpec::PhyM),
            x_fading: None,
            x_fading_signal: false,
            x_l_o_db: None,
            x_refl_coeff: None,
            x_z_db: None,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            truncation: Truncation::Auto,
            far_field_mean: true,
        };
        let s2 = ScenarioConfig {
            scenario: Scenario::S2,
            d_t: 30.0,
            alpha: 2.0,
            c_db: -61.4,
            sigma_dbm: -84.0,
            theta_deg: 20.0,
            eps_lambda_o: 0.008,
            model_x: ModelChoice::Fixed(ModelSpec::Prm { r_prm: 40.0 }),
            far_field_mean: false,
            ..s1.clone()
        };
        match scenario {
            Scenario::S1 => s1,
            Scenario::S2 => s2,
            Scenario::S3 => ScenarioConfig {
                scenario: Scenario::S3,
                fading: FadingKind::Deterministic { c0: 1.0 },
                model_x: ModelChoice::PrmZeta,
                ..s2
            },
            Scenario::S4 => ScenarioConfig {
                scenario: Scenario::S4,
                d_t: 50.0,
                d_o: 20.0,
                eps_lambda_o: 0.0,
                l_o_db: 10.0,
                refl_coeff: 0.63,
                z_db: -10.0,
                shadow_sigma_db: 5.8,
                fading: FadingKind::Deterministic { c0: 1.0 },
                model_x: ModelChoice::Fixed(ModelSpec::PhyM),
                x_refl_coeff: Some(0.0),
                truncation: Truncation::Fixed(500.0),
                ..s2
            },
        }
    }

    /// Parse a config file body.
    pub fn from_kv_str(text: &str) -> Result<Self, ConfigError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax { line: i + 1, text: raw.to_string() })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let mut cfg = match pairs.iter().rev().find(|(k, _)| k == "scenario") {
            Some((_, v)) => Self::preset(v.parse().map_err(|reason| bad("scenario", v, reason))?),
            None => Self::default(),
        };
        for (k, v) in pairs.iter().filter(|(k, _)| k != "scenario") {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Apply one `key = value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        let num = || parse_f64(key, v);
        match key {
            "scenario" => {
                let s: Scenario = v.parse().map_err(|reason| bad(key, v, reason))?;
                let (trials, seed) = (self.trials, self.seed);
                *self = Self::preset(s);
                self.trials = trials;
                self.seed = seed;
            }
            "d_t" => self.d_t = num()?,
            "lambda_t" => self.d_t = 1.0 / num()?.sqrt(),
            "d_o" => self.d_o = num()?,
            "lambda_o" => self.d_o = 1.0 / num()?.sqrt(),
            "d0" => self.d0 = num()?,
            "alpha" => self.alpha = num()?,
            "c_db" => self.c_db = num()?,
            "a" => self.a = num()?,
            "p_dbm" => self.p_dbm = num()?,
            "sigma_dbm" => self.sigma_dbm = num()?,
            "beta_db" => self.beta_db = num()?,
            "theta_deg" => self.theta_deg = num()?,
            "z_db" => self.z_db = num()?,
            "eps_lambda_o" => self.eps_lambda_o = num()?,
            "l_o_db" => self.l_o_db = num()?,
            "refl_coeff" => self.refl_coeff = num()?,
            "reflector_prob" => self.reflector_prob = num()?,
            "shadow_sigma_db" => self.shadow_sigma_db = num()?,
            "fading" => self.fading = v.parse().map_err(|e: crate::propagation::PropagationError| bad(key, v, e.to_string()))?,
            "model_x" => self.model_x = v.parse().map_err(|e| bad(key, v, e))?,
            "model_y" => self.model_y = v.parse().map_err(|e| bad(key, v, e))?,
            "r_ibm" => self.model_x = ModelChoice::Fixed(checked_model(key, v, ModelSpec::Ibm { r_ibm: num()? })?),
            "r_prm" => {
                self.model_x = if v.eq_ignore_ascii_case("zeta") {
                    ModelChoice::PrmZeta
                } else {
                    ModelChoice::Fixed(checked_model(key, v, ModelSpec::Prm { r_prm: num()? })?)
                }
            }
            "delta" => {
                let m = ModelSpec::prm_from_delta(num()?, self.d0).map_err(|e| bad(key, v, e.to_string()))?;
                self.model_x = ModelChoice::Fixed(m);
            }
            "eps_db" => self.model_x = ModelChoice::Fixed(checked_model(key, v, ModelSpec::Tim { eps_gain: db_to_linear(num()?) })?),
            "x_fading" => {
                self.x_fading = if v.eq_ignore_ascii_case("none") {
                    None
                } else {
                    Some(v.parse().map_err(|e: crate::propagation::PropagationError| bad(key, v, e.to_string()))?)
                }
            }
            "x_fading_signal" => self.x_fading_signal = parse_bool(key, v)?,
            "c0" => self.x_fading = Some(FadingKind::Deterministic { c0: num()? }),
            "x_l_o_db" => self.x_l_o_db = parse_opt(key, v)?,
            "x_refl_coeff" => self.x_refl_coeff = parse_opt(key, v)?,
            "x_z_db" => self.x_z_db = parse_opt(key, v)?,
            "trials" => self.trials = v.parse().map_err(|_| bad(key, v, "expected a positive integer"))?,
            "seed" => self.seed = v.parse().map_err(|_| bad(key, v, "expected an unsigned 64-bit integer"))?,
            "truncation_radius" => {
                self.truncation = if v.eq_ignore_ascii_case("auto") { Truncation::Auto } else { Truncation::Fixed(num()?) }
            }
            "far_field_mean" => self.far_field_mean = parse_bool(key, v)?,
            _ => {
                return Err(ConfigError::UnknownKey { key: key.to_string(), known: format!("scenario, {}", KEYS.join(", ")) });
            }
        }
        Ok(())
    }

    /// Set a sweepable scalar.
    pub fn set_scalar(&mut self, key: &str, value: f64) -> Result<(), ConfigError> {
        if !SWEEPABLE.contains(&key) {
            return Err(ConfigError::NotSweepable(key.to_string(), SWEEPABLE.join(", ")));
        }
        self.set(key, &format!("{value}"))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let inv = |m: String| Err(ConfigError::Invalid(m));
        if self.trials < 1 {
            return inv("trials must be >= 1".into());
        }
        if !(self.d_t > 0.0 && self.d_t.is_finite()) {
            return inv(format!("d_t = {} must be positive and finite", self.d_t));
        }
        if !(self.d0 >= self.a && self.a > 0.0) {
            return inv(format!("need d0 >= a > 0 (d0 = {}, a = {})", self.d0, self.a));
        }
        if !(self.alpha > 0.0) {
            return inv(format!("alpha = {} must be positive", self.alpha));
        }
        for (name, v) in [("c_db", self.c_db), ("p_dbm", self.p_dbm), ("beta_db", self.beta_db)] {
            if !v.is_finite() {
                return inv(format!("{name} must be finite"));
            }
        }
        if self.sigma_dbm.is_nan() || self.sigma_dbm == f64::INFINITY {
            return inv("sigma_dbm must be finite or -inf".into());
        }
        if !(self.theta_deg > 0.0 && self.theta_deg <= 360.0) {
            return inv(format!("theta_deg = {} outside (0, 360]", self.theta_deg));
        }
        for (name, z) in [("z_db", Some(self.z_db)), ("x_z_db", self.x_z_db)] {
            if let Some(z) = z {
                if !(z < 0.0) {
                    return inv(format!("{name} = {z} must be negative (side lobe below 0 dB)"));
                }
            }
        }
        if !(self.eps_lambda_o >= 0.0 && self.eps_lambda_o.is_finite()) {
            return inv(format!("eps_lambda_o = {} must be finite and >= 0", self.eps_lambda_o));
        }
        self.fading.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if let Some(f) = self.x_fading {
            f.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let Truncation::Fixed(r) = self.truncation {
            if !(r > self.d0 && r.is_finite()) {
                return inv(format!("truncation_radius = {r} must exceed d0 and be finite"));
            }
        }
        match self.scenario {
            Scenario::S1 => {
                if self.theta_deg != 360.0 {
                    return inv("scenario s1 is omnidirectional (theta_deg = 360)".into());
                }
            }
            Scenario::S2 | Scenario::S3 => {
                if self.z_db != f64::NEG_INFINITY || self.x_z_db.is_some_and(|z| z != f64::NEG_INFINITY) {
                    return inv("scenarios s2/s3 assume no side lobes (z_db = -inf)".into());
                }
                if self.scenario == Scenario::S3 && self.fading.is_random() {
                    return inv("scenario s3 needs a deterministic fading".into());
                }
            }
            Scenario::S4 => {
                if !(self.d_o > 0.0) {
                    return inv("scenario s4 needs d_o > 0".into());
                }
                if !(self.l_o_db >= 0.0) || self.x_l_o_db.is_some_and(|l| !(l >= 0.0)) {
                    return inv("penetration losses must be >= 0 dB".into());
                }
                for r in [Some(self.refl_coeff), self.x_refl_coeff].into_iter().flatten() {
                    if !(0.0..=1.0).contains(&r) {
                        return inv(format!("reflection coefficient {r} outside [0, 1]"));
                    }
                }
                if !(0.0..=1.0).contains(&self.reflector_prob) {
                    return inv(format!("reflector_prob = {} outside [0, 1]", self.reflector_prob));
                }
                if !(self.shadow_sigma_db >= 0.0) {
                    return inv("shadow_sigma_db must be >= 0".into());
                }
            }
        }
        self.resolve_model(self.model_x)?;
        self.resolve_model(self.model_y)?;
        Ok(())
    }

    pub fn lambda_t(&self) -> f64 {
        1.0 / (self.d_t * self.d_t)
    }

    pub fn lambda_o(&self) -> f64 {
        if self.d_o.is_infinite() {
            0.0
        } else {
            1.0 / (self.d_o * self.d_o)
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta_deg.to_radians().min(TAU)
    }

    pub fn beta(&self) -> f64 {
        db_to_linear(self.beta_db)
    }

    pub fn noise(&self) -> f64 {
        dbm_to_watts(self.sigma_dbm)
    }

    pub fn power(&self) -> f64 {
        dbm_to_watts(self.p_dbm)
    }

    pub fn c(&self) -> f64 {
        db_to_linear(self.c_db)
    }

    pub fn model_x(&self) -> Result<ModelSpec, ConfigError> {
        self.resolve_model(self.model_x)
    }

    pub fn model_y(&self) -> Result<ModelSpec, ConfigError> {
        self.resolve_model(self.model_y)
    }

    fn resolve_model(&self, m: ModelChoice) -> Result<ModelSpec, ConfigError> {
        match m {
            ModelChoice::Fixed(spec) => Ok(spec),
            ModelChoice::PrmZeta => {
                let (_, r_max) = zeta_threshold(&self.scenario2_params()).map_err(|e| ConfigError::Invalid(e.to_string()))?;
                Ok(ModelSpec::Prm { r_prm: r_max })
            }
        }
    }

    /// Closed-form parameter set matching this configuration.
    pub fn scenario1_params(&self) -> Scenario1Params {
        let (r_ibm, r_prm) = match self.model_x() {
            Ok(ModelSpec::Ibm { r_ibm }) => (r_ibm, r_ibm),
            Ok(ModelSpec::Prm { r_prm }) => (r_prm, r_prm),
            _ => (60.0, 40.0),
        };
        Scenario1Params {
            lambda_t: self.lambda_t(),
            d0: self.d0,
            alpha: self.alpha,
            c: self.c(),
            a: self.a,
            p: self.power(),
            sigma: self.noise(),
            beta: self.beta(),
            r_ibm,
            r_prm,
        }
    }

    pub fn scenario2_params(&self) -> Scenario2Params {
        // avoid recursion through model_x() for prm:zeta
        let (r_ibm, r_prm) = match self.model_x {
            ModelChoice::Fixed(ModelSpec::Ibm { r_ibm }) => (r_ibm, r_ibm),
            ModelChoice::Fixed(ModelSpec::Prm { r_prm }) => (r_prm, r_prm),
            _ => (80.0, 40.0),
        };
        let mut p = Scenario2Params {
            base: Scenario1Params {
                lambda_t: self.lambda_t(),
                d0: self.d0,
                alpha: self.alpha,
                c: self.c(),
                a: self.a,
                p: self.power(),
                sigma: self.noise(),
                beta: self.beta(),
                r_ibm,
                r_prm,
            },
            theta: self.theta(),
            eps_lambda_o: self.eps_lambda_o,
        };
        if self.model_x == ModelChoice::PrmZeta {
            // ζ does not depend on the radii
            if let Ok((_, r)) = zeta_threshold(&p) {
                p.base.r_prm = r;
                p.base.r_ibm = r;
            }
        }
        p
    }

    /// Every key with its current value, as written by [`Self::to_kv_string`].
    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("scenario", self.scenario.to_string());
        put("d_t", fmt_f64(self.d_t));
        put("d_o", fmt_f64(self.d_o));
        put("d0", fmt_f64(self.d0));
        put("alpha", fmt_f64(self.alpha));
        put("c_db", fmt_f64(self.c_db));
        put("a", fmt_f64(self.a));
        put("p_dbm", fmt_f64(self.p_dbm));
        put("sigma_dbm", fmt_f64(self.sigma_dbm));
        put("beta_db", fmt_f64(self.beta_db));
        put("theta_deg", fmt_f64(self.theta_deg));
        put("z_db", fmt_f64(self.z_db));
        put("eps_lambda_o", fmt_f64(self.eps_lambda_o));
        put("l_o_db", fmt_f64(self.l_o_db));
        put("refl_coeff", fmt_f64(self.refl_coeff));
        put("reflector_prob", fmt_f64(self.reflector_prob));
        put("shadow_sigma_db", fmt_f64(self.shadow_sigma_db));
        put("fading", self.fading.to_string());
        put("model_x", self.model_x.to_string());
        put("model_y", self.model_y.to_string());
        put("x_fading", self.x_fading.map_or("none".to_string(), |f| f.to_string()));
        put("x_fading_signal", self.x_fading_signal.to_string());
        put("x_l_o_db", self.x_l_o_db.map_or("none".to_string(), fmt_f64));
        put("x_refl_coeff", self.x_refl_coeff.map_or("none".to_string(), fmt_f64));
        put("x_z_db", self.x_z_db.map_or("none".to_string(), fmt_f64));
        put("trials", self.trials.to_string());
        put("seed", self.seed.to_string());
        put("truncation_radius", self.truncation.to_string());
        put("far_field_mean", self.far_field_mean.to_string());
        m
    }

    /// Serialise to the config file format; parsing the result gives back `self`.
    pub fn to_kv_string(&self) -> String {
        let map = self.to_map();
        let mut out = format!("scenario = {}\n", self.scenario);
        for (k, v) in map.iter().filter(|(k, _)| *k != "scenario") {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}

/// Shortest representation that parses back to the same value.
pub fn fmt_f64(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

fn bad(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::BadValue { key: key.to_string(), value: value.to_string(), reason: reason.into() }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v.parse().map_err(|_| bad(key, v, "expected a number"))?;
    if x.is_nan() {
        return Err(bad(key, v, "NaN is not allowed"));
    }
    Ok(x)
}

fn parse_opt(key: &str, v: &str) -> Result<Option<f64>, ConfigError> {
    if v.eq_ignore_ascii_case("none") {
        Ok(None)
    } else {
        parse_f64(key, v).map(Some)
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(bad(key, v, "expected true or false")),
    }
}

fn checked_model(key: &str, v: &str, m: ModelSpec) -> Result<ModelSpec, ConfigError> {
    m.validate().map_err(|e| bad(key, v, e.to_string()))?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for s in [Scenario::S1, Scenario::S2, Scenario::S3, Scenario::S4] {
            ScenarioConfig::preset(s).validate().unwrap();
        }
    }

    #[test]
    fn round_trip_through_text() {
        for s in [Scenario::S1, Scenario::S2, Scenario::S3, Scenario::S4] {
            let mut c = ScenarioConfig::preset(s);
            c.seed = 77;
            c.x_z_db = Some(f64::NEG_INFINITY);
            let back = ScenarioConfig::from_kv_str(&c.to_kv_string()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn parses_comments_and_overrides() {
        let text = "# omni\nscenario = s1\n d_t = 30 \nr_prm = 40 # protocol model\nbeta_db=3\n";
        let c = ScenarioConfig::from_kv_str(text).unwrap();
        assert_eq!(c.d_t, 30.0);
        assert_eq!(c.beta_db, 3.0);
        assert_eq!(c.model_x().unwrap(), ModelSpec::Prm { r_prm: 40.0 });
    }

    #[test]
    fn scenario_is_applied_before_other_keys() {
        let c = ScenarioConfig::from_kv_str("d_t = 77\nscenario = s2\n").unwrap();
        assert_eq!(c.scenario, Scenario::S2);
        assert_eq!(c.d_t, 77.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(ScenarioConfig::from_kv_str("nonsense = 1"), Err(ConfigError::UnknownKey { .. })));
        assert!(matches!(ScenarioConfig::from_kv_str("d_t"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(ScenarioConfig::from_kv_str("d_t = abc"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(ScenarioConfig::from_kv_str("trials = 0"), Err(ConfigError::Invalid(_))));
        assert!(matches!(ScenarioConfig::from_kv_str("scenario = s2\nz_db = -10"), Err(ConfigError::Invalid(_))));
        assert!(matches!(ScenarioConfig::from_kv_str("r_ibm = -3"), Err(ConfigError::BadValue { .. })));
        let mut c = ScenarioConfig::default();
        assert!(matches!(c.set_scalar("fading", 1.0), Err(ConfigError::NotSweepable(..))));
    }

    #[test]
    fn density_sugar() {
        let mut c = ScenarioConfig::default();
        c.set("lambda_t", "0.0025").unwrap();
        assert!((c.d_t - 20.0).abs() < 1e-12);
        assert!((c.lambda_t() - 0.0025).abs() < 1e-15);
    }

    #[test]
    fn zeta_radius_resolves() {
        let c = ScenarioConfig::preset(Scenario::S3);
        match c.model_x().unwrap() {
            ModelSpec::Prm { r_prm } => assert!((r_prm - 35.6).abs() < 0.1, "{r_prm}"),
            m => panic!("{m:?}"),
        }
    }
}

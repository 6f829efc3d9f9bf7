//! Channel gains: modified power law, small-scale fading, the 28 GHz
//! multipath law and the ideal sector antenna.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PropagationError {
    #[error("invalid fading specification `{0}`")]
    BadFading(String),
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FadingKind {
    Rayleigh,
    /// Power gain ~ Gamma(m, 1/m).
    Nakagami { m: f64 },
    Deterministic { c0: f64 },
    LogNormalShadow { sigma_db: f64 },
}

impl FadingKind {
    pub fn validate(&self) -> Result<(), PropagationError> {
        match *self {
            FadingKind::Nakagami { m } if !(m >= 0.5 && m.is_finite()) => {
                Err(PropagationError::InvalidParameter { name: "nakagami_m", value: m })
            }
            FadingKind::Deterministic { c0 } if !(c0 > 0.0 && c0.is_finite()) => {
                Err(PropagationError::InvalidParameter { name: "c0", value: c0 })
            }
            FadingKind::LogNormalShadow { sigma_db } if !(sigma_db >= 0.0) => {
                Err(PropagationError::InvalidParameter { name: "sigma_db", value: sigma_db })
            }
            _ => Ok(()),
        }
    }

    pub fn is_random(&self) -> bool {
        !matches!(self, FadingKind::Deterministic { .. })
    }
}

impl fmt::Display for FadingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FadingKind::Rayleigh => write!(f, "rayleigh"),
            FadingKind::Nakagami { m } => write!(f, "nakagami:{m}"),
            FadingKind::Deterministic { c0 } => write!(f, "deterministic:{c0}"),
            FadingKind::LogNormalShadow { sigma_db } => write!(f, "lognormal:{sigma_db}"),
        }
    }
}

impl FromStr for FadingKind {
    type Err = PropagationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PropagationError::BadFading(s.to_string());
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim().parse::<f64>().map_err(|_| bad())?)),
            None => (s.trim(), None),
        };
        let kind = match (name.to_ascii_lowercase().as_str(), arg) {
            ("rayleigh", None) => FadingKind::Rayleigh,
            ("nakagami", Some(m)) => FadingKind::Nakagami { m },
            ("deterministic", Some(c0)) => FadingKind::Deterministic { c0 },
            ("deterministic", None) => FadingKind::Deterministic { c0: 1.0 },
            ("lognormal", Some(sigma_db)) => FadingKind::LogNormalShadow { sigma_db },
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// Draw a fading sampler once and reuse it: Nakagami needs a Gamma distribution object.
#[derive(Debug, Clone)]
pub enum FadingSampler {
    Rayleigh,
    Nakagami(Gamma<f64>),
    Deterministic(f64),
    LogNormal(f64),
}

impl FadingSampler {
    pub fn new(kind: FadingKind) -> Result<Self, PropagationError> {
        kind.validate()?;
        Ok(match kind {
            FadingKind::Rayleigh => FadingSampler::Rayleigh,
            FadingKind::Nakagami { m } => FadingSampler::Nakagami(Gamma::new(m, 1.0 / m).expect("validated shape")),
            FadingKind::Deterministic { c0 } => FadingSampler::Deterministic(c0),
            FadingKind::LogNormalShadow { sigma_db } => FadingSampler::LogNormal(sigma_db),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            FadingSampler::Rayleigh => Exp1.sample(rng),
            FadingSampler::Nakagami(g) => g.sample(rng),
            FadingSampler::Deterministic(c0) => *c0,
            FadingSampler::LogNormal(sigma_db) => {
                let x: f64 = StandardNormal.sample(rng);
                db_to_linear(sigma_db * x)
            }
        }
    }
}

pub fn sample_fading<R: Rng + ?Sized>(kind: FadingKind, rng: &mut R) -> Result<f64, PropagationError> {
    Ok(FadingSampler::new(kind)?.sample(rng))
}

/// c·d^{−α} outside the singularity disk of radius a, c inside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossLaw {
    pub c: f64,
    pub alpha: f64,
    pub a: f64,
}

impl PathLossLaw {
    pub fn new(c: f64, alpha: f64, a: f64) -> Result<Self, PropagationError> {
        if !(c > 0.0) {
            return Err(PropagationError::InvalidParameter { name: "c", value: c });
        }
        if !(alpha > 0.0) {
            return Err(PropagationError::InvalidParameter { name: "alpha", value: alpha });
        }
        if !(a > 0.0) {
            return Err(PropagationError::InvalidParameter { name: "a", value: a });
        }
        Ok(PathLossLaw { c, alpha, a })
    }

    #[inline]
    pub fn gain(&self, distance: f64) -> f64 {
        if distance < self.a {
            self.c
        } else {
            self.c * distance.powf(-self.alpha)
        }
    }
}

pub fn path_gain(law: &PathLossLaw, distance: f64) -> f64 {
    law.gain(distance)
}

/// Reference loss of the 28 GHz law at 1 m.
pub const MMWAVE_REF_DB: f64 = -61.4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmWavePath {
    pub length_m: f64,
    pub n_blockers: u32,
    pub has_reflection: bool,
    pub reflection_coeff: f64,
    pub penetration_loss_db: f64,
    pub shadow_sigma_db: f64,
}

/// Path gain in dB without the shadowing term.
pub fn mmwave_mean_gain_db(path: &MmWavePath) -> f64 {
    let refl = if path.has_reflection { 10.0 * path.reflection_coeff.log10() } else { 0.0 };
    let blocked = if path.n_blockers == 0 { 0.0 } else { path.n_blockers as f64 * path.penetration_loss_db };
    MMWAVE_REF_DB - 20.0 * path.length_m.log10() + refl - blocked
}

pub fn mmwave_path_gain_db<R: Rng + ?Sized>(path: &MmWavePath, rng: &mut R) -> f64 {
    let x: f64 = if path.shadow_sigma_db > 0.0 {
        let z: f64 = StandardNormal.sample(rng);
        path.shadow_sigma_db * z
    } else {
        0.0
    };
    mmwave_mean_gain_db(path) - x
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorAntenna {
    pub theta: f64,
    pub z: f64,
}

impl SectorAntenna {
    pub fn new(theta: f64, z: f64) -> Result<Self, PropagationError> {
        if !(theta > 0.0 && theta <= TAU) {
            return Err(PropagationError::InvalidParameter { name: "theta", value: theta });
        }
        if !(0.0..1.0).contains(&z) {
            return Err(PropagationError::InvalidParameter { name: "z", value: z });
        }
        Ok(SectorAntenna { theta, z })
    }

    pub fn omni() -> Self {
        SectorAntenna { theta: TAU, z: 0.0 }
    }

    pub fn main_gain(&self) -> f64 {
        (TAU - (TAU - self.theta) * self.z) / self.theta
    }

    #[inline]
    pub fn gain(&self, in_main_lobe: bool) -> f64 {
        if in_main_lobe {
            self.main_gain()
        } else {
            self.z
        }
    }
}

pub fn sector_gain(antenna: &SectorAntenna, in_main_lobe: bool) -> f64 {
    antenna.gain(in_main_lobe)
}

pub fn alignment_draw<R: Rng + ?Sized>(theta: f64, rng: &mut R) -> bool {
    theta >= TAU || rng.random::<f64>() * TAU < theta
}

//! Monte Carlo experiments over Poisson networks.
//!
//! A [`ScenarioConfig`] describes the network, the reference model y and the
//! test model x. [`run`] evaluates both models on the same realizations and
//! reports the error probabilities, the index, histogram distances and the
//! throughput gap. [`sweep`], [`fit_c0`] and [`reproduce`] build on it.

pub mod config;
pub mod engine;
pub mod experiments;
pub mod mmwave;
pub mod output;
pub mod reproduce;

use thiserror::Error;

pub use config::{ConfigError, ModelChoice, Scenario, ScenarioConfig, Truncation};
pub use engine::{fold_trials, run, run_models, run_with, ModelReport, truncation_radius, DistanceStats, Realization, RunOptions, RunReport, Throughput, TrialSampler};
pub use experiments::{fit_c0, sweep, throughput_deviation, FitResult, SweepPoint};
pub use output::{Format, Sidecar, Table};
pub use reproduce::{base_config, reproduce, Target};

use crate::analytic::AnalyticError;
use crate::geometry::GeometryError;
use crate::propagation::PropagationError;
use crate::similarity::SimilarityError;

#[derive(Debug, Error)]
pub enum MonteCarloError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error("reference throughput is zero; relative deviation undefined")]
    ZeroReferenceRate,
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl MonteCarloError {
    /// Whether the failure is a numerical one (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        match self {
            MonteCarloError::Analytic(e) => e.is_numeric(),
            MonteCarloError::Fit(_) => true,
            _ => false,
        }
    }

    pub fn is_config(&self) -> bool {
        match self {
            MonteCarloError::Config(_) | MonteCarloError::Geometry(_) | MonteCarloError::Propagation(_) => true,
            MonteCarloError::Analytic(e) => !e.is_numeric(),
            _ => false,
        }
    }
}

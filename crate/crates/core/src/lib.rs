//! Similarity of simplified interference models to the physical SINR model.
//!
//! The crate estimates how often a simplified model (interference ball,
//! protocol model, topological model, deterministic or simplified mmWave
//! channels) reaches the same outage decision as the full physical model,
//! both by Monte Carlo over Poisson networks and through closed-form
//! expressions and bounds.

pub mod analytic;
pub mod cli;
pub mod geometry;
pub mod interference;
pub mod montecarlo;
pub mod propagation;
pub mod quadrature;
pub mod similarity;
pub mod special;

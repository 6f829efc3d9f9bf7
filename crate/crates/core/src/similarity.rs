//! False-alarm / miss-detection estimation, the similarity index, and
//! distribution distances between SINR samples.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interference::{outage, SinrPair};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimilarityError {
    #[error("no SINR pairs supplied")]
    Empty,
    #[error("threshold must be positive, got {0}")]
    BadThreshold(f64),
    #[error("histograms have different binning ({0} vs {1} bins)")]
    BinningMismatch(usize, usize),
    #[error("probability {name} = {value} outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
}

/// Raw decision counts; merging is associative and commutative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OutageCounts {
    /// y not in outage
    pub n_h0: u64,
    /// y in outage
    pub n_h1: u64,
    /// x in outage while y is not
    pub false_alarms: u64,
    /// x not in outage while y is
    pub misses: u64,
}

impl OutageCounts {
    #[inline]
    pub fn record(&mut self, pair: SinrPair, beta: f64) {
        let ox = outage(pair.gamma_x, beta);
        if outage(pair.gamma_y, beta) {
            self.n_h1 += 1;
            self.misses += (!ox) as u64;
        } else {
            self.n_h0 += 1;
            self.false_alarms += ox as u64;
        }
    }

    pub fn merge(mut self, other: OutageCounts) -> OutageCounts {
        self.n_h0 += other.n_h0;
        self.n_h1 += other.n_h1;
        self.false_alarms += other.false_alarms;
        self.misses += other.misses;
        self
    }

    pub fn total(&self) -> u64 {
        self.n_h0 + self.n_h1
    }

    pub fn stats(&self, beta_db: f64) -> Result<ErrorStats, SimilarityError> {
        let n = self.total();
        if n == 0 {
            return Err(SimilarityError::Empty);
        }
        let frac = |k: u64, m: u64| if m == 0 { 0.0 } else { k as f64 / m as f64 };
        let se = |p: f64, m: u64| if m == 0 { 0.0 } else { (p * (1.0 - p) / m as f64).sqrt() };
        let p_fa = frac(self.false_alarms, self.n_h0);
        let p_md = frac(self.misses, self.n_h1);
        if self.n_h0 == 0 {
            log::warn!("no H0 samples: false-alarm probability undefined, using 0");
        }
        if self.n_h1 == 0 {
            log::debug!("no H1 samples: miss-detection probability undefined, using 0");
        }
        Ok(ErrorStats {
            p_fa,
            p_md,
            xi: self.n_h0 as f64 / n as f64,
            n_h0: self.n_h0,
            n_h1: self.n_h1,
            se_fa: se(p_fa, self.n_h0),
            se_md: se(p_md, self.n_h1),
            fa_defined: self.n_h0 > 0,
            md_defined: self.n_h1 > 0,
            beta_db,
            counts: *self,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    pub p_fa: f64,
    pub p_md: f64,
    pub xi: f64,
    pub n_h0: u64,
    pub n_h1: u64,
    pub se_fa: f64,
    pub se_md: f64,
    pub fa_defined: bool,
    pub md_defined: bool,
    pub beta_db: f64,
    pub counts: OutageCounts,
}

impl ErrorStats {
    /// Standard error of the empirical agreement frequency (the index at ξ = Pr[γ^y ≥ β]).
    pub fn index_se(&self) -> f64 {
        let n = (self.n_h0 + self.n_h1) as f64;
        let agree = 1.0 - (self.counts.false_alarms + self.counts.misses) as f64 / n;
        (agree * (1.0 - agree) / n).sqrt()
    }

    /// Frequency of outage under y.
    pub fn outage_y(&self) -> f64 {
        1.0 - self.xi
    }

    /// Frequency of outage under x.
    pub fn outage_x(&self) -> f64 {
        let c = &self.counts;
        let n = c.total() as f64;
        (c.false_alarms + c.n_h1 - c.misses) as f64 / n
    }
}

pub fn error_probs(pairs: &[SinrPair], beta: f64) -> Result<ErrorStats, SimilarityError> {
    if !(beta > 0.0) {
        return Err(SimilarityError::BadThreshold(beta));
    }
    if pairs.is_empty() {
        return Err(SimilarityError::Empty);
    }
    let mut c = OutageCounts::default();
    for &p in pairs {
        c.record(p, beta);
    }
    c.stats(10.0 * beta.log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    MonteCarlo,
    Analytic,
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexResult {
    pub value: f64,
    pub beta_db: f64,
    pub xi_used: f64,
    pub provenance: Provenance,
}

/// S = 1 − ξ p_fa − (1 − ξ) p_md.
pub fn index_value(p_fa: f64, p_md: f64, xi: f64) -> f64 {
    1.0 - xi * p_fa - (1.0 - xi) * p_md
}

pub fn similarity_index(stats: &ErrorStats, xi_override: Option<f64>) -> IndexResult {
    let xi = xi_override.unwrap_or(stats.xi);
    IndexResult {
        value: index_value(stats.p_fa, stats.p_md, xi),
        beta_db: stats.beta_db,
        xi_used: xi,
        provenance: Provenance::MonteCarlo,
    }
}

/// Equal-width histogram of SINR in dB; out-of-range mass goes to the edge bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo_db: f64,
    pub hi_db: f64,
    pub counts: Vec<u64>,
}

pub const SINR_HIST_LO_DB: f64 = -40.0;
pub const SINR_HIST_HI_DB: f64 = 60.0;
pub const SINR_HIST_BINS: usize = 400;

impl Histogram {
    pub fn new(lo_db: f64, hi_db: f64, bins: usize) -> Self {
        assert!(hi_db > lo_db && bins > 0);
        Histogram { lo_db, hi_db, counts: vec![0; bins] }
    }

    pub fn sinr_db() -> Self {
        Self::new(SINR_HIST_LO_DB, SINR_HIST_HI_DB, SINR_HIST_BINS)
    }

    #[inline]
    pub fn add_linear(&mut self, gamma: f64) {
        let db = 10.0 * gamma.log10();
        let n = self.counts.len();
        let idx = if db.is_nan() || db < self.lo_db {
            0
        } else {
            let pos = (db - self.lo_db) / (self.hi_db - self.lo_db) * n as f64;
            (pos as usize).min(n - 1)
        };
        self.counts[idx] += 1;
    }

    pub fn merge(mut self, other: &Histogram) -> Histogram {
        assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn mass(&self) -> Vec<f64> {
        let t = self.total().max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / t).collect()
    }
}

fn same_len(x: &[f64], y: &[f64]) -> Result<(), SimilarityError> {
    if x.len() != y.len() {
        return Err(SimilarityError::BinningMismatch(x.len(), y.len()));
    }
    Ok(())
}

/// Returns (ρ, −ln ρ).
pub fn bhattacharyya(dist_x: &[f64], dist_y: &[f64]) -> Result<(f64, f64), SimilarityError> {
    same_len(dist_x, dist_y)?;
    let rho: f64 = dist_x.iter().zip(dist_y).map(|(a, b)| (a * b).sqrt()).sum();
    let rho = rho.min(1.0);
    let dist = if rho == 0.0 { f64::INFINITY } else { -rho.ln() };
    Ok((rho, dist.max(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    Natural,
    Decimal,
}

/// Σ p log(p / q). Infinite when q vanishes on a bin where p does not.
pub fn kl_divergence(dist_ref: &[f64], dist_other: &[f64], base: LogBase) -> Result<f64, SimilarityError> {
    same_len(dist_ref, dist_other)?;
    let mut sum = 0.0;
    for (i, (&p, &q)) in dist_ref.iter().zip(dist_other).enumerate() {
        if p == 0.0 {
            continue;
        }
        if q == 0.0 {
            log::debug!("KL divergence infinite: bin {i} has reference mass {p} and no mass in the other distribution");
            return Ok(f64::INFINITY);
        }
        sum += p * (p / q).ln();
    }
    Ok(match base {
        LogBase::Natural => sum,
        LogBase::Decimal => sum / std::f64::consts::LN_10,
    })
}

pub fn euclidean_distance(x: &[f64], y: &[f64]) -> Result<f64, SimilarityError> {
    same_len(x, y)?;
    Ok(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

/// (3/2 − ξ − ρ√(ξ(1−ξ)), 1 − ξ + √(1/4 − ξ(1−ξ)ρ²)), clamped to [0, 1].
pub fn bhattacharyya_index_bounds(xi: f64, rho: f64) -> Result<(f64, f64), SimilarityError> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(SimilarityError::OutOfRange { name: "xi", value: xi });
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(SimilarityError::OutOfRange { name: "rho", value: rho });
    }
    let v = xi * (1.0 - xi);
    let lower = 1.5 - xi - rho * v.sqrt();
    let upper = 1.0 - xi + (0.25 - v * rho * rho).max(0.0).sqrt();
    Ok((lower.clamp(0.0, 1.0), upper.clamp(0.0, 1.0)))
}

/// The three mass functions of the discrete comparison example.
pub const EXAMPLE1_X: [f64; 3] = [0.05, 0.25, 0.7];
pub const EXAMPLE1_Y: [f64; 3] = [0.1, 0.45, 0.45];
pub const EXAMPLE1_Z: [f64; 3] = [0.25, 0.2, 0.55];

/// One column of the example table: distances of `other` from X.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Example1Row {
    pub euclidean: f64,
    pub bhattacharyya_distance: f64,
    pub kl_divergence: f64,
}

/// Reproduces the published table. Its KL row is D(other ‖ X) in base-10
/// logarithms; see README for the convention.
pub fn example1_column(other: &[f64; 3]) -> Example1Row {
    Example1Row {
        euclidean: euclidean_distance(&EXAMPLE1_X, other).expect("same length"),
        bhattacharyya_distance: bhattacharyya(&EXAMPLE1_X, other).expect("same length").1,
        kl_divergence: kl_divergence(other, &EXAMPLE1_X, LogBase::Decimal).expect("same length"),
    }
}

use serde::{Deserialize, Serialize};

use crate::network::ReactionNetwork;
use crate::sim::{replicate_seed, run_ensemble_with, Amount, Ensemble, Execution, SsaConfig, Trajectory};

use super::stats::mean_and_sem;
use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub se: f64,
    /// Samples in the fitting window.
    pub samples: usize,
}

/// Ordinary least-squares slope with its standard error.
fn ls_slope(t: &[f64], y: &[f64]) -> (f64, f64) {
    let n = t.len() as f64;
    let mt = t.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = t.iter().map(|v| (v - mt).powi(2)).sum();
    let sxy: f64 = t.iter().zip(y).map(|(a, b)| (a - mt) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mt;
    let ssr: f64 = t.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let se = if t.len() > 2 { (ssr / (n - 2.0) / sxx).sqrt() } else { f64::INFINITY };
    (slope, se)
}

/// Initial product formation rate: slope of product counts over the leading
/// samples in which at most `depletion_cap·s0` product has formed.
pub fn initial_rate<T: Amount>(
    trajectory: &Trajectory<T>,
    product: &str,
    s0: f64,
    depletion_cap: f64,
) -> Result<RateEstimate, AnalysisError> {
    let p = trajectory.series(product).ok_or_else(|| AnalysisError::UnknownSpecies(product.to_string()))?;
    if p.is_empty() {
        return Err(AnalysisError::InsufficientData("empty trajectory".into()));
    }
    let limit = depletion_cap * s0;
    let end = p.iter().take_while(|&&v| v - p[0] <= limit).count();
    if end < 3 {
        return Err(AnalysisError::InsufficientData(format!("only {end} samples before {limit} product formed")));
    }
    let (rate, se) = ls_slope(&trajectory.times[..end], &p[..end]);
    Ok(RateEstimate { rate, se, samples: end })
}

/// Replicate-level initial rate: the window is fixed from the ensemble mean,
/// each replicate contributes one slope, and the error is the SEM across replicates.
pub fn initial_rate_ensemble(
    ensemble: &Ensemble,
    product: &str,
    s0: f64,
    depletion_cap: f64,
) -> Result<RateEstimate, AnalysisError> {
    let i = ensemble.species_index(product).ok_or_else(|| AnalysisError::UnknownSpecies(product.to_string()))?;
    let n = ensemble.replicates.len();
    if n < 2 {
        return Err(AnalysisError::InsufficientData("need at least 2 replicates".into()));
    }
    let mean: Vec<f64> = (0..ensemble.times.len())
        .map(|k| ensemble.replicates.iter().map(|r| r.rows[k][i] as f64).sum::<f64>() / n as f64)
        .collect();
    let limit = depletion_cap * s0;
    let end = mean.iter().take_while(|&&v| v - mean[0] <= limit).count();
    if end < 3 {
        return Err(AnalysisError::InsufficientData(format!("only {end} grid samples inside the initial window")));
    }
    let times = &ensemble.times[..end];
    let slopes: Vec<f64> = ensemble
        .replicates
        .iter()
        .map(|r| {
            let y: Vec<f64> = r.rows[..end].iter().map(|row| row[i] as f64).collect();
            ls_slope(times, &y).0
        })
        .collect();
    let (rate, se) = mean_and_sem(&slopes);
    Ok(RateEstimate { rate, se, samples: end })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationPoint {
    pub s0: u64,
    pub rate: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationConfig {
    pub product: String,
    pub seed: u64,
    pub t_end: f64,
    pub dt: f64,
    pub depletion_cap: f64,
    pub execution: Execution,
}

impl SaturationConfig {
    pub fn new(product: &str, seed: u64) -> Self {
        Self { product: product.to_string(), seed, t_end: 3.0, dt: 0.01, depletion_cap: 0.1, execution: Execution::default() }
    }
}

/// One initial-rate point per initial substrate level, each from its own ensemble.
pub fn saturation_curve<F, E>(
    build: F,
    s0_list: &[u64],
    n_runs: usize,
    config: &SaturationConfig,
) -> Result<Vec<SaturationPoint>, AnalysisError>
where
    F: Fn(u64) -> Result<ReactionNetwork, E>,
    E: std::fmt::Display,
{
    if s0_list.is_empty() {
        return Err(AnalysisError::InsufficientData("no substrate levels".into()));
    }
    s0_list
        .iter()
        .map(|&s0| {
            if s0 == 0 {
                return Err(AnalysisError::Domain("initial substrate must be positive".into()));
            }
            let network = build(s0).map_err(|e| AnalysisError::Domain(e.to_string()))?;
            let cfg = SsaConfig::new(config.t_end, replicate_seed(config.seed, s0)).with_dt(config.dt);
            let ens = run_ensemble_with(&network, &cfg, n_runs, config.execution)?;
            let est = initial_rate_ensemble(&ens, &config.product, s0 as f64, config.depletion_cap)?;
            Ok(SaturationPoint { s0, rate: est.rate, se: est.se })
        })
        .collect()
}

//! Stochastic and deterministic execution of reaction networks.

mod compiled;
pub mod io;
pub mod ode;
pub mod rng;
pub mod ssa;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::ReactionNetwork;

pub use ode::{simulate_ode, OdeConfig};
pub use rng::{replicate_rng, replicate_seed, SimRng, RNG_NAME};
pub use ssa::{grid_times, simulate_ssa, ssa_step, Recording, SsaConfig, StepOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("network does not validate: {0}")]
    InvalidNetwork(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("reaction `{reaction}` has invalid propensity {value}")]
    Propensity { reaction: String, value: f64 },
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("firing `{0}` would make a count negative")]
    Firing(String),
    #[error("count overflow while firing `{0}`")]
    Overflow(String),
    #[error("step size underflow at t = {t} (h = {h:e}); the system is too stiff, try a smaller rho")]
    Stiff { t: f64, h: f64 },
    #[error("ensemble needs at least one run")]
    NoRuns,
    #[error("ensemble replicates need a fixed recording grid")]
    NeedsGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    ReachedEnd,
    Exhausted,
    EventLimit,
}

/// A per-species amount that can be read as a real number.
pub trait Amount: Copy {
    fn to_f64(self) -> f64;
}

impl Amount for u64 {
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Amount for f64 {
    fn to_f64(self) -> f64 {
        self
    }
}

/// Time-stamped amounts. `T = u64` for SSA runs, `f64` for ODE solutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub species: Vec<String>,
    pub times: Vec<f64>,
    /// One row per sample, aligned with `species`.
    pub rows: Vec<Vec<T>>,
    pub termination: Termination,
    /// SSA events fired, or ODE steps attempted.
    pub events: u64,
}

impl<T: Amount> Trajectory<T> {
    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }

    pub fn series(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.species_index(name)?;
        Some(self.rows.iter().map(|r| r[i].to_f64()).collect())
    }

    /// Weighted sum of species per sample, e.g. total clock protein.
    pub fn combined(&self, weights: &[(&str, f64)]) -> Option<Vec<f64>> {
        let idx: Vec<(usize, f64)> =
            weights.iter().map(|(n, w)| self.species_index(n).map(|i| (i, *w))).collect::<Option<_>>()?;
        Some(self.rows.iter().map(|r| idx.iter().map(|&(i, w)| w * r[i].to_f64()).sum()).collect())
    }

    pub fn value_at(&self, sample: usize, name: &str) -> Option<f64> {
        let i = self.species_index(name)?;
        self.rows.get(sample).map(|r| r[i].to_f64())
    }
}

/// Replicate trajectories sharing one model and one recording grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub species: Vec<String>,
    pub times: Vec<f64>,
    pub replicates: Vec<Trajectory<u64>>,
    pub fingerprint: String,
    pub base_seed: u64,
    pub rng: String,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.replicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.replicates.is_empty()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    /// Uses rayon when the `parallel` feature is enabled, serial otherwise.
    #[default]
    Parallel,
}

/// Evaluates `f(0..n)` and returns results in index order regardless of scheduling.
pub fn map_replicates<T, F>(n: usize, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

pub fn run_ensemble(network: &ReactionNetwork, config: &SsaConfig, n_runs: usize) -> Result<Ensemble, SimError> {
    run_ensemble_with(network, config, n_runs, Execution::default())
}

pub fn run_ensemble_with(
    network: &ReactionNetwork,
    config: &SsaConfig,
    n_runs: usize,
    execution: Execution,
) -> Result<Ensemble, SimError> {
    if n_runs == 0 {
        return Err(SimError::NoRuns);
    }
    config.validate()?;
    let times = config.grid().ok_or(SimError::NeedsGrid)?;
    let net = compiled::CompiledNetwork::new(network)?;
    let replicates = map_replicates(n_runs, execution, |i| {
        let mut rng = replicate_rng(config.seed, i as u64);
        ssa::run_compiled(&net, network, config, &mut rng)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(Ensemble {
        species: network.species.iter().map(|s| s.name.clone()).collect(),
        times,
        replicates,
        fingerprint: network.fingerprint(),
        base_seed: config.seed,
        rng: RNG_NAME.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{RateLaw, Reaction, Term};

    fn decay(s0: u64) -> ReactionNetwork {
        let mut n = ReactionNetwork::new("decay");
        n.add_species("S", s0).unwrap();
        n.add_reaction(Reaction::new("d", vec![Term::one("S")], vec![], RateLaw::mass_action(1.0))).unwrap();
        n
    }

    #[test]
    fn single_run_ensemble_matches_direct_simulation() {
        let net = decay(100);
        let cfg = SsaConfig::new(3.0, 42).with_dt(0.5);
        let ens = run_ensemble(&net, &cfg, 1).unwrap();
        let direct = simulate_ssa(&net, &cfg).unwrap();
        assert_eq!(ens.replicates[0], direct);
        assert_eq!(ens.times, direct.times);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let net = decay(300);
        let cfg = SsaConfig::new(2.0, 9).with_dt(0.25);
        let a = run_ensemble_with(&net, &cfg, 16, Execution::Serial).unwrap();
        let b = run_ensemble_with(&net, &cfg, 16, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_runs_rejected() {
        assert_eq!(run_ensemble(&decay(1), &SsaConfig::new(1.0, 0), 0), Err(SimError::NoRuns));
        assert_eq!(run_ensemble(&decay(1), &SsaConfig::new(1.0, 0).every_event(), 2), Err(SimError::NeedsGrid));
    }
}

//! Gillespie direct method.

use rand_xoshiro::rand_core::Rng;
use serde::{Deserialize, Serialize};

use crate::network::{ReactionNetwork, SystemState};

use super::compiled::{apply_delta, CompiledNetwork};
use super::rng::{replicate_rng, unit_open_closed, SimRng};
use super::{SimError, Termination, Trajectory};

pub const DEFAULT_MAX_EVENTS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Recording {
    EveryEvent,
    Grid { dt: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsaConfig {
    pub t_end: f64,
    pub seed: u64,
    pub recording: Recording,
    pub max_events: u64,
}

impl SsaConfig {
    /// Per-minute grid, default event guard.
    pub fn new(t_end: f64, seed: u64) -> Self {
        Self { t_end, seed, recording: Recording::Grid { dt: 1.0 }, max_events: DEFAULT_MAX_EVENTS }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.recording = Recording::Grid { dt };
        self
    }

    pub fn every_event(mut self) -> Self {
        self.recording = Recording::EveryEvent;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(SimError::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if let Recording::Grid { dt } = self.recording {
            if !(dt > 0.0) || !dt.is_finite() {
                return Err(SimError::Config(format!("grid dt must be positive, got {dt}")));
            }
        }
        Ok(())
    }

    pub(crate) fn grid(&self) -> Option<Vec<f64>> {
        match self.recording {
            Recording::Grid { dt } => Some(grid_times(self.t_end, dt)),
            Recording::EveryEvent => None,
        }
    }
}

/// Sample times `0, dt, 2·dt, …` up to and including `t_end` (within rounding).
pub fn grid_times(t_end: f64, dt: f64) -> Vec<f64> {
    let n = (t_end / dt + 1e-9).floor() as usize;
    (0..=n).map(|k| k as f64 * dt).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    Fired { tau: f64, reaction: usize },
    Exhausted,
}

/// Propensity cache for one replicate.
pub(crate) struct Propensities {
    values: Vec<f64>,
}

impl Propensities {
    pub fn new(net: &CompiledNetwork, counts: &[u64]) -> Result<Self, SimError> {
        let mut p = Self { values: vec![0.0; net.reactions.len()] };
        for k in 0..net.reactions.len() {
            p.update(net, counts, k)?;
        }
        Ok(p)
    }

    #[inline]
    fn update(&mut self, net: &CompiledNetwork, counts: &[u64], k: usize) -> Result<(), SimError> {
        let a = net.reactions[k].propensity(counts);
        if !(a >= 0.0) || !a.is_finite() {
            return Err(SimError::Propensity { reaction: net.reactions[k].id.clone(), value: a });
        }
        self.values[k] = a;
        Ok(())
    }

    pub fn refresh_after(&mut self, net: &CompiledNetwork, counts: &[u64], fired: usize, flushed: bool) -> Result<(), SimError> {
        if flushed {
            // immediate cascades may touch anything; recompute everything
            for k in 0..net.reactions.len() {
                self.update(net, counts, k)?;
            }
        } else {
            for &k in &net.dependents[fired] {
                self.update(net, counts, k)?;
            }
        }
        Ok(())
    }

    #[inline]
    fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

pub(crate) fn step_with<R: Rng>(props: &Propensities, rng: &mut R) -> StepOutcome {
    let a0 = props.total();
    if a0 <= 0.0 {
        return StepOutcome::Exhausted;
    }
    let tau = -unit_open_closed(rng).ln() / a0;
    let target = unit_open_closed(rng) * a0;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (k, &a) in props.values.iter().enumerate() {
        if a > 0.0 {
            acc += a;
            last_positive = k;
            if target <= acc {
                return StepOutcome::Fired { tau, reaction: k };
            }
        }
    }
    StepOutcome::Fired { tau, reaction: last_positive }
}

/// One Gillespie step from `state`: waiting time and the chosen reaction.
///
/// Reaction indices refer to the network's timed (non-immediate) reactions in
/// declaration order.
pub fn ssa_step<R: Rng>(state: &SystemState, network: &ReactionNetwork, rng: &mut R) -> Result<StepOutcome, SimError> {
    let net = CompiledNetwork::new(network)?;
    let props = Propensities::new(&net, &state.counts)?;
    Ok(step_with(&props, rng))
}

pub fn simulate_ssa(network: &ReactionNetwork, config: &SsaConfig) -> Result<Trajectory<u64>, SimError> {
    config.validate()?;
    let net = CompiledNetwork::new(network)?;
    let mut rng = replicate_rng(config.seed, 0);
    run_compiled(&net, network, config, &mut rng)
}

pub(crate) fn run_compiled(
    net: &CompiledNetwork,
    network: &ReactionNetwork,
    config: &SsaConfig,
    rng: &mut SimRng,
) -> Result<Trajectory<u64>, SimError> {
    let mut counts: Vec<u64> = network.species.iter().map(|s| s.initial).collect();
    net.flush_immediates(&mut counts)?;
    let mut props = Propensities::new(net, &counts)?;
    let species: Vec<String> = network.species.iter().map(|s| s.name.clone()).collect();

    let grid = config.grid();
    let mut times = Vec::new();
    let mut rows = Vec::new();
    let mut next_sample = 0usize;
    let mut t = 0.0;
    let mut events = 0u64;

    if grid.is_none() {
        times.push(0.0);
        rows.push(counts.clone());
    }

    let termination = loop {
        let outcome = step_with(&props, rng);
        let t_next = match outcome {
            StepOutcome::Fired { tau, .. } => t + tau,
            StepOutcome::Exhausted => f64::INFINITY,
        };
        if let Some(g) = &grid {
            while next_sample < g.len() && g[next_sample] < t_next.min(f64::MAX) && g[next_sample] <= config.t_end {
                times.push(g[next_sample]);
                rows.push(counts.clone());
                next_sample += 1;
            }
        }
        match outcome {
            StepOutcome::Exhausted => break Termination::Exhausted,
            StepOutcome::Fired { reaction, .. } => {
                if t_next > config.t_end {
                    break Termination::ReachedEnd;
                }
                if events >= config.max_events {
                    break Termination::EventLimit;
                }
                let r = &net.reactions[reaction];
                apply_delta(&mut counts, &r.delta, &r.id)?;
                let flushed = !net.immediates.is_empty() && net.flush_immediates(&mut counts)?;
                props.refresh_after(net, &counts, reaction, flushed)?;
                t = t_next;
                events += 1;
                if grid.is_none() {
                    if times.last() == Some(&t) {
                        *rows.last_mut().unwrap() = counts.clone();
                    } else {
                        times.push(t);
                        rows.push(counts.clone());
                    }
                }
            }
        }
    };

    match &grid {
        Some(g) if termination != Termination::EventLimit => {
            // remaining grid points see the final state
            while next_sample < g.len() {
                times.push(g[next_sample]);
                rows.push(counts.clone());
                next_sample += 1;
            }
        }
        None if termination != Termination::EventLimit && times.last() != Some(&config.t_end) => {
            times.push(config.t_end);
            rows.push(counts.clone());
        }
        _ => {}
    }

    Ok(Trajectory { species, times, rows, termination, events })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{RateLaw, Reaction, Term};

    fn constant_rates(rates: &[f64]) -> ReactionNetwork {
        let mut n = ReactionNetwork::new("const");
        n.add_species("X", 0).unwrap();
        for (i, &a) in rates.iter().enumerate() {
            n.add_reaction(Reaction::new(format!("r{i}"), vec![], vec![Term::one("X")], RateLaw::mass_action(a))).unwrap();
        }
        n
    }

    #[test]
    fn waiting_time_is_unit_exponential() {
        let net = constant_rates(&[1.0]);
        let state = net.initial_state();
        let compiled = CompiledNetwork::new(&net).unwrap();
        let props = Propensities::new(&compiled, &state.counts).unwrap();
        let mut rng = replicate_rng(11, 0);
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|_| match step_with(&props, &mut rng) {
                StepOutcome::Fired { tau, .. } => tau,
                StepOutcome::Exhausted => panic!(),
            })
            .sum::<f64>()
            / n as f64;
        assert!((0.97..=1.03).contains(&mean), "{mean}");
    }

    #[test]
    fn selection_follows_propensity_ratio() {
        let net = constant_rates(&[3.0, 1.0]);
        let mut rng = replicate_rng(5, 0);
        let state = net.initial_state();
        let n = 10_000;
        let mut zero = 0;
        for _ in 0..n {
            if let StepOutcome::Fired { reaction: 0, .. } = ssa_step(&state, &net, &mut rng).unwrap() {
                zero += 1;
            }
        }
        let f = zero as f64 / n as f64;
        assert!((f - 0.75).abs() <= 0.02, "{f}");
    }

    #[test]
    fn empty_system_is_exhausted() {
        let mut net = ReactionNetwork::new("decay");
        net.add_species("X", 0).unwrap();
        net.add_reaction(Reaction::new("d", vec![Term::one("X")], vec![], RateLaw::mass_action(1.0))).unwrap();
        let mut rng = replicate_rng(1, 0);
        assert_eq!(ssa_step(&net.initial_state(), &net, &mut rng).unwrap(), StepOutcome::Exhausted);
        let traj = simulate_ssa(&net, &SsaConfig::new(5.0, 1)).unwrap();
        assert_eq!(traj.termination, Termination::Exhausted);
        assert_eq!(traj.times.len(), 6);
    }

    #[test]
    fn negative_propensity_names_reaction() {
        let mut net = constant_rates(&[1.0]);
        net.reactions[0].law = RateLaw::mass_action(f64::NAN);
        // validation rejects it before stepping
        assert!(simulate_ssa(&net, &SsaConfig::new(1.0, 0)).is_err());
    }

    #[test]
    fn event_limit_truncates() {
        let net = constant_rates(&[100.0]);
        let mut cfg = SsaConfig::new(100.0, 3);
        cfg.max_events = 50;
        let traj = simulate_ssa(&net, &cfg).unwrap();
        assert_eq!(traj.termination, Termination::EventLimit);
        assert_eq!(traj.events, 50);
        assert!(*traj.times.last().unwrap() < 100.0);
    }

    #[test]
    fn every_event_recording_is_strictly_increasing() {
        let net = constant_rates(&[2.0]);
        let traj = simulate_ssa(&net, &SsaConfig::new(10.0, 9).every_event()).unwrap();
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*traj.times.last().unwrap(), 10.0);
        assert_eq!(traj.rows.len() as u64, traj.events + 2);
    }

    #[test]
    fn immediate_products_never_recorded() {
        let mut net = ReactionNetwork::new("waste");
        net.add_species("A", 100).unwrap();
        net.add_species("W", 5).unwrap();
        net.add_reaction(Reaction::new("deg", vec![Term::one("A")], vec![Term::one("W")], RateLaw::mass_action(1.0))).unwrap();
        net.add_reaction(Reaction::new("flush", vec![Term::one("W")], vec![], RateLaw::Immediate)).unwrap();
        let traj = simulate_ssa(&net, &SsaConfig::new(3.0, 2).every_event()).unwrap();
        let w = traj.species_index("W").unwrap();
        assert!(traj.rows.iter().all(|r| r[w] == 0));
        assert!(traj.rows.last().unwrap()[0] < 100);
    }

    #[test]
    fn bad_config() {
        let net = constant_rates(&[1.0]);
        assert!(simulate_ssa(&net, &SsaConfig::new(0.0, 1)).is_err());
        assert!(simulate_ssa(&net, &SsaConfig::new(1.0, 1).with_dt(0.0)).is_err());
    }
}

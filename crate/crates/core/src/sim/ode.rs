//! Deterministic reference integration (Dormand–Prince 5(4), adaptive step).
//!
//! Amounts stay in molecule counts. Homodimerization with stochastic constant
//! `c` contributes flux `c·x²/2`, the large-number limit of `c·x(x−1)/2`.

use serde::{Deserialize, Serialize};

use crate::network::ReactionNetwork;

use super::compiled::CompiledNetwork;
use super::{SimError, Termination, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeConfig {
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Output grid spacing; `None` records every accepted step.
    pub output_dt: Option<f64>,
    pub max_steps: usize,
}

impl OdeConfig {
    pub fn new(t_end: f64) -> Self {
        Self { t_end, rel_tol: 1e-8, abs_tol: 1e-8, output_dt: Some(1.0), max_steps: 50_000_000 }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_output_dt(mut self, dt: Option<f64>) -> Self {
        self.output_dt = dt;
        self
    }
}

// Dormand–Prince tableau (autonomous right-hand side, so the nodes c_i are unused)
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// error = 5th order − 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Right-hand side of the reaction-rate equations.
pub(crate) struct RateEquations {
    net: CompiledNetwork,
    deltas: Vec<Vec<(usize, f64)>>,
}

impl RateEquations {
    pub fn new(network: &ReactionNetwork) -> Result<Self, SimError> {
        let net = CompiledNetwork::new(network)?;
        let deltas = net.effective_deltas()?;
        Ok(Self { net, deltas })
    }

    pub fn eval(&self, x: &[f64], dx: &mut [f64]) {
        dx.iter_mut().for_each(|v| *v = 0.0);
        for (r, delta) in self.net.reactions.iter().zip(&self.deltas) {
            let v = r.rate_real(x);
            if v != 0.0 {
                for &(s, d) in delta {
                    dx[s] += d * v;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.net.n_species
    }

    /// Initial amounts after immediate follow-ups are applied.
    pub fn initial(&self, network: &ReactionNetwork) -> Result<Vec<f64>, SimError> {
        let mut counts: Vec<u64> = network.species.iter().map(|s| s.initial).collect();
        self.net.flush_immediates(&mut counts)?;
        Ok(counts.into_iter().map(|c| c as f64).collect())
    }
}

pub fn simulate_ode(network: &ReactionNetwork, config: &OdeConfig) -> Result<Trajectory<f64>, SimError> {
    if !(config.t_end > 0.0) || !(config.rel_tol > 0.0) || !(config.abs_tol > 0.0) {
        return Err(SimError::Config("t_end and tolerances must be positive".into()));
    }
    let eqs = RateEquations::new(network)?;
    let x0 = eqs.initial(network)?;
    let species = network.species.iter().map(|s| s.name.clone()).collect();
    let (times, rows, steps) = integrate(&eqs, x0, config)?;
    Ok(Trajectory { species, times, rows, termination: Termination::ReachedEnd, events: steps })
}

fn error_norm(y: &[f64], y_new: &[f64], err: &[f64], rtol: f64, atol: f64) -> f64 {
    let n = y.len().max(1) as f64;
    let sum: f64 = y
        .iter()
        .zip(y_new)
        .zip(err)
        .map(|((a, b), e)| {
            let sc = atol + rtol * a.abs().max(b.abs());
            (e / sc).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

/// Sample times, rows and attempted steps.
type Solution = (Vec<f64>, Vec<Vec<f64>>, u64);

fn integrate(eqs: &RateEquations, mut y: Vec<f64>, cfg: &OdeConfig) -> Result<Solution, SimError> {
    let n = eqs.dim();
    let mut times = vec![0.0];
    let mut rows = vec![y.clone()];
    let grid: Option<Vec<f64>> = cfg.output_dt.map(|dt| super::ssa::grid_times(cfg.t_end, dt));
    let mut next_out = 1usize;

    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut err = vec![0.0; n];
    eqs.eval(&y, &mut k[0]);

    let mut t = 0.0;
    let scale: f64 = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let rate: f64 = k[0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut h = if rate > 0.0 { (0.01 * scale / rate).min(cfg.t_end) } else { cfg.t_end };
    h = h.max(1e-12 * cfg.t_end);
    let mut steps = 0u64;
    let h_min = 1e-14 * cfg.t_end.max(1.0);

    while t < cfg.t_end {
        if steps as usize >= cfg.max_steps {
            return Err(SimError::Stiff { t, h });
        }
        let mut target = cfg.t_end;
        if let Some(g) = &grid {
            if next_out < g.len() {
                target = g[next_out];
            }
        }
        let landing = t + h >= target;
        let h_step = if landing { target - t } else { h };

        macro_rules! stage {
            ($dst:expr, $( ($c:expr, $i:expr) ),* ) => {{
                for s in 0..n {
                    tmp[s] = y[s] $( + h_step * $c * k[$i][s] )*;
                }
                let (_, rest) = k.split_at_mut($dst);
                eqs.eval(&tmp, &mut rest[0]);
            }};
        }
        stage!(1, (A21, 0));
        stage!(2, (A31, 0), (A32, 1));
        stage!(3, (A41, 0), (A42, 1), (A43, 2));
        stage!(4, (A51, 0), (A52, 1), (A53, 2), (A54, 3));
        stage!(5, (A61, 0), (A62, 1), (A63, 2), (A64, 3), (A65, 4));
        for s in 0..n {
            y_new[s] = y[s] + h_step * (B1 * k[0][s] + B3 * k[2][s] + B4 * k[3][s] + B5 * k[4][s] + B6 * k[5][s]);
        }
        {
            let (_, rest) = k.split_at_mut(6);
            eqs.eval(&y_new, &mut rest[0]);
        }
        for s in 0..n {
            err[s] = h_step * (E1 * k[0][s] + E3 * k[2][s] + E4 * k[3][s] + E5 * k[4][s] + E6 * k[5][s] + E7 * k[6][s]);
        }
        let e = error_norm(&y, &y_new, &err, cfg.rel_tol, cfg.abs_tol);
        steps += 1;
        if !e.is_finite() {
            h = h_step * 0.1;
            if h < h_min {
                return Err(SimError::Stiff { t, h });
            }
            continue;
        }
        if e <= 1.0 {
            t = if landing { target } else { t + h_step };
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6);
            match &grid {
                Some(_) if landing && t <= cfg.t_end => {
                    times.push(t);
                    rows.push(y.clone());
                    next_out += 1;
                }
                None => {
                    times.push(t);
                    rows.push(y.clone());
                }
                _ => {}
            }
            let fac = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            // a step shortened to land on an output point says nothing against the old size
            h = if landing { h.max(h_step * fac) } else { h_step * fac };
        } else {
            h = h_step * (0.9 * e.powf(-0.2)).clamp(0.1, 1.0);
            if h < h_min {
                return Err(SimError::Stiff { t, h });
            }
        }
    }
    Ok((times, rows, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{RateLaw, Reaction, Term};

    #[test]
    fn linear_decay_matches_exponential() {
        let mut net = ReactionNetwork::new("decay");
        net.add_species("X", 1000).unwrap();
        net.add_reaction(Reaction::new("d", vec![Term::one("X")], vec![], RateLaw::mass_action(0.7))).unwrap();
        let traj = simulate_ode(&net, &OdeConfig::new(5.0).with_output_dt(Some(0.5))).unwrap();
        for (t, row) in traj.times.iter().zip(&traj.rows) {
            let exact = 1000.0 * (-0.7 * t).exp();
            assert!((row[0] - exact).abs() < 1e-5 * 1000.0, "t={t}: {} vs {exact}", row[0]);
        }
        assert_eq!(traj.times.len(), 11);
    }

    #[test]
    fn dimerization_limit() {
        // c = 2k: dX/dt = −2k·X², X(t) = X0/(1 + 2k·X0·t)
        let k = 1e-3;
        let mut net = ReactionNetwork::new("dimer");
        net.add_species("X", 500).unwrap();
        net.add_species("X2", 0).unwrap();
        net.add_reaction(Reaction::new("f", vec![Term::new("X", 2)], vec![Term::one("X2")], RateLaw::mass_action(2.0 * k)))
            .unwrap();
        let traj = simulate_ode(&net, &OdeConfig::new(4.0)).unwrap();
        let x = traj.rows.last().unwrap()[0];
        let exact = 500.0 / (1.0 + 2.0 * k * 500.0 * 4.0);
        assert!((x - exact).abs() < 1e-5, "{x} vs {exact}");
    }

    #[test]
    fn empty_network_is_constant() {
        let mut net = ReactionNetwork::new("idle");
        net.add_species("A", 7).unwrap();
        let traj = simulate_ode(&net, &OdeConfig::new(3.0)).unwrap();
        assert!(traj.rows.iter().all(|r| r[0] == 7.0));
    }

    #[test]
    fn immediate_follow_ups_are_folded_in() {
        let mut net = ReactionNetwork::new("waste");
        net.add_species("A", 100).unwrap();
        net.add_species("W", 0).unwrap();
        net.add_reaction(Reaction::new("deg", vec![Term::one("A")], vec![Term::one("W")], RateLaw::mass_action(1.0))).unwrap();
        net.add_reaction(Reaction::new("flush", vec![Term::one("W")], vec![], RateLaw::Immediate)).unwrap();
        let traj = simulate_ode(&net, &OdeConfig::new(2.0)).unwrap();
        assert!(traj.rows.iter().all(|r| r[1] == 0.0));
        assert!((traj.rows.last().unwrap()[0] - 100.0 * (-2.0f64).exp()).abs() < 1e-5);
    }
}

use crate::network::{falling_combination, hill, michaelis_menten, RateLaw, ReactionNetwork};

use super::SimError;

#[derive(Debug, Clone)]
enum Kernel {
    Zeroth,
    Uni(usize),
    Dimer(usize),
    Bi(usize, usize),
    General(Vec<(usize, u32)>),
    Mm { substrate: usize, vmax: f64, km: f64 },
    Hill { regulator: usize, kms: f64, j: f64, n: u32 },
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledReaction {
    pub id: String,
    rate: f64,
    kernel: Kernel,
    /// Minimum counts required for the reaction to fire.
    guards: Vec<(usize, u64)>,
    pub delta: Vec<(usize, i64)>,
}

impl CompiledReaction {
    #[inline]
    fn enabled(&self, counts: &[u64]) -> bool {
        self.guards.iter().all(|&(i, need)| counts[i] >= need)
    }

    #[inline]
    pub fn propensity(&self, counts: &[u64]) -> f64 {
        if !self.enabled(counts) {
            return 0.0;
        }
        match &self.kernel {
            Kernel::Zeroth => self.rate,
            Kernel::Uni(i) => self.rate * counts[*i] as f64,
            Kernel::Dimer(i) => self.rate * falling_combination(counts[*i], 2),
            Kernel::Bi(i, j) => self.rate * counts[*i] as f64 * counts[*j] as f64,
            Kernel::General(terms) => terms.iter().fold(self.rate, |a, &(i, k)| a * falling_combination(counts[i], k)),
            Kernel::Mm { substrate, vmax, km } => michaelis_menten(*vmax, *km, counts[*substrate] as f64),
            Kernel::Hill { regulator, kms, j, n } => hill(*kms, *j, *n, counts[*regulator] as f64),
        }
    }

    /// Deterministic rate on real-valued amounts.
    #[inline]
    pub fn rate_real(&self, x: &[f64]) -> f64 {
        let v = |i: usize| x[i].max(0.0);
        match &self.kernel {
            Kernel::Zeroth => self.rate,
            Kernel::Uni(i) => self.rate * v(*i),
            Kernel::Dimer(i) => self.rate * v(*i) * v(*i) / 2.0,
            Kernel::Bi(i, j) => self.rate * v(*i) * v(*j),
            Kernel::General(terms) => terms.iter().fold(self.rate, |a, &(i, k)| {
                let mut f = 1.0;
                for m in 1..=k {
                    f *= v(i) / f64::from(m);
                }
                a * f
            }),
            Kernel::Mm { substrate, vmax, km } => michaelis_menten(*vmax, *km, v(*substrate)),
            Kernel::Hill { regulator, kms, j, n } => hill(*kms, *j, *n, v(*regulator)),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Immediate {
    pub id: String,
    pub reactant: usize,
    pub delta: Vec<(usize, i64)>,
}

/// Index-based form of a network used by the simulators.
#[derive(Debug, Clone)]
pub(crate) struct CompiledNetwork {
    pub n_species: usize,
    pub reactions: Vec<CompiledReaction>,
    pub immediates: Vec<Immediate>,
    /// For each timed reaction, the timed reactions whose propensity may change when it fires.
    pub dependents: Vec<Vec<usize>>,
}

impl CompiledNetwork {
    pub fn new(network: &ReactionNetwork) -> Result<Self, SimError> {
        let report = network.validate();
        if !report.is_clean() {
            return Err(SimError::InvalidNetwork(report.findings.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; ")));
        }
        let idx = network.index_map();
        let index = |name: &str| idx[name];
        let mut reactions = Vec::new();
        let mut immediates = Vec::new();
        for r in &network.reactions {
            let delta: Vec<(usize, i64)> = r.net_change().into_iter().map(|(s, d)| (index(&s), d)).collect();
            let guards: Vec<(usize, u64)> = r.reactants.iter().map(|t| (index(&t.species), u64::from(t.coeff))).collect();
            let (rate, kernel) = match &r.law {
                RateLaw::MassAction { rate } => {
                    let kernel = match guards.as_slice() {
                        [] => Kernel::Zeroth,
                        [(i, 1)] => Kernel::Uni(*i),
                        [(i, 2)] => Kernel::Dimer(*i),
                        [(i, 1), (j, 1)] if i != j => Kernel::Bi(*i, *j),
                        _ => Kernel::General(guards.iter().map(|&(i, k)| (i, k as u32)).collect()),
                    };
                    (*rate, kernel)
                }
                RateLaw::MichaelisMenten { vmax, km, substrate } => {
                    (1.0, Kernel::Mm { substrate: index(substrate), vmax: *vmax, km: *km })
                }
                RateLaw::Hill { kms, j, n, regulator } => {
                    (1.0, Kernel::Hill { regulator: index(regulator), kms: *kms, j: *j, n: *n })
                }
                RateLaw::Immediate => {
                    immediates.push(Immediate { id: r.id.clone(), reactant: guards[0].0, delta });
                    continue;
                }
            };
            reactions.push(CompiledReaction { id: r.id.clone(), rate, kernel, guards, delta });
        }

        // reads[s] = timed reactions whose propensity reads species s
        let mut reads: Vec<Vec<usize>> = vec![Vec::new(); network.species.len()];
        for (k, (r, src)) in reactions.iter().zip(network.reactions.iter().filter(|r| r.law != RateLaw::Immediate)).enumerate() {
            for s in src.reactants.iter().map(|t| t.species.as_str()).chain(src.law.modifier()) {
                let i = index(s);
                if !reads[i].contains(&k) {
                    reads[i].push(k);
                }
            }
            debug_assert_eq!(r.id, src.id);
        }
        let compiled = Self { n_species: network.species.len(), reactions, immediates, dependents: Vec::new() };
        let dependents = (0..compiled.reactions.len())
            .map(|k| {
                let mut touched = vec![false; compiled.n_species];
                compiled.mark_touched(&compiled.reactions[k].delta, &mut touched, 0);
                let mut deps: Vec<usize> =
                    touched.iter().enumerate().filter(|(_, t)| **t).flat_map(|(s, _)| reads[s].iter().copied()).collect();
                deps.sort_unstable();
                deps.dedup();
                deps
            })
            .collect();
        Ok(Self { dependents, ..compiled })
    }

    fn mark_touched(&self, delta: &[(usize, i64)], touched: &mut [bool], depth: usize) {
        for &(s, d) in delta {
            touched[s] = true;
            if d > 0 && depth < 32 {
                for imm in self.immediates.iter().filter(|m| m.reactant == s) {
                    self.mark_touched(&imm.delta, touched, depth + 1);
                }
            }
        }
    }

    /// Fires every enabled immediate reaction until none remains enabled.
    pub fn flush_immediates(&self, counts: &mut [u64]) -> Result<bool, SimError> {
        let mut fired = false;
        for _ in 0..10_000 {
            let mut any = false;
            for imm in &self.immediates {
                let m = counts[imm.reactant];
                if m == 0 {
                    continue;
                }
                any = true;
                fired = true;
                apply_delta_scaled(counts, &imm.delta, m, &imm.id)?;
            }
            if !any {
                return Ok(fired);
            }
        }
        Err(SimError::Numerical("immediate reactions do not settle (cycle?)".into()))
    }

    /// Net change of each timed reaction after its immediate follow-ups, for the ODE.
    pub fn effective_deltas(&self) -> Result<Vec<Vec<(usize, f64)>>, SimError> {
        self.reactions
            .iter()
            .map(|r| {
                let mut d = vec![0.0; self.n_species];
                for &(s, v) in &r.delta {
                    d[s] += v as f64;
                }
                for _ in 0..64 {
                    let mut changed = false;
                    for imm in &self.immediates {
                        let m = d[imm.reactant];
                        if m > 0.0 {
                            for &(s, v) in &imm.delta {
                                d[s] += m * v as f64;
                            }
                            changed = true;
                        }
                    }
                    if !changed {
                        return Ok(d.into_iter().enumerate().filter(|(_, v)| *v != 0.0).collect());
                    }
                }
                Err(SimError::Numerical(format!("immediate follow-ups of `{}` do not settle", r.id)))
            })
            .collect()
    }
}

#[inline]
pub(crate) fn apply_delta(counts: &mut [u64], delta: &[(usize, i64)], id: &str) -> Result<(), SimError> {
    apply_delta_scaled(counts, delta, 1, id)
}

fn apply_delta_scaled(counts: &mut [u64], delta: &[(usize, i64)], times: u64, id: &str) -> Result<(), SimError> {
    for &(s, d) in delta {
        let step = d.unsigned_abs().checked_mul(times).ok_or_else(|| SimError::Overflow(id.to_string()))?;
        counts[s] = if d < 0 {
            counts[s].checked_sub(step).ok_or_else(|| SimError::Firing(id.to_string()))?
        } else {
            counts[s].checked_add(step).ok_or_else(|| SimError::Overflow(id.to_string()))?
        };
    }
    Ok(())
}

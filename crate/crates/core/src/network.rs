//! Reaction-network data model.
//!
//! Everything in here works in molecule counts. Concentrations only enter
//! through [`crate::units`] at import/export time.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("unknown reaction `{0}`")]
    UnknownReaction(String),
    #[error("invalid state: species `{species}` has negative count {count}")]
    InvalidState { species: String, count: i64 },
    #[error("state has {got} counts but the network declares {expected} species")]
    StateShape { expected: usize, got: usize },
    #[error("firing `{reaction}` would drive `{species}` negative")]
    Firing { reaction: String, species: String },
    #[error("count overflow for `{species}` while firing `{reaction}`")]
    Overflow { reaction: String, species: String },
    #[error("duplicate species `{0}`")]
    DuplicateSpecies(String),
    #[error("duplicate reaction `{0}`")]
    DuplicateReaction(String),
    #[error("invalid rate law on `{reaction}`: {reason}")]
    InvalidRateLaw { reaction: String, reason: String },
}

/// A named molecular species with its initial copy number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Species {
    pub name: String,
    pub initial: u64,
}

impl Species {
    pub fn new(name: impl Into<String>, initial: u64) -> Self {
        Self { name: name.into(), initial }
    }
}

/// A species with its stoichiometric coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    pub species: String,
    pub coeff: u32,
}

impl Term {
    pub fn new(species: impl Into<String>, coeff: u32) -> Self {
        Self { species: species.into(), coeff }
    }

    pub fn one(species: impl Into<String>) -> Self {
        Self::new(species, 1)
    }
}

/// How fast a reaction fires.
///
/// `MassAction` carries the stochastic constant `c`: unimolecular `c·x`,
/// heteromolecular `c·x·y`, homodimerization `c·x·(x−1)/2`. The compound
/// laws are evaluated directly on the named species ("packed" mode).
/// `Immediate` marks an infinitely fast unimolecular step that fires as
/// soon as its reactant appears.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateLaw {
    MassAction { rate: f64 },
    MichaelisMenten { vmax: f64, km: f64, substrate: String },
    Hill { kms: f64, j: f64, n: u32, regulator: String },
    Immediate,
}

impl RateLaw {
    pub fn mass_action(rate: f64) -> Self {
        RateLaw::MassAction { rate }
    }

    pub fn is_mass_action(&self) -> bool {
        matches!(self, RateLaw::MassAction { .. })
    }

    /// Species the law reads besides the reactants.
    pub fn modifier(&self) -> Option<&str> {
        match self {
            RateLaw::MichaelisMenten { substrate, .. } => Some(substrate),
            RateLaw::Hill { regulator, .. } => Some(regulator),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reaction {
    pub id: String,
    pub reactants: Vec<Term>,
    pub products: Vec<Term>,
    pub law: RateLaw,
}

impl Reaction {
    pub fn new(id: impl Into<String>, reactants: Vec<Term>, products: Vec<Term>, law: RateLaw) -> Self {
        Self { id: id.into(), reactants, products, law }
    }

    /// Net stoichiometric change, keyed by species name. Zero entries are dropped.
    pub fn net_change(&self) -> BTreeMap<String, i64> {
        let mut change: BTreeMap<String, i64> = BTreeMap::new();
        for t in &self.reactants {
            *change.entry(t.species.clone()).or_default() -= i64::from(t.coeff);
        }
        for t in &self.products {
            *change.entry(t.species.clone()).or_default() += i64::from(t.coeff);
        }
        change.retain(|_, v| *v != 0);
        change
    }

    pub fn reactant_order(&self) -> u32 {
        self.reactants.iter().map(|t| t.coeff).sum()
    }

    /// All species referenced by the reaction, including rate-law modifiers.
    pub fn referenced_species(&self) -> impl Iterator<Item = &str> {
        self.reactants.iter().chain(self.products.iter()).map(|t| t.species.as_str()).chain(self.law.modifier())
    }
}

/// A linear invariant `Σ coeff·species = total` declared on the network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conservation {
    pub terms: Vec<Term>,
    pub total: u64,
}

impl Conservation {
    pub fn new(terms: Vec<Term>, total: u64) -> Self {
        Self { terms, total }
    }

    pub fn sum(&self, network: &ReactionNetwork, counts: &[u64]) -> Result<u64, NetworkError> {
        self.terms.iter().try_fold(0u64, |acc, t| {
            let idx = network.species_index(&t.species).ok_or_else(|| NetworkError::UnknownSpecies(t.species.clone()))?;
            Ok(acc + u64::from(t.coeff) * counts[idx])
        })
    }

    /// Real-valued version used for ODE trajectories.
    pub fn sum_real(&self, network: &ReactionNetwork, values: &[f64]) -> Option<f64> {
        self.terms.iter().try_fold(0.0, |acc, t| network.species_index(&t.species).map(|i| acc + f64::from(t.coeff) * values[i]))
    }

    /// Whether the reaction's net change is orthogonal to this invariant.
    pub fn preserved_by(&self, reaction: &Reaction) -> bool {
        let change = reaction.net_change();
        let dot: i64 = self.terms.iter().map(|t| i64::from(t.coeff) * change.get(&t.species).copied().unwrap_or(0)).sum();
        dot == 0
    }
}

impl fmt::Display for Conservation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs: Vec<String> = self
            .terms
            .iter()
            .map(|t| if t.coeff == 1 { t.species.clone() } else { format!("{}*{}", t.coeff, t.species) })
            .collect();
        write!(f, "{} = {}", lhs.join(" + "), self.total)
    }
}

/// Copy numbers at one time point, aligned with the owning network's species order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemState {
    pub time: f64,
    pub counts: Vec<u64>,
}

impl SystemState {
    pub fn new(time: f64, counts: Vec<u64>) -> Self {
        Self { time, counts }
    }

    /// Builds a state from signed counts, rejecting negatives.
    pub fn from_signed(network: &ReactionNetwork, time: f64, counts: &[i64]) -> Result<Self, NetworkError> {
        if counts.len() != network.species.len() {
            return Err(NetworkError::StateShape { expected: network.species.len(), got: counts.len() });
        }
        let counts = counts
            .iter()
            .zip(&network.species)
            .map(|(&c, s)| u64::try_from(c).map_err(|_| NetworkError::InvalidState { species: s.name.clone(), count: c }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { time, counts })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReactionNetwork {
    pub name: String,
    pub species: Vec<Species>,
    pub parameters: BTreeMap<String, f64>,
    pub reactions: Vec<Reaction>,
    pub conservations: Vec<Conservation>,
}

impl ReactionNetwork {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Default::default() }
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn reaction_index(&self, id: &str) -> Option<usize> {
        self.reactions.iter().position(|r| r.id == id)
    }

    pub fn has_species(&self, name: &str) -> bool {
        self.species_index(name).is_some()
    }

    pub fn add_species(&mut self, name: impl Into<String>, initial: u64) -> Result<usize, NetworkError> {
        let name = name.into();
        if self.has_species(&name) {
            return Err(NetworkError::DuplicateSpecies(name));
        }
        self.species.push(Species { name, initial });
        Ok(self.species.len() - 1)
    }

    pub fn add_reaction(&mut self, reaction: Reaction) -> Result<usize, NetworkError> {
        if self.reaction_index(&reaction.id).is_some() {
            return Err(NetworkError::DuplicateReaction(reaction.id));
        }
        self.reactions.push(reaction);
        Ok(self.reactions.len() - 1)
    }

    pub fn set_initial(&mut self, name: &str, initial: u64) -> Result<(), NetworkError> {
        let idx = self.species_index(name).ok_or_else(|| NetworkError::UnknownSpecies(name.to_string()))?;
        self.species[idx].initial = initial;
        Ok(())
    }

    pub fn species_names(&self) -> Vec<&str> {
        self.species.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn initial_state(&self) -> SystemState {
        SystemState::new(0.0, self.species.iter().map(|s| s.initial).collect())
    }

    /// Stochastic propensity of reaction `index` in `state`.
    pub fn propensity(&self, index: usize, state: &SystemState) -> Result<f64, NetworkError> {
        self.check_shape(state)?;
        let reaction = self.reactions.get(index).ok_or_else(|| NetworkError::UnknownReaction(index.to_string()))?;
        let count = |name: &str| {
            self.species_index(name).map(|i| state.counts[i]).ok_or_else(|| NetworkError::UnknownSpecies(name.to_string()))
        };
        for t in &reaction.reactants {
            if count(&t.species)? < u64::from(t.coeff) {
                return Ok(0.0);
            }
        }
        let a = match &reaction.law {
            RateLaw::MassAction { rate } => {
                let mut a = *rate;
                for t in &reaction.reactants {
                    a *= falling_combination(count(&t.species)?, t.coeff);
                }
                a
            }
            RateLaw::MichaelisMenten { vmax, km, substrate } => michaelis_menten(*vmax, *km, count(substrate)? as f64),
            RateLaw::Hill { kms, j, n, regulator } => hill(*kms, *j, *n, count(regulator)? as f64),
            RateLaw::Immediate => f64::INFINITY,
        };
        Ok(a)
    }

    /// Fires reaction `index`, returning the new state. Time is unchanged.
    pub fn apply_reaction(&self, state: &SystemState, index: usize) -> Result<SystemState, NetworkError> {
        self.check_shape(state)?;
        let reaction = self.reactions.get(index).ok_or_else(|| NetworkError::UnknownReaction(index.to_string()))?;
        let mut next = state.clone();
        for (name, delta) in reaction.net_change() {
            let i = self.species_index(&name).ok_or_else(|| NetworkError::UnknownSpecies(name.clone()))?;
            let cur = next.counts[i];
            next.counts[i] = if delta < 0 {
                cur.checked_sub(delta.unsigned_abs())
                    .ok_or_else(|| NetworkError::Firing { reaction: reaction.id.clone(), species: name.clone() })?
            } else {
                cur.checked_add(delta as u64)
                    .ok_or_else(|| NetworkError::Overflow { reaction: reaction.id.clone(), species: name.clone() })?
            };
        }
        Ok(next)
    }

    fn check_shape(&self, state: &SystemState) -> Result<(), NetworkError> {
        if state.counts.len() != self.species.len() {
            return Err(NetworkError::StateShape { expected: self.species.len(), got: state.counts.len() });
        }
        Ok(())
    }

    /// Structural checks. Never fails; findings are collected in the report.
    pub fn validate(&self) -> ValidationReport {
        let mut findings = Vec::new();
        let mut seen = HashSet::new();
        for s in &self.species {
            if !seen.insert(s.name.as_str()) {
                findings.push(Finding::new(FindingKind::DuplicateSpecies, &s.name, "declared more than once"));
            }
        }
        let mut seen = HashSet::new();
        for r in &self.reactions {
            if !seen.insert(r.id.as_str()) {
                findings.push(Finding::new(FindingKind::DuplicateReaction, &r.id, "declared more than once"));
            }
            for t in r.reactants.iter().chain(&r.products) {
                if !self.has_species(&t.species) {
                    findings.push(Finding::new(
                        FindingKind::UnknownSpecies,
                        &r.id,
                        format!("reaction `{}` references undeclared species `{}`", r.id, t.species),
                    ));
                }
                if t.coeff == 0 {
                    findings.push(Finding::new(FindingKind::InvalidStoichiometry, &r.id, "zero coefficient"));
                }
            }
            for (reason, bad) in rate_law_problems(r) {
                findings.push(Finding::new(bad, &r.id, reason));
            }
            if let Some(m) = r.law.modifier() {
                if !self.has_species(m) {
                    findings.push(Finding::new(
                        FindingKind::MissingModifier,
                        &r.id,
                        format!("rate law of `{}` reads missing species `{}`", r.id, m),
                    ));
                }
            }
        }
        let initial: Vec<u64> = self.species.iter().map(|s| s.initial).collect();
        for c in &self.conservations {
            match c.sum(self, &initial) {
                Ok(sum) if sum != c.total => findings.push(Finding::new(
                    FindingKind::ConservationViolated,
                    &c.to_string(),
                    format!("initial sum is {sum}, declared {}", c.total),
                )),
                Ok(_) => {}
                Err(e) => findings.push(Finding::new(FindingKind::UnknownSpecies, &c.to_string(), e.to_string())),
            }
        }
        ValidationReport { findings }
    }

    /// Stable 64-bit FNV-1a digest of the network's canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("network serializes");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in json.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    /// Map of species name to index.
    pub fn index_map(&self) -> HashMap<&str, usize> {
        self.species.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect()
    }
}

fn rate_law_problems(r: &Reaction) -> Vec<(String, FindingKind)> {
    let mut out = Vec::new();
    let neg = |name: &str, v: f64| {
        (!(v >= 0.0) || !v.is_finite())
            .then(|| (format!("{name} = {v} must be a finite non-negative number"), FindingKind::NegativeConstant))
    };
    match &r.law {
        RateLaw::MassAction { rate } => {
            out.extend(neg("rate", *rate));
            if r.reactant_order() > 2 {
                out.push((format!("mass-action order {} exceeds 2", r.reactant_order()), FindingKind::InvalidRateLaw));
            }
        }
        RateLaw::MichaelisMenten { vmax, km, .. } => {
            out.extend(neg("vmax", *vmax));
            if !(*km > 0.0) {
                out.push((format!("Km = {km} must be positive"), FindingKind::InvalidRateLaw));
            }
        }
        RateLaw::Hill { kms, j, n, .. } => {
            out.extend(neg("kms", *kms));
            if !(*j > 0.0) {
                out.push((format!("J = {j} must be positive"), FindingKind::InvalidRateLaw));
            }
            if *n == 0 {
                out.push(("Hill coefficient must be at least 1".into(), FindingKind::InvalidRateLaw));
            }
        }
        RateLaw::Immediate => {
            if r.reactants.len() != 1 || r.reactants[0].coeff != 1 {
                out.push(("immediate reactions take exactly one reactant molecule".into(), FindingKind::InvalidRateLaw));
            }
        }
    }
    out
}

/// Number of distinct reactant combinations: x for one molecule, x(x−1)/2 for two.
#[inline]
pub fn falling_combination(x: u64, coeff: u32) -> f64 {
    match coeff {
        0 => 1.0,
        1 => x as f64,
        2 => (x as f64) * (x.saturating_sub(1) as f64) / 2.0,
        k => {
            let mut acc = 1.0;
            for i in 0..u64::from(k) {
                acc *= x.saturating_sub(i) as f64 / (i + 1) as f64;
            }
            acc
        }
    }
}

#[inline]
pub fn michaelis_menten(vmax: f64, km: f64, s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        vmax * s / (km + s)
    }
}

#[inline]
pub fn hill(kms: f64, j: f64, n: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let xn = x.powi(n as i32);
    kms * xn / (j.powi(n as i32) + xn)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FindingKind {
    UnknownSpecies,
    DuplicateSpecies,
    DuplicateReaction,
    NegativeConstant,
    InvalidRateLaw,
    InvalidStoichiometry,
    MissingModifier,
    ConservationViolated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub subject: String,
    pub message: String,
}

impl Finding {
    fn new(kind: FindingKind, subject: &str, message: impl Into<String>) -> Self {
        Self { kind, subject: subject.to_string(), message: message.into() }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm_unpacked() -> ReactionNetwork {
        let mut n = ReactionNetwork::new("mm");
        for (s, c) in [("E", 60), ("S", 599), ("ES", 0), ("P", 0)] {
            n.add_species(s, c).unwrap();
        }
        n.add_reaction(Reaction::new(
            "bind",
            vec![Term::one("E"), Term::one("S")],
            vec![Term::one("ES")],
            RateLaw::mass_action(1.0 / 3.0),
        ))
        .unwrap();
        n.add_reaction(Reaction::new(
            "unbind",
            vec![Term::one("ES")],
            vec![Term::one("E"), Term::one("S")],
            RateLaw::mass_action(99.0),
        ))
        .unwrap();
        n.add_reaction(Reaction::new(
            "cat",
            vec![Term::one("ES")],
            vec![Term::one("E"), Term::one("P")],
            RateLaw::mass_action(1.0),
        ))
        .unwrap();
        n.conservations.push(Conservation::new(vec![Term::one("E"), Term::one("ES")], 60));
        n
    }

    fn single(law: RateLaw, reactants: Vec<Term>, products: Vec<Term>, species: &[(&str, u64)]) -> ReactionNetwork {
        let mut n = ReactionNetwork::new("t");
        for (s, c) in species {
            n.add_species(*s, *c).unwrap();
        }
        n.add_reaction(Reaction::new("r", reactants, products, law)).unwrap();
        n
    }

    #[test]
    fn linear_propensity() {
        let n = single(RateLaw::mass_action(2.0), vec![Term::one("X")], vec![], &[("X", 5)]);
        assert_eq!(n.propensity(0, &n.initial_state()).unwrap(), 10.0);
    }

    #[test]
    fn hill_half_saturation() {
        let k = 3.7;
        let law = RateLaw::Hill { kms: k, j: 599.0, n: 2, regulator: "TF".into() };
        let n = single(law, vec![Term::one("TF")], vec![Term::one("TF"), Term::one("M")], &[("TF", 599), ("M", 0)]);
        assert!((n.propensity(0, &n.initial_state()).unwrap() - k / 2.0).abs() < 1e-12);
    }

    #[test]
    fn homodimer_with_two_molecules() {
        let c = 0.25;
        let n = single(RateLaw::mass_action(c), vec![Term::new("TF", 2)], vec![Term::one("TF2")], &[("TF", 2), ("TF2", 0)]);
        assert_eq!(n.propensity(0, &n.initial_state()).unwrap(), c);
    }

    #[test]
    fn mm_at_km_is_half_vmax() {
        let law = RateLaw::MichaelisMenten { vmax: 60.0, km: 300.0, substrate: "S".into() };
        let n = single(law, vec![Term::one("S")], vec![Term::one("P")], &[("S", 300), ("P", 0)]);
        assert_eq!(n.propensity(0, &n.initial_state()).unwrap(), 30.0);
    }

    #[test]
    fn zero_reactant_gives_zero_propensity() {
        let n = mm_unpacked();
        let mut st = n.initial_state();
        st.counts[0] = 0;
        assert_eq!(n.propensity(0, &st).unwrap(), 0.0);
        assert_eq!(n.propensity(1, &st).unwrap(), 0.0);
    }

    #[test]
    fn negative_count_is_invalid_state() {
        let n = mm_unpacked();
        let err = SystemState::from_signed(&n, 0.0, &[1, -1, 0, 0]).unwrap_err();
        assert!(matches!(err, NetworkError::InvalidState { ref species, count: -1 } if species == "S"));
    }

    #[test]
    fn binding_step_updates_counts() {
        let n = mm_unpacked();
        let st = SystemState::new(0.0, vec![1, 1, 0, 0]);
        let next = n.apply_reaction(&st, 0).unwrap();
        assert_eq!(next.counts, vec![0, 0, 1, 0]);
    }

    #[test]
    fn catalyst_preserved_on_synthesis() {
        let n = single(
            RateLaw::mass_action(1.0),
            vec![Term::one("GTF2")],
            vec![Term::one("M"), Term::one("GTF2")],
            &[("GTF2", 1), ("M", 0)],
        );
        let next = n.apply_reaction(&n.initial_state(), 0).unwrap();
        assert_eq!(next.counts, vec![1, 1]);
    }

    #[test]
    fn degradation_decrements() {
        let n = single(RateLaw::mass_action(1.0), vec![Term::one("P")], vec![], &[("P", 3)]);
        assert_eq!(n.apply_reaction(&n.initial_state(), 0).unwrap().counts, vec![2]);
    }

    #[test]
    fn firing_below_zero_is_an_error() {
        let n = mm_unpacked();
        let st = SystemState::new(0.0, vec![0, 1, 0, 0]);
        assert!(matches!(n.apply_reaction(&st, 0), Err(NetworkError::Firing { .. })));
    }

    #[test]
    fn overflow_is_an_error() {
        let n = single(RateLaw::mass_action(1.0), vec![], vec![Term::one("X")], &[("X", u64::MAX)]);
        assert!(matches!(n.apply_reaction(&n.initial_state(), 0), Err(NetworkError::Overflow { .. })));
    }

    #[test]
    fn well_formed_network_validates() {
        assert!(mm_unpacked().validate().is_clean());
    }

    #[test]
    fn undeclared_species_is_reported() {
        let mut n = mm_unpacked();
        n.add_reaction(Reaction::new("leak", vec![Term::one("Q")], vec![], RateLaw::mass_action(1.0))).unwrap();
        let report = n.validate();
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].kind, FindingKind::UnknownSpecies);
        assert!(report.findings[0].message.contains("leak"));
    }

    #[test]
    fn violated_conservation_is_reported() {
        let mut n = mm_unpacked();
        n.set_initial("E", 50).unwrap();
        let report = n.validate();
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].kind, FindingKind::ConservationViolated);
    }

    #[test]
    fn missing_substrate_and_bad_constants_are_reported() {
        let law = RateLaw::MichaelisMenten { vmax: -1.0, km: 0.0, substrate: "Z".into() };
        let n = single(law, vec![Term::one("S")], vec![], &[("S", 1)]);
        let kinds: Vec<_> = n.validate().findings.into_iter().map(|f| f.kind).collect();
        assert!(kinds.contains(&FindingKind::NegativeConstant));
        assert!(kinds.contains(&FindingKind::InvalidRateLaw));
        assert!(kinds.contains(&FindingKind::MissingModifier));
    }

    #[test]
    fn conservation_orthogonality() {
        let n = mm_unpacked();
        let c = &n.conservations[0];
        assert!(n.reactions.iter().all(|r| c.preserved_by(r)));
    }

    #[test]
    fn fingerprint_is_stable_and_sensitive() {
        let a = mm_unpacked();
        let mut b = mm_unpacked();
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.set_initial("S", 598).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
    }
}

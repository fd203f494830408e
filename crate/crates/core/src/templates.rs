//! Unpacking compound rate laws into elementary mass-action schemes, and
//! composing module networks.
//!
//! Michaelis-Menten `S → P @ vmax·S/(Km+S)` becomes
//!
//! ```text
//! E + S → ES (k1)    ES → E + S (k2)    ES → E + P (k3)
//! ```
//!
//! with `k3 = vmax/Etot`, `k1 = rho·k3/Km`, `k2 = k1·Km − k3`. The stiffness
//! ratio `rho = k1·Km/k3` must exceed one so that `k2` stays positive.
//!
//! A Hill law with `n = 2` on regulator `TF` becomes sequential binding
//!
//! ```text
//! 2TF → TF2 (k1)   TF2 → 2TF (k2)   TF2 + G → GTF2 (k3)   GTF2 → TF2 + G (k4)
//! GTF2 → GTF2 + M (kms)
//! ```
//!
//! whose equilibrium bound fraction is `TF²/(k2·k4/(k1·k3) + TF²)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{Conservation, FindingKind, RateLaw, Reaction, ReactionNetwork, Species, Term};

/// Ratio `K1/K2` at or above which sequential binding counts as strongly cooperative.
pub const COOPERATIVITY_RATIO: f64 = 100.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemplateError {
    #[error("assumption violated: {0}")]
    Assumption(String),
    #[error("invalid template input: {0}")]
    Domain(String),
    #[error("reaction `{0}` does not exist")]
    MissingReaction(String),
    #[error("reaction `{reaction}` has the wrong shape for this template: {reason}")]
    WrongType { reaction: String, reason: String },
    #[error("species name `{0}` is already taken")]
    Naming(String),
    #[error("unsupported Hill order n = {0}; only n = 2 can be unpacked")]
    UnsupportedOrder(u32),
    #[error("composition conflict: {0}")]
    Composition(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MmDerivation {
    pub vmax: f64,
    pub km: f64,
    pub etot: f64,
    pub rho: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

pub fn derive_mm_params(vmax: f64, km: f64, etot: f64, rho: f64) -> Result<MmDerivation, TemplateError> {
    for (name, v) in [("vmax", vmax), ("Km", km), ("Etot", etot)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(TemplateError::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(TemplateError::Assumption(format!(
            "stiffness ratio rho = {rho} must exceed 1 or the dissociation constant k2 is not positive"
        )));
    }
    let k3 = vmax / etot;
    let k1 = rho * k3 / km;
    let k2 = (rho - 1.0) * k3;
    Ok(MmDerivation { vmax, km, etot, rho, k1, k2, k3 })
}

/// Total enzyme as a fraction of the smallest substrate level, at least one molecule.
pub fn select_enzyme_total(s_min: u64, fraction: f64) -> Result<u64, TemplateError> {
    if s_min == 0 {
        return Err(TemplateError::Domain("minimum substrate must be positive".into()));
    }
    if !(fraction > 0.0) {
        return Err(TemplateError::Domain(format!("enzyme fraction must be positive, got {fraction}")));
    }
    if fraction >= 1.0 {
        return Err(TemplateError::Assumption(format!(
            "enzyme fraction {fraction} does not keep the substrate in excess of the enzyme"
        )));
    }
    Ok(((fraction * s_min as f64).round() as u64).max(1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HillDerivation {
    pub j: f64,
    pub n: u32,
    pub k1_dissociation: f64,
    pub k2_dissociation: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    /// `K1 ≥ 100·K2`.
    pub positive_cooperativity: bool,
}

/// Splits `J² = K1·K2` into four rate constants with speed scales `s1` (dimerization)
/// and `s2` (promoter binding).
pub fn derive_hill_params(j: f64, k1_dissociation: f64, s1: f64, s2: f64) -> Result<HillDerivation, TemplateError> {
    for (name, v) in [("J", j), ("K1", k1_dissociation), ("s1", s1), ("s2", s2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(TemplateError::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    let k2_dissociation = j * j / k1_dissociation;
    Ok(HillDerivation {
        j,
        n: 2,
        k1_dissociation,
        k2_dissociation,
        k1: s1,
        k2: s1 * k1_dissociation,
        k3: s2,
        k4: s2 * k2_dissociation,
        positive_cooperativity: k1_dissociation >= COOPERATIVITY_RATIO * k2_dissociation,
    })
}

impl HillDerivation {
    /// Recovers the derivation from four explicit rate constants.
    pub fn from_rates(k1: f64, k2: f64, k3: f64, k4: f64) -> Result<Self, TemplateError> {
        for (name, v) in [("k1", k1), ("k2", k2), ("k3", k3), ("k4", k4)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(TemplateError::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        let kd1 = k2 / k1;
        let kd2 = k4 / k3;
        Ok(Self {
            j: (kd1 * kd2).sqrt(),
            n: 2,
            k1_dissociation: kd1,
            k2_dissociation: kd2,
            k1,
            k2,
            k3,
            k4,
            positive_cooperativity: kd1 >= COOPERATIVITY_RATIO * kd2,
        })
    }

    /// `(k2·k4)/(k1·k3)`, which equals `J²` for a consistent derivation.
    pub fn j_squared(&self) -> f64 {
        (self.k2 * self.k4) / (self.k1 * self.k3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl AssumptionCheck {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateKind {
    MichaelisMenten,
    Hill,
}

/// Substitution record for one unpacked reaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateExpansion {
    pub replaced_reaction: String,
    pub template: TemplateKind,
    pub derived: BTreeMap<String, f64>,
    pub introduced_species: Vec<Species>,
    pub introduced_reactions: Vec<Reaction>,
    pub conservations: Vec<Conservation>,
    pub assumptions: Vec<AssumptionCheck>,
    /// Renames applied to avoid collisions with existing species.
    pub renamed: Vec<String>,
}

impl TemplateExpansion {
    pub fn all_assumptions_hold(&self) -> bool {
        self.assumptions.iter().all(|a| a.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("expansion serializes")
    }
}

fn fresh_name(network: &ReactionNetwork, wanted: &str, reaction_id: &str, renamed: &mut Vec<String>) -> String {
    if !network.has_species(wanted) {
        return wanted.to_string();
    }
    let mut candidate = format!("{wanted}_{reaction_id}");
    let mut k = 2;
    while network.has_species(&candidate) {
        candidate = format!("{wanted}_{reaction_id}_{k}");
        k += 1;
    }
    renamed.push(format!("{wanted} -> {candidate}"));
    candidate
}

fn lookup<'a>(network: &'a ReactionNetwork, reaction_id: &str) -> Result<&'a Reaction, TemplateError> {
    network.reactions.iter().find(|r| r.id == reaction_id).ok_or_else(|| TemplateError::MissingReaction(reaction_id.to_string()))
}

/// Builds the Michaelis-Menten substitution record without touching the network.
pub fn expand_mm(
    network: &ReactionNetwork,
    reaction_id: &str,
    etot: u64,
    rho: f64,
    enzyme_name: Option<&str>,
) -> Result<TemplateExpansion, TemplateError> {
    let reaction = lookup(network, reaction_id)?;
    let RateLaw::MichaelisMenten { vmax, km, substrate } = &reaction.law else {
        return Err(TemplateError::WrongType {
            reaction: reaction_id.to_string(),
            reason: "rate law is not Michaelis-Menten".into(),
        });
    };
    if reaction.reactants.len() != 1 || reaction.reactants[0].coeff != 1 || &reaction.reactants[0].species != substrate {
        return Err(TemplateError::WrongType {
            reaction: reaction_id.to_string(),
            reason: format!("expected the single reactant `{substrate}`"),
        });
    }
    let d = derive_mm_params(*vmax, *km, etot as f64, rho)?;

    let mut renamed = Vec::new();
    let enzyme = match enzyme_name {
        Some(name) if network.has_species(name) => return Err(TemplateError::Naming(name.to_string())),
        Some(name) => name.to_string(),
        None => fresh_name(network, "E", reaction_id, &mut renamed),
    };
    let complex_wanted = format!("{enzyme}{substrate}");
    let complex = if network.has_species(&complex_wanted) || complex_wanted == enzyme {
        fresh_name(network, &complex_wanted, reaction_id, &mut renamed)
    } else {
        complex_wanted
    };
    if complex == enzyme {
        return Err(TemplateError::Naming(complex));
    }

    let mut cat_products = vec![Term::one(&enzyme)];
    cat_products.extend(reaction.products.iter().cloned());
    let introduced_reactions = vec![
        Reaction::new(
            format!("{reaction_id}_bind"),
            vec![Term::one(&enzyme), Term::one(substrate)],
            vec![Term::one(&complex)],
            RateLaw::mass_action(d.k1),
        ),
        Reaction::new(
            format!("{reaction_id}_unbind"),
            vec![Term::one(&complex)],
            vec![Term::one(&enzyme), Term::one(substrate)],
            RateLaw::mass_action(d.k2),
        ),
        Reaction::new(format!("{reaction_id}_cat"), vec![Term::one(&complex)], cat_products, RateLaw::mass_action(d.k3)),
    ];

    let s0 = network.species_index(substrate).map(|i| network.species[i].initial).unwrap_or(0);
    let km_back = (d.k2 + d.k3) / d.k1;
    let assumptions = vec![
        AssumptionCheck::new("rho_above_one", true, format!("rho = {rho}")),
        AssumptionCheck::new("km_identity", ((km_back - km) / km).abs() <= 1e-12, format!("(k2+k3)/k1 = {km_back}, Km = {km}")),
        AssumptionCheck::new(
            "vmax_identity",
            ((d.k3 * d.etot - vmax) / vmax).abs() <= 1e-12,
            format!("k3·Etot = {}, vmax = {vmax}", d.k3 * d.etot),
        ),
        AssumptionCheck::new(
            "substrate_exceeds_enzyme",
            etot < s0,
            if etot < s0 {
                format!("Etot = {etot} < initial {substrate} = {s0}")
            } else {
                format!("Etot = {etot} >= initial {substrate} = {s0}; quasi-steady state may fail")
            },
        ),
    ];

    let mut derived = BTreeMap::new();
    derived.insert("k1".into(), d.k1);
    derived.insert("k2".into(), d.k2);
    derived.insert("k3".into(), d.k3);
    derived.insert("Etot".into(), etot as f64);
    derived.insert("rho".into(), rho);
    derived.insert("vmax".into(), *vmax);
    derived.insert("Km".into(), *km);

    Ok(TemplateExpansion {
        replaced_reaction: reaction_id.to_string(),
        template: TemplateKind::MichaelisMenten,
        derived,
        introduced_species: vec![Species::new(&enzyme, etot), Species::new(&complex, 0)],
        introduced_reactions,
        conservations: vec![Conservation::new(vec![Term::one(&enzyme), Term::one(&complex)], etot)],
        assumptions,
        renamed,
    })
}

pub fn unpack_mm(
    network: &ReactionNetwork,
    reaction_id: &str,
    etot: u64,
    rho: f64,
    enzyme_name: Option<&str>,
) -> Result<(ReactionNetwork, TemplateExpansion), TemplateError> {
    let expansion = expand_mm(network, reaction_id, etot, rho, enzyme_name)?;
    let (out, _) = compose(network, &[], std::slice::from_ref(&expansion))?;
    Ok((out, expansion))
}

/// Species names used by the Hill template.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HillNames {
    pub dimer: Option<String>,
    pub gene: Option<String>,
    pub complex: Option<String>,
}

/// Builds the sequential-binding substitution record for a Hill reaction.
///
/// `k1_dissociation`, `s1` and `s2` fix the split of `J²`; `J`, `n` and `kms`
/// come from the reaction's rate law. An existing gene species is reused and
/// its initial count becomes the promoter total.
pub fn expand_hill(
    network: &ReactionNetwork,
    reaction_id: &str,
    k1_dissociation: f64,
    s1: f64,
    s2: f64,
    names: &HillNames,
) -> Result<TemplateExpansion, TemplateError> {
    let reaction = lookup(network, reaction_id)?;
    let RateLaw::Hill { kms, j, n, regulator } = &reaction.law else {
        return Err(TemplateError::WrongType { reaction: reaction_id.to_string(), reason: "rate law is not Hill".into() });
    };
    if *n != 2 {
        return Err(TemplateError::UnsupportedOrder(*n));
    }
    let d = derive_hill_params(*j, k1_dissociation, s1, s2)?;
    expand_hill_with(network, reaction, *kms, *j, regulator, d, names)
}

/// Same as [`expand_hill`] with explicit rate constants.
pub fn expand_hill_rates(
    network: &ReactionNetwork,
    reaction_id: &str,
    derivation: HillDerivation,
    names: &HillNames,
) -> Result<TemplateExpansion, TemplateError> {
    let reaction = lookup(network, reaction_id)?;
    let RateLaw::Hill { kms, j, n, regulator } = &reaction.law else {
        return Err(TemplateError::WrongType { reaction: reaction_id.to_string(), reason: "rate law is not Hill".into() });
    };
    if *n != 2 {
        return Err(TemplateError::UnsupportedOrder(*n));
    }
    expand_hill_with(network, reaction, *kms, *j, regulator, derivation, names)
}

fn expand_hill_with(
    network: &ReactionNetwork,
    reaction: &Reaction,
    kms: f64,
    law_j: f64,
    regulator: &str,
    d: HillDerivation,
    names: &HillNames,
) -> Result<TemplateExpansion, TemplateError> {
    let rid = reaction.id.as_str();
    if reaction.reactants.len() != 1 || reaction.reactants[0].coeff != 1 || reaction.reactants[0].species != regulator {
        return Err(TemplateError::WrongType {
            reaction: rid.to_string(),
            reason: format!("expected `{regulator}` as the single (catalytic) reactant"),
        });
    }
    let mut outputs = reaction.products.clone();
    let Some(pos) = outputs.iter().position(|t| t.species == regulator) else {
        return Err(TemplateError::WrongType {
            reaction: rid.to_string(),
            reason: format!("regulator `{regulator}` must be returned among the products"),
        });
    };
    if outputs[pos].coeff == 1 {
        outputs.remove(pos);
    } else {
        outputs[pos].coeff -= 1;
    }

    let mut renamed = Vec::new();
    let pick = |explicit: &Option<String>, default: String, renamed: &mut Vec<String>| -> Result<String, TemplateError> {
        match explicit {
            Some(name) if network.has_species(name) => Err(TemplateError::Naming(name.clone())),
            Some(name) => Ok(name.clone()),
            None => Ok(fresh_name(network, &default, rid, renamed)),
        }
    };
    let dimer = pick(&names.dimer, format!("{regulator}2"), &mut renamed)?;
    let gene = names.gene.clone().unwrap_or_else(|| "G".to_string());
    let complex = pick(&names.complex, format!("{gene}{dimer}"), &mut renamed)?;
    if dimer == complex || gene == dimer || gene == complex || gene == regulator {
        return Err(TemplateError::Naming(complex));
    }

    let mut introduced_species = vec![Species::new(&dimer, 0)];
    let gene_total = match network.species_index(&gene) {
        Some(i) => network.species[i].initial,
        None => {
            introduced_species.push(Species::new(&gene, 1));
            1
        }
    };
    if gene_total == 0 {
        return Err(TemplateError::Domain(format!("gene `{gene}` has no copies")));
    }
    introduced_species.push(Species::new(&complex, 0));

    let synth = kms / gene_total as f64;
    let mut express_products = vec![Term::one(&complex)];
    express_products.extend(outputs);
    let introduced_reactions = vec![
        // c = 2·k1 gives propensity k1·TF·(TF−1), the stochastic form of k1·TF².
        Reaction::new(
            format!("{rid}_dimerize"),
            vec![Term::new(regulator, 2)],
            vec![Term::one(&dimer)],
            RateLaw::mass_action(2.0 * d.k1),
        ),
        Reaction::new(
            format!("{rid}_undimerize"),
            vec![Term::one(&dimer)],
            vec![Term::new(regulator, 2)],
            RateLaw::mass_action(d.k2),
        ),
        Reaction::new(
            format!("{rid}_bind"),
            vec![Term::one(&dimer), Term::one(&gene)],
            vec![Term::one(&complex)],
            RateLaw::mass_action(d.k3),
        ),
        Reaction::new(
            format!("{rid}_unbind"),
            vec![Term::one(&complex)],
            vec![Term::one(&dimer), Term::one(&gene)],
            RateLaw::mass_action(d.k4),
        ),
        Reaction::new(format!("{rid}_express"), vec![Term::one(&complex)], express_products, RateLaw::mass_action(synth)),
    ];

    let j2 = d.j_squared();
    let assumptions = vec![
        AssumptionCheck::new(
            "j_identity",
            ((j2 - law_j * law_j) / (law_j * law_j)).abs() <= 1e-12,
            format!("(k2·k4)/(k1·k3) = {j2}, J² = {}", law_j * law_j),
        ),
        AssumptionCheck::new(
            "positive_cooperativity",
            d.positive_cooperativity,
            format!("K1 = {}, K2 = {}; need K1 >= {COOPERATIVITY_RATIO}·K2", d.k1_dissociation, d.k2_dissociation),
        ),
    ];

    let mut derived = BTreeMap::new();
    for (k, v) in [
        ("k1", d.k1),
        ("k2", d.k2),
        ("k3", d.k3),
        ("k4", d.k4),
        ("K1", d.k1_dissociation),
        ("K2", d.k2_dissociation),
        ("J", law_j),
        ("kms", kms),
        ("G_tot", gene_total as f64),
    ] {
        derived.insert(k.to_string(), v);
    }

    Ok(TemplateExpansion {
        replaced_reaction: rid.to_string(),
        template: TemplateKind::Hill,
        derived,
        introduced_species,
        introduced_reactions,
        conservations: vec![Conservation::new(vec![Term::one(&gene), Term::one(&complex)], gene_total)],
        assumptions,
        renamed,
    })
}

pub fn unpack_hill(
    network: &ReactionNetwork,
    reaction_id: &str,
    k1_dissociation: f64,
    s1: f64,
    s2: f64,
    names: &HillNames,
) -> Result<(ReactionNetwork, TemplateExpansion), TemplateError> {
    let expansion = expand_hill(network, reaction_id, k1_dissociation, s1, s2, names)?;
    let (out, _) = compose(network, &[], std::slice::from_ref(&expansion))?;
    Ok((out, expansion))
}

/// Non-fatal observations made while composing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionWarning {
    pub species: String,
    pub message: String,
}

/// Merges `parts` into `base` by species name, then applies each substitution.
///
/// Shared species keep the first initial count seen (base first). Parameters
/// must agree. Reactions with the same id must be identical.
pub fn compose(
    base: &ReactionNetwork,
    parts: &[ReactionNetwork],
    substitutions: &[TemplateExpansion],
) -> Result<(ReactionNetwork, Vec<CompositionWarning>), TemplateError> {
    let mut out = base.clone();
    let mut warnings = Vec::new();

    for part in parts {
        merge_species(&mut out, &part.species, &mut warnings);
        for (k, v) in &part.parameters {
            match out.parameters.get(k) {
                Some(existing) if existing != v => {
                    return Err(TemplateError::Composition(format!(
                        "parameter `{k}` is {existing} in one module and {v} in another"
                    )))
                }
                Some(_) => {}
                None => {
                    out.parameters.insert(k.clone(), *v);
                }
            }
        }
        for r in &part.reactions {
            match out.reactions.iter().find(|x| x.id == r.id) {
                Some(existing) if existing != r => {
                    return Err(TemplateError::Composition(format!("reaction `{}` differs between modules", r.id)))
                }
                Some(_) => {}
                None => out.reactions.push(r.clone()),
            }
        }
        for c in &part.conservations {
            if !out.conservations.contains(c) {
                out.conservations.push(c.clone());
            }
        }
    }

    for sub in substitutions {
        let pos = out
            .reactions
            .iter()
            .position(|r| r.id == sub.replaced_reaction)
            .ok_or_else(|| TemplateError::MissingReaction(sub.replaced_reaction.clone()))?;
        out.reactions.remove(pos);
        merge_species(&mut out, &sub.introduced_species, &mut warnings);
        for r in &sub.introduced_reactions {
            if out.reactions.iter().any(|x| x.id == r.id) {
                return Err(TemplateError::Composition(format!("introduced reaction `{}` already exists", r.id)));
            }
        }
        // introduced reactions take the replaced reaction's slot
        for (k, r) in sub.introduced_reactions.iter().enumerate() {
            out.reactions.insert(pos + k, r.clone());
        }
        for c in &sub.conservations {
            if !out.conservations.contains(c) {
                out.conservations.push(c.clone());
            }
        }
    }

    let violations: Vec<String> = out
        .validate()
        .findings
        .into_iter()
        .filter(|f| f.kind == FindingKind::ConservationViolated)
        .map(|f| f.to_string())
        .collect();
    if !violations.is_empty() {
        return Err(TemplateError::Composition(violations.join("; ")));
    }
    Ok((out, warnings))
}

fn merge_species(out: &mut ReactionNetwork, species: &[Species], warnings: &mut Vec<CompositionWarning>) {
    for s in species {
        match out.species.iter().find(|x| x.name == s.name) {
            Some(existing) if existing.initial != s.initial => warnings.push(CompositionWarning {
                species: s.name.clone(),
                message: format!("initial count {} kept, {} ignored", existing.initial, s.initial),
            }),
            Some(_) => {}
            None => out.species.push(s.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ALPHA: f64 = 0.00167;

    fn packed_mm(s0: u64) -> ReactionNetwork {
        let mut n = ReactionNetwork::new("mm");
        n.add_species("S", s0).unwrap();
        n.add_species("P", 0).unwrap();
        n.add_reaction(Reaction::new(
            "r1",
            vec![Term::one("S")],
            vec![Term::one("P")],
            RateLaw::MichaelisMenten { vmax: 60.0, km: 300.0, substrate: "S".into() },
        ))
        .unwrap();
        n
    }

    fn packed_hill(n: u32) -> ReactionNetwork {
        let mut net = ReactionNetwork::new("hill");
        net.add_species("TF", 599).unwrap();
        net.add_species("M", 0).unwrap();
        net.add_reaction(Reaction::new(
            "tx",
            vec![Term::one("TF")],
            vec![Term::one("TF"), Term::one("M")],
            RateLaw::Hill { kms: 1.0, j: 599.0, n, regulator: "TF".into() },
        ))
        .unwrap();
        net
    }

    #[test]
    fn table_three_constants() {
        let d = derive_mm_params(60.0, 300.0, 60.0, 100.0).unwrap();
        assert_eq!(d.k3, 1.0);
        assert_eq!(d.k2, 99.0);
        assert!((d.k1 - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.k1 - 200.0 * ALPHA).abs() < 1e-3);
    }

    #[test]
    fn unit_inputs() {
        let d = derive_mm_params(1.0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!((d.k1, d.k2, d.k3), (2.0, 1.0, 1.0));
    }

    #[test]
    fn text_heuristic_rho() {
        let d = derive_mm_params(60.0, 300.0, 60.0, 1000.0).unwrap();
        assert!((d.k1 - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(d.k2, 999.0);
        assert_eq!(d.k3, 1.0);
    }

    #[test]
    fn rho_at_or_below_one_is_rejected() {
        assert!(matches!(derive_mm_params(60.0, 300.0, 60.0, 1.0), Err(TemplateError::Assumption(_))));
        assert!(matches!(derive_mm_params(60.0, 300.0, 60.0, 0.5), Err(TemplateError::Assumption(_))));
        assert!(matches!(derive_mm_params(0.0, 300.0, 60.0, 5.0), Err(TemplateError::Domain(_))));
    }

    #[test]
    fn enzyme_total_selection() {
        assert_eq!(select_enzyme_total(599, 0.1).unwrap(), 60);
        assert_eq!(select_enzyme_total(10, 0.1).unwrap(), 1);
        assert_eq!(select_enzyme_total(1000, 0.05).unwrap(), 50);
        assert_eq!(select_enzyme_total(3, 0.1).unwrap(), 1);
        assert!(matches!(select_enzyme_total(100, 1.0), Err(TemplateError::Assumption(_))));
    }

    #[test]
    fn mm_unpacking_builds_three_reactions() {
        let (net, exp) = unpack_mm(&packed_mm(599), "r1", 60, 100.0, None).unwrap();
        assert_eq!(net.reactions.len(), 3);
        assert!(net.reaction_index("r1").is_none());
        assert_eq!(net.species_names(), vec!["S", "P", "E", "ES"]);
        let ks: Vec<f64> = net
            .reactions
            .iter()
            .map(|r| match r.law {
                RateLaw::MassAction { rate } => rate,
                _ => panic!("not elementary"),
            })
            .collect();
        assert!((ks[0] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(&ks[1..], &[99.0, 1.0]);
        assert_eq!(net.conservations[0].to_string(), "E + ES = 60");
        assert!(exp.all_assumptions_hold());
        assert!(net.validate().is_clean());
        assert!(exp.introduced_reactions.iter().all(|r| r.law.is_mass_action()));
    }

    #[test]
    fn enzyme_excess_is_flagged_not_refused() {
        let (_, exp) = unpack_mm(&packed_mm(60), "r1", 600, 100.0, None).unwrap();
        let check = exp.assumptions.iter().find(|a| a.name == "substrate_exceeds_enzyme").unwrap();
        assert!(!check.passed);
    }

    #[test]
    fn mm_errors() {
        let net = packed_mm(10);
        assert!(matches!(unpack_mm(&net, "r9", 1, 10.0, None), Err(TemplateError::MissingReaction(_))));
        assert!(matches!(unpack_mm(&net, "r1", 1, 10.0, Some("S")), Err(TemplateError::Naming(_))));
        let hill = packed_hill(2);
        assert!(matches!(unpack_mm(&hill, "tx", 1, 10.0, None), Err(TemplateError::WrongType { .. })));
    }

    #[test]
    fn default_name_collisions_get_suffixed() {
        let mut net = packed_mm(100);
        net.add_species("E", 3).unwrap();
        let (out, exp) = unpack_mm(&net, "r1", 5, 10.0, None).unwrap();
        assert!(out.has_species("E_r1"));
        assert!(out.has_species("E_r1S"));
        assert_eq!(exp.renamed, vec!["E -> E_r1".to_string()]);
    }

    #[test]
    fn table_five_set_two() {
        let d = derive_hill_params(1.0 / ALPHA, 100.0 / ALPHA, ALPHA, 1000.0 * ALPHA).unwrap();
        assert!((d.k1 - ALPHA).abs() < 1e-18);
        assert!((d.k2 - 100.0).abs() < 1e-12);
        assert!((d.k3 - 1000.0 * ALPHA).abs() < 1e-15);
        assert!((d.k4 - 10.0).abs() < 1e-12);
        assert!((d.k1_dissociation / d.k2_dissociation - 1e4).abs() < 1e-6);
        assert!(d.positive_cooperativity);
        assert!((d.j - 598.8).abs() < 0.1);
    }

    #[test]
    fn table_five_set_six_fails_cooperativity() {
        let d = derive_hill_params(1.0 / ALPHA, 0.01 / ALPHA, ALPHA, 10.0 * ALPHA).unwrap();
        assert!((d.k4 - 1000.0).abs() < 1e-9);
        assert!(!d.positive_cooperativity);
    }

    #[test]
    fn hill_identity_unit_speeds() {
        let j = 599.0;
        let d = derive_hill_params(j, j, 1.0, 1.0).unwrap();
        assert_eq!(d.j_squared(), j * j);
    }

    #[test]
    fn hill_unpacking_matches_sequential_scheme() {
        let (net, exp) = unpack_hill(&packed_hill(2), "tx", 100.0 / ALPHA, ALPHA, 1000.0 * ALPHA, &HillNames::default()).unwrap();
        assert_eq!(net.species_names(), vec!["TF", "M", "TF2", "G", "GTF2"]);
        let ids: Vec<&str> = net.reactions.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, vec!["tx_dimerize", "tx_undimerize", "tx_bind", "tx_unbind", "tx_express"]);
        assert_eq!(net.reactions[0].reactants, vec![Term::new("TF", 2)]);
        assert_eq!(net.reactions[4].products, vec![Term::one("GTF2"), Term::one("M")]);
        assert_eq!(net.conservations[0].to_string(), "G + GTF2 = 1");
        assert!(exp.all_assumptions_hold());
        assert!(net.validate().is_clean());
    }

    #[test]
    fn hill_of_order_three_is_unsupported() {
        let err = unpack_hill(&packed_hill(3), "tx", 1.0, 1.0, 1.0, &HillNames::default()).unwrap_err();
        assert_eq!(err, TemplateError::UnsupportedOrder(3));
    }

    #[test]
    fn compose_identity() {
        let base = packed_mm(10);
        let (out, warnings) = compose(&base, &[], &[]).unwrap();
        assert_eq!(out, base);
        assert!(warnings.is_empty());
    }

    #[test]
    fn compose_shared_species() {
        let mut a = ReactionNetwork::new("a");
        a.add_species("M", 5).unwrap();
        a.add_reaction(Reaction::new("deg", vec![Term::one("M")], vec![], RateLaw::mass_action(0.1))).unwrap();
        let mut b = ReactionNetwork::new("b");
        b.add_species("M", 5).unwrap();
        b.add_species("P", 0).unwrap();
        b.add_reaction(Reaction::new(
            "tl",
            vec![Term::one("M")],
            vec![Term::one("M"), Term::one("P")],
            RateLaw::mass_action(1.0),
        ))
        .unwrap();
        let (out, warnings) = compose(&a, &[b.clone()], &[]).unwrap();
        assert_eq!(out.species.len(), 2);
        assert!(warnings.is_empty());

        b.species[0].initial = 7;
        let (out, warnings) = compose(&a, &[b], &[]).unwrap();
        assert_eq!(out.species[0].initial, 5);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn compose_rejects_conflicting_parameters_and_dangling_targets() {
        let mut a = packed_mm(10);
        a.parameters.insert("vmax".into(), 60.0);
        let mut b = ReactionNetwork::new("b");
        b.parameters.insert("vmax".into(), 61.0);
        assert!(matches!(compose(&a, &[b], &[]), Err(TemplateError::Composition(_))));

        let exp = expand_mm(&a, "r1", 1, 10.0, None).unwrap();
        let mut other = a.clone();
        other.reactions.clear();
        assert!(matches!(compose(&other, &[], &[exp]), Err(TemplateError::MissingReaction(_))));
    }

    #[test]
    fn expansion_json_has_report_fields() {
        let exp = expand_mm(&packed_mm(599), "r1", 60, 100.0, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&exp.to_json()).unwrap();
        assert_eq!(v["replaced_reaction"], "r1");
        assert_eq!(v["derived"]["k2"], 99.0);
        assert_eq!(v["assumptions"][1]["name"], "km_identity");
        assert_eq!(v["assumptions"][1]["passed"], true);
    }

    proptest! {
        #[test]
        fn mm_identities(vmax in 1e-3f64..1e4, km in 1e-2f64..1e5, etot in 1.0f64..1e4, rho in 1.001f64..1e4) {
            let d = derive_mm_params(vmax, km, etot, rho).unwrap();
            prop_assert!(((km * d.k1 - d.k3) - d.k2).abs() <= 1e-9 * d.k2.max(d.k3));
            prop_assert!((d.k3 * etot - vmax).abs() <= 1e-12 * vmax);
            prop_assert!(d.k2 > 0.0);
        }

        #[test]
        fn hill_identity(j in 1.0f64..1e6, k1d in 1e-3f64..1e8, s1 in 1e-6f64..1e3, s2 in 1e-6f64..1e3) {
            let d = derive_hill_params(j, k1d, s1, s2).unwrap();
            prop_assert!(((d.j_squared() - j * j) / (j * j)).abs() <= 8.0 * f64::EPSILON);
        }

        #[test]
        fn compose_associative_over_disjoint_parts(nb in 1usize..4, nc in 1usize..4) {
            let base = packed_mm(10);
            let part = |prefix: &str, n: usize| {
                let mut p = ReactionNetwork::new(prefix);
                for i in 0..n {
                    p.add_species(format!("{prefix}{i}"), i as u64).unwrap();
                    p.add_reaction(Reaction::new(format!("{prefix}r{i}"), vec![Term::one(format!("{prefix}{i}"))], vec![], RateLaw::mass_action(1.0))).unwrap();
                }
                p
            };
            let (b, c) = (part("B", nb), part("C", nc));
            let (both, _) = compose(&base, &[b.clone(), c.clone()], &[]).unwrap();
            let (step, _) = compose(&base, &[b], &[]).unwrap();
            let (step, _) = compose(&step, &[c], &[]).unwrap();
            prop_assert_eq!(both, step);
        }
    }
}

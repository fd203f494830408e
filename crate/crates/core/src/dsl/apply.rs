use std::collections::BTreeMap;

use crate::network::{Conservation, RateLaw, Reaction, ReactionNetwork};
use crate::templates::{compose, expand_hill, expand_mm, CompositionWarning, HillNames, TemplateExpansion};

use super::{Arg, Directive, DslError, Expr, LawSpec, ModelDocument, ReactionStmt};

/// Result of executing a document's directives.
#[derive(Debug, Clone, PartialEq)]
pub struct Applied {
    pub network: ReactionNetwork,
    pub expansions: Vec<TemplateExpansion>,
    pub warnings: Vec<CompositionWarning>,
}

struct Scope<'a> {
    alpha: Option<f64>,
    params: &'a BTreeMap<String, f64>,
}

impl Scope<'_> {
    fn expr(&self, e: &Expr) -> Result<f64, DslError> {
        let alpha =
            || self.alpha.ok_or_else(|| DslError::Resolution("an alpha-scaled value: the model declares no alpha".into()));
        Ok(match *e {
            Expr::Number(v) => v,
            Expr::TimesAlpha(v) => v * alpha()?,
            Expr::PerAlpha(v) => v / alpha()?,
        })
    }

    fn arg(&self, a: &Arg) -> Result<f64, DslError> {
        match a {
            Arg::Param(p) => self.params.get(p).copied().ok_or_else(|| DslError::Resolution(format!("parameter `{p}`"))),
            Arg::Value(e) => self.expr(e),
        }
    }

    fn count(&self, a: &Arg, what: &str) -> Result<u64, DslError> {
        let v = self.arg(a)?;
        if !(v >= 0.0) || v.fract() != 0.0 || v > u64::MAX as f64 {
            return Err(DslError::Resolution(format!("{what} = {v}: expected a non-negative whole number")));
        }
        Ok(v as u64)
    }
}

fn single_reactant(r: &ReactionStmt, law: &str) -> Result<String, DslError> {
    match r.reactants.as_slice() {
        [t] if t.coeff == 1 => Ok(t.species.clone()),
        _ => Err(DslError::Invalid(format!("reaction `{}`: a {law} law needs exactly one reactant with coefficient 1", r.id))),
    }
}

/// The network as written, before any unpack directive runs.
pub fn base_network(doc: &ModelDocument) -> Result<ReactionNetwork, DslError> {
    let mut params = BTreeMap::new();
    for p in &doc.params {
        let v = Scope { alpha: doc.alpha, params: &params }.expr(&p.value)?;
        params.insert(p.name.clone(), v);
    }
    let scope = Scope { alpha: doc.alpha, params: &params };

    let mut net = ReactionNetwork::new(&doc.name);
    for s in &doc.species {
        net.add_species(&s.name, s.initial)?;
    }
    for r in &doc.reactions {
        let law = match &r.law {
            LawSpec::MassAction(c) => RateLaw::mass_action(scope.arg(c)?),
            LawSpec::MichaelisMenten { vmax, km } => RateLaw::MichaelisMenten {
                vmax: scope.arg(vmax)?,
                km: scope.arg(km)?,
                substrate: single_reactant(r, "Michaelis-Menten")?,
            },
            LawSpec::Hill { kms, j, n } => {
                let n = scope.count(n, "Hill order")?;
                if n == 0 || n > u64::from(u32::MAX) {
                    return Err(DslError::Resolution(format!("Hill order {n} in reaction `{}`", r.id)));
                }
                RateLaw::Hill { kms: scope.arg(kms)?, j: scope.arg(j)?, n: n as u32, regulator: single_reactant(r, "Hill")? }
            }
            LawSpec::Immediate => RateLaw::Immediate,
        };
        net.add_reaction(Reaction::new(&r.id, r.reactants.clone(), r.products.clone(), law))?;
    }
    net.parameters = params;
    Ok(net)
}

/// Builds the base network, runs every unpack directive in order and registers
/// conservation laws. The result must validate cleanly.
pub fn apply_directives_report(doc: &ModelDocument) -> Result<Applied, DslError> {
    let mut net = base_network(doc)?;
    let params = net.parameters.clone();
    let scope = Scope { alpha: doc.alpha, params: &params };
    let mut expansions = Vec::new();
    let mut warnings = Vec::new();
    let mut conservations = Vec::new();

    for d in &doc.directives {
        let expansion = match d {
            Directive::UnpackMm { reaction, etot, rho, enzyme } => {
                if net.reaction_index(reaction).is_none() {
                    return Err(DslError::MissingReaction(reaction.clone()));
                }
                expand_mm(&net, reaction, scope.count(etot, "Etot")?, scope.arg(rho)?, enzyme.as_deref())?
            }
            Directive::UnpackHill { reaction, k1, s1, s2, gene, dimer, complex } => {
                if net.reaction_index(reaction).is_none() {
                    return Err(DslError::MissingReaction(reaction.clone()));
                }
                let names = HillNames { dimer: dimer.clone(), gene: gene.clone(), complex: complex.clone() };
                expand_hill(&net, reaction, scope.arg(k1)?, scope.arg(s1)?, scope.arg(s2)?, &names)?
            }
            Directive::Conserve { terms, total } => {
                conservations.push(Conservation::new(terms.clone(), scope.count(total, "conserved total")?));
                continue;
            }
        };
        let (next, w) = compose(&net, &[], std::slice::from_ref(&expansion))?;
        net = next;
        warnings.extend(w);
        expansions.push(expansion);
    }
    for c in conservations {
        if !net.conservations.contains(&c) {
            net.conservations.push(c);
        }
    }

    let report = net.validate();
    if !report.is_clean() {
        let msg: Vec<String> = report.findings.iter().map(ToString::to_string).collect();
        return Err(DslError::Invalid(msg.join("; ")));
    }
    if let Some(c) = net.conservations.iter().find(|c| net.reactions.iter().any(|r| !c.preserved_by(r))) {
        return Err(DslError::Invalid(format!("`{c}` is not preserved by every reaction")));
    }
    Ok(Applied { network: net, expansions, warnings })
}

pub fn apply_directives(doc: &ModelDocument) -> Result<ReactionNetwork, DslError> {
    apply_directives_report(doc).map(|a| a.network)
}

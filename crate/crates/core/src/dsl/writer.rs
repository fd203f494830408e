use std::fmt::Write as _;

use crate::network::{RateLaw, ReactionNetwork, Term};

use super::{Arg, Directive, Expr, LawSpec, ModelDocument, ParamDecl, ReactionStmt, SpeciesDecl};

/// Shortest text that parses back to the same `f64`.
fn number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

fn expr(e: &Expr) -> String {
    match e {
        Expr::Number(v) => number(*v),
        Expr::TimesAlpha(v) => format!("{}*alpha", number(*v)),
        Expr::PerAlpha(v) => format!("{}/alpha", number(*v)),
    }
}

fn arg(a: &Arg) -> String {
    match a {
        Arg::Param(p) => p.clone(),
        Arg::Value(e) => expr(e),
    }
}

fn terms(ts: &[Term]) -> String {
    if ts.is_empty() {
        return "0".into();
    }
    ts.iter()
        .map(|t| if t.coeff == 1 { t.species.clone() } else { format!("{}*{}", t.coeff, t.species) })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn law(l: &LawSpec) -> String {
    match l {
        LawSpec::MassAction(c) => format!("ma({})", arg(c)),
        LawSpec::MichaelisMenten { vmax, km } => format!("mm({}, {})", arg(vmax), arg(km)),
        LawSpec::Hill { kms, j, n } => format!("hill({}, {}, {})", arg(kms), arg(j), arg(n)),
        LawSpec::Immediate => "inf".into(),
    }
}

/// Canonical text: header, alpha, species, parameters, reactions, directives; LF endings.
pub fn serialize_model(doc: &ModelDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {}", doc.name);
    if let Some(a) = doc.alpha {
        let _ = writeln!(out, "alpha = {}", number(a));
    }
    let sections: [Vec<String>; 4] = [
        doc.species.iter().map(|s| format!("species {} = {}", s.name, s.initial)).collect(),
        doc.params.iter().map(|p| format!("param {} = {}", p.name, expr(&p.value))).collect(),
        doc.reactions
            .iter()
            .map(|r| format!("reaction {}: {} -> {} @ {}", r.id, terms(&r.reactants), terms(&r.products), law(&r.law)))
            .collect(),
        doc.directives.iter().map(directive).collect(),
    ];
    for lines in sections.iter().filter(|l| !l.is_empty()) {
        out.push('\n');
        for l in lines {
            out.push_str(l);
            out.push('\n');
        }
    }
    out
}

fn directive(d: &Directive) -> String {
    let named = |key: &str, v: &Option<String>| v.as_ref().map(|n| format!(", {key}={n}")).unwrap_or_default();
    match d {
        Directive::UnpackMm { reaction, etot, rho, enzyme } => {
            format!("unpack {reaction} mm(Etot={}, rho={}{})", arg(etot), arg(rho), named("enzyme", enzyme))
        }
        Directive::UnpackHill { reaction, k1, s1, s2, gene, dimer, complex } => format!(
            "unpack {reaction} hill(K1={}, s1={}, s2={}{}{}{})",
            arg(k1),
            arg(s1),
            arg(s2),
            named("gene", gene),
            named("dimer", dimer),
            named("complex", complex)
        ),
        Directive::Conserve { terms: ts, total } => format!("conserve {} = {}", terms(ts), arg(total)),
    }
}

/// Literal document for an already-built network: every constant inline, no directives
/// except the network's conservation laws.
pub fn document_from_network(network: &ReactionNetwork) -> ModelDocument {
    let value = |v: f64| Arg::number(v);
    ModelDocument {
        name: network.name.clone(),
        alpha: None,
        species: network.species.iter().map(|s| SpeciesDecl { name: s.name.clone(), initial: s.initial }).collect(),
        params: network.parameters.iter().map(|(k, v)| ParamDecl { name: k.clone(), value: Expr::Number(*v) }).collect(),
        reactions: network
            .reactions
            .iter()
            .map(|r| ReactionStmt {
                id: r.id.clone(),
                reactants: r.reactants.clone(),
                products: r.products.clone(),
                law: match &r.law {
                    RateLaw::MassAction { rate } => LawSpec::MassAction(value(*rate)),
                    RateLaw::MichaelisMenten { vmax, km, .. } => LawSpec::MichaelisMenten { vmax: value(*vmax), km: value(*km) },
                    RateLaw::Hill { kms, j, n, .. } => LawSpec::Hill { kms: value(*kms), j: value(*j), n: value(f64::from(*n)) },
                    RateLaw::Immediate => LawSpec::Immediate,
                },
            })
            .collect(),
        directives: network
            .conservations
            .iter()
            .map(|c| Directive::Conserve { terms: c.terms.clone(), total: value(c.total as f64) })
            .collect(),
    }
}

//! The line-oriented `.rxn` model format.
//!
//! ```text
//! model mm
//! alpha = 0.00167
//! species S = 599
//! species P = 0
//! param vmax = 0.1/alpha
//! param Km = 0.5/alpha
//! reaction r1: S -> P @ mm(vmax, Km)
//! unpack r1 mm(Etot=60, rho=100)
//! ```
//!
//! Rate laws are `ma(c)`, `mm(vmax, Km)`, `hill(kms, J, n)` and `inf` (an
//! immediate unimolecular step). Arguments are parameter names or numbers,
//! optionally scaled by the document's `alpha` (`200*alpha`, `0.5/alpha`).
//! An empty side of a reaction is written `0`.

mod apply;
mod lexer;
mod parser;
pub mod random;
mod writer;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{NetworkError, Term};
use crate::templates::TemplateError;

pub use apply::{apply_directives, apply_directives_report, base_network, Applied};
pub use parser::parse_model;
pub use writer::{document_from_network, serialize_model};

/// A number, optionally scaled by the document-level `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Expr {
    Number(f64),
    /// `v*alpha`: a concentration-scale rate converted to counts.
    TimesAlpha(f64),
    /// `v/alpha`: a concentration converted to counts.
    PerAlpha(f64),
}

/// A rate-law or directive argument.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Arg {
    Param(String),
    Value(Expr),
}

impl Arg {
    pub fn number(v: f64) -> Self {
        Arg::Value(Expr::Number(v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesDecl {
    pub name: String,
    pub initial: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamDecl {
    pub name: String,
    pub value: Expr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LawSpec {
    MassAction(Arg),
    MichaelisMenten { vmax: Arg, km: Arg },
    Hill { kms: Arg, j: Arg, n: Arg },
    Immediate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReactionStmt {
    pub id: String,
    pub reactants: Vec<Term>,
    pub products: Vec<Term>,
    pub law: LawSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Directive {
    UnpackMm {
        reaction: String,
        etot: Arg,
        rho: Arg,
        enzyme: Option<String>,
    },
    UnpackHill {
        reaction: String,
        k1: Arg,
        s1: Arg,
        s2: Arg,
        gene: Option<String>,
        dimer: Option<String>,
        complex: Option<String>,
    },
    Conserve {
        terms: Vec<Term>,
        total: Arg,
    },
}

/// Parsed model. Statement order within each kind is preserved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub name: String,
    pub alpha: Option<f64>,
    pub species: Vec<SpeciesDecl>,
    pub params: Vec<ParamDecl>,
    pub reactions: Vec<ReactionStmt>,
    pub directives: Vec<Directive>,
}

impl ModelDocument {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            alpha: None,
            species: Vec::new(),
            params: Vec::new(),
            reactions: Vec::new(),
            directives: Vec::new(),
        }
    }

    pub fn unpack_count(&self) -> usize {
        self.directives.iter().filter(|d| !matches!(d, Directive::Conserve { .. })).count()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: unknown rate law `{name}`")]
    UnknownRateLaw { line: usize, column: usize, name: String },
    #[error("line {line}, column {column}: duplicate {what} `{id}`")]
    Duplicate { line: usize, column: usize, what: &'static str, id: String },
    #[error("directive refers to missing reaction `{0}`")]
    MissingReaction(String),
    #[error("cannot resolve {0}")]
    Resolution(String),
    #[error("resulting network is invalid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

impl DslError {
    /// Line of a parse error, if this is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            DslError::Syntax { line, .. } | DslError::UnknownRateLaw { line, .. } | DslError::Duplicate { line, .. } => {
                Some(*line)
            }
            _ => None,
        }
    }
}

//! Stochastic simulation of biochemical reaction networks with mechanical
//! unpacking of Michaelis-Menten and Hill rate laws into elementary
//! mass-action steps.
//!
//! The crate is organised bottom-up:
//!
//! - [`network`]: species, rate laws, reactions, propensities and validation
//! - [`units`]: concentration/count conversion through the volume factor alpha
//! - [`templates`]: derivation of elementary rate constants, unpacking, composition
//! - [`sim`]: Gillespie direct method, ensembles, reference ODE integration
//! - [`analysis`]: initial rates, binding curves, Hill fits, periods, statistics
//! - [`dsl`]: the line-oriented `.rxn` model format
//! - [`models`]: built-in enzyme, Hill and clock systems
//! - [`reproduce`]: end-to-end comparison runs with embedded tolerances

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dsl;
pub mod models;
pub mod network;
pub mod reproduce;
pub mod sim;
pub mod templates;
pub mod units;

pub use network::{Conservation, RateLaw, Reaction, ReactionNetwork, Species, SystemState, Term};

//! Quantities extracted from trajectories and ensembles.

mod binding;
mod fit;
mod period;
mod rate;
mod stats;

use thiserror::Error;

pub use binding::{binding_fraction, BindingCurvePoint, DEFAULT_BURN_IN};
pub use fit::{
    fit_hill, hill_coeff_from_r, hill_fraction, response_coefficient, response_coefficient_points, rmse_vs_theoretical, HillFit,
};
pub use period::{detect_period, detect_period_series, PeriodConfig, PeriodEstimate};
pub use rate::{initial_rate, initial_rate_ensemble, saturation_curve, RateEstimate, SaturationConfig, SaturationPoint};
pub use stats::{ensemble_stats, mean_and_sem, sample_std, spearman, EnsembleStats};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("curve cannot be fitted: {0}")]
    Unfittable(String),
    #[error("curve does not cover the saturation range: {0}")]
    Range(String),
    #[error("replicates do not share a grid")]
    GridMismatch,
    #[error(transparent)]
    Simulation(#[from] crate::sim::SimError),
}

use serde::{Deserialize, Serialize};

use crate::sim::Ensemble;

use super::AnalysisError;

/// Fraction of leading samples discarded as equilibration.
pub const DEFAULT_BURN_IN: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BindingCurvePoint {
    /// Total transcription factor supplied (before dimerization).
    pub tf_total: f64,
    pub bound_fraction: f64,
}

/// Time- and replicate-averaged `bound/total` after discarding the burn-in.
pub fn binding_fraction(ensemble: &Ensemble, bound: &str, total: u64, burn_in: f64) -> Result<f64, AnalysisError> {
    if total == 0 {
        return Err(AnalysisError::Domain("total must be positive".into()));
    }
    if !(0.0..1.0).contains(&burn_in) {
        return Err(AnalysisError::Domain(format!("burn-in fraction {burn_in} outside [0, 1)")));
    }
    let i = ensemble.species_index(bound).ok_or_else(|| AnalysisError::UnknownSpecies(bound.to_string()))?;
    let samples = ensemble.times.len();
    let start = ((samples as f64) * burn_in).floor() as usize;
    if start >= samples || ensemble.replicates.is_empty() {
        return Err(AnalysisError::InsufficientData("no samples after burn-in".into()));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for rep in &ensemble.replicates {
        for row in &rep.rows[start..] {
            sum += row[i] as f64;
            count += 1;
        }
    }
    Ok(sum / count as f64 / total as f64)
}

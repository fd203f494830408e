use serde::{Deserialize, Serialize};

use crate::sim::Ensemble;

use super::AnalysisError;

/// Pointwise mean and sample standard deviation across replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub species: Vec<String>,
    pub times: Vec<f64>,
    /// `mean[sample][species]`
    pub mean: Vec<Vec<f64>>,
    pub std: Vec<Vec<f64>>,
    pub n: usize,
}

impl EnsembleStats {
    pub fn mean_series(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.species.iter().position(|s| s == name)?;
        Some(self.mean.iter().map(|r| r[i]).collect())
    }

    pub fn std_series(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.species.iter().position(|s| s == name)?;
        Some(self.std.iter().map(|r| r[i]).collect())
    }
}

pub fn ensemble_stats(ensemble: &Ensemble) -> Result<EnsembleStats, AnalysisError> {
    let n = ensemble.replicates.len();
    if n < 2 {
        return Err(AnalysisError::InsufficientData(format!("need at least 2 replicates, got {n}")));
    }
    if ensemble.replicates.iter().any(|r| r.times != ensemble.times) {
        return Err(AnalysisError::GridMismatch);
    }
    let ns = ensemble.species.len();
    let samples = ensemble.times.len();
    let mut mean = vec![vec![0.0; ns]; samples];
    let mut m2 = vec![vec![0.0; ns]; samples];
    // Welford per cell, replicate order fixed
    for (k, rep) in ensemble.replicates.iter().enumerate() {
        let w = (k + 1) as f64;
        for (t, row) in rep.rows.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                let x = c as f64;
                let d = x - mean[t][i];
                mean[t][i] += d / w;
                m2[t][i] += d * (x - mean[t][i]);
            }
        }
    }
    let std = m2.into_iter().map(|row| row.into_iter().map(|v| (v / (n - 1) as f64).max(0.0).sqrt()).collect()).collect();
    Ok(EnsembleStats { species: ensemble.species.clone(), times: ensemble.times.clone(), mean, std, n })
}

pub fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = values.iter().sum::<f64>() / n as f64;
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// Mean and standard error of the mean.
pub fn mean_and_sem(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let m = values.iter().sum::<f64>() / n as f64;
    (m, sample_std(values) / (n as f64).sqrt())
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut r = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation (average ranks for ties).
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{Termination, Trajectory};

    fn ens(reps: Vec<Vec<u64>>) -> Ensemble {
        let times: Vec<f64> = (0..reps[0].len()).map(|t| t as f64).collect();
        Ensemble {
            species: vec!["X".into()],
            times: times.clone(),
            replicates: reps
                .into_iter()
                .map(|r| Trajectory {
                    species: vec!["X".into()],
                    times: times.clone(),
                    rows: r.into_iter().map(|v| vec![v]).collect(),
                    termination: Termination::ReachedEnd,
                    events: 0,
                })
                .collect(),
            fingerprint: String::new(),
            base_seed: 0,
            rng: String::new(),
        }
    }

    #[test]
    fn identical_replicates_have_zero_std() {
        let s = ensemble_stats(&ens(vec![vec![1, 5, 9], vec![1, 5, 9]])).unwrap();
        assert!(s.std.iter().all(|r| r[0] == 0.0));
        assert_eq!(s.mean_series("X").unwrap(), vec![1.0, 5.0, 9.0]);
    }

    #[test]
    fn sample_denominator() {
        let s = ensemble_stats(&ens(vec![vec![0], vec![2]])).unwrap();
        assert!((s.std[0][0] - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn needs_two_and_a_shared_grid() {
        assert!(matches!(ensemble_stats(&ens(vec![vec![1]])), Err(AnalysisError::InsufficientData(_))));
        let mut e = ens(vec![vec![1, 2], vec![1, 2]]);
        e.replicates[1].times[1] = 1.5;
        assert_eq!(ensemble_stats(&e), Err(AnalysisError::GridMismatch));
    }

    #[test]
    fn spearman_monotone() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 25.0]) - 1.0).abs() < 1e-12);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
    }
}

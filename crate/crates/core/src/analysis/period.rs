use serde::{Deserialize, Serialize};

use crate::sim::{Amount, Trajectory};

use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodConfig {
    /// Moving-average width in time units; also the minimum peak separation.
    pub smoothing_window: f64,
    /// Peaks must exceed `mean + threshold_sd·std` of the smoothed series.
    pub threshold_sd: f64,
    /// Leading fraction of the series ignored.
    pub burn_in: f64,
}

impl PeriodConfig {
    pub fn new(smoothing_window: f64) -> Self {
        Self { smoothing_window, threshold_sd: 0.25, burn_in: 0.0 }
    }

    pub fn with_burn_in(mut self, burn_in: f64) -> Self {
        self.burn_in = burn_in;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodEstimate {
    /// False when fewer than two peaks were found; `period` and `amplitude` are then NaN.
    pub oscillating: bool,
    pub period: f64,
    pub amplitude: f64,
    pub n_peaks: usize,
    pub peak_times: Vec<f64>,
    /// Heights of the smoothed series at the peaks.
    pub peak_heights: Vec<f64>,
}

fn moving_average(y: &[f64], half: usize) -> Vec<f64> {
    let mut prefix = Vec::with_capacity(y.len() + 1);
    prefix.push(0.0);
    for v in y {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..y.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(y.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Period and amplitude of a sustained oscillation in one species.
pub fn detect_period<T: Amount>(
    trajectory: &Trajectory<T>,
    species: &str,
    config: &PeriodConfig,
) -> Result<PeriodEstimate, AnalysisError> {
    let raw = trajectory.series(species).ok_or_else(|| AnalysisError::UnknownSpecies(species.to_string()))?;
    detect_period_series(&trajectory.times, &raw, config)
}

/// As [`detect_period`] on bare `(times, values)`; the grid must be uniform.
pub fn detect_period_series(times: &[f64], values: &[f64], config: &PeriodConfig) -> Result<PeriodEstimate, AnalysisError> {
    if times.len() != values.len() {
        return Err(AnalysisError::GridMismatch);
    }
    if !(config.smoothing_window > 0.0) || !(0.0..1.0).contains(&config.burn_in) {
        return Err(AnalysisError::Domain("smoothing window must be positive and burn-in in [0, 1)".into()));
    }
    let start = (times.len() as f64 * config.burn_in).floor() as usize;
    let (times, values) = (&times[start..], &values[start..]);
    if times.len() < 3 {
        return Err(AnalysisError::InsufficientData("need at least 3 samples".into()));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    let width = (config.smoothing_window / dt).round().max(1.0) as usize;
    let smooth = moving_average(values, width / 2);

    let n = smooth.len() as f64;
    let mean = smooth.iter().sum::<f64>() / n;
    let std = (smooth.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    let threshold = mean + config.threshold_sd * std;

    let mut candidates: Vec<usize> = (1..smooth.len() - 1)
        .filter(|&i| smooth[i] > threshold && smooth[i] >= smooth[i - 1] && smooth[i] > smooth[i + 1])
        .collect();
    // tallest first, then suppress anything closer than the window
    candidates.sort_by(|&a, &b| smooth[b].total_cmp(&smooth[a]).then(a.cmp(&b)));
    let mut peaks: Vec<usize> = Vec::new();
    for c in candidates {
        if peaks.iter().all(|&p| (times[p] - times[c]).abs() >= config.smoothing_window) {
            peaks.push(c);
        }
    }
    peaks.sort_unstable();

    let peak_times: Vec<f64> = peaks.iter().map(|&p| times[p]).collect();
    let peak_heights: Vec<f64> = peaks.iter().map(|&p| smooth[p]).collect();
    if peaks.len() < 2 {
        return Ok(PeriodEstimate {
            oscillating: false,
            period: f64::NAN,
            amplitude: f64::NAN,
            n_peaks: peaks.len(),
            peak_times,
            peak_heights,
        });
    }
    let period = (peak_times[peak_times.len() - 1] - peak_times[0]) / (peaks.len() - 1) as f64;
    let amplitude = peaks
        .windows(2)
        .map(|w| {
            let trough = smooth[w[0]..=w[1]].iter().copied().fold(f64::INFINITY, f64::min);
            0.5 * (smooth[w[0]] + smooth[w[1]]) - trough
        })
        .sum::<f64>()
        / (peaks.len() - 1) as f64;
    Ok(PeriodEstimate { oscillating: true, period, amplitude, n_peaks: peaks.len(), peak_times, peak_heights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sampled(f: impl Fn(f64) -> f64, t_end: usize) -> (Vec<f64>, Vec<f64>) {
        let t: Vec<f64> = (0..=t_end).map(|v| v as f64).collect();
        let y = t.iter().map(|&v| f(v)).collect();
        (t, y)
    }

    #[test]
    fn sinusoid_period() {
        let (t, y) = sampled(|t| 100.0 + 50.0 * (2.0 * PI * t / 1440.0).sin(), 1440 * 5);
        let est = detect_period_series(&t, &y, &PeriodConfig::new(60.0)).unwrap();
        assert!(est.oscillating);
        assert_eq!(est.n_peaks, 5);
        assert!((est.period - 1440.0).abs() < 14.4, "{est:?}");
        assert!((est.amplitude - 100.0).abs() < 2.0, "{est:?}");
    }

    #[test]
    fn constant_is_not_oscillating() {
        let (t, y) = sampled(|_| 7.0, 5000);
        let est = detect_period_series(&t, &y, &PeriodConfig::new(60.0)).unwrap();
        assert!(!est.oscillating);
        assert!(est.period.is_nan());
    }

    #[test]
    fn noise_spikes_within_window_are_merged() {
        let (t, y) =
            sampled(|t| 10.0 * (2.0 * PI * t / 100.0).sin() + if (t as u64).is_multiple_of(7) { 0.5 } else { 0.0 }, 1000);
        let est = detect_period_series(&t, &y, &PeriodConfig::new(20.0)).unwrap();
        assert!((est.period - 100.0).abs() < 2.0, "{est:?}");
    }
}

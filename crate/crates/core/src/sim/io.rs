//! CSV and JSON output for trajectories and ensembles.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::analysis::EnsembleStats;

use super::{Amount, Trajectory};

/// Deterministic short decimal rendering: at most 9 decimals, trailing zeros trimmed.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    if v.abs() >= 1e12 || v.abs() < 1e-6 {
        return format!("{v:e}");
    }
    let s = format!("{v:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// `time,<species...>` with one row per sample.
pub fn trajectory_csv<T: Amount>(traj: &Trajectory<T>) -> String {
    let mut out = String::from("time");
    for s in &traj.species {
        out.push(',');
        out.push_str(s);
    }
    out.push('\n');
    for (t, row) in traj.times.iter().zip(&traj.rows) {
        out.push_str(&fmt_num(*t));
        for v in row {
            out.push(',');
            out.push_str(&fmt_num(v.to_f64()));
        }
        out.push('\n');
    }
    out
}

/// `time,<species>_mean,<species>_std` per grid point.
pub fn summary_csv(stats: &EnsembleStats) -> String {
    let mut out = String::from("time");
    for s in &stats.species {
        let _ = write!(out, ",{s}_mean,{s}_std");
    }
    out.push('\n');
    for (k, t) in stats.times.iter().enumerate() {
        out.push_str(&fmt_num(*t));
        for i in 0..stats.species.len() {
            let _ = write!(out, ",{},{}", fmt_num(stats.mean[k][i]), fmt_num(stats.std[k][i]));
        }
        out.push('\n');
    }
    out
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Termination;

    #[test]
    fn numbers_render_compactly() {
        assert_eq!(fmt_num(0.30000000000000004), "0.3");
        assert_eq!(fmt_num(12.0), "12");
        assert_eq!(fmt_num(-0.5), "-0.5");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333");
    }

    #[test]
    fn trajectory_csv_layout() {
        let t = Trajectory {
            species: vec!["S".into(), "P".into()],
            times: vec![0.0, 1.0],
            rows: vec![vec![3u64, 0], vec![2, 1]],
            termination: Termination::ReachedEnd,
            events: 1,
        };
        assert_eq!(trajectory_csv(&t), "time,S,P\n0,3,0\n1,2,1\n");
    }
}

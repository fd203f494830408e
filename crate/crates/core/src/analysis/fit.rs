//! Hill-curve fitting and steepness measures.

use serde::{Deserialize, Serialize};

use super::binding::BindingCurvePoint;
use super::AnalysisError;

/// `xⁿ/(xⁿ+Jⁿ)`, evaluated as `1/(1+(J/x)ⁿ)` for stability.
pub fn hill_fraction(x: f64, n: f64, j: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    1.0 / (1.0 + (n * (j.ln() - x.ln())).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HillFit {
    pub n: f64,
    pub j: f64,
    pub rmse: f64,
    pub iterations: usize,
}

const STARTS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
const OBJECTIVE_TOL: f64 = 1e-10;

fn sse(points: &[BindingCurvePoint], u: f64, v: f64) -> f64 {
    let (n, j) = (u.exp(), v.exp());
    points.iter().map(|p| (hill_fraction(p.tf_total, n, j) - p.bound_fraction).powi(2)).sum()
}

/// Damped Gauss-Newton on `(ln n, ln J)` from one start.
fn levenberg_marquardt(points: &[BindingCurvePoint], mut u: f64, mut v: f64) -> (f64, f64, f64, usize) {
    let mut lambda = 1e-3;
    let mut cost = sse(points, u, v);
    let mut it = 0;
    while it < 500 {
        it += 1;
        let (n, j) = (u.exp(), v.exp());
        let (mut a11, mut a12, mut a22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for p in points {
            let x = p.tf_total;
            let f = hill_fraction(x, n, j);
            let z = n * (j.ln() - x.ln());
            let s = -f * (1.0 - f);
            let (du, dv) = (s * z, s * n);
            let r = f - p.bound_fraction;
            a11 += du * du;
            a12 += du * dv;
            a22 += dv * dv;
            g1 += du * r;
            g2 += dv * r;
        }
        let mut improved = false;
        for _ in 0..40 {
            let (b11, b22) = (a11 * (1.0 + lambda) + 1e-300, a22 * (1.0 + lambda) + 1e-300);
            let det = b11 * b22 - a12 * a12;
            if det == 0.0 || !det.is_finite() {
                lambda *= 10.0;
                continue;
            }
            let du = -(b22 * g1 - a12 * g2) / det;
            let dv = -(b11 * g2 - a12 * g1) / det;
            let (nu, nv) = (u + du.clamp(-2.0, 2.0), v + dv.clamp(-2.0, 2.0));
            let new_cost = sse(points, nu, nv);
            if new_cost.is_finite() && new_cost <= cost {
                let drop = cost - new_cost;
                u = nu;
                v = nv;
                cost = new_cost;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if drop <= OBJECTIVE_TOL * cost.max(1e-300) || drop < 1e-30 {
                    return (u, v, cost, it);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (u, v, cost, it)
}

/// First abscissa where linear interpolation of `y` reaches `level`.
fn crossing(xs: &[f64], ys: &[f64], level: f64) -> Option<f64> {
    if ys.first().is_some_and(|&y| y == level) {
        return Some(xs[0]);
    }
    xs.windows(2).zip(ys.windows(2)).find_map(|(x, y)| {
        let (lo, hi) = (y[0].min(y[1]), y[0].max(y[1]));
        (lo < level && level <= hi && y[1] > y[0]).then(|| x[0] + (level - y[0]) / (y[1] - y[0]) * (x[1] - x[0]))
    })
}

fn sorted(points: &[BindingCurvePoint]) -> Vec<BindingCurvePoint> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.tf_total.total_cmp(&b.tf_total));
    p
}

/// Least-squares Hill fit of bound fraction against total regulator.
pub fn fit_hill(points: &[BindingCurvePoint]) -> Result<HillFit, AnalysisError> {
    if points.len() < 4 {
        return Err(AnalysisError::InsufficientData(format!("need at least 4 points, got {}", points.len())));
    }
    if points.iter().any(|p| !(p.tf_total > 0.0)) {
        return Err(AnalysisError::Domain("abscissa must be positive".into()));
    }
    let pts = sorted(points);
    let below = pts.iter().any(|p| p.bound_fraction < 0.5);
    let above = pts.iter().any(|p| p.bound_fraction > 0.5);
    if !(below && above) {
        return Err(AnalysisError::Unfittable("data never crosses half saturation".into()));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.tf_total).collect();
    let ys = isotonic(&pts.iter().map(|p| p.bound_fraction).collect::<Vec<_>>());
    let j0 = crossing(&xs, &ys, 0.5).unwrap_or_else(|| xs[xs.len() / 2]);

    let best = STARTS
        .iter()
        .map(|&n0| levenberg_marquardt(&pts, n0.ln(), j0.ln()))
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("non-empty starts");
    let (u, v, cost, iterations) = best;
    Ok(HillFit { n: u.exp(), j: v.exp(), rmse: (cost / pts.len() as f64).sqrt(), iterations })
}

/// RMS deviation of the points from the Hill curve `(n, J)`.
pub fn rmse_vs_theoretical(points: &[BindingCurvePoint], n: f64, j: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let ss: f64 = points.iter().map(|p| (p.bound_fraction - hill_fraction(p.tf_total, n, j)).powi(2)).sum();
    (ss / points.len() as f64).sqrt()
}

/// `S0.9/S0.1` for a monotone increasing saturation function on (0, ∞).
pub fn response_coefficient<F: Fn(f64) -> f64>(curve: F) -> Result<f64, AnalysisError> {
    let s10 = invert(&curve, 0.1)?;
    let s90 = invert(&curve, 0.9)?;
    Ok(s90 / s10)
}

fn invert<F: Fn(f64) -> f64>(curve: &F, level: f64) -> Result<f64, AnalysisError> {
    let (mut lo, mut hi) = (1.0, 1.0);
    let mut k = 0;
    while curve(lo) >= level {
        lo /= 2.0;
        k += 1;
        if k > 2000 {
            return Err(AnalysisError::Range(format!("curve never drops below {level}")));
        }
    }
    k = 0;
    while curve(hi) < level {
        hi *= 2.0;
        k += 1;
        if k > 2000 {
            return Err(AnalysisError::Range(format!("curve never reaches {level}")));
        }
    }
    // bisection in log space
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if curve(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Pool-adjacent-violators: the closest non-decreasing sequence in least squares.
fn isotonic(y: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::new();
    for &v in y {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (m2, w2) = blocks[blocks.len() - 1];
            let (m1, w1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.pop();
            let w = w1 + w2;
            *blocks.last_mut().unwrap() = ((m1 * w1 as f64 + m2 * w2 as f64) / w as f64, w);
        }
    }
    blocks.into_iter().flat_map(|(m, w)| std::iter::repeat_n(m, w)).collect()
}

/// Response coefficient from sampled points via monotone (isotonic) interpolation.
pub fn response_coefficient_points(points: &[BindingCurvePoint]) -> Result<f64, AnalysisError> {
    if points.len() < 2 {
        return Err(AnalysisError::InsufficientData("need at least 2 points".into()));
    }
    let pts = sorted(points);
    let xs: Vec<f64> = pts.iter().map(|p| p.tf_total).collect();
    let ys = isotonic(&pts.iter().map(|p| p.bound_fraction).collect::<Vec<_>>());
    let s10 = crossing(&xs, &ys, 0.1).ok_or_else(|| AnalysisError::Range("curve does not reach 10%".into()))?;
    let s90 = crossing(&xs, &ys, 0.9).ok_or_else(|| AnalysisError::Range("curve does not reach 90%".into()))?;
    if ys[0] > 0.1 {
        return Err(AnalysisError::Range("curve starts above 10%".into()));
    }
    Ok(s90 / s10)
}

/// Apparent Hill coefficient `ln 81 / ln R`.
pub fn hill_coeff_from_r(r: f64) -> Result<f64, AnalysisError> {
    if !(r > 1.0) || !r.is_finite() {
        return Err(AnalysisError::Domain(format!("response coefficient must exceed 1, got {r}")));
    }
    Ok(81f64.ln() / r.ln())
}

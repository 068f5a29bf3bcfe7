//! Small fitting utilities: least-squares lines and phase unwrapping.

use crate::error::Error;
use crate::Result;

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    (slope, intercept)
}

/// Fitted log-log slope of `(t, v)` pairs restricted to `t ∈ [t_lo, t_hi]`
/// with positive values.
pub fn log_log_slope(samples: &[(f64, f64)], t_lo: f64, t_hi: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|&&(t, v)| t >= t_lo && t <= t_hi && v > 0.0)
        .map(|&(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 5 {
        return Err(Error::InsufficientSnapshots {
            need: 5,
            have: pts.len(),
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    Ok(linear_fit(&xs, &ys).0)
}

/// Unwrap a phase series in place: each consecutive step is shifted into
/// `(-π, π]` and accumulated. Fails when a step lands within `guard` of π,
/// where the branch choice is ambiguous (snapshots too sparse).
pub fn unwrap_phases(phases: &mut [f64], guard: f64) -> Result<()> {
    let two_pi = 2.0 * std::f64::consts::PI;
    for i in 1..phases.len() {
        let mut step = phases[i] - phases[i - 1];
        step -= two_pi * (step / two_pi).round();
        if step.abs() > std::f64::consts::PI - guard {
            return Err(Error::UnwrapAmbiguity { step: step.abs() });
        }
        phases[i] = phases[i - 1] + step;
    }
    Ok(())
}

//! Curve analysis on sampled sweeps: sinusoid fits, zero crossings, extrema and widths.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::scalar::golden_section_max;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SinusoidFit {
    pub period: f64,
    pub offset: f64,
    pub amplitude: f64,
    /// `y ≈ offset + amplitude·cos(2π x/period − phase)`.
    pub phase: f64,
    pub rms_residual: f64,
}

fn linear_fit(x: &[f64], y: &[f64], omega: f64) -> Option<(Vector3<f64>, f64)> {
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for (&xi, &yi) in x.iter().zip(y) {
        let (s, c) = (omega * xi).sin_cos();
        let row = Vector3::new(1.0, c, s);
        normal += row * row.transpose();
        rhs += row * yi;
    }
    let coef = normal.lu().solve(&rhs)?;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let (s, c) = (omega * xi).sin_cos();
            (yi - coef[0] - coef[1] * c - coef[2] * s).powi(2)
        })
        .sum();
    Some((coef, sse))
}

/// Least-squares fit of a single sinusoid with unknown period in
/// `[min_period, max_period]`.
pub fn fit_period(x: &[f64], y: &[f64], min_period: f64, max_period: f64) -> Result<SinusoidFit> {
    if x.len() != y.len() || x.len() < 4 {
        return Err(Error::InvalidParameter("fit needs at least four (x, y) pairs".into()));
    }
    if !(min_period > 0.0 && max_period > min_period) {
        return Err(Error::InvalidParameter(
            "period range must be positive and ordered".into(),
        ));
    }
    let score = |period: f64| linear_fit(x, y, 2.0 * PI / period).map_or(f64::NEG_INFINITY, |(_, sse)| -sse);

    const SCAN: usize = 2000;
    let step = (max_period - min_period) / SCAN as f64;
    let best = (0..=SCAN)
        .map(|k| min_period + k as f64 * step)
        .map(|p| (p, score(p)))
        .fold(
            (min_period, f64::NEG_INFINITY),
            |acc, v| if v.1 > acc.1 { v } else { acc },
        );
    let lo = (best.0 - step).max(min_period);
    let hi = (best.0 + step).min(max_period);
    let refined = golden_section_max(score, lo, hi, 1e-10 * max_period);
    let period = refined.x;
    let (coef, sse) = linear_fit(x, y, 2.0 * PI / period).ok_or(Error::NonFinite("sinusoid fit"))?;
    Ok(SinusoidFit {
        period,
        offset: coef[0],
        amplitude: coef[1].hypot(coef[2]),
        phase: coef[2].atan2(coef[1]),
        rms_residual: (sse / x.len() as f64).sqrt(),
    })
}

/// Linearly interpolated sign changes of `y`; exact zeros are reported as is.
pub fn zero_crossings(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 0..x.len().min(y.len()) {
        if y[k] == 0.0 {
            if k > 0 && k + 1 < y.len() && y[k - 1] * y[k + 1] < 0.0 {
                out.push(x[k]);
            }
            continue;
        }
        if k + 1 < y.len() && y[k] * y[k + 1] < 0.0 {
            let t = y[k] / (y[k] - y[k + 1]);
            out.push(x[k] + t * (x[k + 1] - x[k]));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremumKind {
    Max,
    Min,
}

/// Interior samples strictly above (below) one neighbour and not below (above) the other.
pub fn local_extrema(x: &[f64], y: &[f64]) -> Vec<(f64, ExtremumKind)> {
    let n = x.len().min(y.len());
    let mut out = Vec::new();
    for k in 1..n.saturating_sub(1) {
        let (a, b, c) = (y[k - 1], y[k], y[k + 1]);
        if b >= a && b >= c && (b > a || b > c) {
            out.push((x[k], ExtremumKind::Max));
        } else if b <= a && b <= c && (b < a || b < c) {
            out.push((x[k], ExtremumKind::Min));
        }
    }
    out
}

/// Full width at half maximum of a single-peaked sampled curve, by linear
/// interpolation of the half-maximum crossings on either side of the peak.
pub fn fwhm(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::InvalidParameter("fwhm needs at least three samples".into()));
    }
    let (peak, &max) = y
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::NonFinite("fwhm"))?;
    if !(max > 0.0) {
        return Err(Error::Domain("curve has no positive peak".into()));
    }
    let half = 0.5 * max;
    let cross = |i: usize, j: usize| x[i] + (half - y[i]) / (y[j] - y[i]) * (x[j] - x[i]);
    let left = (0..peak)
        .rev()
        .find(|&k| y[k] < half)
        .map(|k| cross(k, k + 1))
        .ok_or_else(|| Error::Domain("curve does not fall to half maximum on the left".into()))?;
    let right = (peak + 1..y.len())
        .find(|&k| y[k] < half)
        .map(|k| cross(k - 1, k))
        .ok_or_else(|| Error::Domain("curve does not fall to half maximum on the right".into()))?;
    Ok(right - left)
}

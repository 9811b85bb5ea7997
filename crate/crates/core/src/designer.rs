//! Inverse design: the detuning that gives a requested rotation angle at fixed
//! pulse area and bandwidth.
//!
//! θ(δ) is odd in δ. The maximum over δ > 0 is bracketed on a grid of δ/σ in
//! (0, 10] and refined by golden-section search; a target is then reached by
//! bisection on the first sign change of θ(δ) − θ_target walking out from δ = 0,
//! which is the smallest |δ| solution on that side.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::exciton::CircPolarization;
use crate::rosenzener::{rotation_angle, transferred_fraction, PulseParams};
use crate::scalar::{bisect, golden_section_max};

/// Upper end of the δ/σ search range.
pub const MAX_REDUCED_DETUNING: f64 = 10.0;
const SCAN_POINTS: usize = 400;
const MAX_BISECTIONS: usize = 200;
const ANGLE_TOL: f64 = 1e-8;
/// Targets this close to θ_max are served by δ* directly.
const PEAK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignPreference {
    PositiveDetuning,
    NegativeDetuning,
}

impl SignPreference {
    fn sign(self) -> f64 {
        match self {
            SignPreference::PositiveDetuning => 1.0,
            SignPreference::NegativeDetuning => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DesignTarget {
    pub theta_rad: f64,
    pub alpha: f64,
    pub bandwidth_uev: f64,
    pub sign_preference: SignPreference,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DesignResult {
    pub detuning_uev: f64,
    pub achieved_theta: f64,
    pub residual_p_xx: f64,
    pub iterations: usize,
    /// Every detuning interval (μeV) on the chosen side where θ crosses the target.
    pub brackets: Vec<(f64, f64)>,
}

impl DesignResult {
    pub fn pulse(&self, target: &DesignTarget) -> PulseParams {
        PulseParams {
            alpha: target.alpha,
            bandwidth_uev: target.bandwidth_uev,
            detuning_uev: self.detuning_uev,
            pol: CircPolarization::R,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxRotation {
    pub theta_max: f64,
    pub delta_star_uev: f64,
}

/// θ at reduced detuning `x` for Rabi ratio `alpha`; an emptied exciton counts as no rotation.
fn theta_at(alpha: f64, x: f64) -> Result<f64> {
    let pulse = PulseParams::new(alpha, 1.0, x, CircPolarization::R)?;
    match rotation_angle(&pulse) {
        Err(Error::Degenerate { .. }) => Ok(0.0),
        other => other,
    }
}

fn scan_grid() -> impl Iterator<Item = f64> {
    (1..=SCAN_POINTS).map(|i| MAX_REDUCED_DETUNING * i as f64 / SCAN_POINTS as f64)
}

/// Largest rotation angle over δ > 0 and the detuning δ* where it occurs.
pub fn max_rotation_angle(alpha: f64, bandwidth_uev: f64) -> Result<MaxRotation> {
    PulseParams::new(alpha, bandwidth_uev, 0.0, CircPolarization::R)?;
    if alpha == 0.0 {
        return Ok(MaxRotation {
            theta_max: 0.0,
            delta_star_uev: 0.0,
        });
    }
    let samples: Vec<(f64, f64)> = scan_grid()
        .map(|x| theta_at(alpha, x).map(|t| (x, t)))
        .collect::<Result<_>>()?;
    let best = (0..samples.len())
        .max_by(|&i, &j| samples[i].1.total_cmp(&samples[j].1))
        .expect("scan grid is non-empty");
    let lo = if best == 0 { 0.0 } else { samples[best - 1].0 };
    let hi = samples[(best + 1).min(samples.len() - 1)].0;
    let refined = golden_section_max(|x| theta_at(alpha, x).unwrap_or(f64::NEG_INFINITY), lo, hi, 1e-10);
    let (x, theta) = if refined.value >= samples[best].1 {
        (refined.x, refined.value)
    } else {
        samples[best]
    };
    Ok(MaxRotation {
        theta_max: theta,
        delta_star_uev: x * bandwidth_uev,
    })
}

/// Detuning on the inner branch that yields `target.theta_rad`.
///
/// The preferred detuning sign is tried first; if the angle is unreachable
/// there the other side is used.
pub fn design_detuning(target: &DesignTarget) -> Result<DesignResult> {
    if !(target.theta_rad.abs() <= FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "target angle must lie in [-π/2, π/2], got {}",
            target.theta_rad
        )));
    }
    let peak = max_rotation_angle(target.alpha, target.bandwidth_uev)?;
    let zero_detuning = PulseParams::new(target.alpha, target.bandwidth_uev, 0.0, CircPolarization::R)?;
    if target.theta_rad == 0.0 {
        return Ok(DesignResult {
            detuning_uev: 0.0,
            achieved_theta: 0.0,
            residual_p_xx: transferred_fraction(&zero_detuning),
            iterations: 0,
            brackets: Vec::new(),
        });
    }
    if target.theta_rad.abs() > peak.theta_max + PEAK_TOL {
        return Err(Error::Infeasible {
            target: target.theta_rad,
            theta_max: peak.theta_max,
        });
    }

    let preferred = target.sign_preference.sign();
    for side in [preferred, -preferred] {
        if let Some(result) = solve_on_side(target, &peak, side)? {
            return Ok(result);
        }
    }
    Err(Error::Infeasible {
        target: target.theta_rad,
        theta_max: peak.theta_max,
    })
}

/// Solves θ(side·x·σ) = target for x > 0, i.e. θ(x) = side·target by oddness.
fn solve_on_side(target: &DesignTarget, peak: &MaxRotation, side: f64) -> Result<Option<DesignResult>> {
    let alpha = target.alpha;
    let sigma = target.bandwidth_uev;
    let goal = side * target.theta_rad;
    let x_star = peak.delta_star_uev / sigma;

    let mut grid: Vec<f64> = std::iter::once(0.0).chain(scan_grid()).collect();
    if x_star > 0.0 {
        grid.push(x_star);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
    }
    let residuals: Vec<f64> = grid
        .iter()
        .map(|&x| theta_at(alpha, x).map(|t| t - goal))
        .collect::<Result<_>>()?;

    let mut brackets = Vec::new();
    for i in 0..grid.len() - 1 {
        let (r0, r1) = (residuals[i], residuals[i + 1]);
        if r0 == 0.0 || r0.signum() != r1.signum() && r1 != 0.0 {
            brackets.push((grid[i], grid[i + 1]));
        }
    }
    if let Some(&last) = residuals.last() {
        if last == 0.0 {
            brackets.push((grid[grid.len() - 1], grid[grid.len() - 1]));
        }
    }

    let (x, iterations) = if let Some(&(lo, hi)) = brackets.first() {
        let root = bisect(
            |x| theta_at(alpha, x).unwrap_or(f64::NAN) - goal,
            lo,
            hi,
            1e-13,
            MAX_BISECTIONS,
        )?;
        (root.x, root.iterations)
    } else if x_star > 0.0 && (peak.theta_max - goal).abs() <= PEAK_TOL {
        brackets.push((x_star, x_star));
        (x_star, 0)
    } else {
        return Ok(None);
    };

    let detuning_uev = side * x * sigma;
    let pulse = PulseParams::new(alpha, sigma, detuning_uev, CircPolarization::R)?;
    let achieved_theta = theta_at(alpha, side * x)?;
    if (achieved_theta - target.theta_rad).abs() > ANGLE_TOL {
        return Err(Error::NonConvergence { iterations });
    }
    let to_uev = |(lo, hi): (f64, f64)| {
        let (a, b) = (side * lo * sigma, side * hi * sigma);
        (a.min(b), a.max(b))
    };
    Ok(Some(DesignResult {
        detuning_uev,
        achieved_theta,
        residual_p_xx: transferred_fraction(&pulse),
        iterations,
        brackets: brackets.into_iter().map(to_uev).collect(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn target(theta: f64, alpha: f64) -> DesignTarget {
        DesignTarget {
            theta_rad: theta,
            alpha,
            bandwidth_uev: 145.0,
            sign_preference: SignPreference::PositiveDetuning,
        }
    }

    /// Dense scan of θ(δ) over δ/σ in (0, 10].
    fn scanned_max(alpha: f64) -> (f64, f64) {
        (1..=200_000)
            .map(|i| {
                let x = 10.0 * i as f64 / 200_000.0;
                let p = PulseParams::new(alpha, 145.0, x * 145.0, CircPolarization::R).unwrap();
                (x, rotation_angle(&p).unwrap())
            })
            .fold((0.0, f64::NEG_INFINITY), |acc, v| if v.1 > acc.1 { v } else { acc })
    }

    #[test]
    fn zero_area_gives_no_rotation() {
        let m = max_rotation_angle(0.0, 145.0).unwrap();
        assert_eq!(m.theta_max, 0.0);
    }

    #[test]
    fn unit_ratio_reaches_quarter_turn_at_unit_detuning() {
        let m = max_rotation_angle(1.0, 145.0).unwrap();
        assert!((m.theta_max - FRAC_PI_2).abs() < 1e-9);
        assert!((m.delta_star_uev / 145.0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn seventh_tenths_pi_maximum_matches_dense_scan() {
        let (x_scan, theta_scan) = scanned_max(0.35);
        let m = max_rotation_angle(0.35, 145.0).unwrap();
        assert!(m.theta_max >= theta_scan - 1e-12);
        assert!(m.theta_max - theta_scan < 1e-8);
        assert!((m.delta_star_uev / 145.0 - x_scan).abs() < 1e-3);
    }

    #[test]
    fn maximum_is_monotone_below_pi_pulse_and_saturates_above() {
        let mut previous = 0.0;
        for i in 1..=48 {
            let alpha = 0.01 * i as f64;
            let m = max_rotation_angle(alpha, 145.0).unwrap().theta_max;
            assert!(m > previous, "alpha={alpha}");
            previous = m;
        }
        for i in 0..=18 {
            let alpha = 0.55 + 0.05 * i as f64;
            let m = max_rotation_angle(alpha, 145.0).unwrap().theta_max;
            assert!((m - FRAC_PI_2).abs() < 1e-6, "alpha={alpha}: {m}");
        }
    }

    #[test]
    fn zero_target() {
        let r = design_detuning(&target(0.0, 0.35)).unwrap();
        assert_eq!(r.detuning_uev, 0.0);
        assert_eq!(r.achieved_theta, 0.0);
    }

    #[test]
    fn quarter_turn_at_unit_ratio() {
        let r = design_detuning(&target(FRAC_PI_2, 1.0)).unwrap();
        assert!((r.detuning_uev / 145.0 - 1.0).abs() < 1e-6);
        assert!(r.residual_p_xx < 1e-12);
    }

    #[test]
    fn round_trip_near_peak() {
        let theta_max = max_rotation_angle(0.35, 145.0).unwrap().theta_max;
        let t = target(0.9 * theta_max, 0.35);
        let r = design_detuning(&t).unwrap();
        let forward = rotation_angle(&r.pulse(&t)).unwrap();
        assert!((forward - t.theta_rad).abs() < 1e-8);
        assert!(r.detuning_uev > 0.0);
        assert!(r.iterations > 0);
    }

    #[test]
    fn infeasible_target_carries_maximum() {
        let err = design_detuning(&target(1.0, 0.35)).unwrap_err();
        match err {
            Error::Infeasible { theta_max, target } => {
                assert_eq!(target, 1.0);
                assert!((theta_max - 0.419_2).abs() < 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_preference_is_honored_when_reachable() {
        let mut t = target(-0.2, 0.35);
        t.sign_preference = SignPreference::NegativeDetuning;
        let r = design_detuning(&t).unwrap();
        assert!(r.detuning_uev < 0.0);
        // +0.2 cannot be reached with negative detuning; falls back to the positive side
        t.theta_rad = 0.2;
        let r = design_detuning(&t).unwrap();
        assert!(r.detuning_uev > 0.0);
    }

    #[test]
    fn large_area_returns_smallest_detuning() {
        let t = target(1.0, 1.2);
        let r = design_detuning(&t).unwrap();
        assert!((rotation_angle(&r.pulse(&t)).unwrap() - 1.0).abs() < 1e-8);
        assert!(r.brackets.len() >= 2, "{:?}", r.brackets);
        assert!(r.brackets[0].0 <= r.detuning_uev && r.detuning_uev <= r.brackets[0].1);
        // no smaller detuning reaches the target
        for i in 1..1000 {
            let d = r.detuning_uev * i as f64 / 1000.0;
            let p = PulseParams::new(1.2, 145.0, d, CircPolarization::R).unwrap();
            assert!(rotation_angle(&p).unwrap() < 1.0 + 1e-8);
        }
    }

    #[test]
    fn target_out_of_range_is_rejected() {
        assert!(matches!(
            design_detuning(&target(2.0, 1.0)),
            Err(Error::InvalidParameter(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn round_trip_and_oddness(fraction in -0.99f64..0.99, alpha in 0.05f64..0.45) {
            let theta_max = max_rotation_angle(alpha, 145.0).unwrap().theta_max;
            let t = target(fraction * theta_max, alpha);
            let up = design_detuning(&t).unwrap();
            prop_assert!((rotation_angle(&up.pulse(&t)).unwrap() - t.theta_rad).abs() < 1e-8);
            let mirrored = DesignTarget { theta_rad: -t.theta_rad, ..t };
            let down = design_detuning(&mirrored).unwrap();
            prop_assert!((up.detuning_uev + down.detuning_uev).abs() / 145.0 < 1e-8);
        }
    }
}

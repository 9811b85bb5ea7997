//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::process::ExitCode;
use std::time::Instant;

use excirot_core::analysis::{fit_period, fwhm, local_extrema, zero_crossings};
use excirot_core::designer::{design_detuning, max_rotation_angle, DesignTarget, SignPreference};
use excirot_core::exciton::{init_exciton, precess, CircPolarization, DotParams, FullState, HBAR_UEV_PS};
use excirot_core::experiment::{
    exciton_intensities, normalized_difference, pl_intensities, run_single, sweep_delay, sweep_detuning,
    ExperimentConfig, Method, SweepResult,
};
use excirot_core::propagator::{propagate_detailed, PropagationSettings};
use excirot_core::rosenzener::{
    apply_pulse, dvh_amplitude, rotation_angle, survival_factor, transfer_factor, transferred_fraction, PulseParams,
};
use excirot_core::Error;
use num_complex::Complex64;

const SIGMA: f64 = 145.0;
const SPLITTING: f64 = 34.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn grid_pulses() -> Vec<PulseParams> {
    let mut out = Vec::new();
    for a in 0..=15 {
        for k in -12..=12 {
            let x = 0.25 * k as f64;
            out.push(PulseParams::new(a as f64 / 10.0, SIGMA, x * SIGMA, CircPolarization::R).unwrap());
        }
    }
    out
}

fn reference_config(pol: CircPolarization, method: Method) -> ExperimentConfig {
    ExperimentConfig {
        dot: DotParams::new(SPLITTING).unwrap(),
        first_pol: CircPolarization::R,
        pulse: PulseParams::new(0.35, SIGMA, -63.0, pol).unwrap(),
        method,
        settings: PropagationSettings::default(),
    }
}

fn column(sweep: &SweepResult, f: impl Fn(&excirot_core::experiment::Observables) -> f64) -> (Vec<f64>, Vec<f64>) {
    sweep.points.iter().map(|(x, o)| (*x, f(o))).unzip()
}

fn period() -> f64 {
    2.0 * PI * HBAR_UEV_PS / SPLITTING
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let dot = DotParams::new(0.0).unwrap();
    let settings = PropagationSettings::default();
    let inputs = [
        init_exciton(CircPolarization::R),
        precess(
            &init_exciton(CircPolarization::R),
            &DotParams::new(SPLITTING).unwrap(),
            40.0,
        ),
        FullState::exciton(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)),
    ];
    let mut worst = 0.0f64;
    let mut runs = 0;
    for pulse in grid_pulses() {
        for input in &inputs {
            let analytic = apply_pulse(input, &pulse).map_err(|e| e.to_string())?;
            let numeric = propagate_detailed(input, &dot, &pulse, &settings).map_err(|e| e.to_string())?;
            worst = worst.max(analytic.max_abs_diff(&numeric.state));
            runs += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    ensure(
        worst < 1e-6 && elapsed < 60.0,
        format!("{runs} propagations, max amplitude difference {worst:.2e} (< 1e-6), {elapsed:.2} s (< 60 s)"),
    )
}

fn unitarity() -> Outcome {
    let dot = DotParams::new(0.0).unwrap();
    let settings = PropagationSettings::default();
    let input = init_exciton(CircPolarization::R);
    let mut worst = 0.0f64;
    let mut drift = 0.0f64;
    for pulse in grid_pulses() {
        let f = survival_factor(&pulse).map_err(|e| e.to_string())?;
        let t = transfer_factor(&pulse).map_err(|e| e.to_string())?;
        worst = worst.max((f.norm_sqr() + t.norm_sqr() - 1.0).abs());
        drift = drift.max(
            propagate_detailed(&input, &dot, &pulse, &settings)
                .map_err(|e| e.to_string())?
                .norm_drift,
        );
    }
    ensure(
        worst < 1e-10 && drift < 1e-9,
        format!("max ||F|²+|T|²−1| = {worst:.2e} (< 1e-10), max norm drift {drift:.2e} (< 1e-9)"),
    )
}

fn fixed_points() -> Outcome {
    let cfg = ExperimentConfig {
        pulse: PulseParams::new(0.5, SIGMA, 0.0, CircPolarization::R).unwrap(),
        ..reference_config(CircPolarization::R, Method::Analytic)
    };
    let p_xx = run_single(&cfg, 0.0).map_err(|e| e.to_string())?.p_xx;
    let quarter = PulseParams::new(1.0, SIGMA, SIGMA, CircPolarization::R).unwrap();
    let theta = rotation_angle(&quarter).map_err(|e| e.to_string())?;
    let residual = transferred_fraction(&quarter);
    let mut nonzero = 0;
    for a in 0..=15 {
        let p = PulseParams::new(a as f64 / 10.0, SIGMA, 0.0, CircPolarization::R).unwrap();
        if dvh_amplitude(&p).map_err(|e| e.to_string())? != 0.0 {
            nonzero += 1;
        }
    }
    ensure(
        (p_xx - 1.0).abs() < 1e-9 && (theta - FRAC_PI_2).abs() < 1e-9 && residual < 1e-12 && nonzero == 0,
        format!(
            "(a) |P_XX−1| = {:.1e}; (b) |θ−π/2| = {:.1e}, P⁰_XX = {residual:.1e}; (c) {nonzero} resonant D⁰ ≠ 0",
            (p_xx - 1.0).abs(),
            (theta - FRAC_PI_2).abs()
        ),
    )
}

fn precession_period() -> Outcome {
    let taus: Vec<f64> = (0..=300).map(|k| k as f64 * 2.0).collect();
    let sweep =
        sweep_delay(&reference_config(CircPolarization::R, Method::Analytic), &taus).map_err(|e| e.to_string())?;
    let (x, y) = column(&sweep, |o| o.p_xx);
    let fit = fit_period(&x, &y, 60.0, 250.0).map_err(|e| e.to_string())?;
    let want = period();
    ensure(
        (fit.period - want).abs() < 0.5,
        format!("fitted period {:.4} ps vs 2πℏ/Δ = {want:.4} ps (±0.5)", fit.period),
    )
}

fn phase_relation() -> Outcome {
    let step = 1.0;
    let taus: Vec<f64> = (1..=600).map(|k| k as f64 * step).collect();
    let sweep =
        sweep_delay(&reference_config(CircPolarization::R, Method::Analytic), &taus).map_err(|e| e.to_string())?;
    let (x, d) = column(&sweep, |o| o.d_vh);
    let (_, p) = column(&sweep, |o| o.p_xx);
    let crossings = zero_crossings(&x, &d);
    let extrema: Vec<f64> = local_extrema(&x, &p).into_iter().map(|(t, _)| t).collect();
    let nearest = |v: f64, set: &[f64]| set.iter().map(|s| (s - v).abs()).fold(f64::INFINITY, f64::min);
    let worst_a = crossings.iter().map(|&c| nearest(c, &extrema)).fold(0.0, f64::max);
    let worst_b = extrema.iter().map(|&e| nearest(e, &crossings)).fold(0.0, f64::max);
    ensure(
        !crossings.is_empty() && crossings.len() == extrema.len() && worst_a.max(worst_b) <= step,
        format!(
            "{} zero crossings, {} P_XX extrema, worst offset {:.3} ps (≤ {step} ps)",
            crossings.len(),
            extrema.len(),
            worst_a.max(worst_b)
        ),
    )
}

fn sign_law() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for k in -300..=300 {
        if k == 0 {
            continue;
        }
        let x = k as f64 / 100.0;
        let p = PulseParams::new(0.35, SIGMA, x * SIGMA, CircPolarization::R).unwrap();
        let d0 = dvh_amplitude(&p).map_err(|e| e.to_string())?;
        if d0.signum() != x.signum() || d0 == 0.0 {
            bad.push(x);
        }
        checked += 1;
    }
    ensure(
        bad.is_empty(),
        format!("{checked} detunings, {} sign violations {bad:?}", bad.len()),
    )
}

fn polarization_symmetry() -> Outcome {
    let half = 0.5 * period();
    let taus: Vec<f64> = (-5..=125).map(|k| k as f64 * 4.0).collect();
    let run = |pol, method, taus: &[f64]| -> Result<SweepResult, String> {
        let s = sweep_delay(&reference_config(pol, method), taus).map_err(|e| e.to_string())?;
        normalized_difference(&s).map_err(|e| e.to_string())
    };
    let co = run(CircPolarization::R, Method::Numeric, &taus)?;
    let cross = run(CircPolarization::L, Method::Numeric, &taus)?;
    let dvh_err = co
        .points
        .iter()
        .zip(&cross.points)
        .map(|((_, a), (_, b))| (a.d_vh + b.d_vh).abs())
        .fold(0.0, f64::max);

    let positive: Vec<f64> = taus.iter().copied().filter(|t| *t >= 0.0).collect();
    let shifted: Vec<f64> = positive.iter().map(|t| t + half).collect();
    let co_shifted =
        sweep_delay(&reference_config(CircPolarization::R, Method::Numeric), &shifted).map_err(|e| e.to_string())?;
    let cross_pos =
        sweep_delay(&reference_config(CircPolarization::L, Method::Numeric), &positive).map_err(|e| e.to_string())?;
    let shift_err = co_shifted
        .points
        .iter()
        .zip(&cross_pos.points)
        .map(|((_, a), (_, b))| (a.p_xx - b.p_xx).abs())
        .fold(0.0, f64::max);

    let analytic = run(CircPolarization::L, Method::Analytic, &taus)?;
    let oracle_err = analytic
        .points
        .iter()
        .zip(&cross.points)
        .map(|((_, a), (_, b))| (a.d_vh - b.d_vh).abs().max((a.p_xx - b.p_xx).abs()))
        .fold(0.0, f64::max);
    ensure(
        dvh_err < 1e-9 && shift_err < 1e-9 && oracle_err < 1e-6,
        format!(
            "numeric oracle: max |d_cross + d_co| = {dvh_err:.1e}, max |P_cross(τ) − P_co(τ+T/2)| = {shift_err:.1e} (< 1e-9); analytic vs numeric {oracle_err:.1e}"
        ),
    )
}

fn lineshape() -> Outcome {
    let grid: Vec<f64> = (-800..=800).map(|k| k as f64 * 0.5).collect();
    let cfg = reference_config(CircPolarization::R, Method::Analytic);
    let sweep = sweep_detuning(&cfg, &grid, 30.0).map_err(|e| e.to_string())?;
    let (x, p) = column(&sweep, |o| o.p_xx);
    let peak = p[800];
    let shape_err = x
        .iter()
        .zip(&p)
        .map(|(d, v)| (v / peak - (0.5 * PI * d / SIGMA).cosh().powi(-2)).abs())
        .fold(0.0, f64::max);
    let width = fwhm(&x, &p).map_err(|e| e.to_string())?;
    let want = 4.0 / PI * SQRT_2.acosh() * SIGMA;
    let rel = (width - want).abs() / want;
    ensure(
        rel < 0.01 && shape_err < 1e-9,
        format!("FWHM {width:.3} μeV vs {want:.3} μeV (rel {rel:.1e} < 1%), sech² shape error {shape_err:.1e}"),
    )
}

fn designer_round_trip() -> Outcome {
    let peak = max_rotation_angle(0.35, SIGMA).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for k in 0..20 {
        let frac = -0.95 + 1.9 * k as f64 / 19.0;
        let target = DesignTarget {
            theta_rad: frac * peak.theta_max,
            alpha: 0.35,
            bandwidth_uev: SIGMA,
            sign_preference: SignPreference::PositiveDetuning,
        };
        let result = design_detuning(&target).map_err(|e| e.to_string())?;
        let theta = rotation_angle(&result.pulse(&target)).map_err(|e| e.to_string())?;
        worst = worst.max((theta - target.theta_rad).abs());
    }
    let infeasible = design_detuning(&DesignTarget {
        theta_rad: 1.01 * peak.theta_max,
        alpha: 0.35,
        bandwidth_uev: SIGMA,
        sign_preference: SignPreference::PositiveDetuning,
    });
    let carries_max = matches!(infeasible, Err(Error::Infeasible { theta_max, .. }) if theta_max == peak.theta_max);
    ensure(
        worst < 1e-8 && carries_max,
        format!(
            "θ_max = {:.6} rad, 20 targets, max |θ − target| = {worst:.1e} (< 1e-8); infeasible error carries θ_max: {carries_max}",
            peak.theta_max
        ),
    )
}

fn feed_invariance() -> Outcome {
    let taus: Vec<f64> = (-10..=300).map(|k| k as f64 * 2.0).collect();
    let mut worst = 0.0f64;
    let mut count = 0;
    for alpha in [0.0, 0.35, 0.5, 0.8, 1.2] {
        for detuning in [-200.0, -63.0, 0.0, 90.0] {
            let cfg = ExperimentConfig {
                pulse: PulseParams::new(alpha, SIGMA, detuning, CircPolarization::R).unwrap(),
                ..reference_config(CircPolarization::R, Method::Analytic)
            };
            for &tau in &taus {
                let state = excirot_core::experiment::final_state(&cfg, tau).map_err(|e| e.to_string())?;
                let (h1, v1, _) = pl_intensities(&state);
                let (h0, v0) = exciton_intensities(&state);
                worst = worst.max(((v1 - h1) - (v0 - h0)).abs());
                count += 1;
            }
        }
    }
    ensure(
        worst < 1e-12,
        format!("{count} states, max |Δ(i_v − i_h)| = {worst:.1e} (< 1e-12)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("unitarity", unitarity),
        ("exact fixed points", fixed_points),
        ("precession period", precession_period),
        ("phase relation", phase_relation),
        ("sign law", sign_law),
        ("polarization symmetry", polarization_symmetry),
        ("lineshape", lineshape),
        ("designer round trip", designer_round_trip),
        ("PL-feed invariance", feed_invariance),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let (tag, msg) = match f() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failures += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} criterion {:>2} {name}: {msg}", k + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

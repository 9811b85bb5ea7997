//! Pump–probe protocol: an exciton is created, precesses for a delay `τ`, is hit by a
//! second pulse, and is read out through polarization-resolved photoluminescence.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exciton::{init_exciton, precess, to_linear, CircPolarization, DotParams, FullState};
use crate::propagator::{propagate, scattering_map, PropagationSettings};
use crate::rosenzener::{
    apply_pulse, dvh_amplitude, rotation_angle, rotation_angle_from_parts, transferred_fraction, PulseParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Analytic,
    Numeric,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub dot: DotParams,
    pub first_pol: CircPolarization,
    pub pulse: PulseParams,
    pub method: Method,
    /// Only read by [`Method::Numeric`].
    pub settings: PropagationSettings,
}

impl ExperimentConfig {
    pub fn is_co_polarized(&self) -> bool {
        self.pulse.pol == self.first_pol
    }

    fn relative_sign(&self) -> f64 {
        if self.is_co_polarized() {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observables {
    pub p_xx: f64,
    pub i_h: f64,
    pub i_v: f64,
    /// `i_v − i_h`, or its normalized form after [`normalized_difference`].
    pub d_vh: f64,
    /// Amplitude of the `d_vh(τ)` oscillation, signed for the relative polarization.
    pub d0_vh: f64,
    /// Rotation angle; `None` when the pulse empties the exciton subspace.
    pub theta_rad: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub variable_name: String,
    pub points: Vec<(f64, Observables)>,
}

/// What the second pulse does on its own, independent of the delay.
#[derive(Clone, Copy, Debug, PartialEq)]
struct PulseResponse {
    d0_vh: f64,
    theta_rad: Option<f64>,
}

fn pulse_response(config: &ExperimentConfig) -> Result<PulseResponse> {
    let sign = config.relative_sign();
    let (d0, theta) = match config.method {
        Method::Analytic => (dvh_amplitude(&config.pulse)?, rotation_angle(&config.pulse)),
        Method::Numeric => {
            let map = scattering_map(&config.pulse, &config.settings)?;
            let survival = map[(0, 0)];
            let d0 = -survival.im;
            let p0 = map[(1, 0)].norm_sqr();
            (d0, rotation_angle_from_parts(d0, p0, survival.re))
        }
    };
    let theta_rad = match theta {
        Ok(t) => Some(sign * t),
        Err(Error::Degenerate { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(PulseResponse {
        d0_vh: sign * d0,
        theta_rad,
    })
}

/// Time-integrated PL proxy `(i_h, i_v, p_xx)`: every biexciton decays through one
/// exciton, landing in `H` or `V` with equal weight.
pub fn pl_intensities(state: &FullState) -> (f64, f64, f64) {
    let p_xx = state.biexciton_population();
    let (i_h, i_v) = exciton_intensities(state);
    (i_h + 0.5 * p_xx, i_v + 0.5 * p_xx, p_xx)
}

/// `(|⟨H|ψ⟩|², |⟨V|ψ⟩|²)` without the biexciton feed.
pub fn exciton_intensities(state: &FullState) -> (f64, f64) {
    let (h, v) = to_linear(state);
    (h.norm_sqr(), v.norm_sqr())
}

fn observables(state: &FullState, response: PulseResponse) -> Observables {
    let (i_h, i_v, p_xx) = pl_intensities(state);
    Observables {
        p_xx,
        i_h,
        i_v,
        d_vh: i_v - i_h,
        d0_vh: response.d0_vh,
        theta_rad: response.theta_rad,
    }
}

/// State just after the second pulse. For `τ < 0` the pulse meets an empty dot and
/// the result is the freshly created exciton.
pub fn final_state(config: &ExperimentConfig, tau_ps: f64) -> Result<FullState> {
    if !tau_ps.is_finite() {
        return Err(Error::NonFinite("delay"));
    }
    let initial = init_exciton(config.first_pol);
    if tau_ps < 0.0 {
        return Ok(initial);
    }
    let before = precess(&initial, &config.dot, tau_ps);
    match config.method {
        Method::Analytic => apply_pulse(&before, &config.pulse),
        Method::Numeric => propagate(
            &before,
            &config.dot,
            &config.pulse,
            &config.settings.with_center(tau_ps),
        ),
    }
}

fn baseline() -> PulseResponse {
    PulseResponse {
        d0_vh: 0.0,
        theta_rad: Some(0.0),
    }
}

fn run_with(config: &ExperimentConfig, tau_ps: f64, response: PulseResponse) -> Result<Observables> {
    let state = final_state(config, tau_ps)?;
    let response = if tau_ps < 0.0 { baseline() } else { response };
    Ok(observables(&state, response))
}

pub fn run_single(config: &ExperimentConfig, tau_ps: f64) -> Result<Observables> {
    config.pulse.validate()?;
    if tau_ps < 0.0 {
        return run_with(config, tau_ps, baseline());
    }
    run_with(config, tau_ps, pulse_response(config)?)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("grid"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonMonotoneGrid);
    }
    Ok(())
}

pub fn sweep_delay(config: &ExperimentConfig, tau_grid: &[f64]) -> Result<SweepResult> {
    check_grid(tau_grid)?;
    config.pulse.validate()?;
    let response = if tau_grid.iter().any(|&t| t >= 0.0) {
        pulse_response(config)?
    } else {
        baseline()
    };
    let points = tau_grid
        .par_iter()
        .map(|&tau| run_with(config, tau, response).map(|obs| (tau, obs)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        variable_name: "tau_ps".into(),
        points,
    })
}

/// Second-pulse detuning swept over `delta_grid` (μeV) at fixed delay.
pub fn sweep_detuning(config: &ExperimentConfig, delta_grid: &[f64], tau_ps: f64) -> Result<SweepResult> {
    check_grid(delta_grid)?;
    let points = delta_grid
        .par_iter()
        .map(|&delta| {
            let local = ExperimentConfig {
                pulse: config.pulse.with_detuning(delta),
                ..*config
            };
            run_single(&local, tau_ps).map(|obs| (delta, obs))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        variable_name: "delta_ueV".into(),
        points,
    })
}

/// Replaces `d_vh` by `(i_v − i_h)/S`, with `S` the mean of `i_v + i_h` over the
/// points at negative `x`.
pub fn normalized_difference(series: &SweepResult) -> Result<SweepResult> {
    let (sum, count) = series
        .points
        .iter()
        .filter(|(x, _)| *x < 0.0)
        .fold((0.0, 0usize), |(s, n), (_, o)| (s + o.i_v + o.i_h, n + 1));
    if count == 0 {
        return Err(Error::MissingBaseline);
    }
    let scale = sum / count as f64;
    if !(scale > 0.0) {
        return Err(Error::Domain(format!("baseline intensity sum {scale} is not positive")));
    }
    let points = series
        .points
        .iter()
        .map(|&(x, o)| {
            (
                x,
                Observables {
                    d_vh: (o.i_v - o.i_h) / scale,
                    ..o
                },
            )
        })
        .collect();
    Ok(SweepResult {
        variable_name: series.variable_name.clone(),
        points,
    })
}

/// Biexciton population after the pulse when it meets a fully coupled exciton.
pub fn transfer_probability(config: &ExperimentConfig) -> Result<f64> {
    match config.method {
        Method::Analytic => {
            config.pulse.validate()?;
            Ok(transferred_fraction(&config.pulse))
        }
        Method::Numeric => Ok(scattering_map(&config.pulse, &config.settings)?[(1, 0)].norm_sqr()),
    }
}

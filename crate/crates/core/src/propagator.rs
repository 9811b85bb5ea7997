//! Brute-force integration of the driven exciton–biexciton Schrödinger equation.
//!
//! Works in the frame co-rotating with the laser over the three levels
//! `(uncoupled exciton, coupled exciton, coupled biexciton)`; for an `R` pulse
//! that is `(|L⟩, |R⟩, |XX,+2⟩)`, for `L` the mirror image. The static part of
//! the Hamiltonian is removed by integrating in its interaction picture, so the
//! result is directly comparable to the instantaneous analytic map.

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exciton::{CircPolarization, DotParams, FullState};
use crate::rosenzener::PulseParams;

pub type Matrix3c = Matrix3<Complex64>;
pub type Vector3c = Vector3<Complex64>;

/// Norm drift beyond which a propagation is rejected.
pub const MAX_NORM_DRIFT: f64 = 1e-6;

const MAX_STEPS: usize = 2_000_000;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagationSettings {
    /// Integration span is `±window/σ` around the pulse centre.
    pub window: f64,
    pub rel_tol: f64,
    /// Keep the fine-structure precession switched on while the pulse acts.
    pub include_splitting_during_pulse: bool,
    pub pulse_center_ps: f64,
}

impl Default for PropagationSettings {
    fn default() -> Self {
        PropagationSettings {
            window: 20.0,
            rel_tol: 1e-10,
            include_splitting_during_pulse: false,
            pulse_center_ps: 0.0,
        }
    }
}

impl PropagationSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.window >= 5.0) || !self.window.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "window must be >= 5, got {}",
                self.window
            )));
        }
        if !(1e-14..=1e-6).contains(&self.rel_tol) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in [1e-14, 1e-6], got {:e}",
                self.rel_tol
            )));
        }
        if !self.pulse_center_ps.is_finite() {
            return Err(Error::InvalidParameter("pulse centre must be finite".into()));
        }
        Ok(())
    }

    pub fn with_center(self, pulse_center_ps: f64) -> Self {
        PropagationSettings {
            pulse_center_ps,
            ..self
        }
    }
}

/// Outcome of one propagation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Propagation {
    pub state: FullState,
    pub norm_drift: f64,
    pub steps: usize,
    pub rejected_steps: usize,
}

/// `H(t)/ℏ` in rad/ps over `(uncoupled exciton, coupled exciton, coupled biexciton)`.
pub fn hamiltonian(t_ps: f64, dot: &DotParams, pulse: &PulseParams, settings: &PropagationSettings) -> Matrix3c {
    let mut h = static_generator(dot, pulse, settings);
    let coupling = pulse_coupling(t_ps - settings.pulse_center_ps, pulse);
    h[(1, 2)] = Complex64::new(coupling, 0.0);
    h[(2, 1)] = Complex64::new(coupling, 0.0);
    h
}

/// Static part: exciton fine structure (when enabled) and the biexciton detuning.
fn static_generator(dot: &DotParams, pulse: &PulseParams, settings: &PropagationSettings) -> Matrix3c {
    let mut h = Matrix3c::zeros();
    if settings.include_splitting_during_pulse {
        // −(Δ/2)(|R⟩⟨L| + |L⟩⟨R|) generates the free precession
        let half = Complex64::new(-0.5 * dot.angular_frequency(), 0.0);
        h[(0, 1)] = half;
        h[(1, 0)] = half;
    }
    h[(2, 2)] = Complex64::new(-pulse.detuning_rad_ps(), 0.0);
    h
}

/// `exp(−i H₀ s)` for the static generator, in closed form.
fn static_evolution(dot: &DotParams, pulse: &PulseParams, settings: &PropagationSettings, s: f64) -> Matrix3c {
    let mut u = Matrix3c::identity();
    if settings.include_splitting_during_pulse {
        let (sin, cos) = (0.5 * dot.angular_frequency() * s).sin_cos();
        u[(0, 0)] = Complex64::new(cos, 0.0);
        u[(1, 1)] = Complex64::new(cos, 0.0);
        u[(0, 1)] = I * sin;
        u[(1, 0)] = I * sin;
    }
    u[(2, 2)] = Complex64::from_polar(1.0, pulse.detuning_rad_ps() * s);
    u
}

// −Ω sech(σs)
fn pulse_coupling(s: f64, pulse: &PulseParams) -> f64 {
    -pulse.rabi_rad_ps() / (pulse.bandwidth_rad_ps() * s).cosh()
}

fn to_channel(state: &FullState, pol: CircPolarization) -> Vector3c {
    Vector3c::new(
        state.uncoupled_exciton(pol),
        state.coupled_exciton(pol),
        state.coupled_biexciton(pol),
    )
}

fn from_channel(state: &FullState, pol: CircPolarization, v: &Vector3c) -> FullState {
    let mut out = *state;
    let (uncoupled, coupled, biexciton) = out.channel_mut(pol);
    *uncoupled = v[0];
    *coupled = v[1];
    *biexciton = v[2];
    out
}

fn channel_norm_sqr(v: &Vector3c) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// Pulse action on `state` with the free evolution over the integration window removed.
pub fn propagate(
    state: &FullState,
    dot: &DotParams,
    pulse: &PulseParams,
    settings: &PropagationSettings,
) -> Result<FullState> {
    Ok(propagate_detailed(state, dot, pulse, settings)?.state)
}

pub fn propagate_detailed(
    state: &FullState,
    dot: &DotParams,
    pulse: &PulseParams,
    settings: &PropagationSettings,
) -> Result<Propagation> {
    pulse.validate()?;
    settings.validate()?;
    let half_span = settings.window / pulse.bandwidth_rad_ps();
    let psi0 = to_channel(state, pulse.pol);

    let rhs = |s: f64, psi: &Vector3c| -> Vector3c {
        let u = static_evolution(dot, pulse, settings, s);
        let coupling = Complex64::new(pulse_coupling(s, pulse), 0.0);
        let mut v = Matrix3c::zeros();
        v[(1, 2)] = coupling;
        v[(2, 1)] = coupling;
        let interaction = u.adjoint() * v * u;
        -(interaction * psi) * I
    };
    let outcome = integrate(
        rhs,
        -half_span,
        half_span,
        psi0,
        settings.rel_tol,
        settings.pulse_center_ps,
    )?;

    let norm_drift = (channel_norm_sqr(&outcome.y) - channel_norm_sqr(&psi0)).abs();
    if norm_drift > MAX_NORM_DRIFT {
        return Err(Error::Norm { drift: norm_drift });
    }
    Ok(Propagation {
        state: from_channel(state, pulse.pol, &outcome.y),
        norm_drift,
        steps: outcome.steps,
        rejected_steps: outcome.rejected,
    })
}

/// Plain integration of `i dψ/dt = H(t) ψ` from `t_start_ps` to `t_end_ps`, no frame removal.
pub fn propagate_lab_frame(
    state: &FullState,
    dot: &DotParams,
    pulse: &PulseParams,
    settings: &PropagationSettings,
    t_start_ps: f64,
    t_end_ps: f64,
) -> Result<FullState> {
    pulse.validate()?;
    settings.validate()?;
    let psi0 = to_channel(state, pulse.pol);
    let rhs = |t: f64, psi: &Vector3c| -> Vector3c { -(hamiltonian(t, dot, pulse, settings) * psi) * I };
    let outcome = integrate(rhs, t_start_ps, t_end_ps, psi0, settings.rel_tol, 0.0)?;
    Ok(from_channel(state, pulse.pol, &outcome.y))
}

/// 2×2 map over `(coupled exciton, coupled biexciton)` for a pulse acting on its own,
/// without the fine-structure term.
pub fn scattering_map(pulse: &PulseParams, settings: &PropagationSettings) -> Result<Matrix2<Complex64>> {
    let settings = PropagationSettings {
        include_splitting_during_pulse: false,
        ..*settings
    };
    let dot = DotParams { splitting_uev: 0.0 };
    let mut exciton = FullState::new(ZERO, ZERO, ZERO, ZERO);
    let mut biexciton = exciton;
    {
        let (_, c, _) = exciton.channel_mut(pulse.pol);
        *c = ONE;
        let (_, _, x) = biexciton.channel_mut(pulse.pol);
        *x = ONE;
    }
    let from_exciton = propagate(&exciton, &dot, pulse, &settings)?;
    let from_biexciton = propagate(&biexciton, &dot, pulse, &settings)?;
    Ok(Matrix2::new(
        from_exciton.coupled_exciton(pulse.pol),
        from_biexciton.coupled_exciton(pulse.pol),
        from_exciton.coupled_biexciton(pulse.pol),
        from_biexciton.coupled_biexciton(pulse.pol),
    ))
}

struct Integration {
    y: Vector3c,
    steps: usize,
    rejected: usize,
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand–Prince integration with mixed absolute/relative error control.
/// `t_offset` only shifts reported times in errors.
fn integrate<F>(f: F, t0: f64, t1: f64, y0: Vector3c, rel_tol: f64, t_offset: f64) -> Result<Integration>
where
    F: Fn(f64, &Vector3c) -> Vector3c,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(Integration {
            y: y0,
            steps: 0,
            rejected: 0,
        });
    }
    let direction = span.signum();
    let abs_tol = rel_tol;
    let mut t = t0;
    let mut y = y0;
    let mut h = direction * span.abs() * 1e-3;
    let mut k = [Vector3c::zeros(); 7];
    k[0] = f(t, &y);
    let (mut steps, mut rejected) = (0usize, 0usize);

    while (t1 - t) * direction > 0.0 {
        if steps + rejected >= MAX_STEPS || h.abs() < 1e-14 * span.abs() {
            return Err(Error::Tolerance {
                rel_tol,
                t_ps: t + t_offset,
            });
        }
        if (t + h - t1) * direction > 0.0 {
            h = t1 - t;
        }
        for stage in 1..7 {
            let mut acc = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                if A[stage][j] != 0.0 {
                    acc += kj * Complex64::new(h * A[stage][j], 0.0);
                }
            }
            k[stage] = f(t + C[stage] * h, &acc);
        }
        let mut y_new = y;
        let mut err_vec = Vector3c::zeros();
        for (j, kj) in k.iter().enumerate() {
            y_new += kj * Complex64::new(h * B5[j], 0.0);
            err_vec += kj * Complex64::new(h * (B5[j] - B4[j]), 0.0);
        }
        let err = (0..3)
            .map(|i| {
                let scale = abs_tol + rel_tol * y[i].norm().max(y_new[i].norm());
                err_vec[i].norm() / scale
            })
            .fold(0.0, f64::max);

        if err <= 1.0 {
            t += h;
            y = y_new;
            // first-same-as-last
            k[0] = k[6];
            steps += 1;
        } else {
            rejected += 1;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(Integration { y, steps, rejected })
}

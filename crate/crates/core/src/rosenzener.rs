//! Analytic response of the exciton–biexciton pair to a hyperbolic-secant pulse
//! and the closed-form pump–probe observables that follow from it.
//!
//! A pulse with coupling `−ℏΩ sech(σt) e^{−iωt}` maps the coupled exciton
//! amplitude `c` and biexciton amplitude `x` (starting empty) to
//!
//! ```text
//! c -> F(α, −α; γ; 1) c
//! x -> x + (iα/γ) F(α+γ, −α+γ; 1+γ; 1) c
//! ```
//!
//! with `α = Ω/σ` and `γ = 1/2 − iδ/(2σ)`. The effective Bloch rotation area is
//! `2πα`, so `α = 1/2` is a π pulse.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exciton::{CircPolarization, DotParams, FullState, HBAR_UEV_PS};
use crate::specfun::gauss_2f1_unit;

/// Clamp window for the arcsine in [`rotation_angle`].
pub const ARCSIN_CLAMP: f64 = 1e-9;

/// Below this `1 − P⁰_XX` the exciton subspace is considered empty.
pub const DEGENERATE_THRESHOLD: f64 = 1e-12;

/// One control pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseParams {
    /// Rabi ratio α = Ω/σ.
    pub alpha: f64,
    /// ℏσ in μeV.
    pub bandwidth_uev: f64,
    /// ℏδ = ℏ(ω − ω₀) in μeV.
    pub detuning_uev: f64,
    pub pol: CircPolarization,
}

impl PulseParams {
    pub fn new(alpha: f64, bandwidth_uev: f64, detuning_uev: f64, pol: CircPolarization) -> Result<Self> {
        let pulse = PulseParams {
            alpha,
            bandwidth_uev,
            detuning_uev,
            pol,
        };
        pulse.validate()?;
        Ok(pulse)
    }

    /// Pulse given by its area in units of π (`area_over_pi = 2α`).
    pub fn from_area_over_pi(
        area_over_pi: f64,
        bandwidth_uev: f64,
        detuning_uev: f64,
        pol: CircPolarization,
    ) -> Result<Self> {
        PulseParams::new(0.5 * area_over_pi, bandwidth_uev, detuning_uev, pol)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rabi ratio must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        if !(self.bandwidth_uev > 0.0) || !self.bandwidth_uev.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bandwidth_ueV must be finite and > 0, got {}",
                self.bandwidth_uev
            )));
        }
        if !self.detuning_uev.is_finite() {
            return Err(Error::InvalidParameter("detuning_ueV must be finite".into()));
        }
        Ok(())
    }

    pub fn with_detuning(self, detuning_uev: f64) -> Self {
        PulseParams { detuning_uev, ..self }
    }

    pub fn with_pol(self, pol: CircPolarization) -> Self {
        PulseParams { pol, ..self }
    }

    pub fn area_over_pi(&self) -> f64 {
        2.0 * self.alpha
    }

    /// δ/σ.
    pub fn reduced_detuning(&self) -> f64 {
        self.detuning_uev / self.bandwidth_uev
    }

    /// γ = 1/2 − iδ/(2σ).
    pub fn gamma(&self) -> Complex64 {
        Complex64::new(0.5, -0.5 * self.reduced_detuning())
    }

    /// σ in rad/ps.
    pub fn bandwidth_rad_ps(&self) -> f64 {
        self.bandwidth_uev / HBAR_UEV_PS
    }

    /// δ in rad/ps.
    pub fn detuning_rad_ps(&self) -> f64 {
        self.detuning_uev / HBAR_UEV_PS
    }

    /// Ω in rad/ps.
    pub fn rabi_rad_ps(&self) -> f64 {
        self.alpha * self.bandwidth_rad_ps()
    }
}

/// ℏσ (μeV) of a sech pulse whose intensity profile `sech²(σt)` has the given FWHM.
///
/// Never applied implicitly: the bandwidth is always configured explicitly.
pub fn fwhm_to_bandwidth(fwhm_ps: f64) -> f64 {
    2.0 * std::f64::consts::SQRT_2.acosh() * HBAR_UEV_PS / fwhm_ps
}

/// `F(α, −α; γ; 1)`, the factor multiplying the coupled exciton amplitude.
pub fn survival_factor(pulse: &PulseParams) -> Result<Complex64> {
    pulse.validate()?;
    let alpha = Complex64::new(pulse.alpha, 0.0);
    gauss_2f1_unit(alpha, -alpha, pulse.gamma())
}

/// `(iα/γ) F(α+γ, −α+γ; 1+γ; 1)`, the amplitude sent into the biexciton.
pub fn transfer_factor(pulse: &PulseParams) -> Result<Complex64> {
    pulse.validate()?;
    let gamma = pulse.gamma();
    let alpha = Complex64::new(pulse.alpha, 0.0);
    let f = gauss_2f1_unit(alpha + gamma, -alpha + gamma, 1.0 + gamma)?;
    Ok(Complex64::new(0.0, pulse.alpha) / gamma * f)
}

/// `i sin(πα) / cosh(πδ/2σ)`; the reflection-formula reduction of [`transfer_factor`].
pub fn transfer_factor_reduced(pulse: &PulseParams) -> Complex64 {
    let x = pulse.reduced_detuning();
    Complex64::new(0.0, (PI * pulse.alpha).sin() / (0.5 * PI * x).cosh())
}

/// `P⁰_XX = sech²(πδ/2σ) sin²(πα)`: biexciton population from a fully coupled exciton.
pub fn transferred_fraction(pulse: &PulseParams) -> f64 {
    let x = pulse.reduced_detuning();
    ((PI * pulse.alpha).sin() / (0.5 * PI * x).cosh()).powi(2)
}

/// Instantaneous pulse map on the full state.
pub fn apply_pulse(state: &FullState, pulse: &PulseParams) -> Result<FullState> {
    let survival = survival_factor(pulse)?;
    let transfer = transfer_factor(pulse)?;
    let mut out = *state;
    let (_, exciton, biexciton) = out.channel_mut(pulse.pol);
    let before = *exciton;
    *exciton = survival * before;
    *biexciton += transfer * before;
    Ok(out)
}

/// Biexciton population after an exciton created with `first_pol` precesses for `tau_ps`
/// and is then hit by `pulse`.
pub fn pxx_closed_form(pulse: &PulseParams, dot: &DotParams, tau_ps: f64, first_pol: CircPolarization) -> f64 {
    let beat = (dot.angular_frequency() * tau_ps).cos();
    let overlap = if pulse.pol == first_pol {
        0.5 + 0.5 * beat
    } else {
        0.5 - 0.5 * beat
    };
    transferred_fraction(pulse) * overlap
}

/// `D⁰_VH = Im[Γ²(γ*) / (Γ(γ*+α) Γ(γ*−α))]`, the amplitude of the V−H population oscillation.
pub fn dvh_amplitude(pulse: &PulseParams) -> Result<f64> {
    pulse.validate()?;
    let alpha = Complex64::new(pulse.alpha, 0.0);
    Ok(gauss_2f1_unit(alpha, -alpha, pulse.gamma().conj())?.im)
}

/// `D_VH(τ) = ±D⁰_VH sin(Δτ)`, positive sign for a co-polarized pulse.
pub fn dvh_series(pulse: &PulseParams, dot: &DotParams, tau_ps: f64, first_pol: CircPolarization) -> Result<f64> {
    let amplitude = dvh_amplitude(pulse)?;
    let sign = if pulse.pol == first_pol { 1.0 } else { -1.0 };
    Ok(sign * amplitude * (dot.angular_frequency() * tau_ps).sin())
}

/// Rotation angle about the R–L axis, `θ = arcsin(D⁰_VH / √(1 − P⁰_XX))`.
pub fn rotation_angle(pulse: &PulseParams) -> Result<f64> {
    pulse.validate()?;
    let alpha = Complex64::new(pulse.alpha, 0.0);
    let f = gauss_2f1_unit(alpha, -alpha, pulse.gamma().conj())?;
    rotation_angle_from_parts(f.im, transferred_fraction(pulse), f.re)
}

/// The angle step of [`rotation_angle`] for any source of `D⁰_VH`, `P⁰_XX` and the
/// in-phase part `Re F` of the survival factor.
///
/// With `|F|² = 1 − P⁰_XX` the arcsine equals `atan2(D⁰_VH, |Re F|)`, which keeps
/// full precision near ±π/2; the arcsine argument is still range-checked.
pub fn rotation_angle_from_parts(dvh_amplitude: f64, transferred_fraction: f64, in_phase: f64) -> Result<f64> {
    let remaining = 1.0 - transferred_fraction;
    if remaining < DEGENERATE_THRESHOLD {
        return Err(Error::Degenerate {
            p_xx0: transferred_fraction,
        });
    }
    let arg = dvh_amplitude / remaining.sqrt();
    if !arg.is_finite() || !in_phase.is_finite() || arg.abs() > 1.0 + ARCSIN_CLAMP {
        return Err(Error::Domain(format!("arcsin argument {arg} outside [-1, 1]")));
    }
    Ok(dvh_amplitude.atan2(in_phase.abs()))
}

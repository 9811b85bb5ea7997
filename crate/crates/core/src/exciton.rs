//! Exciton spin states over `{|L⟩, |R⟩, |XX,−2⟩, |XX,+2⟩}`, the change to the
//! linear `{|H⟩, |V⟩}` eigenbasis, free precession and the Bloch vector.
//!
//! Basis convention: `|H⟩ = (|R⟩ + |L⟩)/√2`, `|V⟩ = (|R⟩ − |L⟩)/(i√2)`.
//! Free evolution multiplies the `|H⟩` amplitude by `e^{iΔt/2}` and the `|V⟩`
//! amplitude by `e^{−iΔt/2}`, so `E_V − E_H = ℏΔ`.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// ℏ in μeV·ps.
pub const HBAR_UEV_PS: f64 = 658.211_956_9;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Circular polarization of a pulse; `R` carries angular momentum +1, `L` carries −1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CircPolarization {
    R,
    L,
}

impl CircPolarization {
    pub fn angular_momentum(self) -> i32 {
        match self {
            CircPolarization::R => 1,
            CircPolarization::L => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            CircPolarization::R => CircPolarization::L,
            CircPolarization::L => CircPolarization::R,
        }
    }
}

/// Quantum-dot parameters: the fine-structure splitting ℏΔ of the bright exciton.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DotParams {
    pub splitting_uev: f64,
}

impl DotParams {
    pub fn new(splitting_uev: f64) -> Result<Self> {
        if !(splitting_uev >= 0.0) || !splitting_uev.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "splitting_ueV must be finite and >= 0, got {splitting_uev}"
            )));
        }
        Ok(DotParams { splitting_uev })
    }

    /// Δ in rad/ps.
    pub fn angular_frequency(&self) -> f64 {
        self.splitting_uev / HBAR_UEV_PS
    }

    /// Precession period `2πℏ / ℏΔ` in ps; infinite for a degenerate doublet.
    pub fn precession_period_ps(&self) -> f64 {
        2.0 * PI / self.angular_frequency()
    }
}

/// Probability amplitudes over `|L⟩, |R⟩, |XX,−2⟩, |XX,+2⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullState {
    pub amp_l: Complex64,
    pub amp_r: Complex64,
    pub amp_xx_m2: Complex64,
    pub amp_xx_p2: Complex64,
}

impl FullState {
    pub fn new(amp_l: Complex64, amp_r: Complex64, amp_xx_m2: Complex64, amp_xx_p2: Complex64) -> Self {
        FullState {
            amp_l,
            amp_r,
            amp_xx_m2,
            amp_xx_p2,
        }
    }

    /// Exciton-only state from circular amplitudes.
    pub fn exciton(amp_l: Complex64, amp_r: Complex64) -> Self {
        FullState::new(amp_l, amp_r, ZERO, ZERO)
    }

    /// Exciton-only state from linear amplitudes `⟨H|ψ⟩`, `⟨V|ψ⟩`.
    pub fn from_linear(amp_h: Complex64, amp_v: Complex64) -> Self {
        let amp_l = (amp_h + I * amp_v) * FRAC_1_SQRT_2;
        let amp_r = (amp_h - I * amp_v) * FRAC_1_SQRT_2;
        FullState::exciton(amp_l, amp_r)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.exciton_norm_sqr() + self.biexciton_population()
    }

    pub fn exciton_norm_sqr(&self) -> f64 {
        self.amp_l.norm_sqr() + self.amp_r.norm_sqr()
    }

    pub fn biexciton_population(&self) -> f64 {
        self.amp_xx_m2.norm_sqr() + self.amp_xx_p2.norm_sqr()
    }

    /// Exciton amplitude a pulse of polarization `pol` couples (`R` couples `|R⟩`).
    pub fn coupled_exciton(&self, pol: CircPolarization) -> Complex64 {
        match pol {
            CircPolarization::R => self.amp_r,
            CircPolarization::L => self.amp_l,
        }
    }

    pub fn uncoupled_exciton(&self, pol: CircPolarization) -> Complex64 {
        self.coupled_exciton(pol.opposite())
    }

    /// Biexciton amplitude reached from the coupled exciton (`R` reaches `|XX,+2⟩`).
    pub fn coupled_biexciton(&self, pol: CircPolarization) -> Complex64 {
        match pol {
            CircPolarization::R => self.amp_xx_p2,
            CircPolarization::L => self.amp_xx_m2,
        }
    }

    /// Mutable `(uncoupled exciton, coupled exciton, coupled biexciton)` amplitudes for `pol`.
    pub fn channel_mut(&mut self, pol: CircPolarization) -> (&mut Complex64, &mut Complex64, &mut Complex64) {
        match pol {
            CircPolarization::R => (&mut self.amp_l, &mut self.amp_r, &mut self.amp_xx_p2),
            CircPolarization::L => (&mut self.amp_r, &mut self.amp_l, &mut self.amp_xx_m2),
        }
    }

    /// Largest absolute amplitude difference against `other`.
    pub fn max_abs_diff(&self, other: &FullState) -> f64 {
        [
            self.amp_l - other.amp_l,
            self.amp_r - other.amp_r,
            self.amp_xx_m2 - other.amp_xx_m2,
            self.amp_xx_p2 - other.amp_xx_p2,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }
}

/// Exciton spin state on the Bloch sphere; poles are `|V⟩` (z = +1) and `|H⟩` (z = −1),
/// and x is the circular polarization degree `|R|² − |L|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn length(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// The exciton left behind by a circularly polarized excitation pulse.
pub fn init_exciton(pol: CircPolarization) -> FullState {
    let one = Complex64::new(1.0, 0.0);
    match pol {
        CircPolarization::R => FullState::exciton(ZERO, one),
        CircPolarization::L => FullState::exciton(one, ZERO),
    }
}

/// `(⟨H|ψ⟩, ⟨V|ψ⟩)`.
pub fn to_linear(state: &FullState) -> (Complex64, Complex64) {
    let amp_h = (state.amp_l + state.amp_r) * FRAC_1_SQRT_2;
    let amp_v = I * (state.amp_r - state.amp_l) * FRAC_1_SQRT_2;
    (amp_h, amp_v)
}

/// Free precession of the exciton spin over `dt_ps`; biexciton amplitudes are untouched.
pub fn precess(state: &FullState, dot: &DotParams, dt_ps: f64) -> FullState {
    let half_angle = 0.5 * dot.angular_frequency() * dt_ps;
    let (s, c) = half_angle.sin_cos();
    let is = I * s;
    FullState {
        amp_l: c * state.amp_l + is * state.amp_r,
        amp_r: is * state.amp_l + c * state.amp_r,
        ..*state
    }
}

pub fn bloch_vector(state: &FullState) -> BlochVector {
    let cross = state.amp_l * state.amp_r.conj();
    BlochVector {
        x: state.amp_r.norm_sqr() - state.amp_l.norm_sqr(),
        y: -2.0 * cross.im,
        z: -2.0 * cross.re,
    }
}

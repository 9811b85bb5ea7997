//! Run configuration file (TOML). Energies in μeV, times in ps, angles in rad.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use excirot_core::designer::SignPreference;
use excirot_core::exciton::{CircPolarization, DotParams};
use excirot_core::experiment::Method;
use excirot_core::propagator::PropagationSettings;
use excirot_core::rosenzener::PulseParams;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Analytic,
    Numeric,
}

impl From<MethodName> for Method {
    fn from(m: MethodName) -> Self {
        match m {
            MethodName::Analytic => Method::Analytic,
            MethodName::Numeric => Method::Numeric,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, Default)]
pub enum Circular {
    #[default]
    R,
    L,
}

impl From<Circular> for CircPolarization {
    fn from(c: Circular) -> Self {
        match c {
            Circular::R => CircPolarization::R,
            Circular::L => CircPolarization::L,
        }
    }
}

/// Control-pulse polarization, relative to the first pulse or absolute.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, Default)]
pub enum ControlPolarization {
    #[default]
    #[serde(rename = "co")]
    Co,
    #[serde(rename = "cross")]
    Cross,
    #[serde(rename = "both")]
    Both,
    R,
    L,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum SignName {
    #[default]
    Positive,
    Negative,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DotSection {
    #[serde(rename = "splitting_ueV")]
    pub splitting_uev: f64,
}

#[derive(Clone, Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FirstPulseSection {
    #[serde(default)]
    pub polarization: Circular,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlPulseSection {
    pub rabi_ratio: Option<f64>,
    pub area_over_pi: Option<f64>,
    #[serde(rename = "bandwidth_ueV")]
    pub bandwidth_uev: f64,
    #[serde(rename = "detuning_ueV", default)]
    pub detuning_uev: f64,
    #[serde(default)]
    pub polarization: ControlPolarization,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagationSection {
    pub window: Option<f64>,
    pub rel_tol: Option<f64>,
    pub include_splitting_during_pulse: Option<bool>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetuningGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    #[serde(default)]
    pub tau_ps: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    pub theta_rad: f64,
    #[serde(default)]
    pub sign_preference: SignName,
}

/// Overrides for the Lanczos Gamma coefficients used by `verify`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub lanczos_g: Option<f64>,
    pub lanczos_coefficients: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub method: Option<MethodName>,
    pub output_path: Option<PathBuf>,
    pub dot: Option<DotSection>,
    #[serde(default)]
    pub first_pulse: FirstPulseSection,
    pub control_pulse: Option<ControlPulseSection>,
    pub propagation: Option<PropagationSection>,
    pub delay_ps: Option<Grid>,
    #[serde(rename = "detuning_ueV")]
    pub detuning_uev: Option<DetuningGrid>,
    pub design: Option<DesignSection>,
    pub verify: Option<VerifySection>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn dot(&self) -> Result<DotParams, CliError> {
        let dot = self.dot.as_ref().ok_or_else(|| missing("dot"))?;
        DotParams::new(dot.splitting_uev).map_err(|e| CliError::Config(format!("[dot] {e}")))
    }

    pub fn first_pol(&self) -> CircPolarization {
        self.first_pulse.polarization.into()
    }

    pub fn control(&self) -> Result<&ControlPulseSection, CliError> {
        self.control_pulse.as_ref().ok_or_else(|| missing("control_pulse"))
    }

    /// Control pulse with its absolute polarization; `both` yields the co-polarized one.
    pub fn pulse(&self) -> Result<PulseParams, CliError> {
        let c = self.control()?;
        let alpha = match (c.rabi_ratio, c.area_over_pi) {
            (Some(a), None) => a,
            (None, Some(area)) => 0.5 * area,
            _ => {
                return Err(CliError::Config(
                    "[control_pulse] give exactly one of rabi_ratio or area_over_pi".into(),
                ))
            }
        };
        let first = self.first_pol();
        let pol = match c.polarization {
            ControlPolarization::Co | ControlPolarization::Both => first,
            ControlPolarization::Cross => first.opposite(),
            ControlPolarization::R => CircPolarization::R,
            ControlPolarization::L => CircPolarization::L,
        };
        PulseParams::new(alpha, c.bandwidth_uev, c.detuning_uev, pol)
            .map_err(|e| CliError::Config(format!("[control_pulse] {e}")))
    }

    pub fn settings(&self) -> Result<PropagationSettings, CliError> {
        let mut s = PropagationSettings::default();
        if let Some(p) = &self.propagation {
            s.window = p.window.unwrap_or(s.window);
            s.rel_tol = p.rel_tol.unwrap_or(s.rel_tol);
            s.include_splitting_during_pulse = p.include_splitting_during_pulse.unwrap_or(false);
        }
        s.validate()
            .map_err(|e| CliError::Config(format!("[propagation] {e}")))?;
        Ok(s)
    }

    pub fn method(&self, flag: Option<MethodName>) -> Method {
        flag.or(self.method).unwrap_or(MethodName::Analytic).into()
    }

    pub fn sign_preference(&self) -> Result<(f64, SignPreference), CliError> {
        let d = self.design.as_ref().ok_or_else(|| missing("design"))?;
        if !d.theta_rad.is_finite() {
            return Err(CliError::Config("[design] theta_rad must be finite".into()));
        }
        let pref = match d.sign_preference {
            SignName::Positive => SignPreference::PositiveDetuning,
            SignName::Negative => SignPreference::NegativeDetuning,
        };
        Ok((d.theta_rad, pref))
    }
}

fn missing(section: &str) -> CliError {
    CliError::Config(format!("missing section [{section}]"))
}

/// `start + i·step` for every point not beyond `stop`.
pub fn grid_points(section: &str, start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err(CliError::Config(format!(
            "[{section}] start, stop and step must be finite"
        )));
    }
    if !(step > 0.0) {
        return Err(CliError::Config(format!("[{section}] step must be > 0, got {step}")));
    }
    if !(stop > start) {
        return Err(CliError::Config(format!("[{section}] stop must exceed start")));
    }
    let n = ((stop - start) / step + 1e-9).floor();
    if n > 1e7 {
        return Err(CliError::Config(format!("[{section}] grid has more than 1e7 points")));
    }
    Ok((0..=n as usize).map(|i| start + i as f64 * step).collect())
}

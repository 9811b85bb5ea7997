//! Self-check suite: Gamma accuracy, unitarity, the analytic map against the
//! propagator, and the exact fixed points. The analytic side is evaluated through
//! the supplied [`Lanczos`] so a bad coefficient set is caught.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::exciton::{CircPolarization, DotParams, FullState};
use crate::propagator::{propagate_detailed, PropagationSettings};
use crate::rosenzener::{rotation_angle_from_parts, PulseParams};
use crate::specfun::Lanczos;

pub const ORACLE_TOLERANCE: f64 = 1e-6;
pub const UNITARITY_TOLERANCE: f64 = 1e-10;
pub const DRIFT_TOLERANCE: f64 = 1e-9;

const GAMMA_REFERENCE: [((f64, f64), (f64, f64)); 7] = [
    ((1.0, 1.0), (0.498_015_668_118_356_04, -0.154_949_828_301_810_69)),
    ((0.15, 0.0), (6.220_272_874_049_877_6, 0.0)),
    ((-2.5, 0.0), (-0.945_308_720_482_941_9, 0.0)),
    ((10.0, 15.0), (38.578_362_943_224_17, 0.473_431_696_379_995)),
    (
        (-3.3, 2.0),
        (-0.002_122_716_658_240_335_7, -0.000_534_675_846_680_656_6),
    ),
    ((0.5, -12.0), (8.443_121_328_115_217e-9, 1.397_115_207_222_601_7e-8)),
    ((18.0, -6.0), (1_140_903_560_058.177_5, 129_664_726_571_797.58)),
];

/// Parameter grid shared by the unitarity and oracle checks.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyGrid {
    pub alphas: Vec<f64>,
    pub reduced_detunings: Vec<f64>,
    pub bandwidth_uev: f64,
    pub settings: PropagationSettings,
}

impl Default for VerifyGrid {
    /// `α ∈ {0, 0.1, …, 1.5}` by `δ/σ ∈ {−3, −2.75, …, 3}` at `ℏσ = 145 μeV`.
    fn default() -> Self {
        VerifyGrid {
            alphas: (0..=15).map(|k| k as f64 / 10.0).collect(),
            reduced_detunings: (-12..=12).map(|k| k as f64 * 0.25).collect(),
            bandwidth_uev: 145.0,
            settings: PropagationSettings::default(),
        }
    }
}

impl VerifyGrid {
    fn pulses(&self) -> Vec<PulseParams> {
        let mut out = Vec::with_capacity(self.alphas.len() * self.reduced_detunings.len());
        for &alpha in &self.alphas {
            for &x in &self.reduced_detunings {
                out.push(PulseParams {
                    alpha,
                    bandwidth_uev: self.bandwidth_uev,
                    detuning_uev: x * self.bandwidth_uev,
                    pol: CircPolarization::R,
                });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst deviation seen, in the units of the check.
    pub max_error: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {:<20} max_error={:.3e}  {}", c.name, c.max_error, c.detail)?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "verify: all checks passed"
            } else {
                "verify: FAILED"
            }
        )
    }
}

fn check(name: &'static str, max_error: f64, tolerance: f64, detail: String) -> Check {
    Check {
        name,
        passed: max_error.is_finite() && max_error < tolerance,
        max_error,
        detail,
    }
}

fn failed(name: &'static str, detail: String) -> Check {
    Check {
        name,
        passed: false,
        max_error: f64::INFINITY,
        detail,
    }
}

/// `(F, T)`: survival and transfer factors evaluated with `lanczos`.
fn factors(lanczos: &Lanczos, pulse: &PulseParams) -> Result<(Complex64, Complex64)> {
    let gamma = pulse.gamma();
    let alpha = Complex64::new(pulse.alpha, 0.0);
    let survival = lanczos.gauss_2f1_unit(alpha, -alpha, gamma)?;
    let series = lanczos.gauss_2f1_unit(alpha + gamma, -alpha + gamma, 1.0 + gamma)?;
    Ok((survival, Complex64::new(0.0, pulse.alpha) / gamma * series))
}

fn gamma_reference(lanczos: &Lanczos) -> Check {
    let mut worst = 0.0f64;
    for ((zr, zi), (wr, wi)) in GAMMA_REFERENCE {
        let want = Complex64::new(wr, wi);
        match lanczos.gamma(Complex64::new(zr, zi)) {
            Ok(got) => worst = worst.max((got - want).norm() / want.norm()),
            Err(e) => return failed("gamma_reference", format!("Γ({zr}+{zi}i): {e}")),
        }
    }
    check(
        "gamma_reference",
        worst,
        1e-12,
        format!("{} reference points, relative error", GAMMA_REFERENCE.len()),
    )
}

fn gamma_identities(lanczos: &Lanczos) -> Check {
    let mut worst = 0.0f64;
    for i in 1..=30 {
        for j in -30..=30 {
            let z = Complex64::new(0.2 * i as f64, 0.3 * j as f64);
            let (Ok(a), Ok(b)) = (lanczos.ln_gamma(z + 1.0), lanczos.ln_gamma(z)) else {
                return failed("gamma_identities", format!("evaluation failed near {z}"));
            };
            let lhs = a.exp();
            let rhs = z * b.exp();
            worst = worst.max((lhs - rhs).norm() / rhs.norm());
        }
    }
    for k in -40..=40 {
        let y = 0.5 * k as f64;
        let Ok(g) = lanczos.ln_gamma(Complex64::new(0.5, y)) else {
            return failed("gamma_identities", format!("evaluation failed at 1/2 + {y}i"));
        };
        let want = PI / (PI * y).cosh();
        worst = worst.max(((2.0 * g.re).exp() - want).abs() / want);
    }
    check(
        "gamma_identities",
        worst,
        1e-10,
        "recurrence and |Γ(1/2+iy)|² = π/cosh(πy)".into(),
    )
}

fn unitarity(lanczos: &Lanczos, grid: &VerifyGrid) -> Check {
    let mut worst_norm = 0.0f64;
    let mut worst_reduced = 0.0f64;
    for pulse in grid.pulses() {
        let (f, t) = match factors(lanczos, &pulse) {
            Ok(v) => v,
            Err(e) => {
                return failed(
                    "unitarity",
                    format!("α={}, δ/σ={}: {e}", pulse.alpha, pulse.reduced_detuning()),
                )
            }
        };
        worst_norm = worst_norm.max((f.norm_sqr() + t.norm_sqr() - 1.0).abs());
        let reduced = Complex64::new(
            0.0,
            (PI * pulse.alpha).sin() / (0.5 * PI * pulse.reduced_detuning()).cosh(),
        );
        worst_reduced = worst_reduced.max((t - reduced).norm());
    }
    let worst = worst_norm.max(worst_reduced);
    check(
        "unitarity",
        worst,
        UNITARITY_TOLERANCE,
        format!("||F|²+|T|²−1| = {worst_norm:.2e}, |T − i sin(πα) sech(πδ/2σ)| = {worst_reduced:.2e}"),
    )
}

/// Exciton-only input used for the oracle comparison.
fn probe_state() -> FullState {
    FullState::exciton(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8))
}

fn oracle(lanczos: &Lanczos, grid: &VerifyGrid) -> Vec<Check> {
    let dot = DotParams { splitting_uev: 0.0 };
    let settings = PropagationSettings {
        include_splitting_during_pulse: false,
        ..grid.settings
    };
    let input = probe_state();
    let outcomes: Vec<std::result::Result<(f64, f64), String>> = grid
        .pulses()
        .par_iter()
        .map(|pulse| {
            let (f, t) = factors(lanczos, pulse).map_err(|e| e.to_string())?;
            let mut analytic = input;
            let (_, x, xx) = analytic.channel_mut(pulse.pol);
            *xx += t * *x;
            *x *= f;
            let numeric = propagate_detailed(&input, &dot, pulse, &settings).map_err(|e| e.to_string())?;
            Ok((analytic.max_abs_diff(&numeric.state), numeric.norm_drift))
        })
        .collect();
    let mut worst = 0.0f64;
    let mut drift = 0.0f64;
    for o in &outcomes {
        match o {
            Ok((d, n)) => {
                worst = worst.max(*d);
                drift = drift.max(*n);
            }
            Err(e) => return vec![failed("oracle_grid", e.clone())],
        }
    }
    vec![
        check(
            "oracle_grid",
            worst,
            ORACLE_TOLERANCE,
            format!("{} pulses, max |analytic − propagated| amplitude", outcomes.len()),
        ),
        check("norm_drift", drift, DRIFT_TOLERANCE, "propagator norm drift".into()),
    ]
}

fn fixed_points(lanczos: &Lanczos) -> Check {
    let run = || -> Result<(f64, f64, f64, f64)> {
        let sigma = 145.0;
        let pi_pulse = PulseParams::new(0.5, sigma, 0.0, CircPolarization::R)?;
        let (_, t) = factors(lanczos, &pi_pulse)?;
        let full_transfer = (t.norm_sqr() - 1.0).abs();

        let quarter = PulseParams::new(1.0, sigma, sigma, CircPolarization::R)?;
        let (f, t) = factors(lanczos, &quarter)?;
        let theta = rotation_angle_from_parts(-f.im, t.norm_sqr(), f.re)?;
        let quarter_err = (theta - FRAC_PI_2).abs();

        let mut resonant = 0.0f64;
        for k in 0..=15 {
            let p = PulseParams::new(0.1 * k as f64, sigma, 0.0, CircPolarization::R)?;
            let (f, _) = factors(lanczos, &p)?;
            resonant = resonant.max(f.im.abs());
        }
        Ok((full_transfer, quarter_err, t.norm_sqr(), resonant))
    };
    match run() {
        Ok((full, quarter, residual, resonant)) => {
            let worst = full.max(quarter);
            let exact = residual < 1e-12 && resonant == 0.0;
            Check {
                name: "fixed_points",
                passed: worst < 1e-9 && exact,
                max_error: worst.max(resonant),
                detail: format!(
                    "|P_XX−1| = {full:.2e} at α=1/2; |θ−π/2| = {quarter:.2e}, P⁰_XX = {residual:.2e} at α=1, δ=σ; max |D⁰| at δ=0 = {resonant:e}"
                ),
            }
        }
        Err(e) => failed("fixed_points", e.to_string()),
    }
}

pub fn run(lanczos: &Lanczos) -> VerifyReport {
    run_with_grid(lanczos, &VerifyGrid::default())
}

pub fn run_with_grid(lanczos: &Lanczos, grid: &VerifyGrid) -> VerifyReport {
    let mut checks = vec![
        gamma_reference(lanczos),
        gamma_identities(lanczos),
        unitarity(lanczos, grid),
    ];
    checks.extend(oracle(lanczos, grid));
    checks.push(fixed_points(lanczos));
    VerifyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> VerifyGrid {
        VerifyGrid {
            alphas: vec![0.0, 0.35, 1.0],
            reduced_detunings: vec![-1.5, 0.0, 2.0],
            ..VerifyGrid::default()
        }
    }

    #[test]
    fn clean_coefficients_pass() {
        let report = run_with_grid(&Lanczos::GODFREY, &small_grid());
        assert!(report.passed(), "{report}");
        assert!(report.check("oracle_grid").unwrap().max_error < ORACLE_TOLERANCE);
    }

    #[test]
    fn perturbed_coefficients_fail() {
        let mut coefficients = Lanczos::GODFREY.coefficients;
        coefficients[3] *= 1.0 + 1e-7;
        let bad = Lanczos::with_coefficients(Lanczos::GODFREY.g, coefficients);
        let report = run_with_grid(&bad, &small_grid());
        assert!(!report.passed());
        assert!(!report.check("gamma_reference").unwrap().passed);
        assert!(report.to_string().contains("FAIL"));
    }
}

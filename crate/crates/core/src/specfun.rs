//! Complex Gamma function and the Gauss hypergeometric function at unit argument.
//!
//! `ln Γ` uses a Lanczos approximation (g = 607/128, 15 terms) on `Re z >= 1/2`
//! and the reflection formula elsewhere. `₂F₁(a, b; c; 1)` is evaluated with
//! Gauss's summation theorem, which is all the sech-pulse solution needs.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Absolute distance to a non-positive integer below which `z` counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Lanczos coefficients for the Gamma function.
#[derive(Clone, Debug, PartialEq)]
pub struct Lanczos {
    pub g: f64,
    pub coefficients: [f64; 15],
}

impl Lanczos {
    /// Godfrey's g = 607/128 set; relative error of Γ near 1e-15.
    pub const GODFREY: Lanczos = Lanczos {
        g: 607.0 / 128.0,
        coefficients: [
            0.999_999_999_999_997_1,
            57.156_235_665_862_92,
            -59.597_960_355_475_49,
            14.136_097_974_741_747,
            -0.491_913_816_097_620_2,
            0.339_946_499_848_118_9e-4,
            0.465_236_289_270_485_8e-4,
            -0.983_744_753_048_795_6e-4,
            0.158_088_703_224_912_5e-3,
            -0.210_264_441_724_104_9e-3,
            0.217_439_618_115_212_6e-3,
            -0.164_318_106_536_763_9e-3,
            0.844_182_239_838_527_4e-4,
            -0.261_908_384_015_814_1e-4,
            0.368_991_826_595_316_2e-5,
        ],
    };

    pub fn with_coefficients(g: f64, coefficients: [f64; 15]) -> Self {
        Lanczos { g, coefficients }
    }

    /// Logarithm of Γ(z).
    ///
    /// `exp(ln_gamma(z)) == Γ(z)`. For real `z` the imaginary part is `0` or `π`
    /// according to the sign of Γ; for `Re z >= 1/2` it is continuous in `z`.
    pub fn ln_gamma(&self, z: Complex64) -> Result<Complex64> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite("ln_gamma argument"));
        }
        if is_pole(z) {
            return Err(Error::Pole(z));
        }
        if z.im == 0.0 {
            let (ln_abs, sign) = self.ln_abs_gamma_real(z.re);
            let im = if sign < 0.0 { PI } else { 0.0 };
            return Ok(Complex64::new(ln_abs, im));
        }
        let value = if z.re < 0.5 {
            // Γ(z) Γ(1 - z) = π / sin(πz)
            Complex64::new(LN_PI, 0.0) - sin_pi_complex(z).ln() - self.ln_gamma_right(1.0 - z)
        } else {
            self.ln_gamma_right(z)
        };
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite("ln_gamma"))
        }
    }

    /// Γ(z) itself.
    pub fn gamma(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.ln_gamma(z)?.exp())
    }

    /// `₂F₁(a, b; c; 1) = Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b))`.
    ///
    /// Requires `Re(c − a − b) > 0` unless `a` or `b` is zero. A pole of Γ(c−a) or Γ(c−b) gives exactly
    /// zero; real arguments give an exactly real result.
    pub fn gauss_2f1_unit(&self, a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64> {
        // terminating series
        if a == Complex64::new(0.0, 0.0) || b == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let s = c - a - b;
        if !(s.re > 0.0) {
            return Err(Error::Domain(format!(
                "Gauss's theorem needs Re(c - a - b) > 0, got {}",
                s.re
            )));
        }
        if is_pole(c) {
            return Err(Error::Pole(c));
        }
        let (ca, cb) = (c - a, c - b);
        if is_pole(ca) || is_pole(cb) {
            return Ok(Complex64::new(0.0, 0.0));
        }

        if a.im == 0.0 && b.im == 0.0 && c.im == 0.0 {
            let parts = [
                self.ln_abs_gamma_real(c.re),
                self.ln_abs_gamma_real(s.re),
                self.ln_abs_gamma_real(ca.re),
                self.ln_abs_gamma_real(cb.re),
            ];
            let sign = parts[0].1 * parts[1].1 * parts[2].1 * parts[3].1;
            let ln = parts[0].0 + parts[1].0 - parts[2].0 - parts[3].0;
            return Ok(Complex64::new(sign * ln.exp(), 0.0));
        }

        let ln = self.ln_gamma(c)? + self.ln_gamma(s)? - self.ln_gamma(ca)? - self.ln_gamma(cb)?;
        let value = ln.exp();
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite("gauss_2f1_unit"))
        }
    }

    fn lanczos_sum(&self, w: Complex64) -> Complex64 {
        let mut acc = Complex64::new(self.coefficients[0], 0.0);
        for (k, &coef) in self.coefficients.iter().enumerate().skip(1) {
            acc += coef / (w + k as f64);
        }
        acc
    }

    // Re z >= 1/2.
    fn ln_gamma_right(&self, z: Complex64) -> Complex64 {
        let w = z - 1.0;
        let t = w + self.g + 0.5;
        LN_SQRT_2PI + (w + 0.5) * t.ln() - t + self.lanczos_sum(w).ln()
    }

    /// `(ln|Γ(x)|, sign Γ(x))` for real non-pole `x`.
    fn ln_abs_gamma_real(&self, x: f64) -> (f64, f64) {
        if x >= 0.5 {
            let w = x - 1.0;
            let t = w + self.g + 0.5;
            let mut sum = self.coefficients[0];
            for (k, &coef) in self.coefficients.iter().enumerate().skip(1) {
                sum += coef / (w + k as f64);
            }
            (LN_SQRT_2PI + (w + 0.5) * t.ln() - t + sum.ln(), 1.0)
        } else {
            let s = sin_pi(x);
            let (ln_reflected, sign_reflected) = self.ln_abs_gamma_real(1.0 - x);
            (LN_PI - s.abs().ln() - ln_reflected, s.signum() * sign_reflected)
        }
    }
}

impl Default for Lanczos {
    fn default() -> Self {
        Lanczos::GODFREY
    }
}

/// `ln Γ(z)` with the default coefficient set.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    Lanczos::GODFREY.ln_gamma(z)
}

/// `₂F₁(a, b; c; 1)` with the default coefficient set.
pub fn gauss_2f1_unit(a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64> {
    Lanczos::GODFREY.gauss_2f1_unit(a, b, c)
}

/// True when `z` lies within [`POLE_TOLERANCE`] of 0, −1, −2, …
pub fn is_pole(z: Complex64) -> bool {
    let nearest = z.re.round();
    nearest <= 0.0 && (z.re - nearest).hypot(z.im) < POLE_TOLERANCE
}

// sin(πx) with the argument reduced exactly, so zeros at integers stay accurate.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * r).sin()
}

fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn sin_pi_complex(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    Complex64::new(sin_pi(x) * (PI * y).cosh(), cos_pi(x) * (PI * y).sinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel_err(got: Complex64, want: Complex64) -> f64 {
        (got - want).norm() / want.norm()
    }

    /// Gauss series at z = 1 summed to `n_terms`, plus an Euler–Maclaurin tail
    /// whose prefactor is read off the last term (t_n ~ K n^q, q = a + b − c − 1).
    fn series_at_unit_argument(a: Complex64, b: Complex64, cc: Complex64, n_terms: usize) -> Complex64 {
        let mut term = c(1.0, 0.0);
        let mut sum = c(0.0, 0.0);
        for n in 0..n_terms {
            sum += term;
            let nf = n as f64;
            term *= (a + nf) * (b + nf) / ((cc + nf) * (1.0 + nf));
        }
        let n = n_terms as f64;
        let q = a + b - cc - 1.0;
        let n_pow = |p: Complex64| (p * n.ln()).exp();
        let k = term / n_pow(q);
        let tail = k * (-n_pow(q + 1.0) / (q + 1.0) + n_pow(q) * 0.5 - q * n_pow(q - 1.0) / 12.0);
        sum + tail
    }

    #[test]
    fn ln_gamma_at_one_and_half() {
        assert!(ln_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        let half = ln_gamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - 0.572_364_942_924_700_1).abs() < 1e-14);
        assert_eq!(half.im, 0.0);
    }

    #[test]
    fn critical_line_modulus_matches_reflection_identity() {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        for &y in &[0.5, -0.5, 0.1, 1.3, -2.7, 5.0, 12.0, -19.5] {
            let g = ln_gamma(c(0.5, y)).unwrap();
            let modulus_sq = (2.0 * g.re).exp();
            let want = PI / (PI * y).cosh();
            assert!(
                (modulus_sq - want).abs() / want < 1e-12,
                "y={y}: {modulus_sq} vs {want}"
            );
        }
    }

    #[test]
    fn gamma_matches_high_precision_values() {
        let cases = [
            (c(1.0, 1.0), c(0.498_015_668_118_356_04, -0.154_949_828_301_810_69)),
            (c(0.15, 0.0), c(6.220_272_874_049_877_6, 0.0)),
            (c(-2.5, 0.0), c(-0.945_308_720_482_941_9, 0.0)),
            (c(10.0, 15.0), c(38.578_362_943_224_17, 0.473_431_696_379_995)),
            (
                c(-3.3, 2.0),
                c(-0.002_122_716_658_240_335_7, -0.000_534_675_846_680_656_6),
            ),
            (c(0.5, -12.0), c(8.443_121_328_115_217e-9, 1.397_115_207_222_601_7e-8)),
            (c(18.0, -6.0), c(1_140_903_560_058.177_5, 129_664_726_571_797.58)),
        ];
        for (z, want) in cases {
            let got = Lanczos::GODFREY.gamma(z).unwrap();
            assert!(rel_err(got, want) < 1e-12, "Γ({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        for z in [
            c(0.0, 0.0),
            c(-1.0, 0.0),
            c(-4.0, 0.0),
            c(-3.0 + 5e-13, 0.0),
            c(-2.0, 1e-13),
        ] {
            assert!(matches!(ln_gamma(z), Err(Error::Pole(_))), "{z}");
        }
        assert!(ln_gamma(c(-3.0 + 1e-9, 0.0)).is_ok());
        assert!(ln_gamma(c(0.0, 1e-9)).is_ok());
        assert!(matches!(ln_gamma(c(f64::NAN, 0.0)), Err(Error::NonFinite(_))));
    }

    #[test]
    fn recurrence_on_grid() {
        for i in 1..=50 {
            for j in -50..=50 {
                let z = c(0.1 * i as f64, 0.1 * j as f64);
                let lhs = ln_gamma(z + 1.0).unwrap().exp();
                let rhs = z * ln_gamma(z).unwrap().exp();
                assert!(rel_err(lhs, rhs) < 1e-10, "z={z}");
            }
        }
    }

    #[test]
    fn gauss_empty_series_is_one() {
        for b in [c(0.3, 0.0), c(-2.0, 1.0), c(7.5, -3.0)] {
            assert_eq!(gauss_2f1_unit(c(0.0, 0.0), b, c(0.5, 0.0)).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn gauss_denominator_pole_gives_zero() {
        let f = gauss_2f1_unit(c(0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0)).unwrap();
        assert_eq!(f, c(0.0, 0.0));
    }

    #[test]
    fn gauss_seventh_tenths_pi_pulse_value() {
        // Γ(1/2)² / (Γ(0.15) Γ(0.85)) = sin(0.15π) = cos(0.35π)
        let f = gauss_2f1_unit(c(0.35, 0.0), c(-0.35, 0.0), c(0.5, 0.0)).unwrap();
        assert!((f.re - (0.35 * PI).cos()).abs() < 1e-14);
        assert_eq!(f.im, 0.0);
        assert!((f.re - 0.453_990_499_739_546_85).abs() < 1e-14);
        let series = series_at_unit_argument(c(0.35, 0.0), c(-0.35, 0.0), c(0.5, 0.0), 200_000);
        assert!((series - f).norm() < 1e-5);
    }

    #[test]
    fn gauss_domain_and_pole_errors() {
        assert!(matches!(
            gauss_2f1_unit(c(1.0, 0.0), c(1.0, 0.0), c(1.5, 0.0)),
            Err(Error::Domain(_))
        ));
        // c at a pole, Re(c − a − b) > 0
        assert!(matches!(
            gauss_2f1_unit(c(-1.5, 0.0), c(-0.5, 0.0), c(-1.0, 0.0)),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn gauss_matches_series_oracle_on_grid() {
        let mut worst: f64 = 0.0;
        for &(are, aim) in &[(0.2, 0.0), (0.7, 0.3), (-0.4, 0.9), (1.1, -0.5)] {
            for &(bre, bim) in &[(-0.3, 0.0), (0.25, -0.6), (-1.2, 0.4)] {
                for &s in &[0.4, 0.5, 0.9, 1.7] {
                    for &cim in &[0.0, -0.8, 1.5] {
                        let a = c(are, aim);
                        let b = c(bre, bim);
                        let cc = a + b + c(s, cim);
                        let exact = gauss_2f1_unit(a, b, cc).unwrap();
                        let series = series_at_unit_argument(a, b, cc, 100_000);
                        worst = worst.max((exact - series).norm());
                    }
                }
            }
        }
        assert!(worst < 1e-5, "worst series deviation {worst:e}");
    }

    #[test]
    fn sech_pulse_unitarity() {
        for i in 0..=30 {
            let alpha = 0.05 * i as f64;
            for j in -12..=12 {
                let x = 0.25 * j as f64;
                let gamma = c(0.5, -0.5 * x);
                let f = gauss_2f1_unit(c(alpha, 0.0), c(-alpha, 0.0), gamma).unwrap();
                let transferred = (PI * alpha).sin().powi(2) / (0.5 * PI * x).cosh().powi(2);
                assert!((f.norm_sqr() + transferred - 1.0).abs() < 1e-10, "alpha={alpha} x={x}");
            }
        }
    }

    #[test]
    fn perturbed_coefficients_are_detectable() {
        let mut coefficients = Lanczos::GODFREY.coefficients;
        coefficients[3] *= 1.0 + 1e-6;
        let bad = Lanczos::with_coefficients(Lanczos::GODFREY.g, coefficients);
        let g = bad.ln_gamma(c(0.5, 0.0)).unwrap();
        assert!((g.re - 0.572_364_942_924_700_1).abs() > 1e-10);
    }

    proptest! {
        #[test]
        fn reflection_formula(x in -4.9f64..5.9, y in -5.0f64..5.0) {
            let z = c(x, y);
            prop_assume!((z.re - z.re.round()).hypot(z.im) > 1e-3);
            let product = ln_gamma(z).unwrap().exp() * ln_gamma(1.0 - z).unwrap().exp();
            let want = PI / sin_pi_complex(z);
            prop_assert!(rel_err(product, want) < 1e-10);
        }

        #[test]
        fn recurrence(x in 0.1f64..5.0, y in -5.0f64..5.0) {
            let z = c(x, y);
            let lhs = ln_gamma(z + 1.0).unwrap().exp();
            let rhs = z * ln_gamma(z).unwrap().exp();
            prop_assert!(rel_err(lhs, rhs) < 1e-10);
        }

        #[test]
        fn conjugate_symmetry(x in -6.0f64..15.0, y in -15.0f64..15.0) {
            let z = c(x, y);
            prop_assume!((z.re - z.re.round()).hypot(z.im) > 1e-3);
            let g = ln_gamma(z).unwrap().exp();
            let gc = ln_gamma(z.conj()).unwrap().exp();
            prop_assert!(rel_err(gc, g.conj()) < 1e-12);
        }
    }
}

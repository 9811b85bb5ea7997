use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma function pole at z = {0}")]
    Pole(Complex64),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The coupled exciton component is fully transferred, leaving nothing to rotate.
    #[error("exciton subspace is empty after the pulse (P0_XX = {p_xx0})")]
    Degenerate { p_xx0: f64 },

    #[error("step-size control failed to meet rel_tol = {rel_tol:e} at t = {t_ps} ps")]
    Tolerance { rel_tol: f64, t_ps: f64 },

    #[error("norm drift {drift:e} exceeds the allowed 1e-6")]
    Norm { drift: f64 },

    #[error("no negative-delay points to normalize against")]
    MissingBaseline,

    #[error("grid must be strictly increasing")]
    NonMonotoneGrid,

    #[error("target angle {target} rad is not reachable; maximum rotation is {theta_max} rad")]
    Infeasible { target: f64, theta_max: f64 },

    #[error("bisection did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },
}

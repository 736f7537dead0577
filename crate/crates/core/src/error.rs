use num_complex::Complex64;
use thiserror::Error;

/// Errors raised across the crate. Parse errors carry byte offsets into the
/// source text; numerical errors carry the offending parameter value.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("exponent of ^ must be an integer literal (offset {offset})")]
    NonIntegerExponent { offset: usize },
    #[error("domain error in `{expr}` at t = {t}: {msg}")]
    Domain {
        expr: String,
        t: Complex64,
        msg: String,
    },
    #[error("parameters are not isothermal: |Phi^2| = {0:.3e}")]
    NotIsothermal(f64),
    #[error("degenerate metric: |Phi|^2 = {0:.3e} <= 0")]
    DegenerateMetric(f64),
    #[error("form condition violated at t = {t}: {msg}")]
    ConditionViolated { t: Complex64, msg: String },
    #[error("canonical representation needs g1'*g2' != 0 at t = {0}")]
    CanonicalBranch(Complex64),
    #[error("target form requires log of a function whose range touches zero or crosses the branch cut")]
    NeedsLogBranch,
    #[error("conversion from {from} to {to} is not supported")]
    UnsupportedDirection { from: String, to: String },
    #[error("recovery chart fails: |i*phi1 + phi2| = {0:.3e} < 1e-12")]
    SingularRecovery(f64),
    #[error("quadrature did not reach tolerance after {0} bisection levels")]
    QuadratureFailure(u32),
    #[error("degenerate point near t = {t} (estimated order {order})")]
    DegeneratePoint { t: Complex64, order: u32 },
    #[error("Newton iteration diverged inverting the canonical map near s = {0}")]
    NewtonDivergence(Complex64),
    #[error("coordinates are not canonical: |Phi'^2 -+ 1| = {0:.3e}")]
    NotCanonical(f64),
    #[error("spinor matrix is not unimodular: |det - 1| = {0:.3e}")]
    NotUnimodular(f64),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("surfaces are not congruent: max residual {0:.3e}")]
    NotCongruent(f64),
    #[error("invalid surface definition: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::fmt;

/// Errors produced by the statics solvers, kinematics, identification and
/// the I/O layer.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A section parameter violates its invariant; the message names the
    /// first violated one.
    InvalidParams(String),
    /// An operation was called outside its stated domain.
    InvalidInput(String),
    /// The arcsine argument of the incident-angle relation left [-1, 1].
    /// Solvers treat this as a rejected trial point.
    ArcsinDomain { arg: f64 },
    /// Bisection was asked to search an interval without a sign change.
    NoBracket { f_lo: f64, f_hi: f64 },
    /// The iteration budget was exhausted. Carries the best iterate seen
    /// and its (scaled) residual infinity norm.
    NoConvergence {
        best: Vec<f64>,
        residual_norm: f64,
        iterations: usize,
    },
    /// The linear solve inside a Newton step failed.
    SingularJacobian,
    /// A solved cable tension is negative beyond tolerance: the commanded
    /// configuration cannot be realized with pulling cables.
    Infeasible { cable: usize, tension: f64 },
    /// An identification routine needs more samples than were supplied.
    InsufficientData { needed: usize, got: usize },
    /// The tracking error grew past the divergence bound for ten
    /// consecutive steps.
    Diverged { step: usize },
    /// A statics error raised while processing a trajectory, tagged with
    /// the step and section where it occurred.
    AtStep {
        step: usize,
        section: usize,
        source: Box<Error>,
    },
    /// Configuration file could not be read or parsed.
    Config(String),
    /// Input/output failure (file read/write).
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::ArcsinDomain { arg } => {
                write!(f, "incident-angle arcsine argument {arg} outside [-1, 1]")
            }
            Error::NoBracket { f_lo, f_hi } => {
                write!(f, "no sign change on bracket: f(lo) = {f_lo}, f(hi) = {f_hi}")
            }
            Error::NoConvergence {
                residual_norm,
                iterations,
                ..
            } => write!(
                f,
                "no convergence after {iterations} iterations (residual {residual_norm:.3e})"
            ),
            Error::SingularJacobian => write!(f, "singular Jacobian in Newton step"),
            Error::Infeasible { cable, tension } => write!(
                f,
                "infeasible: cable {cable} requires negative tension {tension:.3e} N"
            ),
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed} samples, got {got}")
            }
            Error::Diverged { step } => write!(f, "tracking diverged at step {step}"),
            Error::AtStep {
                step,
                section,
                source,
            } => write!(f, "step {step}, section {section}: {source}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::AtStep { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

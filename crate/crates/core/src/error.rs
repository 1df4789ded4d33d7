use thiserror::Error;

/// Errors raised by the moment-system library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("Hermite degree {0} is outside the supported range 1..={max}", max = crate::hermite::MAX_DEGREE)]
    DegreeOutOfRange(usize),

    #[error("root iteration for He_{degree} did not converge within {iterations} iterations")]
    NoConvergence { degree: usize, iterations: usize },

    #[error("family {family} is linearly degenerate (c_j = 0); use the contact relations")]
    LinearlyDegenerate { family: usize },

    #[error("family index {family} out of range 1..={count}")]
    FamilyOutOfRange { family: usize, count: usize },

    #[error("degenerate jump: {0}")]
    DegenerateJump(String),

    #[error("Riemann-invariant recursion is singular at k = {k} for c_j = {c}")]
    SingularRecursion { k: usize, c: f64 },

    #[error("cell {index} left the admissible set (rho = {rho}, theta = {theta}) at t = {time}")]
    InvalidCell {
        index: usize,
        rho: f64,
        theta: f64,
        time: f64,
    },

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

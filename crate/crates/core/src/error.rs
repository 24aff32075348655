use thiserror::Error;

/// Every failure mode of the solver stack.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid precision: {0} decimal digits (minimum 16)")]
    InvalidPrecision(u32),
    #[error("parse error: {0}")]
    Parse(String),

    // root finding
    #[error("bracket [{lo}, {hi}] does not enclose a sign change")]
    NoSignChange { lo: String, hi: String },
    #[error("root finder did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("secant iterate {0} left the trust interval")]
    DivergedIterate(String),
    #[error("empty search interval")]
    EmptyInterval,

    // jets
    #[error("expansion point lies on a pole of the reciprocal")]
    PoleAtPoint,
    #[error("jets are expanded about different points")]
    PointMismatch,
    #[error("division by a jet with zero constant term")]
    DivByZeroConstantTerm,
    #[error("jet order exhausted")]
    OrderExhausted,

    // AIM engine
    #[error("non-finite value in the iteration (overflow)")]
    NumericOverflow,
    #[error("no root of the termination function in the search window")]
    NoRootInBracket,
    #[error("parameter root did not stabilize in n (best change {0})")]
    NotStabilized(String),
    #[error("imaginary part of the termination function at the root is {0}")]
    CrossAxisResidualTooLarge(String),
    #[error("coefficient source is not affine in its parameter")]
    NotAffineInParameter,
    #[error("termination condition not met at grid point {0}")]
    NotConverged(usize),

    // physics layer
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("expansion point outside the open interval (0, R)")]
    ExpansionPointOutOfDomain,
    #[error("parameter is neither real nor purely imaginary")]
    NotOnAxis,
    #[error("branch index {index} out of range for {count} radii")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("radius {0} lies outside the box")]
    OutOfBox(String),
    #[error("state n={n}, l={l} not found")]
    StateNotFound { n: u32, l: u32 },
    #[error("shooting oracle disagrees: AIM {aim}, oracle {oracle}")]
    OracleMismatch { aim: String, oracle: String },

    // shooting oracle
    #[error("integration step underflow")]
    StepUnderflow,
    #[error("could not bracket the eigenvalue by node counting")]
    BracketNotFound,
    #[error("integration range too small to contain {0} zeros")]
    DomainTooSmall(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

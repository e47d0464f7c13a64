//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Contract violations and numerical failures.
///
/// Every variant is a caller-visible contract: the distinction between a
/// rejected input and an internal numerical failure matters to the CLI exit
/// codes, so the variants stay fine-grained.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Parse failure with byte position.
    Parse { position: usize, message: String },
    /// The zero polynomial where a nonzero one is required.
    ZeroPolynomial,
    /// Nonzero constant term required.
    ZeroConstantTerm,
    /// Input must be primitive (content 1); carries the content found.
    NotPrimitive { content: String },
    /// Degree outside the supported desk-scale contract.
    DegreeOutOfRange { degree: usize, max: usize },
    /// Squarefree input required.
    NotSquarefree,
    /// Monic input required.
    NotMonic,
    /// Self-inversive input with positive sign required.
    NotSelfInversive,
    /// Even degree required.
    OddDegree,
    /// Anti-palindromic input: divide out the forced u±1 factors first.
    AntiPalindromic,
    /// Operation defined for irreducible input only.
    NotIrreducible,
    /// Non-square matrix.
    NotSquare,
    /// The polynomial is not an algebraic unit: no torus frame exists.
    NotAlgebraicUnit,
    /// No unit-circle root pairs: the automorphism is hyperbolic.
    NoCentralDirections,
    /// Frame preconditions (irreducible + ergodic) not met.
    FrameUnsupported { reason: String },
    /// Requested precision could not separate or refine the roots.
    PrecisionInsufficient { needed_bits: u32 },
    /// Vector length does not match the expected dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// Exact integer matrix power would exceed the entry-size guard.
    MatrixPowerOverflow { bits: u64, limit: u64 },
    /// Iteration or point budget exceeded.
    BudgetExceeded { budget: u64, requested: u64 },
    /// Randomized construction failed within its iteration budget.
    StrategyFailed { message: String },
    /// Quadrature did not reach the requested doubling tolerance.
    QuadratureNotConverged { delta: f64, tolerance: f64 },
    /// Too few quadrature points for the integrand's bandwidth.
    InsufficientQuadrature { given: usize, needed: usize },
    /// Fourier cutoff cap reached before the sup-norm condition was met.
    CutoffCapReached { cap: u32, sup_error: f64, required: f64 },
    /// Partition grid would exceed the cell cap.
    GridTooLarge { cells: u64, cap: u64 },
    /// Weights must form a probability measure.
    NotProbability { total: f64 },
    /// Weights must be strictly positive.
    NonPositiveWeight,
    /// Empty measure where mass is required.
    EmptyMeasure,
    /// No sample mass in the normalization tube: the leaf measure is
    /// undefined for this sample.
    EmptyTube { radius: f64 },
    /// Profile does not satisfy the diagnostic preconditions.
    ProfileUnusable { message: String },
    /// No leaf measure stored for the queried point.
    MissingLeafMeasure,
    /// Γ is a proper subgroup: full-torus quadrature unsupported.
    IndependenceRequired,
    /// No periodic orbit found within the period budget.
    PeriodicOrbitNotFound { budget: u64 },
    /// Internal invariant violated (a bug, not a caller error).
    Internal { message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { position, message } => {
                write!(f, "parse error at byte {position}: {message}")
            }
            Error::ZeroPolynomial => write!(f, "zero polynomial not allowed"),
            Error::ZeroConstantTerm => write!(f, "constant term must be nonzero"),
            Error::NotPrimitive { content } => {
                write!(f, "polynomial is not primitive (content {content})")
            }
            Error::DegreeOutOfRange { degree, max } => {
                write!(f, "degree {degree} outside supported range (max {max})")
            }
            Error::NotSquarefree => write!(f, "polynomial must be squarefree"),
            Error::NotMonic => write!(f, "polynomial must be monic"),
            Error::NotSelfInversive => write!(f, "polynomial is not self-inversive"),
            Error::OddDegree => write!(f, "even degree required"),
            Error::AntiPalindromic => {
                write!(f, "anti-palindromic input: remove the forced u±1 factors first")
            }
            Error::NotIrreducible => write!(f, "irreducible input required"),
            Error::NotSquare => write!(f, "square matrix required"),
            Error::NotAlgebraicUnit => {
                write!(f, "not an algebraic unit: the phase space is a solenoid, not a torus")
            }
            Error::NoCentralDirections => {
                write!(f, "no roots on the unit circle: no central frame exists")
            }
            Error::FrameUnsupported { reason } => write!(f, "frame unsupported: {reason}"),
            Error::PrecisionInsufficient { needed_bits } => {
                write!(f, "insufficient precision: need at least {needed_bits} bits")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::MatrixPowerOverflow { bits, limit } => {
                write!(f, "matrix power entries need {bits} bits (limit {limit})")
            }
            Error::BudgetExceeded { budget, requested } => {
                write!(f, "budget exceeded: requested {requested}, budget {budget}")
            }
            Error::StrategyFailed { message } => write!(f, "construction failed: {message}"),
            Error::QuadratureNotConverged { delta, tolerance } => {
                write!(f, "quadrature doubling delta {delta:e} above tolerance {tolerance:e}")
            }
            Error::InsufficientQuadrature { given, needed } => {
                write!(f, "{given} quadrature points given, at least {needed} required")
            }
            Error::CutoffCapReached { cap, sup_error, required } => write!(
                f,
                "Fourier cutoff cap {cap} reached: sup error {sup_error:e} still above {required:e}"
            ),
            Error::GridTooLarge { cells, cap } => {
                write!(f, "partition grid of {cells} cells exceeds cap {cap}")
            }
            Error::NotProbability { total } => {
                write!(f, "weights sum to {total}, probability measure required")
            }
            Error::NonPositiveWeight => write!(f, "weights must be strictly positive"),
            Error::EmptyMeasure => write!(f, "empty measure"),
            Error::EmptyTube { radius } => {
                write!(f, "no sample mass within the normalization tube at r0 = {radius}")
            }
            Error::ProfileUnusable { message } => write!(f, "profile unusable: {message}"),
            Error::MissingLeafMeasure => write!(f, "no leaf measure stored for this point"),
            Error::IndependenceRequired => write!(
                f,
                "multiplicative independence fails: Γ is a proper subgroup of the s-torus"
            ),
            Error::PeriodicOrbitNotFound { budget } => {
                write!(f, "no periodic orbit found within {budget} iterations")
            }
            Error::Internal { message } => write!(f, "internal error: {message}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

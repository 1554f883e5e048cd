use core::fmt;

/// Errors shared by every operator in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operator precondition on a numeric parameter failed.
    ParameterOutOfRange {
        what: &'static str,
    },
    /// Two sampled objects that must share a sample count do not.
    LengthMismatch {
        expected: usize,
        got: usize,
    },
    /// An area transform was asked to integrate a field with no declared support.
    MissingSupportRadius,
    /// The source support reaches the unit circle, so the boundary kernels degenerate.
    SupportTouchesBoundary,
    /// A real-valued signal was required but the samples carry an imaginary part.
    NonRealSignal,
    /// A sample of a direction/coefficient signal is not of modulus one.
    NonUnimodular {
        index: usize,
    },
    /// A sample has zero modulus where an argument is required.
    ZeroModulus {
        index: usize,
    },
    /// An evaluation point lies outside the controlled region.
    PointOutsideDomain,
    /// A finite-difference stencil or probe leaves the grid.
    StencilOutOfRange,
    /// The nonlinearity failed the sublinearity certificate q*(t)/t → 0.
    SublinearityCertificate,
    /// A continuation stage exceeded its iteration budget.
    MaxIterationsExceeded {
        tau: f64,
        residual: f64,
    },
    /// Newton inversion of a conformal chart did not converge.
    InverseMapDiverged,
    /// A chart failed the univalence or nonvanishing-derivative sample check.
    UnivalenceViolation,
    /// A pulled-back coefficient does not vanish outside the declared disk support.
    SupportEscapesCap,
    /// An unknown preset or specification string was requested.
    UnknownSpec,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ParameterOutOfRange { what } => write!(f, "parameter out of range: {what}"),
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::MissingSupportRadius => write!(f, "field has no declared support radius"),
            Error::SupportTouchesBoundary => write!(f, "source support touches the unit circle"),
            Error::NonRealSignal => write!(f, "signal is not real-valued"),
            Error::NonUnimodular { index } => {
                write!(f, "sample {index} does not have modulus one")
            }
            Error::ZeroModulus { index } => write!(f, "sample {index} has zero modulus"),
            Error::PointOutsideDomain => write!(f, "evaluation point outside controlled region"),
            Error::StencilOutOfRange => write!(f, "stencil or probe exits the grid"),
            Error::SublinearityCertificate => {
                write!(f, "nonlinearity fails the sublinearity certificate")
            }
            Error::MaxIterationsExceeded { tau, residual } => write!(
                f,
                "iteration budget exceeded at tau = {tau} (residual {residual:.3e})"
            ),
            Error::InverseMapDiverged => write!(f, "chart inversion did not converge"),
            Error::UnivalenceViolation => write!(f, "chart fails the univalence sample check"),
            Error::SupportEscapesCap => {
                write!(f, "pulled-back support escapes the declared disk cap")
            }
            Error::UnknownSpec => write!(f, "unknown preset or specification"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

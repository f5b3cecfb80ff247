use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An element does not belong to the algebra an operation was declared on.
    CarrierMismatch(&'static str),
    /// A group element of order `found` was used with a group of order `expected`.
    GroupMismatch { expected: usize, found: usize },
    /// Two module vectors refer to different coverings.
    CoveringMismatch,
    /// A Laurent product or dilation does not fit the declared degree bound.
    DegreeOverflow { needed: usize, bound: usize },
    GridTooCoarse { grid: usize, required: usize },
    NotUnimodular { modulus: f64 },
    NotUnitary { residual: f64 },
    /// Samples are not an nth root of the identity map.
    NotRootOfIdentity { residual: f64 },
    /// A step ratio of a unitary path leaves the principal-root neighbourhood of 1.
    StepInadmissible { step: usize, distance: f64 },
    /// Adjacent samples of a circle map differ by at least half a turn.
    Undersampled { index: usize, jump: f64 },
    /// The cover phase is not a scalar: `‖WV − λVW‖` exceeds the tolerance.
    NonScalarTwist { residual: f64 },
    /// An element is not reproduced by its cyclic decomposition.
    DecompositionResidual { residual: f64 },
    /// A frame fails `sum a g(a*) = δ_g`.
    FrameCondition { residual: f64 },
    /// A partition fails `sum b² = 1`.
    PartitionCondition { residual: f64 },
    EmptyFrame,
    NotCoprime { p: i64, q: i64 },
    NonFreeCover(String),
    NonSurjective(String),
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CarrierMismatch(what) => write!(f, "element is not in the declared carrier: {what}"),
            Error::GroupMismatch { expected, found } => {
                write!(f, "group element of Z_{found} used with Z_{expected}")
            }
            Error::CoveringMismatch => f.write_str("module vectors belong to different coverings"),
            Error::DegreeOverflow { needed, bound } => {
                write!(f, "degree {needed} exceeds the degree bound {bound}")
            }
            Error::GridTooCoarse { grid, required } => {
                write!(f, "grid of {grid} points is too coarse, need at least {required}")
            }
            Error::NotUnimodular { modulus } => write!(f, "|z| = {modulus} is off the unit circle"),
            Error::NotUnitary { residual } => write!(f, "matrix is not unitary: ‖UU* − I‖ = {residual:e}"),
            Error::NotRootOfIdentity { residual } => {
                write!(f, "samples are not an nth root of the identity map (residual {residual:e})")
            }
            Error::StepInadmissible { step, distance } => write!(
                f,
                "path step {step} is too large (‖R − I‖ = {distance}); refine the path so every step ratio stays within distance 1 of I"
            ),
            Error::Undersampled { index, jump } => {
                write!(f, "undersampled circle map: jump of {jump} rad after sample {index}")
            }
            Error::NonScalarTwist { residual } => {
                write!(f, "root-of-unity twist is not scalar: ‖WV − λVW‖ = {residual:e}")
            }
            Error::DecompositionResidual { residual } => {
                write!(f, "element is outside the modelled span (reassembly residual {residual:e})")
            }
            Error::FrameCondition { residual } => {
                write!(f, "frame violates the covering identity (residual {residual:e})")
            }
            Error::PartitionCondition { residual } => {
                write!(f, "partition violates sum b² = 1 (residual {residual:e})")
            }
            Error::EmptyFrame => f.write_str("frame is empty"),
            Error::NotCoprime { p, q } => write!(f, "gcd({p}, {q}) != 1"),
            Error::NonFreeCover(why) => write!(f, "not a free covering: {why}"),
            Error::NonSurjective(why) => write!(f, "projection is not surjective: {why}"),
            Error::InvalidParameter(why) => write!(f, "invalid parameter: {why}"),
        }
    }
}

impl core::error::Error for Error {}

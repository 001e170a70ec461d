use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {0} is outside the supported range 1..={max}", max = crate::exterior::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("odd dimension {0}: the curvature model requires an even dimension")]
    OddDimension(usize),

    #[error("basis index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("axis {axis} out of range 1..={n}")]
    AxisOutOfRange { axis: usize, n: usize },

    #[error("curvature entry ({i},{j}) is not a homogeneous 2-form")]
    NonDegreeTwo { i: usize, j: usize },

    #[error("curvature entries ({i},{j}) and ({j},{i}) are not antisymmetric")]
    InconsistentAntisymmetry { i: usize, j: usize },

    #[error("diagonal curvature entry ({0},{0}) must vanish")]
    NonzeroDiagonal(usize),

    #[error("τ-antiderivative needs a pure polynomial, found Gaussian weight {0}")]
    NonzeroWeight(String),

    #[error(
        "fiber integral diverges: stratum with Gaussian weight {0} carries a nonzero polynomial"
    )]
    NonIntegrable(String),

    #[error("value is not rational: {0}")]
    Irrational(String),

    #[error(
        "scalar results with π^{left_pi} i^{left_i} and π^{right_pi} i^{right_i} cannot be added"
    )]
    IncompatibleScalars {
        left_pi: String,
        left_i: u8,
        right_pi: String,
        right_i: u8,
    },

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("degree {degree} exceeds dimension {n}")]
    DegreeOutOfRange { degree: usize, n: usize },

    #[error("transport source must lie in the Gaussian stratum {expected}")]
    UnsupportedSource { expected: String },

    #[error("empty coefficient list")]
    EmptyCoefficients,

    #[error("bound C_{k} = {value} must be positive and finite")]
    NonPositiveBound { k: usize, value: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

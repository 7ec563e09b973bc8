use thiserror::Error;

/// Errors raised by configuration construction, checks and transforms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("covector direction is zero")]
    ZeroDirection,
    #[error("covector weight is zero")]
    ZeroWeight,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("configuration is empty after merging parallel covectors")]
    EmptyConfiguration,
    #[error("invalid background form: {0}")]
    InvalidBackground(String),
    #[error("canonical form is degenerate")]
    DegenerateForm,
    #[error("point lies on the hyperplane of covector {0}")]
    OnHyperplane(usize),
    #[error("point does not lie on the subspace cut out by the chosen covectors")]
    PointNotOnSubspace,
    #[error("vector is not tangent to the subspace cut out by the chosen covectors")]
    NotTangent,
    #[error("subsystem is isotropic")]
    IsotropicSubsystem,
    #[error("canonical form restricted to the intersection subspace is degenerate")]
    DegenerateRestriction,
    #[error("covector index {index} out of range for configuration with {len} covectors")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("covector {0} does not belong to the plane")]
    NotAPlaneMember(usize),
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("unknown type: {0}")]
    UnknownType(String),
    #[error("no subsystem of type {0} found")]
    SubsystemNotFound(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

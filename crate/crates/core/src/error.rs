use std::path::PathBuf;

use crate::hcnumber::HNumber;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. Variant names follow the operation
/// contracts so callers (and the CLI) can map them to categories.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("exactness mismatch: cannot mix Float with exact scalars")]
    ExactnessMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid symbol `{0}`")]
    InvalidSymbol(String),
    #[error("mixed basis identifiers `{0}` and `{1}`")]
    MixedBasis(String, String),
    #[error("cell ({row},{col}) uses basis `{found}`, expected `{expected}`")]
    BasisMismatch {
        row: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("malformed algebra: {0}")]
    Malformed(String),
    #[error("algebra has no unit element")]
    NoUnit,
    #[error("unit element is not unique")]
    NotUnique,
    #[error("conjugation needs e1 to be the two-sided identity")]
    UnitNotFirstBasis,
    #[error("A * conj(A) is not a scalar multiple of the unit: {0}")]
    NonScalarConjProduct(HNumber),
    #[error("divisor is singular (zero divisor)")]
    SingularDivisor,
    #[error("no root found")]
    NoRootFound,
    #[error("exact square roots are only supported for rational dim <= 2 algebras")]
    UnsupportedExactRoot,
    #[error("basis transform is singular")]
    SingularTransform,
    #[error("parameter clash: {0}")]
    ParamClash(String),
    #[error("unsupported doubling: {0}")]
    UnsupportedDoubling(String),
    #[error("algebra `{name}` not found{}", suggest(.suggestions))]
    NotFound {
        name: String,
        suggestions: Vec<String>,
    },
    #[error("algebra `{0}` already exists")]
    DuplicateName(String),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("built-in algebra `{0}` cannot be removed")]
    BuiltinProtected(String),
    #[error("corrupt algebra file {path}: {msg}")]
    CorruptFile { path: PathBuf, msg: String },
    #[error("rotation axis has zero length")]
    ZeroAxis,
    #[error("zero quaternion")]
    ZeroQuaternion,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn suggest(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(" (did you mean: {}?)", s.join(", "))
    }
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// Short stable name of the variant, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::ExactnessMismatch => "ExactnessMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::InvalidSymbol(_) => "InvalidSymbol",
            Error::MixedBasis(..) => "MixedBasis",
            Error::BasisMismatch { .. } => "BasisMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DimMismatch(..) => "DimMismatch",
            Error::Malformed(_) => "Malformed",
            Error::NoUnit => "NoUnit",
            Error::NotUnique => "NotUnique",
            Error::UnitNotFirstBasis => "UnitNotFirstBasis",
            Error::NonScalarConjProduct(_) => "NonScalarConjProduct",
            Error::SingularDivisor => "SingularDivisor",
            Error::NoRootFound => "NoRootFound",
            Error::UnsupportedExactRoot => "UnsupportedExactRoot",
            Error::SingularTransform => "SingularTransform",
            Error::ParamClash(_) => "ParamClash",
            Error::UnsupportedDoubling(_) => "UnsupportedDoubling",
            Error::NotFound { .. } => "NotFound",
            Error::DuplicateName(_) => "DuplicateName",
            Error::ValidationFailed(_) => "ValidationFailed",
            Error::BuiltinProtected(_) => "BuiltinProtected",
            Error::CorruptFile { .. } => "CorruptFile",
            Error::ZeroAxis => "ZeroAxis",
            Error::ZeroQuaternion => "ZeroQuaternion",
            Error::Io(_) => "Io",
        }
    }
}

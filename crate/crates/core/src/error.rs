use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("value {bits:#x} does not fit in dimension {n}")]
    ValueOutOfRange { n: usize, bits: u64 },
    #[error("empty set where a nonempty one is required")]
    EmptySet,
    #[error("table length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("threshold must lie in [0, 1]")]
    ThresholdOutOfRange,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{what} = {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid submatrix view: {0}")]
    InvalidView(String),
    #[error("matrix has duplicate rows or columns")]
    DuplicateLines,
    #[error("impossible parameters: {0}")]
    ImpossibleParameters(String),
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not found: {0}")]
    NotFound(String),
    #[error("duality measure is zero")]
    ZeroDuality,
    #[error("no pair of elements lands in any representation bucket")]
    EmptyNext,
    #[error("sumset density {found} is below the required {required}")]
    DensityTooLow { found: String, required: String },
    #[error("pull-back graph has no edges")]
    GraphEmpty,

    #[error("returned rectangle is not monochromatic")]
    MonochromaticityViolation,
    #[error("protocol depth exceeded cap {0}")]
    DepthCapExceeded(usize),
    #[error("degenerate split on a non-monochromatic matrix")]
    DegenerateSplit,
    #[error("protocol output differs from the matrix at ({0}, {1})")]
    Mismatch(usize, usize),
    #[error("audit violation at node {path}: {msg}")]
    AuditViolation { path: String, msg: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for exit codes and report flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorClass {
    /// Bad input or configuration.
    Usage,
    /// A search legitimately came up empty.
    NotFound,
    /// A runtime invariant fired; always a bug.
    Invariant,
}

impl Error {
    pub fn stage(stage: &'static str, source: Error) -> Error {
        Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NotFound(_)
            | Error::ZeroDuality
            | Error::EmptyNext
            | Error::DensityTooLow { .. }
            | Error::GraphEmpty => ErrorClass::NotFound,
            Error::MonochromaticityViolation
            | Error::DepthCapExceeded(_)
            | Error::DegenerateSplit
            | Error::Mismatch(..)
            | Error::AuditViolation { .. }
            | Error::InvariantViolation(_) => ErrorClass::Invariant,
            Error::Stage { source, .. } => source.class(),
            _ => ErrorClass::Usage,
        }
    }
}

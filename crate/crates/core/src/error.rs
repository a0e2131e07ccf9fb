use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("identifier must not be empty")]
    EmptyIdentifier,
    #[error("duplicate attribute `{0}`")]
    DuplicateAttribute(String),
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("row for `{object}` has {found} values, table has {expected} attributes")]
    RowWidth {
        object: String,
        expected: usize,
        found: usize,
    },
    #[error("real values must be finite, got {0}")]
    NonFiniteReal(f64),
    #[error("attribute set must not be empty")]
    EmptyAttributeSet,
    #[error("object set belongs to a universe of {found} objects, table has {expected}")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("operation needs a non-empty universe")]
    EmptyUniverse,
    #[error("reduction needs at least two attributes, got {0}")]
    TooFewAttributes(usize),

    #[error("object `{0}` is not a member of the set")]
    NotInSet(String),
    #[error("object `{0}` is a member of the set")]
    InSet(String),
    #[error("transfer standard must lie in [0, 1], got {0}")]
    InvalidStandard(f64),

    #[error("taxonomy line {line}: {kind}")]
    Taxonomy { line: usize, kind: TaxonomyErrorKind },
    #[error("taxonomy has no root class")]
    MissingRoot,
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("weight of `{name}` must lie in (0, 1], got {weight}")]
    InvalidWeight { name: String, weight: f64 },
    #[error("requested value of `{name}` must be positive and finite, got {value}")]
    InvalidRequestedValue { name: String, value: f64 },
    #[error("requested property `{0}` is numeric and needs a value")]
    MissingRequestedValue(String),
    #[error("requested property `{0}` appears more than once")]
    DuplicateRequestedProperty(String),
    #[error("request must contain at least one property")]
    EmptyRequest,
    #[error("property `{name}` is declared {expected} but the value is {found}")]
    TypeMismatch {
        name: String,
        expected: String,
        found: String,
    },
    #[error("threshold must lie in [0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("unknown algorithm `{0}` (expected drsrd, classic or exact)")]
    UnknownAlgorithm(String),
    #[error("request line {line}: {message}")]
    RequestSyntax { line: usize, message: String },

    #[error("resource `{0}` is already registered")]
    DuplicateResource(String),
    #[error("resource `{0}` is not registered")]
    UnknownResource(String),
    #[error("{path}:{line}: {message}")]
    RecordSyntax {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxonomyErrorKind {
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),
    #[error("duplicate property `{0}`")]
    DuplicateProperty(String),
    #[error("unknown parent class `{0}`")]
    UnknownParent(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("second root class `{0}`")]
    MultipleRoots(String),
    #[error("class `{0}` is part of a parent cycle")]
    Cycle(String),
    #[error("unknown value type `{0}`")]
    UnknownType(String),
    #[error("{0}")]
    Syntax(String),
}

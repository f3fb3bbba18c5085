use alloc::string::String;
use core::fmt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A schema name required by an operation is absent.
    MissingColumn { name: String },
    /// A feature cell could not be parsed as a number.
    ParseError { row: usize, column: String, token: String },
    /// A target value outside the three-class display set.
    UnknownLabel { row: usize, token: String },
    /// A class has too few members for the requested operation.
    DegenerateClass { class: usize, count: usize },
    /// A column is constant where nonzero variance is required.
    ZeroVariance { column: String },
    /// A column with no observed values cannot be imputed into.
    AllMissingColumn { column: String },
    /// No donor row observes the column being imputed.
    NoValidDonor { column: String },
    /// A class has fewer than two members, so SMOTE cannot interpolate.
    TooFewMembers { class: usize, count: usize },
    /// Neighbor count exceeds the training-set size.
    KTooLarge { k: usize, n: usize },
    /// Training data contains a single class where at least two are required.
    SingleClass,
    /// Vectors that must be equal length are not.
    LengthMismatch { left: usize, right: usize },
    /// ROC requires at least one positive and one negative label.
    DegenerateLabels,
    /// A parameter failed validation.
    InvalidParameter { what: String },
    /// A serialized model could not be parsed.
    BadModelFormat { what: String },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MissingColumn { name } => write!(f, "missing column `{name}`"),
            Error::ParseError { row, column, token } => {
                write!(f, "row {row}, column `{column}`: cannot parse `{token}` as a number")
            }
            Error::UnknownLabel { row, token } => {
                write!(f, "row {row}: unknown class label `{token}`")
            }
            Error::DegenerateClass { class, count } => {
                write!(f, "class {class} has {count} member(s); at least 2 required")
            }
            Error::ZeroVariance { column } => write!(f, "column `{column}` has zero variance"),
            Error::AllMissingColumn { column } => {
                write!(f, "column `{column}` has no observed values")
            }
            Error::NoValidDonor { column } => {
                write!(f, "no donor row observes column `{column}`")
            }
            Error::TooFewMembers { class, count } => {
                write!(f, "class {class} has {count} member(s); SMOTE needs at least 2")
            }
            Error::KTooLarge { k, n } => write!(f, "k={k} exceeds available rows ({n})"),
            Error::SingleClass => write!(f, "training data contains a single class"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::DegenerateLabels => {
                write!(f, "need at least one positive and one negative label")
            }
            Error::InvalidParameter { what } => write!(f, "invalid parameter: {what}"),
            Error::BadModelFormat { what } => write!(f, "bad model format: {what}"),
        }
    }
}

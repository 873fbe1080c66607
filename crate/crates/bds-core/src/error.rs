//! Error type shared by all core modules.

use alloc::string::String;
use core::fmt;

/// Errors raised by core operations.
///
/// Budget exhaustion during dimension searches is deliberately *not* an
/// error: searches return a flagged partial report instead (see
/// [`crate::dimensions::SearchStats::truncated`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An instance index does not fit the domain size.
    InstanceOutOfRange { index: usize, domain: usize },
    /// A coordinate index does not fit the arity of a projection.
    CoordinateOutOfRange { index: usize, arity: usize },
    /// Two paired sequences disagree in length.
    ArityMismatch { expected: usize, got: usize },
    /// A label lies outside 1..=k.
    LabelOutOfRange { label: u16, k: u16 },
    /// A concept class must contain at least one hypothesis.
    EmptyClass,
    /// Duplicate hypothesis vectors are rejected, not deduplicated.
    DuplicateHypothesis,
    /// A hypothesis vector has the wrong length.
    HypothesisLength { expected: usize, got: usize },
    /// k must be at least 2.
    LabelCountTooSmall { k: u16 },
    /// Full enumeration would exceed the configured cap.
    EnumerationCapExceeded { required: u128, cap: u128 },
    /// Requested class size is outside 1..=k^n.
    CountOutOfRange { count: u64, max: u128 },
    /// A queried vector is not a member of the projection.
    VectorNotInProjection,
    /// A queried vertex is not part of the one-inclusion graph.
    UnknownVertex,
    /// An orientation fails validation against its graph.
    InvalidOrientation(String),
    /// A labeled sample admits no consistent hypothesis.
    NonRealizableSample,
    /// Two objects disagree on the instance-domain size.
    DomainMismatch { expected: usize, got: usize },
    /// Probability masses are negative or do not sum to one.
    InvalidMasses(String),
    /// The distribution target is not a hypothesis of the working class.
    TargetNotInClass,
    /// Padding target exceeds the number of available labels.
    PadTargetExceedsLabels { target: usize, k: u16 },
    /// A parameter is outside its documented range.
    InvalidParameter(String),
    /// The epoch schedule denominator 1 - (t-1)eps/log2(K) is non-positive.
    DegenerateSchedule { epoch: usize },
    /// The schedule needs a DS dimension value that was not supplied.
    MissingDimensionValue { list_size: u32 },
    /// No hypothesis pair agrees on one instance and disagrees on another.
    NoQualifyingPair,
    /// A pseudo-box witness fails re-validation.
    WitnessInvalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InstanceOutOfRange { index, domain } => {
                write!(f, "instance index {index} out of range for domain size {domain}")
            }
            Error::CoordinateOutOfRange { index, arity } => {
                write!(f, "coordinate {index} out of range for arity {arity}")
            }
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected}, got {got}")
            }
            Error::LabelOutOfRange { label, k } => {
                write!(f, "label {label} outside 1..={k}")
            }
            Error::EmptyClass => write!(f, "concept class must be nonempty"),
            Error::DuplicateHypothesis => write!(f, "duplicate hypothesis vector"),
            Error::HypothesisLength { expected, got } => {
                write!(f, "hypothesis length {got}, expected {expected}")
            }
            Error::LabelCountTooSmall { k } => write!(f, "label count k={k} must be >= 2"),
            Error::EnumerationCapExceeded { required, cap } => {
                write!(f, "enumeration of {required} vectors exceeds cap {cap}")
            }
            Error::CountOutOfRange { count, max } => {
                write!(f, "requested {count} vectors, valid range is 1..={max}")
            }
            Error::VectorNotInProjection => write!(f, "vector is not a member of the projection"),
            Error::UnknownVertex => write!(f, "vertex is not part of the graph"),
            Error::InvalidOrientation(msg) => write!(f, "invalid orientation: {msg}"),
            Error::NonRealizableSample => {
                write!(f, "sample is not realizable by the working class")
            }
            Error::DomainMismatch { expected, got } => {
                write!(f, "domain size mismatch: expected {expected}, got {got}")
            }
            Error::InvalidMasses(msg) => write!(f, "invalid masses: {msg}"),
            Error::TargetNotInClass => write!(f, "target hypothesis is not in the working class"),
            Error::PadTargetExceedsLabels { target, k } => {
                write!(f, "pad target {target} exceeds label count {k}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::DegenerateSchedule { epoch } => {
                write!(f, "degenerate schedule denominator at epoch {epoch}")
            }
            Error::MissingDimensionValue { list_size } => {
                write!(f, "missing DS dimension value for list size {list_size}")
            }
            Error::NoQualifyingPair => {
                write!(f, "class has no hypothesis pair agreeing on one instance and disagreeing on another")
            }
            Error::WitnessInvalid(msg) => write!(f, "witness invalid: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

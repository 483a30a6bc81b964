//! Error type shared across the crate.

use thiserror::Error;

use crate::geometry::Frame;

/// Errors produced by geometry, histogram, scoring and evaluation operations.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation received an empty cloud, histogram or score set.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// A point with a NaN or infinite coordinate was rejected.
    #[error("non-finite coordinate in point {index}")]
    NonFinitePoint { index: usize },

    /// A cloud was supplied in the wrong coordinate frame.
    #[error("cloud is in the {got:?} frame, expected {expected:?}")]
    FrameMismatch { expected: Frame, got: Frame },

    /// Markers or axes do not span the required dimensions.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// All points share one height, so vertical binning is undefined.
    #[error("degenerate vertical extent: max_y == min_y")]
    DegenerateExtent,

    /// Two grids that must share a shape do not.
    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {got_rows}x{got_cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        got_rows: usize,
        got_cols: usize,
    },

    /// An operation that requires normalized histograms received raw counts.
    #[error("histogram is not normalized")]
    NotNormalized,

    /// Fewer frames than one segment.
    #[error("insufficient frames: need at least {needed}, got {got}")]
    InsufficientFrames { needed: usize, got: usize },

    /// A shifting delay leaves no overlap between the two sequences.
    #[error("delay {delay} too large for sequence length {len}")]
    DelayTooLarge { delay: i64, len: usize },

    /// Mirror-pair construction asked for a delay outside the sequence.
    #[error("invalid delay {delay} for {frames} frames")]
    InvalidDelay { delay: usize, frames: usize },

    /// ROC evaluation needs at least one sample of each class.
    #[error("scores contain only a single class")]
    SingleClass,

    /// A configuration value violates its documented range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A file did not match its expected format.
    #[error("parse error in {path} (line {line}): {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("image dimensions must be at least 1x1")]
    EmptyImage,

    #[error("image data length {actual} does not match width * height = {expected}")]
    ImageDataLength { expected: usize, actual: usize },

    #[error("invalid disparity range: min {min} > max {max}")]
    InvalidRange { min: u16, max: u16 },

    #[error("disparity range spans {count} values, more than the supported 256")]
    RangeTooWide { count: usize },

    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("{left_width}x{left_height} and {right_width}x{right_height} images do not match")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("{window} window does not fit a {width}x{height} image")]
    WindowTooLarge {
        window: &'static str,
        width: usize,
        height: usize,
    },

    #[error("census images use different windows")]
    WindowMismatch,

    #[error("patch statistics use different patch sizes")]
    PatchMismatch,

    #[error("aggregated costs would overflow 32-bit cells for this image/penalty combination")]
    AggregationOverflow,

    #[error("metric is undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error("cannot interpolate a map with no valid pixel")]
    AllInvalid,

    #[error("disparity {value} exceeds the encodable maximum {max} for this encoding")]
    DisparityOutOfRange { value: f32, max: f32 },

    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    Decode { path: PathBuf, reason: String },
}

impl Error {
    pub(crate) fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

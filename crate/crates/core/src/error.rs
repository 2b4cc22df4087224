use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty plane")]
    EmptyPlane,
    #[error("plane data has {actual} samples, expected {width}x{height}")]
    PlaneLength {
        width: usize,
        height: usize,
        actual: usize,
    },
    #[error("intensity {value} at index {index} is outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("hue must be 0 where saturation is 0 (index {0})")]
    UndefinedHue(usize),
    #[error("degenerate mean {0}")]
    DegenerateMean(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unsupported bit depth: {0}")]
    UnsupportedBitDepth(String),
    #[error("unsupported PPM maxval {0}, only 255 is accepted")]
    UnsupportedMaxval(u32),
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed image data: {0}")]
    Malformed(String),
    #[error("trace CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

use std::fmt;

/// Errors produced by the image, filter, metric, and I/O routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid image dimensions {width}x{height}")]
    InvalidDimension { width: usize, height: usize },

    #[error("invalid window side {0}: must be odd and at least 3")]
    InvalidWindow(usize),

    #[error("pixel ({x}, {y}) is outside a {width}x{height} image")]
    OutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("unsupported depth: maxval {0} exceeds 255")]
    UnsupportedDepth(u32),

    #[error("corrupt file: {0}")]
    CorruptFile(String),

    #[error("sweep cell {cell}: {source}")]
    Cell {
        cell: CellId,
        #[source]
        source: Box<Error>,
    },
}

/// Coordinates of one (trial, density, filter) cell of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CellId {
    pub trial: usize,
    pub density: f64,
    pub filter: String,
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trial={} density={} filter={}",
            self.trial, self.density, self.filter
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

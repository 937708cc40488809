//! Crate-wide error type.

/// Errors produced anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed xml: {0}")]
    MalformedXml(String),
    #[error("document has no width/height attributes and no viewBox")]
    MissingViewport,
    #[error("singular transform (determinant is zero)")]
    SingularTransform,
    #[error("document has no top-level elements")]
    EmptyDocument,
    #[error("render target has a zero dimension")]
    ZeroDimension,
    #[error("cumulative frame index {k} out of range 1..={count}")]
    KOutOfRange { k: usize, count: usize },
    #[error("document has no layers to bucket")]
    ZeroLayers,
    #[error("expected {expected} frames, got {got}")]
    WrongFrameCount { expected: usize, got: usize },
    #[error("frame {index} is {got_w}x{got_h}x{channels}, expected {cell}x{cell} RGBA")]
    WrongCellSize {
        index: usize,
        got_w: u32,
        got_h: u32,
        channels: u8,
        cell: u32,
    },
    #[error("dimension mismatch: {a_w}x{a_h} vs {b_w}x{b_h}")]
    DimensionMismatch {
        a_w: u32,
        a_h: u32,
        b_w: u32,
        b_h: u32,
    },
    #[error("unknown grid resolution {width}x{height} (expected 1024x1024 or 1056x1056)")]
    UnknownResolution { width: u32, height: u32 },
    #[error("temporal index {t} out of range for a {rows}x{cols} grid")]
    IndexOutOfRange { t: usize, rows: u32, cols: u32 },
    #[error("gaussian sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("image {width}x{height} too small for an {window}x{window} window")]
    TooSmall { width: u32, height: u32, window: u32 },
    #[error("polygon with {0} vertices is degenerate")]
    DegeneratePolygon(usize),
    #[error("need at least 2 points to fit a curve, got {0}")]
    TooFewPoints(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("grid has no content in any frame")]
    EmptyGrid,
    #[error("image codec: {0}")]
    Image(#[from] image::ImageError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

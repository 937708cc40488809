//! layertrace: layered SVG deconstruction and differential re-vectorization.
//!
//! Two pipelines around a shared SVG/raster core:
//!
//! 1. **Deconstruction** — split a layered SVG into a cumulative frame
//!    sequence and pack it into a serpentine 2x2 or 3x3 grid image
//!    ([`decompose`], [`grid`], [`render`]).
//! 2. **Vectorization** — segment a grid image back into frames, extract
//!    per-frame differences, trace each difference into Bézier paths, and
//!    merge everything into one layered SVG ([`imgproc`], [`trace`],
//!    [`assemble`]), with MSE/SSIM/path-count reporting ([`metrics`]).

pub mod assemble;
pub mod color;
pub mod decompose;
mod error;
pub mod geom;
pub mod grid;
pub mod imgproc;
pub mod metrics;
pub mod raster;
pub mod render;
pub mod svg;
pub mod trace;

pub use color::Rgba;
pub use error::{Error, Result};
pub use raster::RasterImage;

//! In-memory raster image plus PNG encode/decode.
//!
//! All pixel processing in this crate runs on [`RasterImage`]: an 8-bit,
//! row-major buffer with either 1 (gray) or 4 (RGBA) channels.

use std::path::Path;

use image::ImageEncoder;

use crate::color::Rgba;
use crate::error::{Error, Result};

/// 8-bit raster buffer, 1 (gray) or 4 (RGBA) channels, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl RasterImage {
    /// New fully transparent RGBA image.
    pub fn new_rgba(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            channels: 4,
            data: vec![0; width as usize * height as usize * 4],
        }
    }

    /// New RGBA image filled with a solid color.
    pub fn new_rgba_filled(width: u32, height: u32, color: Rgba) -> Self {
        let mut data = Vec::with_capacity(width as usize * height as usize * 4);
        for _ in 0..width as usize * height as usize {
            data.extend_from_slice(&[color.r, color.g, color.b, color.a]);
        }
        Self {
            width,
            height,
            channels: 4,
            data,
        }
    }

    /// New all-black grayscale image.
    pub fn new_gray(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            channels: 1,
            data: vec![0; width as usize * height as usize],
        }
    }

    /// Wrap an existing buffer. `data.len()` must equal `w * h * channels`.
    pub fn from_raw(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Self {
        assert!(channels == 1 || channels == 4, "channels must be 1 or 4");
        assert_eq!(
            data.len(),
            width as usize * height as usize * channels as usize,
            "buffer length must match dimensions"
        );
        Self {
            width,
            height,
            channels,
            data,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn is_rgba(&self) -> bool {
        self.channels == 4
    }

    pub fn is_gray(&self) -> bool {
        self.channels == 1
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn same_dimensions(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }

    #[inline]
    fn idx(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * self.channels as usize
    }

    #[inline]
    pub fn get_rgba(&self, x: u32, y: u32) -> Rgba {
        debug_assert!(self.channels == 4);
        let i = self.idx(x, y);
        Rgba::new(self.data[i], self.data[i + 1], self.data[i + 2], self.data[i + 3])
    }

    #[inline]
    pub fn put_rgba(&mut self, x: u32, y: u32, c: Rgba) {
        debug_assert!(self.channels == 4);
        let i = self.idx(x, y);
        self.data[i] = c.r;
        self.data[i + 1] = c.g;
        self.data[i + 2] = c.b;
        self.data[i + 3] = c.a;
    }

    #[inline]
    pub fn get_gray(&self, x: u32, y: u32) -> u8 {
        debug_assert!(self.channels == 1);
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn put_gray(&mut self, x: u32, y: u32, v: u8) {
        debug_assert!(self.channels == 1);
        self.data[y as usize * self.width as usize + x as usize] = v;
    }

    /// Copy `src` into this image with its top-left corner at `(x0, y0)`.
    /// Both images must have the same channel count; the source must fit.
    pub fn blit(&mut self, src: &Self, x0: u32, y0: u32) {
        assert_eq!(self.channels, src.channels);
        assert!(x0 + src.width <= self.width && y0 + src.height <= self.height);
        let ch = self.channels as usize;
        let row_bytes = src.width as usize * ch;
        for y in 0..src.height as usize {
            let dst_off = ((y0 as usize + y) * self.width as usize + x0 as usize) * ch;
            let src_off = y * row_bytes;
            self.data[dst_off..dst_off + row_bytes]
                .copy_from_slice(&src.data[src_off..src_off + row_bytes]);
        }
    }

    /// Extract a `w`x`h` sub-image with top-left corner at `(x0, y0)`.
    pub fn crop(&self, x0: u32, y0: u32, w: u32, h: u32) -> Self {
        assert!(x0 + w <= self.width && y0 + h <= self.height);
        let ch = self.channels as usize;
        let row_bytes = w as usize * ch;
        let mut data = Vec::with_capacity(row_bytes * h as usize);
        for y in 0..h as usize {
            let off = ((y0 as usize + y) * self.width as usize + x0 as usize) * ch;
            data.extend_from_slice(&self.data[off..off + row_bytes]);
        }
        Self {
            width: w,
            height: h,
            channels: self.channels,
            data,
        }
    }

    /// Decode a PNG (or any supported format) from bytes. Grayscale stays
    /// single-channel; everything else is expanded to RGBA.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let img = image::load_from_memory(bytes)?;
        Ok(match img {
            image::DynamicImage::ImageLuma8(g) => {
                let (w, h) = g.dimensions();
                Self::from_raw(w, h, 1, g.into_raw())
            }
            other => {
                let rgba = other.to_rgba8();
                let (w, h) = rgba.dimensions();
                Self::from_raw(w, h, 4, rgba.into_raw())
            }
        })
    }

    /// Encode as 8-bit non-interlaced PNG.
    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let encoder = image::codecs::png::PngEncoder::new(&mut out);
        let color = if self.channels == 4 {
            image::ExtendedColorType::Rgba8
        } else {
            image::ExtendedColorType::L8
        };
        encoder.write_image(&self.data, self.width, self.height, color)?;
        Ok(out)
    }

    pub fn read_png(path: impl AsRef<Path>) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        Self::decode(&bytes)
    }

    pub fn write_png(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.encode_png()?)?;
        Ok(())
    }
}

/// Error helper: dimension mismatch between two images.
pub(crate) fn dimension_mismatch(a: &RasterImage, b: &RasterImage) -> Error {
    Error::DimensionMismatch {
        a_w: a.width(),
        a_h: a.height(),
        b_w: b.width(),
        b_h: b.height(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blit_and_crop_are_inverse() {
        let mut canvas = RasterImage::new_rgba(8, 8);
        let mut tile = RasterImage::new_rgba(3, 3);
        for y in 0..3 {
            for x in 0..3 {
                tile.put_rgba(x, y, Rgba::new(x as u8 * 50, y as u8 * 50, 7, 255));
            }
        }
        canvas.blit(&tile, 2, 4);
        assert_eq!(canvas.crop(2, 4, 3, 3), tile);
    }

    #[test]
    fn png_round_trip() {
        let mut img = RasterImage::new_rgba(5, 4);
        img.put_rgba(1, 2, Rgba::new(10, 20, 30, 200));
        let decoded = RasterImage::decode(&img.encode_png().unwrap()).unwrap();
        assert_eq!(decoded, img);

        let mut gray = RasterImage::new_gray(3, 3);
        gray.put_gray(2, 2, 99);
        let decoded = RasterImage::decode(&gray.encode_png().unwrap()).unwrap();
        assert_eq!(decoded, gray);
    }
}

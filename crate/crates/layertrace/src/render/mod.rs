//! Deterministic CPU renderer for the SVG model.
//!
//! Curves are flattened to polylines (max deviation 0.25 px), filled by a
//! scanline rasterizer honoring each path's fill rule, and anti-aliased by
//! 4x supersampling (a 2x2 box downsample). Strokes become polygonal
//! outlines (miter limit 4, butt caps) filled with the nonzero rule.

mod flatten;
mod scanline;
mod stroke;

use crate::color::Rgba;
use crate::error::{Error, Result};
use crate::geom::Affine;
use crate::raster::RasterImage;
use crate::svg::{FillRule, Layer, SvgDocument};

pub(crate) use flatten::flatten_path;

const SS: u32 = 2;
const FLATTEN_TOLERANCE: f64 = 0.25;

/// Render a document onto a `width` x `height` RGBA canvas. The document
/// viewport is scaled to fill the canvas. `background` of `None` renders
/// over transparency.
pub fn render(
    doc: &SvgDocument,
    width: u32,
    height: u32,
    background: Option<Rgba>,
) -> Result<RasterImage> {
    if width == 0 || height == 0 || doc.width <= 0.0 || doc.height <= 0.0 {
        return Err(Error::ZeroDimension);
    }

    let mut canvas = match background {
        Some(bg) => RasterImage::new_rgba_filled(width * SS, height * SS, bg),
        None => RasterImage::new_rgba(width * SS, height * SS),
    };

    let view = Affine::scale(
        f64::from(width) / doc.width,
        f64::from(height) / doc.height,
    );

    for (transform, path) in doc.paths_in_paint_order() {
        let m = view.then(transform);
        // Flatten in output-pixel space, then scale up to supersample
        // coordinates: the deviation budget doubles to 0.5 subsamples,
        // which is still 0.25 output pixels.
        let polys = flatten_path(&path.data, m, FLATTEN_TOLERANCE);
        let to_ss = |points: &[crate::geom::Point]| -> Vec<crate::geom::Point> {
            points.iter().map(|p| p.scale(f64::from(SS))).collect()
        };

        if let Some(fill) = path.fill {
            let rings: Vec<_> = polys.iter().map(|(pts, _)| to_ss(pts)).collect();
            scanline::fill_polygons(&mut canvas, &rings, path.fill_rule, fill);
        }
        if let Some(stroke) = path.stroke {
            let px_width = stroke.width * m.det().abs().sqrt();
            let mut rings = Vec::new();
            for (pts, closed) in &polys {
                rings.extend(
                    stroke::stroke_outline(pts, *closed, px_width)
                        .into_iter()
                        .map(|r| to_ss(&r)),
                );
            }
            scanline::fill_polygons(&mut canvas, &rings, FillRule::NonZero, stroke.color);
        }
    }

    Ok(downsample(&canvas, width, height))
}

/// Render the first `k` layers painted together; equals rendering a
/// document holding exactly those layers.
pub fn render_cumulative(
    layers: &[Layer],
    k: usize,
    width: u32,
    height: u32,
    doc_width: f64,
    doc_height: f64,
    background: Option<Rgba>,
) -> Result<RasterImage> {
    if k == 0 || k > layers.len() {
        return Err(Error::KOutOfRange {
            k,
            count: layers.len(),
        });
    }
    let doc = crate::svg::document_from_layers(doc_width, doc_height, &layers[..k]);
    render(&doc, width, height, background)
}

/// 2x2 box filter in premultiplied space.
fn downsample(ss: &RasterImage, width: u32, height: u32) -> RasterImage {
    let mut out = RasterImage::new_rgba(width, height);
    for y in 0..height {
        for x in 0..width {
            let mut pr = 0u32;
            let mut pg = 0u32;
            let mut pb = 0u32;
            let mut pa = 0u32;
            for dy in 0..SS {
                for dx in 0..SS {
                    let c = ss.get_rgba(x * SS + dx, y * SS + dy);
                    let a = u32::from(c.a);
                    pr += u32::from(c.r) * a;
                    pg += u32::from(c.g) * a;
                    pb += u32::from(c.b) * a;
                    pa += a;
                }
            }
            if pa == 0 {
                continue;
            }
            let unpremul = |p: u32| -> u8 {
                ((f64::from(p) / f64::from(pa)).round()).clamp(0.0, 255.0) as u8
            };
            let a = (f64::from(pa) / f64::from(SS * SS)).round() as u8;
            out.put_rgba(x, y, Rgba::new(unpremul(pr), unpremul(pg), unpremul(pb), a));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svg::{enumerate_layers, parse_svg};

    fn parse(text: &str) -> SvgDocument {
        parse_svg(text).unwrap().doc
    }

    #[test]
    fn full_canvas_rect_paints_every_pixel() {
        let doc = parse(
            r##"<svg width="16" height="16"><rect width="16" height="16" fill="#000"/></svg>"##,
        );
        let img = render(&doc, 16, 16, Some(Rgba::WHITE)).unwrap();
        for y in 0..16 {
            for x in 0..16 {
                assert_eq!(img.get_rgba(x, y), Rgba::BLACK, "pixel ({x},{y})");
            }
        }
    }

    #[test]
    fn empty_document_renders_background_only() {
        let doc = SvgDocument::new(8.0, 8.0);
        let img = render(&doc, 8, 8, Some(Rgba::WHITE)).unwrap();
        assert!(img.data().chunks(4).all(|c| c == [255, 255, 255, 255]));
    }

    #[test]
    fn zero_dimension_is_an_error() {
        let doc = SvgDocument::new(8.0, 8.0);
        assert!(matches!(
            render(&doc, 0, 8, None),
            Err(Error::ZeroDimension)
        ));
    }

    #[test]
    fn disk_area_matches_analytic_value() {
        // Centered disk of radius 64 at 256^2: coverage-weighted alpha must
        // land within 1% of pi * 64^2.
        let doc = parse(
            r##"<svg width="256" height="256"><circle cx="128" cy="128" r="64" fill="#000"/></svg>"##,
        );
        let img = render(&doc, 256, 256, None).unwrap();
        let covered: f64 = img
            .data()
            .chunks(4)
            .map(|c| f64::from(c[3]) / 255.0)
            .sum();
        let analytic = std::f64::consts::PI * 64.0 * 64.0;
        let rel = (covered - analytic).abs() / analytic;
        assert!(rel < 0.01, "area {covered} vs {analytic} (rel {rel:.4})");
    }

    #[test]
    fn determinism_byte_identical() {
        let doc = parse(
            r##"<svg width="64" height="64">
                <circle cx="20" cy="20" r="15" fill="#ff0000"/>
                <path d="M5 40 C20 20 40 60 60 40" stroke="#0000ff" stroke-width="3" fill="none"/>
            </svg>"##,
        );
        let a = render(&doc, 64, 64, Some(Rgba::WHITE)).unwrap();
        let b = render(&doc, 64, 64, Some(Rgba::WHITE)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn integer_translation_is_equivariant() {
        let shape = r##"<circle cx="16" cy="14" r="9" fill="#123456"/>"##;
        let doc_a = parse(&format!(r##"<svg width="64" height="64">{shape}</svg>"##));
        let doc_b = parse(&format!(
            r##"<svg width="64" height="64"><g transform="translate(7,11)">{shape}</g></svg>"##
        ));
        let a = render(&doc_a, 64, 64, None).unwrap();
        let b = render(&doc_b, 64, 64, None).unwrap();
        // Compare the shifted windows.
        for y in 0..40 {
            for x in 0..40 {
                assert_eq!(
                    a.get_rgba(x, y),
                    b.get_rgba(x + 7, y + 11),
                    "mismatch at ({x},{y})"
                );
            }
        }
    }

    #[test]
    fn cumulative_k_equals_full_render() {
        let doc = parse(
            r##"<svg width="32" height="32">
                <g><rect width="32" height="32" fill="#eeeeee"/></g>
                <g><circle cx="16" cy="16" r="10" fill="#ff0000"/></g>
                <g><rect x="12" y="12" width="8" height="8" fill="#0000ff"/></g>
            </svg>"##,
        );
        let layers = enumerate_layers(&doc).unwrap();
        let full = render(&doc, 32, 32, Some(Rgba::WHITE)).unwrap();
        let cumulative =
            render_cumulative(&layers, 3, 32, 32, 32.0, 32.0, Some(Rgba::WHITE)).unwrap();
        assert_eq!(full, cumulative);

        // k = 1: only the background layer is visible.
        let first = render_cumulative(&layers, 1, 32, 32, 32.0, 32.0, Some(Rgba::WHITE)).unwrap();
        assert!(first
            .data()
            .chunks(4)
            .all(|c| c == [0xee, 0xee, 0xee, 255]));

        assert!(matches!(
            render_cumulative(&layers, 4, 32, 32, 32.0, 32.0, None),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(matches!(
            render_cumulative(&layers, 0, 32, 32, 32.0, 32.0, None),
            Err(Error::KOutOfRange { .. })
        ));
    }

    #[test]
    fn stroke_renders_band_of_stroke_width() {
        let doc = parse(
            r##"<svg width="32" height="32"><line x1="0" y1="16" x2="32" y2="16" stroke="#000" stroke-width="4"/></svg>"##,
        );
        let img = render(&doc, 32, 32, Some(Rgba::WHITE)).unwrap();
        // Band covers rows 14..18 fully.
        for y in 0..32 {
            let inside = (14..18).contains(&y);
            let px = img.get_rgba(16, y);
            assert_eq!(px == Rgba::BLACK, inside, "row {y}: {px:?}");
        }
    }

    #[test]
    fn evenodd_document_hole_is_transparent() {
        let doc = parse(
            r##"<svg width="20" height="20"><path d="M2 2 H18 V18 H2 Z M8 8 H12 V12 H8 Z" fill="#000" fill-rule="evenodd"/></svg>"##,
        );
        let img = render(&doc, 20, 20, None).unwrap();
        assert_eq!(img.get_rgba(10, 10).a, 0);
        assert_eq!(img.get_rgba(4, 10), Rgba::BLACK);
    }
}

//! Scanline polygon fill with nonzero and even-odd winding rules.
//!
//! Sampling happens on the supersampled canvas; pixel (x, y) is sampled at
//! its center (x + 0.5, y + 0.5). Edges use a half-open `[y0, y1)` rule so
//! shared vertices never double-count.

use crate::color::Rgba;
use crate::geom::Point;
use crate::raster::RasterImage;
use crate::svg::FillRule;

#[derive(Debug, Clone, Copy)]
struct Edge {
    y_min: f64,
    y_max: f64,
    // x at y_min and slope dx/dy.
    x0: f64,
    inv_slope: f64,
    winding: i32,
}

/// Fill a set of rings into `canvas` with the given rule and color.
/// Ring coordinates are in canvas pixel units; open rings are closed
/// implicitly.
pub(crate) fn fill_polygons(
    canvas: &mut RasterImage,
    rings: &[Vec<Point>],
    rule: FillRule,
    color: Rgba,
) {
    if color.a == 0 {
        return;
    }
    let mut edges = Vec::new();
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for ring in rings {
        let n = ring.len();
        if n < 2 {
            continue;
        }
        for i in 0..n {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            if a.y == b.y {
                continue;
            }
            let (top, bottom, winding) = if a.y < b.y { (a, b, 1) } else { (b, a, -1) };
            edges.push(Edge {
                y_min: top.y,
                y_max: bottom.y,
                x0: top.x,
                inv_slope: (bottom.x - top.x) / (bottom.y - top.y),
                winding,
            });
            min_y = min_y.min(top.y);
            max_y = max_y.max(bottom.y);
        }
    }
    if edges.is_empty() {
        return;
    }

    let height = canvas.height() as i64;
    let width = canvas.width() as i64;
    let row_start = (min_y - 0.5).ceil().max(0.0) as i64;
    let row_end = ((max_y - 0.5).floor() as i64).min(height - 1);

    let mut crossings: Vec<(f64, i32)> = Vec::new();
    for row in row_start..=row_end {
        let yc = row as f64 + 0.5;
        crossings.clear();
        for e in &edges {
            if e.y_min <= yc && yc < e.y_max {
                crossings.push((e.x0 + (yc - e.y_min) * e.inv_slope, e.winding));
            }
        }
        if crossings.is_empty() {
            continue;
        }
        crossings.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut wind = 0;
        let mut span_start = 0.0f64;
        for &(x, w) in crossings.iter() {
            let was_inside = inside(wind, rule);
            wind += w;
            let is_inside = inside(wind, rule);
            if !was_inside && is_inside {
                span_start = x;
            } else if was_inside && !is_inside {
                fill_span(canvas, row, span_start, x, width, color);
            }
        }
    }
}

fn inside(wind: i32, rule: FillRule) -> bool {
    match rule {
        FillRule::NonZero => wind != 0,
        FillRule::EvenOdd => wind % 2 != 0,
    }
}

/// Paint pixels whose centers fall in `[xa, xb)` on `row`.
fn fill_span(canvas: &mut RasterImage, row: i64, xa: f64, xb: f64, width: i64, color: Rgba) {
    let first = ((xa - 0.5).ceil().max(0.0)) as i64;
    let last = ((xb - 0.5).ceil() as i64 - 1).min(width - 1);
    if first > last {
        return;
    }
    if color.a == 255 {
        for x in first..=last {
            canvas.put_rgba(x as u32, row as u32, color);
        }
    } else {
        for x in first..=last {
            let dst = canvas.get_rgba(x as u32, row as u32);
            canvas.put_rgba(x as u32, row as u32, over(color, dst));
        }
    }
}

/// Source-over compositing in straight (non-premultiplied) alpha.
pub(crate) fn over(src: Rgba, dst: Rgba) -> Rgba {
    let sa = f64::from(src.a) / 255.0;
    let da = f64::from(dst.a) / 255.0;
    let out_a = sa + da * (1.0 - sa);
    if out_a == 0.0 {
        return Rgba::TRANSPARENT;
    }
    let blend = |s: u8, d: u8| -> u8 {
        let v = (f64::from(s) * sa + f64::from(d) * da * (1.0 - sa)) / out_a;
        v.round().clamp(0.0, 255.0) as u8
    };
    Rgba::new(
        blend(src.r, dst.r),
        blend(src.g, dst.g),
        blend(src.b, dst.b),
        (out_a * 255.0).round() as u8,
    )
}

//! Cubic Bézier flattening via recursive subdivision.

use crate::geom::{Affine, Point};
use crate::svg::{PathData, Segment};

const MAX_DEPTH: usize = 18;

/// Flatten every subpath into a polyline in device coordinates.
/// Returns `(points, closed)` pairs; curves deviate from the polyline by
/// at most `tolerance`.
pub(crate) fn flatten_path(data: &PathData, m: Affine, tolerance: f64) -> Vec<(Vec<Point>, bool)> {
    data.subpaths
        .iter()
        .map(|sp| {
            let mut points = vec![m.apply(sp.start)];
            for seg in &sp.segments {
                match *seg {
                    Segment::Line(p) => points.push(m.apply(p)),
                    Segment::Cubic { c1, c2, to } => {
                        let p0 = *points.last().unwrap();
                        flatten_cubic(
                            p0,
                            m.apply(c1),
                            m.apply(c2),
                            m.apply(to),
                            tolerance,
                            0,
                            &mut points,
                        );
                    }
                }
            }
            (points, sp.closed)
        })
        .collect()
}

/// Append the flattened cubic (excluding `p0`) to `out`.
fn flatten_cubic(
    p0: Point,
    c1: Point,
    c2: Point,
    p3: Point,
    tolerance: f64,
    depth: usize,
    out: &mut Vec<Point>,
) {
    // Control-point distance to the chord bounds the curve's deviation.
    let flat = c1.distance_to_segment(p0, p3) <= tolerance
        && c2.distance_to_segment(p0, p3) <= tolerance;
    if flat || depth >= MAX_DEPTH {
        out.push(p3);
        return;
    }
    // de Casteljau split at t = 0.5.
    let mid = |a: Point, b: Point| a.lerp(b, 0.5);
    let p01 = mid(p0, c1);
    let p12 = mid(c1, c2);
    let p23 = mid(c2, p3);
    let p012 = mid(p01, p12);
    let p123 = mid(p12, p23);
    let center = mid(p012, p123);
    flatten_cubic(p0, p01, p012, center, tolerance, depth + 1, out);
    flatten_cubic(center, p123, p23, p3, tolerance, depth + 1, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svg::Subpath;

    #[test]
    fn quarter_circle_stays_within_tolerance() {
        // Cubic approximating a quarter circle of radius 100.
        const K: f64 = 0.552_284_749_830_793_4;
        let data = PathData {
            subpaths: vec![Subpath {
                start: Point::new(100.0, 0.0),
                segments: vec![Segment::Cubic {
                    c1: Point::new(100.0, 100.0 * K),
                    c2: Point::new(100.0 * K, 100.0),
                    to: Point::new(0.0, 100.0),
                }],
                closed: false,
            }],
        };
        let polys = flatten_path(&data, Affine::IDENTITY, 0.25);
        let points = &polys[0].0;
        assert!(points.len() > 4, "expected subdivision, got {}", points.len());
        for p in points {
            let r = (p.x * p.x + p.y * p.y).sqrt();
            // Curve max radial error for this construction is ~0.03px.
            assert!((r - 100.0).abs() < 0.3, "point off circle: {r}");
        }
        // Consecutive points close: the chordal deviation stays under
        // tolerance when vertices are dense enough.
        for w in points.windows(2) {
            assert!(w[0].distance(w[1]) < 25.0);
        }
    }

    #[test]
    fn lines_pass_through_untouched() {
        let data = PathData {
            subpaths: vec![Subpath {
                start: Point::new(0.0, 0.0),
                segments: vec![Segment::Line(Point::new(3.0, 4.0))],
                closed: true,
            }],
        };
        let polys = flatten_path(&data, Affine::scale(2.0, 2.0), 0.25);
        assert_eq!(polys[0].0, vec![Point::new(0.0, 0.0), Point::new(6.0, 8.0)]);
        assert!(polys[0].1);
    }
}

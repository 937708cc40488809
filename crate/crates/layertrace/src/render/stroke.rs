//! Stroke outlines as fillable polygons: one quad per segment plus miter
//! or bevel join wedges, butt caps. Every emitted ring is normalized to
//! positive orientation so a nonzero fill of the whole set is the union.

use crate::geom::Point;

const MITER_LIMIT: f64 = 4.0;

/// Build the outline rings for stroking a polyline at `width`.
pub(crate) fn stroke_outline(points: &[Point], closed: bool, width: f64) -> Vec<Vec<Point>> {
    if width <= 0.0 {
        return Vec::new();
    }
    // Collapse zero-length segments.
    let mut pts: Vec<Point> = Vec::with_capacity(points.len());
    for &p in points {
        if pts.last().map_or(true, |q| q.distance(p) > 1e-12) {
            pts.push(p);
        }
    }
    if closed && pts.len() > 1 && pts[0].distance(*pts.last().unwrap()) <= 1e-12 {
        pts.pop();
    }
    if pts.len() < 2 {
        return Vec::new();
    }

    let half = width / 2.0;
    let mut rings = Vec::new();

    let seg_count = if closed { pts.len() } else { pts.len() - 1 };
    for i in 0..seg_count {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        let dir = b.sub(a).normalized();
        let n = Point::new(-dir.y, dir.x).scale(half);
        rings.push(normalize(vec![a.add(n), b.add(n), b.sub(n), a.sub(n)]));
    }

    // Join wedges at interior vertices (every vertex when closed).
    let join_count = if closed { pts.len() } else { pts.len().saturating_sub(2) };
    for j in 0..join_count {
        let (prev, v, next) = if closed {
            let v_idx = (j + 1) % pts.len();
            (pts[j], pts[v_idx], pts[(j + 2) % pts.len()])
        } else {
            (pts[j], pts[j + 1], pts[j + 2])
        };
        if let Some(ring) = join_wedge(prev, v, next, half) {
            rings.push(ring);
        }
    }
    rings
}

/// Miter (within limit) or bevel wedge covering the gap on the outer side
/// of the corner at `v`.
fn join_wedge(prev: Point, v: Point, next: Point, half: f64) -> Option<Vec<Point>> {
    let d1 = v.sub(prev).normalized();
    let d2 = next.sub(v).normalized();
    let cross = d1.x * d2.y - d1.y * d2.x;
    if cross.abs() < 1e-12 {
        return None; // Collinear: nothing to cover.
    }
    // The gap opens on the side opposite the turn.
    let side = if cross > 0.0 { -1.0 } else { 1.0 };
    let u1 = Point::new(-d1.y, d1.x).scale(side);
    let u2 = Point::new(-d2.y, d2.x).scale(side);
    let o1 = v.add(u1.scale(half));
    let o2 = v.add(u2.scale(half));

    let bisector = u1.add(u2).normalized();
    let cos_half = bisector.dot(u1);
    if cos_half > 1.0 / MITER_LIMIT {
        let miter = v.add(bisector.scale(half / cos_half));
        Some(normalize(vec![v, o1, miter, o2]))
    } else {
        Some(normalize(vec![v, o1, o2]))
    }
}

fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    acc / 2.0
}

fn normalize(mut ring: Vec<Point>) -> Vec<Point> {
    if signed_area(&ring) < 0.0 {
        ring.reverse();
    }
    ring
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_segment_gives_one_quad() {
        let rings = stroke_outline(
            &[Point::new(0.0, 0.0), Point::new(10.0, 0.0)],
            false,
            4.0,
        );
        assert_eq!(rings.len(), 1);
        assert!((signed_area(&rings[0]) - 40.0).abs() < 1e-9);
    }

    #[test]
    fn closed_square_emits_segment_and_join_rings() {
        let square = [
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 10.0),
            Point::new(0.0, 10.0),
        ];
        let rings = stroke_outline(&square, true, 2.0);
        assert_eq!(rings.len(), 8, "4 segments + 4 joins");
        for ring in &rings {
            assert!(signed_area(ring) > 0.0, "rings must be positive");
        }
    }

    #[test]
    fn sharp_turn_falls_back_to_bevel() {
        // Nearly reversing direction: miter ratio far above 4.
        let rings = stroke_outline(
            &[
                Point::new(0.0, 0.0),
                Point::new(10.0, 0.0),
                Point::new(0.0, 0.5),
            ],
            false,
            2.0,
        );
        // Bevel wedge is a triangle.
        assert!(rings.iter().any(|r| r.len() == 3));
    }
}

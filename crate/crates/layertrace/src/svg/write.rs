//! SVG 1.1 serialization. Top-level groups are emitted as `<g id="layer-K">`
//! in z-order; coordinates are printed with two decimal places.

use std::fmt::Write as _;

use crate::color::Rgba;

use super::{FillRule, Node, PathData, PathElement, Segment, SvgDocument};

/// Serialize a document to standalone SVG 1.1 text.
pub fn serialize_svg(doc: &SvgDocument) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\"",
        w = fmt_size(doc.width),
        h = fmt_size(doc.height),
    );
    if doc.nodes.is_empty() {
        out.push_str("/>\n");
        return out;
    }
    out.push_str(">\n");
    for (index, node) in doc.nodes.iter().enumerate() {
        write_node(&mut out, node, 1, Some(index));
    }
    out.push_str("</svg>\n");
    out
}

fn write_node(out: &mut String, node: &Node, depth: usize, layer_index: Option<usize>) {
    let pad = "  ".repeat(depth);
    match node {
        Node::Group(g) => {
            let id = match layer_index {
                Some(k) => format!("layer-{k}"),
                None => g.id.clone().unwrap_or_default(),
            };
            let _ = write!(out, "{pad}<g");
            if !id.is_empty() {
                let _ = write!(out, " id=\"{}\"", escape(&id));
            }
            if !g.transform.is_identity() {
                let m = g.transform;
                let _ = write!(
                    out,
                    " transform=\"matrix({} {} {} {} {} {})\"",
                    fmt_coord(m.a),
                    fmt_coord(m.b),
                    fmt_coord(m.c),
                    fmt_coord(m.d),
                    fmt_coord(m.e),
                    fmt_coord(m.f),
                );
            }
            if g.children.is_empty() {
                out.push_str("/>\n");
                return;
            }
            out.push_str(">\n");
            for child in &g.children {
                write_node(out, child, depth + 1, None);
            }
            let _ = writeln!(out, "{pad}</g>");
        }
        Node::Path(p) => {
            // A bare top-level path still forms a layer; it keeps its own
            // element form rather than gaining a wrapper group.
            write_path(out, p, &pad);
        }
    }
}

fn write_path(out: &mut String, p: &PathElement, pad: &str) {
    let _ = write!(out, "{pad}<path d=\"{}\"", path_data_string(&p.data));
    match p.fill {
        Some(c) => {
            let _ = write!(out, " fill=\"{}\"", color_string(c));
        }
        None => out.push_str(" fill=\"none\""),
    }
    if p.fill_rule == FillRule::EvenOdd {
        out.push_str(" fill-rule=\"evenodd\"");
    }
    if let Some(s) = p.stroke {
        let _ = write!(
            out,
            " stroke=\"{}\" stroke-width=\"{}\"",
            color_string(s.color),
            fmt_coord(s.width)
        );
    }
    out.push_str("/>\n");
}

/// Render path geometry as a `d` string with 2-decimal coordinates.
pub(crate) fn path_data_string(data: &PathData) -> String {
    let mut d = String::new();
    for sp in &data.subpaths {
        if !d.is_empty() {
            d.push(' ');
        }
        let _ = write!(d, "M{} {}", fmt_coord(sp.start.x), fmt_coord(sp.start.y));
        for seg in &sp.segments {
            match *seg {
                Segment::Line(p) => {
                    let _ = write!(d, " L{} {}", fmt_coord(p.x), fmt_coord(p.y));
                }
                Segment::Cubic { c1, c2, to } => {
                    let _ = write!(
                        d,
                        " C{} {} {} {} {} {}",
                        fmt_coord(c1.x),
                        fmt_coord(c1.y),
                        fmt_coord(c2.x),
                        fmt_coord(c2.y),
                        fmt_coord(to.x),
                        fmt_coord(to.y)
                    );
                }
            }
        }
        if sp.closed {
            d.push_str(" Z");
        }
    }
    d
}

fn color_string(c: Rgba) -> String {
    if c.a == 255 {
        format!("#{:02x}{:02x}{:02x}", c.r, c.g, c.b)
    } else {
        format!("#{:02x}{:02x}{:02x}{:02x}", c.r, c.g, c.b, c.a)
    }
}

/// Two decimal places, trimmed of a redundant ".00".
fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.strip_suffix(".00").map(str::to_owned).unwrap_or(s);
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn fmt_size(v: f64) -> String {
    fmt_coord(v)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('"', "&quot;")
}

//! SVG parsing: XML tree walk, style resolution, shape-to-path conversion,
//! and `d` attribute normalization to absolute move/line/cubic/close.
//!
//! The supported subset is paths, basic shapes, groups and solid paints.
//! Quadratic Béziers are degree-elevated to cubics and arcs are converted
//! via endpoint-to-center form, at most 90° per cubic segment. Unsupported
//! elements are skipped and recorded as warnings.

use crate::color::Rgba;
use crate::error::{Error, Result};
use crate::geom::{Affine, Point};

use super::colors::named_color;
use super::{FillRule, Group, Node, PathData, PathElement, Segment, Stroke, Subpath, SvgDocument};

/// Result of parsing: the document plus warnings for skipped content.
#[derive(Debug, Clone)]
pub struct SvgParse {
    pub doc: SvgDocument,
    pub warnings: Vec<String>,
}

/// Fill/stroke state inherited down the element tree.
#[derive(Debug, Clone, Copy)]
struct Style {
    fill: Paint,
    stroke: Paint,
    stroke_width: f64,
    fill_rule: FillRule,
    fill_opacity: f64,
    stroke_opacity: f64,
    // Group opacity folded multiplicatively into descendants.
    opacity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Paint {
    None,
    Color(Rgba),
}

impl Default for Style {
    fn default() -> Self {
        Self {
            fill: Paint::Color(Rgba::BLACK),
            stroke: Paint::None,
            stroke_width: 1.0,
            fill_rule: FillRule::NonZero,
            fill_opacity: 1.0,
            stroke_opacity: 1.0,
            opacity: 1.0,
        }
    }
}

/// Parse an SVG document from UTF-8 text.
pub fn parse_svg(text: &str) -> Result<SvgParse> {
    let xml = roxmltree::Document::parse(text)
        .map_err(|e| Error::MalformedXml(e.to_string()))?;
    let root = xml.root_element();
    if root.tag_name().name() != "svg" {
        return Err(Error::MalformedXml(format!(
            "root element is <{}>, expected <svg>",
            root.tag_name().name()
        )));
    }

    let mut warnings = Vec::new();
    let (width, height, root_transform) = viewport(&root, &mut warnings)?;

    let mut nodes = Vec::new();
    for child in root.children().filter(roxmltree::Node::is_element) {
        if let Some(node) = convert_element(&child, Style::default(), &mut warnings) {
            nodes.push(apply_root_transform(node, root_transform));
        }
    }

    Ok(SvgParse {
        doc: SvgDocument {
            width,
            height,
            nodes,
        },
        warnings,
    })
}

/// Resolve document size and the transform induced by a viewBox.
fn viewport(
    root: &roxmltree::Node,
    warnings: &mut Vec<String>,
) -> Result<(f64, f64, Affine)> {
    let attr_len = |name: &str| root.attribute(name).and_then(parse_length);
    let width_attr = attr_len("width");
    let height_attr = attr_len("height");
    let view_box = root.attribute("viewBox").and_then(parse_view_box);

    match (width_attr, height_attr, view_box) {
        (Some(w), Some(h), Some((min_x, min_y, vw, vh))) => {
            let m = Affine::scale(w / vw, h / vh).then(Affine::translate(-min_x, -min_y));
            Ok((w, h, m))
        }
        (Some(w), Some(h), None) => Ok((w, h, Affine::IDENTITY)),
        (_, _, Some((min_x, min_y, vw, vh))) => {
            if width_attr.is_some() != height_attr.is_some() {
                warnings.push("only one of width/height present; using viewBox size".into());
            }
            Ok((vw, vh, Affine::translate(-min_x, -min_y)))
        }
        _ => Err(Error::MissingViewport),
    }
}

fn apply_root_transform(node: Node, m: Affine) -> Node {
    if m.is_identity() {
        return node;
    }
    match node {
        Node::Group(g) => Node::Group(Group {
            transform: m.then(g.transform),
            ..g
        }),
        Node::Path(p) => Node::Path(PathElement {
            data: p.data.transform(m),
            stroke: p.stroke.map(|s| Stroke {
                color: s.color,
                width: s.width * m.det().abs().sqrt(),
            }),
            ..p
        }),
    }
}

fn convert_element(
    el: &roxmltree::Node,
    inherited: Style,
    warnings: &mut Vec<String>,
) -> Option<Node> {
    let name = el.tag_name().name();
    // Benign metadata: skip without noise.
    if matches!(name, "title" | "desc" | "metadata") {
        return None;
    }

    let style = resolve_style(el, inherited, warnings);

    match name {
        "g" => {
            let children: Vec<Node> = el
                .children()
                .filter(roxmltree::Node::is_element)
                .filter_map(|c| convert_element(&c, style, warnings))
                .collect();
            Some(Node::Group(Group {
                id: el.attribute("id").map(str::to_owned),
                transform: parse_transform(el.attribute("transform").unwrap_or("")),
                children,
            }))
        }
        "path" => {
            let d = el.attribute("d")?;
            let data = match parse_path_data(d) {
                Ok(data) => data,
                Err(msg) => {
                    warnings.push(format!("skipping <path>: {msg}"));
                    return None;
                }
            };
            make_path(el, data, style, warnings)
        }
        "rect" => {
            let data = rect_to_path(el)?;
            make_path(el, data, style, warnings)
        }
        "circle" => {
            let cx = attr_f64(el, "cx").unwrap_or(0.0);
            let cy = attr_f64(el, "cy").unwrap_or(0.0);
            let r = attr_f64(el, "r")?;
            if r <= 0.0 {
                return None;
            }
            make_path(el, ellipse_path(cx, cy, r, r), style, warnings)
        }
        "ellipse" => {
            let cx = attr_f64(el, "cx").unwrap_or(0.0);
            let cy = attr_f64(el, "cy").unwrap_or(0.0);
            let rx = attr_f64(el, "rx")?;
            let ry = attr_f64(el, "ry")?;
            if rx <= 0.0 || ry <= 0.0 {
                return None;
            }
            make_path(el, ellipse_path(cx, cy, rx, ry), style, warnings)
        }
        "polygon" => {
            let points = parse_points(el.attribute("points")?);
            if points.len() < 3 {
                return None;
            }
            let data = PathData {
                subpaths: vec![Subpath {
                    start: points[0],
                    segments: points[1..].iter().map(|&p| Segment::Line(p)).collect(),
                    closed: true,
                }],
            };
            make_path(el, data, style, warnings)
        }
        "line" => {
            let x1 = attr_f64(el, "x1").unwrap_or(0.0);
            let y1 = attr_f64(el, "y1").unwrap_or(0.0);
            let x2 = attr_f64(el, "x2").unwrap_or(0.0);
            let y2 = attr_f64(el, "y2").unwrap_or(0.0);
            let data = PathData {
                subpaths: vec![Subpath {
                    start: Point::new(x1, y1),
                    segments: vec![Segment::Line(Point::new(x2, y2))],
                    closed: false,
                }],
            };
            make_path(el, data, style, warnings)
        }
        other => {
            warnings.push(format!("unsupported element <{other}> skipped"));
            None
        }
    }
}

/// Build a PathElement from geometry plus resolved style. Elements with no
/// visible paint are dropped.
fn make_path(
    el: &roxmltree::Node,
    data: PathData,
    style: Style,
    warnings: &mut Vec<String>,
) -> Option<Node> {
    if data.subpaths.is_empty() {
        return None;
    }
    let scale_alpha = |c: Rgba, op: f64| -> Rgba {
        let a = (f64::from(c.a) * op * style.opacity).round().clamp(0.0, 255.0) as u8;
        c.with_alpha(a)
    };
    let fill = match style.fill {
        Paint::None => None,
        Paint::Color(c) => Some(scale_alpha(c, style.fill_opacity)),
    };
    let stroke = match style.stroke {
        Paint::None => None,
        Paint::Color(c) if style.stroke_width > 0.0 => Some(Stroke {
            color: scale_alpha(c, style.stroke_opacity),
            width: style.stroke_width,
        }),
        Paint::Color(_) => None,
    };
    if fill.is_none() && stroke.is_none() {
        warnings.push(format!(
            "<{}> with no fill and no stroke skipped",
            el.tag_name().name()
        ));
        return None;
    }

    let transform = parse_transform(el.attribute("transform").unwrap_or(""));
    let path = PathElement {
        data,
        fill,
        stroke,
        fill_rule: style.fill_rule,
    };
    if transform.is_identity() {
        Some(Node::Path(path))
    } else {
        // Shape-level transforms are folded into a wrapping group so the
        // path itself stays transform-free.
        Some(Node::Group(Group {
            id: None,
            transform,
            children: vec![Node::Path(path)],
        }))
    }
}

fn resolve_style(el: &roxmltree::Node, parent: Style, warnings: &mut Vec<String>) -> Style {
    let mut style = Style {
        // Per-element opacity multiplies; it is not inherited as a value.
        opacity: parent.opacity,
        ..parent
    };
    let mut apply = |key: &str, value: &str| {
        let value = value.trim();
        match key {
            "fill" => {
                if let Some(p) = parse_paint(value, warnings) {
                    style.fill = p;
                }
            }
            "stroke" => {
                if let Some(p) = parse_paint(value, warnings) {
                    style.stroke = p;
                }
            }
            "stroke-width" => {
                if let Some(w) = parse_length(value) {
                    style.stroke_width = w;
                }
            }
            "fill-rule" => match value {
                "evenodd" => style.fill_rule = FillRule::EvenOdd,
                "nonzero" => style.fill_rule = FillRule::NonZero,
                _ => {}
            },
            "fill-opacity" => {
                if let Ok(v) = value.parse::<f64>() {
                    style.fill_opacity = v.clamp(0.0, 1.0);
                }
            }
            "stroke-opacity" => {
                if let Ok(v) = value.parse::<f64>() {
                    style.stroke_opacity = v.clamp(0.0, 1.0);
                }
            }
            "opacity" => {
                if let Ok(v) = value.parse::<f64>() {
                    style.opacity *= v.clamp(0.0, 1.0);
                }
            }
            _ => {}
        }
    };

    for key in [
        "fill",
        "stroke",
        "stroke-width",
        "fill-rule",
        "fill-opacity",
        "stroke-opacity",
        "opacity",
    ] {
        if let Some(v) = el.attribute(key) {
            apply(key, v);
        }
    }
    // Inline style wins over presentation attributes.
    if let Some(css) = el.attribute("style") {
        for decl in css.split(';') {
            if let Some((k, v)) = decl.split_once(':') {
                apply(k.trim(), v);
            }
        }
    }
    style
}

fn parse_paint(s: &str, warnings: &mut Vec<String>) -> Option<Paint> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if s == "none" {
        return Some(Paint::None);
    }
    if s.starts_with("url(") {
        warnings.push(format!("paint reference {s:?} unsupported; treated as none"));
        return Some(Paint::None);
    }
    parse_color(s).map(Paint::Color)
}

/// Parse a solid color: #rgb/#rrggbb/#rrggbbaa, rgb()/rgba(), keywords,
/// currentColor (resolves to black).
fn parse_color(s: &str) -> Option<Rgba> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("currentcolor") {
        return Some(Rgba::BLACK);
    }
    if s.eq_ignore_ascii_case("transparent") {
        return Some(Rgba::TRANSPARENT);
    }
    if let Some(hex) = s.strip_prefix('#') {
        let digit = |i: usize| u8::from_str_radix(&hex[i..i + 1], 16).ok();
        let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).ok();
        return match hex.len() {
            3 => Some(Rgba::rgb(
                digit(0)? * 17,
                digit(1)? * 17,
                digit(2)? * 17,
            )),
            6 => Some(Rgba::rgb(byte(0)?, byte(2)?, byte(4)?)),
            8 => Some(Rgba::new(byte(0)?, byte(2)?, byte(4)?, byte(6)?)),
            _ => None,
        };
    }
    if let Some(inner) = s
        .strip_prefix("rgba(")
        .or_else(|| s.strip_prefix("rgb("))
        .and_then(|r| r.strip_suffix(')'))
    {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() < 3 {
            return None;
        }
        let channel = |p: &str| -> Option<u8> {
            if let Some(pct) = p.strip_suffix('%') {
                let v: f64 = pct.trim().parse().ok()?;
                Some((v / 100.0 * 255.0).round().clamp(0.0, 255.0) as u8)
            } else {
                let v: f64 = p.parse().ok()?;
                Some(v.round().clamp(0.0, 255.0) as u8)
            }
        };
        let (r, g, b) = (channel(parts[0])?, channel(parts[1])?, channel(parts[2])?);
        let a = if parts.len() == 4 {
            let v: f64 = parts[3].parse().ok()?;
            (v.clamp(0.0, 1.0) * 255.0).round() as u8
        } else {
            255
        };
        return Some(Rgba::new(r, g, b, a));
    }
    named_color(s)
}

/// Parse a length, accepting plain numbers and a `px` suffix.
fn parse_length(s: &str) -> Option<f64> {
    let s = s.trim();
    let s = s.strip_suffix("px").unwrap_or(s);
    s.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_view_box(s: &str) -> Option<(f64, f64, f64, f64)> {
    let nums: Vec<f64> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .ok()?;
    match nums[..] {
        [min_x, min_y, w, h] if w > 0.0 && h > 0.0 => Some((min_x, min_y, w, h)),
        _ => None,
    }
}

fn attr_f64(el: &roxmltree::Node, name: &str) -> Option<f64> {
    el.attribute(name).and_then(parse_length)
}

fn parse_points(s: &str) -> Vec<Point> {
    let nums: Vec<f64> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .filter_map(|t| t.parse().ok())
        .collect();
    nums.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect()
}

/// Parse an SVG transform list into a single matrix.
fn parse_transform(s: &str) -> Affine {
    let mut m = Affine::IDENTITY;
    let mut rest = s.trim();
    while let Some(open) = rest.find('(') {
        let name = rest[..open].trim().trim_start_matches(',').trim();
        let Some(close) = rest[open..].find(')') else { break };
        let args: Vec<f64> = rest[open + 1..open + close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .filter_map(|t| t.parse().ok())
            .collect();
        let op = match (name, args.len()) {
            ("matrix", 6) => Affine::matrix(args[0], args[1], args[2], args[3], args[4], args[5]),
            ("translate", 1) => Affine::translate(args[0], 0.0),
            ("translate", 2) => Affine::translate(args[0], args[1]),
            ("scale", 1) => Affine::scale(args[0], args[0]),
            ("scale", 2) => Affine::scale(args[0], args[1]),
            ("rotate", 1) => Affine::rotate_deg(args[0]),
            ("rotate", 3) => Affine::translate(args[1], args[2])
                .then(Affine::rotate_deg(args[0]))
                .then(Affine::translate(-args[1], -args[2])),
            ("skewX", 1) => Affine::skew_x_deg(args[0]),
            ("skewY", 1) => Affine::skew_y_deg(args[0]),
            _ => Affine::IDENTITY,
        };
        m = m.then(op);
        rest = &rest[open + close + 1..];
    }
    m
}

// Quarter-circle cubic control distance for a unit radius.
const KAPPA: f64 = 0.552_284_749_830_793_4;

fn ellipse_path(cx: f64, cy: f64, rx: f64, ry: f64) -> PathData {
    let kx = rx * KAPPA;
    let ky = ry * KAPPA;
    let cubic = |c1: (f64, f64), c2: (f64, f64), to: (f64, f64)| Segment::Cubic {
        c1: Point::new(c1.0, c1.1),
        c2: Point::new(c2.0, c2.1),
        to: Point::new(to.0, to.1),
    };
    PathData {
        subpaths: vec![Subpath {
            start: Point::new(cx + rx, cy),
            segments: vec![
                cubic((cx + rx, cy + ky), (cx + kx, cy + ry), (cx, cy + ry)),
                cubic((cx - kx, cy + ry), (cx - rx, cy + ky), (cx - rx, cy)),
                cubic((cx - rx, cy - ky), (cx - kx, cy - ry), (cx, cy - ry)),
                cubic((cx + kx, cy - ry), (cx + rx, cy - ky), (cx + rx, cy)),
            ],
            closed: true,
        }],
    }
}

fn rect_to_path(el: &roxmltree::Node) -> Option<PathData> {
    let x = attr_f64(el, "x").unwrap_or(0.0);
    let y = attr_f64(el, "y").unwrap_or(0.0);
    let w = attr_f64(el, "width")?;
    let h = attr_f64(el, "height")?;
    if w <= 0.0 || h <= 0.0 {
        return None;
    }
    let rx_attr = attr_f64(el, "rx");
    let ry_attr = attr_f64(el, "ry");
    let mut rx = rx_attr.or(ry_attr).unwrap_or(0.0).max(0.0);
    let mut ry = ry_attr.or(rx_attr).unwrap_or(0.0).max(0.0);
    rx = rx.min(w / 2.0);
    ry = ry.min(h / 2.0);

    let p = Point::new;
    if rx == 0.0 || ry == 0.0 {
        return Some(PathData {
            subpaths: vec![Subpath {
                start: p(x, y),
                segments: vec![
                    Segment::Line(p(x + w, y)),
                    Segment::Line(p(x + w, y + h)),
                    Segment::Line(p(x, y + h)),
                    Segment::Line(p(x, y)),
                ],
                closed: true,
            }],
        });
    }

    let kx = rx * KAPPA;
    let ky = ry * KAPPA;
    let cubic = |c1: Point, c2: Point, to: Point| Segment::Cubic { c1, c2, to };
    Some(PathData {
        subpaths: vec![Subpath {
            start: p(x + rx, y),
            segments: vec![
                Segment::Line(p(x + w - rx, y)),
                cubic(p(x + w - rx + kx, y), p(x + w, y + ry - ky), p(x + w, y + ry)),
                Segment::Line(p(x + w, y + h - ry)),
                cubic(
                    p(x + w, y + h - ry + ky),
                    p(x + w - rx + kx, y + h),
                    p(x + w - rx, y + h),
                ),
                Segment::Line(p(x + rx, y + h)),
                cubic(p(x + rx - kx, y + h), p(x, y + h - ry + ky), p(x, y + h - ry)),
                Segment::Line(p(x, y + ry)),
                cubic(p(x, y + ry - ky), p(x + rx - kx, y), p(x + rx, y)),
            ],
            closed: true,
        }],
    })
}

// ---------------------------------------------------------------------------
// Path data (`d` attribute)
// ---------------------------------------------------------------------------

struct PathScanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PathScanner<'a> {
    fn new(s: &'a str) -> Self {
        Self {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' | b',' => self.pos += 1,
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_separators();
        self.bytes.get(self.pos).copied()
    }

    fn next_command(&mut self) -> Option<u8> {
        let c = self.peek()?;
        if c.is_ascii_alphabetic() {
            self.pos += 1;
            Some(c)
        } else {
            None
        }
    }

    /// True if the next token looks like the start of a number.
    fn has_number(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c == b'+' || c == b'-' || c == b'.' || c.is_ascii_digit())
    }

    fn number(&mut self) -> std::result::Result<f64, String> {
        self.skip_separators();
        let start = self.pos;
        let b = self.bytes;
        if self.pos < b.len() && (b[self.pos] == b'+' || b[self.pos] == b'-') {
            self.pos += 1;
        }
        let mut seen_dot = false;
        while self.pos < b.len() {
            match b[self.pos] {
                b'0'..=b'9' => self.pos += 1,
                b'.' if !seen_dot => {
                    seen_dot = true;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        // Exponent.
        if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < b.len() && (b[self.pos] == b'+' || b[self.pos] == b'-') {
                self.pos += 1;
            }
            if self.pos < b.len() && b[self.pos].is_ascii_digit() {
                while self.pos < b.len() && b[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&b[start..self.pos]).unwrap_or("");
        text.parse::<f64>()
            .map_err(|_| format!("bad number at byte {start}"))
    }

    /// Arc flags are single `0`/`1` characters, possibly unseparated.
    fn flag(&mut self) -> std::result::Result<bool, String> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(false)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(true)
            }
            _ => Err(format!("bad arc flag at byte {}", self.pos)),
        }
    }

    fn point(&mut self) -> std::result::Result<Point, String> {
        let x = self.number()?;
        let y = self.number()?;
        Ok(Point::new(x, y))
    }
}

/// Normalize a `d` attribute into absolute move/line/cubic/close form.
pub(crate) fn parse_path_data(d: &str) -> std::result::Result<PathData, String> {
    let mut scanner = PathScanner::new(d);
    let mut data = PathData::default();
    let mut current: Option<Subpath> = None;

    let mut pos = Point::new(0.0, 0.0);
    let mut start = Point::new(0.0, 0.0);
    let mut last_cmd = 0u8;
    // Reflection anchors for S/T shorthands.
    let mut prev_cubic_ctrl: Option<Point> = None;
    let mut prev_quad_ctrl: Option<Point> = None;

    macro_rules! flush {
        () => {
            if let Some(sp) = current.take() {
                if !sp.segments.is_empty() {
                    data.subpaths.push(sp);
                }
            }
        };
    }

    macro_rules! ensure_subpath {
        () => {
            if current.is_none() {
                current = Some(Subpath {
                    start: pos,
                    segments: Vec::new(),
                    closed: false,
                });
                start = pos;
            }
        };
    }

    while let Some(&c) = scanner.peek().as_ref() {
        let cmd = if c.is_ascii_alphabetic() {
            scanner.next_command().unwrap()
        } else {
            // Implicit command repetition; an initial bare number is invalid.
            match last_cmd {
                0 => return Err("path data must start with a command".into()),
                b'M' => b'L',
                b'm' => b'l',
                other => other,
            }
        };
        let rel = cmd.is_ascii_lowercase();
        let base = cmd.to_ascii_uppercase();
        let offset = |rel: bool, pos: Point| if rel { pos } else { Point::new(0.0, 0.0) };

        match base {
            b'M' => {
                let p = scanner.point()?;
                let o = offset(rel, pos);
                flush!();
                pos = p.add(o);
                start = pos;
                current = Some(Subpath {
                    start: pos,
                    segments: Vec::new(),
                    closed: false,
                });
                prev_cubic_ctrl = None;
                prev_quad_ctrl = None;
            }
            b'L' => {
                let p = scanner.point()?.add(offset(rel, pos));
                ensure_subpath!();
                current.as_mut().unwrap().segments.push(Segment::Line(p));
                pos = p;
                prev_cubic_ctrl = None;
                prev_quad_ctrl = None;
            }
            b'H' => {
                let x = scanner.number()?;
                let p = Point::new(if rel { pos.x + x } else { x }, pos.y);
                ensure_subpath!();
                current.as_mut().unwrap().segments.push(Segment::Line(p));
                pos = p;
                prev_cubic_ctrl = None;
                prev_quad_ctrl = None;
            }
            b'V' => {
                let y = scanner.number()?;
                let p = Point::new(pos.x, if rel { pos.y + y } else { y });
                ensure_subpath!();
                current.as_mut().unwrap().segments.push(Segment::Line(p));
                pos = p;
                prev_cubic_ctrl = None;
                prev_quad_ctrl = None;
            }
            b'C' | b'S' => {
                let o = offset(rel, pos);
                let c1 = if base == b'C' {
                    scanner.point()?.add(o)
                } else {
                    // Reflect the previous cubic control, else current point.
                    match prev_cubic_ctrl {
                        Some(ctrl) => pos.scale(2.0).sub(ctrl),
                        None => pos,
                    }
                };
                let c2 = scanner.point()?.add(o);
                let to = scanner.point()?.add(o);
                ensure_subpath!();
                current
                    .as_mut()
                    .unwrap()
                    .segments
                    .push(Segment::Cubic { c1, c2, to });
                pos = to;
                prev_cubic_ctrl = Some(c2);
                prev_quad_ctrl = None;
            }
            b'Q' | b'T' => {
                let o = offset(rel, pos);
                let q = if base == b'Q' {
                    scanner.point()?.add(o)
                } else {
                    match prev_quad_ctrl {
                        Some(ctrl) => pos.scale(2.0).sub(ctrl),
                        None => pos,
                    }
                };
                let to = scanner.point()?.add(o);
                // Exact degree elevation quadratic -> cubic.
                let c1 = pos.add(q.sub(pos).scale(2.0 / 3.0));
                let c2 = to.add(q.sub(to).scale(2.0 / 3.0));
                ensure_subpath!();
                current
                    .as_mut()
                    .unwrap()
                    .segments
                    .push(Segment::Cubic { c1, c2, to });
                pos = to;
                prev_quad_ctrl = Some(q);
                prev_cubic_ctrl = None;
            }
            b'A' => {
                let rx = scanner.number()?;
                let ry = scanner.number()?;
                let rotation = scanner.number()?;
                let large_arc = scanner.flag()?;
                let sweep = scanner.flag()?;
                let to = scanner.point()?.add(offset(rel, pos));
                ensure_subpath!();
                let segs = arc_to_cubics(pos, to, rx, ry, rotation, large_arc, sweep);
                current.as_mut().unwrap().segments.extend(segs);
                pos = to;
                prev_cubic_ctrl = None;
                prev_quad_ctrl = None;
            }
            b'Z' => {
                if let Some(sp) = current.as_mut() {
                    sp.closed = true;
                }
                flush!();
                pos = start;
                prev_cubic_ctrl = None;
                prev_quad_ctrl = None;
            }
            other => return Err(format!("unknown path command {:?}", other as char)),
        }
        last_cmd = cmd;

        // Commands with repeated coordinate groups loop here naturally:
        // the next token either starts a number (implicit repeat) or a
        // command letter.
        if !scanner.has_number() && scanner.peek().is_none() {
            break;
        }
    }
    flush!();
    Ok(data)
}

/// Convert an elliptical arc to cubic segments, max 90 degrees each.
/// Standard endpoint-to-center conversion.
fn arc_to_cubics(
    from: Point,
    to: Point,
    rx: f64,
    ry: f64,
    rotation_deg: f64,
    large_arc: bool,
    sweep: bool,
) -> Vec<Segment> {
    if from == to {
        return Vec::new();
    }
    let mut rx = rx.abs();
    let mut ry = ry.abs();
    if rx == 0.0 || ry == 0.0 {
        return vec![Segment::Line(to)];
    }

    let phi = rotation_deg.to_radians();
    let (sin_phi, cos_phi) = phi.sin_cos();

    // Midpoint in the rotated frame.
    let dx = (from.x - to.x) / 2.0;
    let dy = (from.y - to.y) / 2.0;
    let x1p = cos_phi * dx + sin_phi * dy;
    let y1p = -sin_phi * dx + cos_phi * dy;

    // Scale radii up if the endpoints cannot be connected.
    let lambda = (x1p * x1p) / (rx * rx) + (y1p * y1p) / (ry * ry);
    if lambda > 1.0 {
        let s = lambda.sqrt();
        rx *= s;
        ry *= s;
    }

    let num = (rx * rx) * (ry * ry) - (rx * rx) * (y1p * y1p) - (ry * ry) * (x1p * x1p);
    let den = (rx * rx) * (y1p * y1p) + (ry * ry) * (x1p * x1p);
    let mut coef = (num.max(0.0) / den).sqrt();
    if large_arc == sweep {
        coef = -coef;
    }
    let cxp = coef * rx * y1p / ry;
    let cyp = -coef * ry * x1p / rx;

    let cx = cos_phi * cxp - sin_phi * cyp + (from.x + to.x) / 2.0;
    let cy = sin_phi * cxp + cos_phi * cyp + (from.y + to.y) / 2.0;

    let angle = |ux: f64, uy: f64, vx: f64, vy: f64| -> f64 {
        let dot = ux * vx + uy * vy;
        let len = (ux * ux + uy * uy).sqrt() * (vx * vx + vy * vy).sqrt();
        let mut a = (dot / len).clamp(-1.0, 1.0).acos();
        if ux * vy - uy * vx < 0.0 {
            a = -a;
        }
        a
    };
    let theta1 = angle(1.0, 0.0, (x1p - cxp) / rx, (y1p - cyp) / ry);
    let mut delta = angle(
        (x1p - cxp) / rx,
        (y1p - cyp) / ry,
        (-x1p - cxp) / rx,
        (-y1p - cyp) / ry,
    );
    if !sweep && delta > 0.0 {
        delta -= std::f64::consts::TAU;
    } else if sweep && delta < 0.0 {
        delta += std::f64::consts::TAU;
    }

    let segments = (delta.abs() / std::f64::consts::FRAC_PI_2).ceil().max(1.0) as usize;
    let step = delta / segments as f64;
    let eval = |theta: f64| -> (Point, Point) {
        let (s, c) = theta.sin_cos();
        let p = Point::new(
            cx + rx * c * cos_phi - ry * s * sin_phi,
            cy + rx * c * sin_phi + ry * s * cos_phi,
        );
        let d = Point::new(
            -rx * s * cos_phi - ry * c * sin_phi,
            -rx * s * sin_phi + ry * c * cos_phi,
        );
        (p, d)
    };

    let alpha = (4.0 / 3.0) * (step / 4.0).tan();
    let mut out = Vec::with_capacity(segments);
    let (mut p0, mut d0) = eval(theta1);
    for i in 0..segments {
        let (p1, d1) = eval(theta1 + step * (i as f64 + 1.0));
        // Keep the exact endpoints so round-trips stay tight.
        let seg_from = if i == 0 { from } else { p0 };
        let seg_to = if i == segments - 1 { to } else { p1 };
        out.push(Segment::Cubic {
            c1: seg_from.add(d0.scale(alpha)),
            c2: seg_to.sub(d1.scale(alpha)),
            to: seg_to,
        });
        p0 = p1;
        d0 = d1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{flatten_transforms, serialize_svg};
    use super::*;

    #[test]
    fn minimal_document_maps_to_one_path() {
        let parsed =
            parse_svg(r##"<svg width="4" height="4"><path d="M0 0 H4 V4 H0 Z" fill="#000"/></svg>"##)
                .unwrap();
        assert_eq!(parsed.doc.width, 4.0);
        assert_eq!(parsed.doc.height, 4.0);
        assert_eq!(parsed.doc.nodes.len(), 1);
        let Node::Path(p) = &parsed.doc.nodes[0] else {
            panic!("expected path")
        };
        assert_eq!(p.fill, Some(Rgba::new(0, 0, 0, 255)));
        let sp = &p.data.subpaths[0];
        assert!(sp.closed);
        assert_eq!(sp.start, Point::new(0.0, 0.0));
        assert_eq!(sp.segments.len(), 3);
    }

    #[test]
    fn rect_converts_to_four_lines_and_close() {
        let parsed = parse_svg(
            r#"<svg width="4" height="4"><rect x="0" y="0" width="2" height="2"/></svg>"#,
        )
        .unwrap();
        let Node::Path(p) = &parsed.doc.nodes[0] else {
            panic!("expected path")
        };
        let sp = &p.data.subpaths[0];
        assert!(sp.closed);
        assert_eq!(sp.segments.len(), 4);
        assert!(sp
            .segments
            .iter()
            .all(|s| matches!(s, Segment::Line(_))));
        // Default fill is black per SVG.
        assert_eq!(p.fill, Some(Rgba::BLACK));
    }

    #[test]
    fn three_groups_parse_in_source_order() {
        let text = r##"<svg width="16" height="16">
            <g id="base"><rect width="16" height="16" fill="#eee"/></g>
            <g id="mid"><circle cx="8" cy="8" r="4" fill="#f00"/></g>
            <g id="top"><path d="M0 0 L16 16" stroke="#000" fill="none"/></g>
        </svg>"##;
        let parsed = parse_svg(text).unwrap();
        assert_eq!(parsed.doc.nodes.len(), 3);
        let ids: Vec<_> = parsed
            .doc
            .nodes
            .iter()
            .map(|n| match n {
                Node::Group(g) => g.id.clone().unwrap(),
                Node::Path(_) => panic!("expected groups"),
            })
            .collect();
        assert_eq!(ids, ["base", "mid", "top"]);
        assert!(parsed.warnings.is_empty(), "{:?}", parsed.warnings);
    }

    #[test]
    fn malformed_xml_is_an_error() {
        assert!(matches!(
            parse_svg("<svg width='4' height='4'><path"),
            Err(Error::MalformedXml(_))
        ));
    }

    #[test]
    fn missing_viewport_is_an_error() {
        assert!(matches!(
            parse_svg("<svg><rect width=\"2\" height=\"2\"/></svg>"),
            Err(Error::MissingViewport)
        ));
    }

    #[test]
    fn viewbox_supplies_size_and_offset() {
        let parsed = parse_svg(
            r##"<svg viewBox="10 10 20 20"><rect x="10" y="10" width="20" height="20" fill="#fff"/></svg>"##,
        )
        .unwrap();
        assert_eq!((parsed.doc.width, parsed.doc.height), (20.0, 20.0));
        let flat = flatten_transforms(&parsed.doc).unwrap();
        let (_, p) = flat.paths_in_paint_order()[0];
        assert_eq!(p.data.subpaths[0].start, Point::new(0.0, 0.0));
    }

    #[test]
    fn unsupported_elements_warn_but_parse_continues() {
        let parsed = parse_svg(
            r##"<svg width="8" height="8"><text x="0" y="0">hi</text><rect width="8" height="8"/></svg>"##,
        )
        .unwrap();
        assert_eq!(parsed.doc.nodes.len(), 1);
        assert!(parsed.warnings.iter().any(|w| w.contains("<text>")));
    }

    #[test]
    fn gradient_paint_warns_and_drops_fill() {
        let parsed = parse_svg(
            r##"<svg width="8" height="8"><rect width="8" height="8" fill="url(#g)"/></svg>"##,
        )
        .unwrap();
        // No fill and no stroke: the shape is dropped entirely.
        assert!(parsed.doc.nodes.is_empty());
        assert!(parsed.warnings.len() >= 2);
    }

    #[test]
    fn colors_parse_in_all_supported_forms() {
        let mut warnings = Vec::new();
        assert_eq!(parse_color("#fff"), Some(Rgba::WHITE));
        assert_eq!(parse_color("#102030"), Some(Rgba::rgb(16, 32, 48)));
        assert_eq!(parse_color("#10203040"), Some(Rgba::new(16, 32, 48, 64)));
        assert_eq!(parse_color("crimson"), Some(Rgba::rgb(220, 20, 60)));
        assert_eq!(parse_color("currentColor"), Some(Rgba::BLACK));
        assert_eq!(parse_color("rgb(1, 2, 3)"), Some(Rgba::rgb(1, 2, 3)));
        assert_eq!(
            parse_color("rgba(255, 0, 0, 0.5)"),
            Some(Rgba::new(255, 0, 0, 128))
        );
        assert_eq!(parse_paint("none", &mut warnings), Some(Paint::None));
    }

    #[test]
    fn style_attribute_overrides_presentation() {
        let parsed = parse_svg(
            r##"<svg width="8" height="8"><rect width="8" height="8" fill="#f00" style="fill:#00ff00"/></svg>"##,
        )
        .unwrap();
        let Node::Path(p) = &parsed.doc.nodes[0] else {
            panic!()
        };
        assert_eq!(p.fill, Some(Rgba::rgb(0, 255, 0)));
    }

    #[test]
    fn group_styles_inherit_to_children() {
        let parsed = parse_svg(
            r##"<svg width="8" height="8"><g fill="#123456" fill-rule="evenodd"><rect width="8" height="8"/></g></svg>"##,
        )
        .unwrap();
        let flat = flatten_transforms(&parsed.doc).unwrap();
        let (_, p) = flat.paths_in_paint_order()[0];
        assert_eq!(p.fill, Some(Rgba::rgb(0x12, 0x34, 0x56)));
        assert_eq!(p.fill_rule, FillRule::EvenOdd);
    }

    #[test]
    fn transform_list_parses_and_composes() {
        let m = parse_transform("translate(10,0)");
        assert_eq!(m.apply(Point::new(0.0, 0.0)), Point::new(10.0, 0.0));

        let m = parse_transform("scale(2) translate(1 1)");
        assert_eq!(m.apply(Point::new(0.0, 0.0)), Point::new(2.0, 2.0));

        let m = parse_transform("matrix(1 0 0 1 5 6)");
        assert_eq!(m.apply(Point::new(1.0, 1.0)), Point::new(6.0, 7.0));

        let m = parse_transform("rotate(90 1 0)");
        let p = m.apply(Point::new(1.0, 1.0));
        assert!((p.x - 0.0).abs() < 1e-12 && (p.y - 0.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_elevates_to_cubic() {
        let data = parse_path_data("M0 0 Q10 0 10 10").unwrap();
        let sp = &data.subpaths[0];
        let Segment::Cubic { c1, c2, to } = sp.segments[0] else {
            panic!("expected cubic")
        };
        assert_eq!(to, Point::new(10.0, 10.0));
        // Degree elevation: c1 = P0 + 2/3 (Q - P0), c2 = P2 + 2/3 (Q - P2).
        assert!((c1.x - 20.0 / 3.0).abs() < 1e-12 && c1.y.abs() < 1e-12);
        assert!((c2.x - 10.0).abs() < 1e-12 && (c2.y - 10.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn relative_commands_and_implicit_lineto() {
        let data = parse_path_data("m1 1 2 0 l0 2 h-2 v-2 z").unwrap();
        let sp = &data.subpaths[0];
        assert_eq!(sp.start, Point::new(1.0, 1.0));
        let pts: Vec<Point> = sp
            .segments
            .iter()
            .map(|s| match s {
                Segment::Line(p) => *p,
                Segment::Cubic { .. } => panic!("expected lines"),
            })
            .collect();
        assert_eq!(
            pts,
            vec![
                Point::new(3.0, 1.0),
                Point::new(3.0, 3.0),
                Point::new(1.0, 3.0),
                Point::new(1.0, 1.0)
            ]
        );
        assert!(sp.closed);
    }

    #[test]
    fn smooth_cubic_reflects_control() {
        let data = parse_path_data("M0 0 C0 10 10 10 10 0 S20 -10 20 0").unwrap();
        let sp = &data.subpaths[0];
        let Segment::Cubic { c1, .. } = sp.segments[1] else {
            panic!()
        };
        // Reflection of (10,10) about (10,0) is (10,-10).
        assert_eq!(c1, Point::new(10.0, -10.0));
    }

    #[test]
    fn arc_endpoints_are_exact_and_points_stay_on_circle() {
        // Half circle of radius 5 from (0,0) to (10,0).
        let data = parse_path_data("M0 0 A5 5 0 0 1 10 0").unwrap();
        let sp = &data.subpaths[0];
        let last = match *sp.segments.last().unwrap() {
            Segment::Cubic { to, .. } => to,
            Segment::Line(p) => p,
        };
        assert_eq!(last, Point::new(10.0, 0.0));
        // Sample the cubics; all points should stay within 1% of radius 5
        // from the center (5,0).
        let mut pos = sp.start;
        for seg in &sp.segments {
            if let Segment::Cubic { c1, c2, to } = *seg {
                for i in 0..=16 {
                    let t = f64::from(i) / 16.0;
                    let p = cubic_point(pos, c1, c2, to, t);
                    let r = ((p.x - 5.0).powi(2) + p.y.powi(2)).sqrt();
                    assert!((r - 5.0).abs() < 0.05, "radius {r} off at t={t}");
                }
                pos = to;
            }
        }
    }

    fn cubic_point(p0: Point, c1: Point, c2: Point, p3: Point, t: f64) -> Point {
        let u = 1.0 - t;
        Point::new(
            u * u * u * p0.x + 3.0 * u * u * t * c1.x + 3.0 * u * t * t * c2.x + t * t * t * p3.x,
            u * u * u * p0.y + 3.0 * u * u * t * c1.y + 3.0 * u * t * t * c2.y + t * t * t * p3.y,
        )
    }

    #[test]
    fn serialize_then_reparse_preserves_geometry() {
        let text = r##"<svg width="20" height="20">
            <g id="a" transform="translate(2,2)"><rect width="5" height="5" fill="#ff0000"/></g>
            <path d="M1 1 C2 0 3 0 4 1 Z" fill="#00000080"/>
        </svg>"##;
        let doc = parse_svg(text).unwrap().doc;
        let round = parse_svg(&serialize_svg(&doc)).unwrap().doc;
        let a = flatten_transforms(&doc).unwrap();
        let b = flatten_transforms(&round).unwrap();
        let pa = a.paths_in_paint_order();
        let pb = b.paths_in_paint_order();
        assert_eq!(pa.len(), pb.len());
        for ((_, x), (_, y)) in pa.iter().zip(&pb) {
            assert_eq!(x.fill, y.fill);
            for (sx, sy) in x.data.subpaths.iter().zip(&y.data.subpaths) {
                assert!(sx.start.distance(sy.start) <= 0.011);
                for (gx, gy) in sx.segments.iter().zip(&sy.segments) {
                    match (gx, gy) {
                        (Segment::Line(p), Segment::Line(q)) => {
                            assert!(p.distance(*q) <= 0.011)
                        }
                        (
                            Segment::Cubic { c1, c2, to },
                            Segment::Cubic {
                                c1: d1,
                                c2: d2,
                                to: t2,
                            },
                        ) => {
                            assert!(c1.distance(*d1) <= 0.011);
                            assert!(c2.distance(*d2) <= 0.011);
                            assert!(to.distance(*t2) <= 0.011);
                        }
                        _ => panic!("segment kinds diverged"),
                    }
                }
            }
        }
    }

    #[test]
    fn serialize_empty_document() {
        let doc = SvgDocument::new(4.0, 4.0);
        let text = serialize_svg(&doc);
        assert_eq!(
            text,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"4\" height=\"4\" viewBox=\"0 0 4 4\"/>\n"
        );
    }
}

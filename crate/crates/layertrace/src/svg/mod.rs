//! Minimal SVG document model: groups and filled/stroked paths whose
//! geometry is normalized to absolute move/line/cubic/close commands.
//!
//! Node order encodes z-order (later nodes paint on top). Parsing lives in
//! [`parse`], serialization in [`write`].

mod colors;
mod parse;
mod write;

pub use parse::{parse_svg, SvgParse};
pub use write::serialize_svg;

use crate::color::Rgba;
use crate::error::{Error, Result};
use crate::geom::{Affine, BBox, Point};

/// A parsed SVG document: viewport size plus ordered top-level nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgDocument {
    pub width: f64,
    pub height: f64,
    pub nodes: Vec<Node>,
}

/// One element of the document tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Group(Group),
    Path(PathElement),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub id: Option<String>,
    pub transform: Affine,
    pub children: Vec<Node>,
}

/// A drawable path. Holds at least a fill or a stroke.
#[derive(Debug, Clone, PartialEq)]
pub struct PathElement {
    pub data: PathData,
    pub fill: Option<Rgba>,
    pub stroke: Option<Stroke>,
    pub fill_rule: FillRule,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stroke {
    pub color: Rgba,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillRule {
    NonZero,
    EvenOdd,
}

/// Normalized path geometry: a list of subpaths, each starting with an
/// implicit move and containing only absolute line/cubic segments.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathData {
    pub subpaths: Vec<Subpath>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subpath {
    pub start: Point,
    pub segments: Vec<Segment>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line(Point),
    Cubic { c1: Point, c2: Point, to: Point },
}

/// One independently editable layer: a top-level child of the root.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub index: usize,
    pub node: Node,
}

impl PathData {
    /// Apply an affine transform to every coordinate.
    pub fn transform(&self, m: Affine) -> PathData {
        PathData {
            subpaths: self
                .subpaths
                .iter()
                .map(|sp| Subpath {
                    start: m.apply(sp.start),
                    segments: sp
                        .segments
                        .iter()
                        .map(|seg| match *seg {
                            Segment::Line(p) => Segment::Line(m.apply(p)),
                            Segment::Cubic { c1, c2, to } => Segment::Cubic {
                                c1: m.apply(c1),
                                c2: m.apply(c2),
                                to: m.apply(to),
                            },
                        })
                        .collect(),
                    closed: sp.closed,
                })
                .collect(),
        }
    }

    /// Control-point bounding box (contains the true curve bounds).
    pub fn control_bounds(&self) -> BBox {
        let mut bb = BBox::EMPTY;
        for sp in &self.subpaths {
            bb.include(sp.start);
            for seg in &sp.segments {
                match *seg {
                    Segment::Line(p) => bb.include(p),
                    Segment::Cubic { c1, c2, to } => {
                        bb.include(c1);
                        bb.include(c2);
                        bb.include(to);
                    }
                }
            }
        }
        bb
    }
}

impl Node {
    /// Visit every path in this subtree in paint order, with the transform
    /// accumulated from enclosing groups.
    pub fn visit_paths<'a>(&'a self, parent: Affine, f: &mut impl FnMut(Affine, &'a PathElement)) {
        match self {
            Node::Path(p) => f(parent, p),
            Node::Group(g) => {
                let m = parent.then(g.transform);
                for child in &g.children {
                    child.visit_paths(m, f);
                }
            }
        }
    }

    fn path_count(&self) -> usize {
        match self {
            Node::Path(_) => 1,
            Node::Group(g) => g.children.iter().map(Node::path_count).sum(),
        }
    }
}

impl SvgDocument {
    pub fn new(width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            nodes: Vec::new(),
        }
    }

    /// All paths in paint order with their accumulated transforms.
    pub fn paths_in_paint_order(&self) -> Vec<(Affine, &PathElement)> {
        let mut out = Vec::new();
        for node in &self.nodes {
            node.visit_paths(Affine::IDENTITY, &mut |m, p| out.push((m, p)));
        }
        out
    }

    /// Number of path elements in the whole tree.
    pub fn path_count(&self) -> usize {
        self.nodes.iter().map(Node::path_count).sum()
    }
}

/// Push all group transforms down into path coordinates. The result has
/// identity transforms on every group; stroke widths are scaled by the
/// uniform-scale factor `sqrt(|det|)`.
pub fn flatten_transforms(doc: &SvgDocument) -> Result<SvgDocument> {
    fn flatten_node(node: &Node, parent: Affine) -> Result<Node> {
        match node {
            Node::Path(p) => {
                if parent.det() == 0.0 {
                    return Err(Error::SingularTransform);
                }
                let stroke = p.stroke.map(|s| Stroke {
                    color: s.color,
                    width: s.width * parent.det().abs().sqrt(),
                });
                Ok(Node::Path(PathElement {
                    data: p.data.transform(parent),
                    fill: p.fill,
                    stroke,
                    fill_rule: p.fill_rule,
                }))
            }
            Node::Group(g) => {
                let m = parent.then(g.transform);
                if m.det() == 0.0 {
                    return Err(Error::SingularTransform);
                }
                Ok(Node::Group(Group {
                    id: g.id.clone(),
                    transform: Affine::IDENTITY,
                    children: g
                        .children
                        .iter()
                        .map(|c| flatten_node(c, m))
                        .collect::<Result<_>>()?,
                }))
            }
        }
    }

    Ok(SvgDocument {
        width: doc.width,
        height: doc.height,
        nodes: doc
            .nodes
            .iter()
            .map(|n| flatten_node(n, Affine::IDENTITY))
            .collect::<Result<_>>()?,
    })
}

/// Split the document into layers: one per top-level child, in z-order.
/// A bare top-level path becomes a singleton layer.
pub fn enumerate_layers(doc: &SvgDocument) -> Result<Vec<Layer>> {
    if doc.nodes.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Ok(doc
        .nodes
        .iter()
        .cloned()
        .enumerate()
        .map(|(index, node)| Layer { index, node })
        .collect())
}

/// Rebuild a document from a slice of layers, preserving order.
pub fn document_from_layers(width: f64, height: f64, layers: &[Layer]) -> SvgDocument {
    SvgDocument {
        width,
        height,
        nodes: layers.iter().map(|l| l.node.clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_path(points: &[(f64, f64)]) -> PathElement {
        let start = Point::new(points[0].0, points[0].1);
        let segments = points[1..]
            .iter()
            .map(|&(x, y)| Segment::Line(Point::new(x, y)))
            .collect();
        PathElement {
            data: PathData {
                subpaths: vec![Subpath {
                    start,
                    segments,
                    closed: true,
                }],
            },
            fill: Some(Rgba::BLACK),
            stroke: None,
            fill_rule: FillRule::NonZero,
        }
    }

    #[test]
    fn flatten_translates_path_start() {
        let doc = SvgDocument {
            width: 10.0,
            height: 10.0,
            nodes: vec![Node::Group(Group {
                id: None,
                transform: Affine::translate(10.0, 0.0),
                children: vec![Node::Path(line_path(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]))],
            })],
        };
        let flat = flatten_transforms(&doc).unwrap();
        let paths = flat.paths_in_paint_order();
        assert_eq!(paths[0].1.data.subpaths[0].start, Point::new(10.0, 0.0));
        assert!(paths[0].0.is_identity());
    }

    #[test]
    fn flatten_composes_nested_transforms() {
        // scale(2) . translate(1,1): (0,0) -> (2,2)
        let doc = SvgDocument {
            width: 10.0,
            height: 10.0,
            nodes: vec![Node::Group(Group {
                id: None,
                transform: Affine::scale(2.0, 2.0),
                children: vec![Node::Group(Group {
                    id: None,
                    transform: Affine::translate(1.0, 1.0),
                    children: vec![Node::Path(line_path(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]))],
                })],
            })],
        };
        let flat = flatten_transforms(&doc).unwrap();
        let paths = flat.paths_in_paint_order();
        assert_eq!(paths[0].1.data.subpaths[0].start, Point::new(2.0, 2.0));
    }

    #[test]
    fn flatten_rejects_singular_transform() {
        let doc = SvgDocument {
            width: 10.0,
            height: 10.0,
            nodes: vec![Node::Group(Group {
                id: None,
                transform: Affine::scale(0.0, 1.0),
                children: vec![Node::Path(line_path(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]))],
            })],
        };
        assert!(matches!(
            flatten_transforms(&doc),
            Err(Error::SingularTransform)
        ));
    }

    #[test]
    fn enumerate_splits_only_top_level() {
        let path = Node::Path(line_path(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]));
        let nested = Node::Group(Group {
            id: None,
            transform: Affine::IDENTITY,
            children: vec![Node::Group(Group {
                id: None,
                transform: Affine::IDENTITY,
                children: vec![path.clone(), path.clone()],
            })],
        });
        let doc = SvgDocument {
            width: 1.0,
            height: 1.0,
            nodes: vec![nested.clone()],
        };
        assert_eq!(enumerate_layers(&doc).unwrap().len(), 1);

        let mixed = SvgDocument {
            width: 1.0,
            height: 1.0,
            nodes: vec![nested.clone(), path.clone(), nested],
        };
        let layers = enumerate_layers(&mixed).unwrap();
        assert_eq!(layers.len(), 3);
        assert_eq!(layers[1].index, 1);
    }

    #[test]
    fn enumerate_empty_errors() {
        let doc = SvgDocument::new(4.0, 4.0);
        assert!(matches!(enumerate_layers(&doc), Err(Error::EmptyDocument)));
    }
}

//! Laid-out graph ingestion, validation and obstacle construction.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{inflate_box_to_polygon, ConvexPolygon, Point, Rect, EPS_GEOM};

#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub id: String,
    pub center: Point,
    pub bbox: Rect,
    pub label: Option<String>,
}

/// Undirected edge between node indices; `source` keeps the input orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub source: usize,
    pub target: usize,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaidOutGraph {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
    pub bounds: Rect,
    index: HashMap<String, usize>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GraphError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    Malformed {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("duplicate node id {id:?} at nodes[{index}]")]
    DuplicateId { id: String, index: usize },
    #[error("edges[{index}] references unknown node id {id:?}")]
    UnknownEndpoint { id: String, index: usize },
    #[error("edges[{index}] is a self-loop on {id:?}")]
    SelfLoop { id: String, index: usize },
    #[error("nodes[{first}] ({first_id:?}) and nodes[{second}] ({second_id:?}) overlap")]
    Overlap {
        first: usize,
        first_id: String,
        second: usize,
        second_id: String,
    },
    #[error("nodes[{index}] ({id:?}) has a non-finite or negative coordinate or size")]
    InvalidNumber { id: String, index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    Json,
    DotSubset,
}

impl std::str::FromStr for InputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(InputFormat::Json),
            "dot" | "dot-subset" => Ok(InputFormat::DotSubset),
            other => Err(format!("unknown input format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub default_width: f64,
    pub default_height: f64,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            default_width: 1.0,
            default_height: 1.0,
        }
    }
}

/// Canonical JSON document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphDocument {
    pub nodes: Vec<NodeDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NodeDoc {
    pub id: String,
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeDoc {
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Non-fatal diagnostics produced while reading or preparing a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub message: String,
}

/// Reads a document without validating it.
pub fn parse_document(bytes: &[u8], format: InputFormat) -> Result<(GraphDocument, Vec<Warning>), GraphError> {
    match format {
        InputFormat::Json => {
            let doc: GraphDocument =
                serde_json::from_slice(bytes).map_err(|e| GraphError::Malformed {
                    message: e.to_string(),
                    line: e.line(),
                    column: e.column(),
                })?;
            Ok((doc, Vec::new()))
        }
        InputFormat::DotSubset => crate::dot::parse_dot(bytes),
    }
}

pub fn parse_graph(
    bytes: &[u8],
    format: InputFormat,
    options: &ParseOptions,
) -> Result<(LaidOutGraph, Vec<Warning>), GraphError> {
    let (doc, warnings) = parse_document(bytes, format)?;
    Ok((LaidOutGraph::from_document(doc, options)?, warnings))
}

impl LaidOutGraph {
    pub fn from_document(doc: GraphDocument, options: &ParseOptions) -> Result<Self, GraphError> {
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        let mut index = HashMap::with_capacity(doc.nodes.len());
        for (i, n) in doc.nodes.into_iter().enumerate() {
            let w = n.width.unwrap_or(options.default_width);
            let h = n.height.unwrap_or(options.default_height);
            let ok = n.x.is_finite() && n.y.is_finite() && w.is_finite() && h.is_finite();
            if !ok || w < 0.0 || h < 0.0 {
                return Err(GraphError::InvalidNumber { id: n.id, index: i });
            }
            // Zero extents fall back to the configured default box.
            let w = if w > 0.0 { w } else { options.default_width };
            let h = if h > 0.0 { h } else { options.default_height };
            if index.insert(n.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateId { id: n.id, index: i });
            }
            let center = Point::new(n.x, n.y);
            nodes.push(NodeRecord {
                id: n.id,
                center,
                bbox: Rect::from_center(center, w, h),
                label: n.label,
            });
        }
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (i, e) in doc.edges.into_iter().enumerate() {
            let resolve = |id: &str| {
                index.get(id).copied().ok_or_else(|| GraphError::UnknownEndpoint {
                    id: id.to_string(),
                    index: i,
                })
            };
            let source = resolve(&e.source)?;
            let target = resolve(&e.target)?;
            if source == target {
                return Err(GraphError::SelfLoop {
                    id: e.source,
                    index: i,
                });
            }
            edges.push(EdgeRecord {
                source,
                target,
                label: e.label,
            });
        }
        let g = Self::assemble(nodes, edges, index);
        g.check_overlaps()?;
        Ok(g)
    }

    /// Builds a graph from already validated parts (used for per-level subgraphs).
    pub fn from_parts(nodes: Vec<NodeRecord>, edges: Vec<EdgeRecord>) -> Self {
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), i))
            .collect();
        Self::assemble(nodes, edges, index)
    }

    fn assemble(nodes: Vec<NodeRecord>, edges: Vec<EdgeRecord>, index: HashMap<String, usize>) -> Self {
        let bounds = Rect::bounding(nodes.iter().flat_map(|n| [n.bbox.min, n.bbox.max]))
            .unwrap_or(Rect {
                min: Point::default(),
                max: Point::default(),
            });
        Self {
            nodes,
            edges,
            bounds,
            index,
        }
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edge_ids(&self, e: usize) -> (&str, &str) {
        let edge = &self.edges[e];
        (&self.nodes[edge.source].id, &self.nodes[edge.target].id)
    }

    pub fn average_node_size(&self) -> (f64, f64) {
        if self.nodes.is_empty() {
            return (0.0, 0.0);
        }
        let n = self.nodes.len() as f64;
        let w = self.nodes.iter().map(|v| v.bbox.width()).sum::<f64>() / n;
        let h = self.nodes.iter().map(|v| v.bbox.height()).sum::<f64>() / n;
        (w, h)
    }

    /// Overlap slack: boxes may interpenetrate by at most this much.
    fn overlap_slack(&self) -> f64 {
        EPS_GEOM * self.bounds.min.magnitude().max(self.bounds.max.magnitude()).max(1.0)
    }

    fn check_overlaps(&self) -> Result<(), GraphError> {
        let slack = self.overlap_slack();
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|&a, &b| {
            self.nodes[a]
                .bbox
                .min
                .x
                .total_cmp(&self.nodes[b].bbox.min.x)
                .then(a.cmp(&b))
        });
        let mut active: Vec<usize> = Vec::new();
        for &i in &order {
            let bi = self.nodes[i].bbox;
            active.retain(|&j| self.nodes[j].bbox.max.x > bi.min.x + slack);
            for &j in &active {
                let bj = self.nodes[j].bbox;
                let ox = bi.max.x.min(bj.max.x) - bi.min.x.max(bj.min.x);
                let oy = bi.max.y.min(bj.max.y) - bi.min.y.max(bj.min.y);
                if ox > slack && oy > slack {
                    let (a, b) = (i.min(j), i.max(j));
                    return Err(GraphError::Overlap {
                        first: a,
                        first_id: self.nodes[a].id.clone(),
                        second: b,
                        second_id: self.nodes[b].id.clone(),
                    });
                }
            }
            active.push(i);
        }
        Ok(())
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    x: n.center.x,
                    y: n.center.y,
                    width: Some(n.bbox.width()),
                    height: Some(n.bbox.height()),
                    label: n.label.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    source: self.nodes[e.source].id.clone(),
                    target: self.nodes[e.target].id.clone(),
                    label: e.label.clone(),
                })
                .collect(),
        }
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("graph document serializes")
    }
}

/// Padded obstacle polygons, one per node in node order.
#[derive(Debug, Clone)]
pub struct ObstacleSet {
    pub polygons: Vec<ConvexPolygon>,
    pub centers: Vec<Point>,
    pub paddings: Vec<f64>,
    pub warnings: Vec<Warning>,
}

impl ObstacleSet {
    pub fn len(&self) -> usize {
        self.polygons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    pub fn max_padding(&self) -> f64 {
        self.paddings.iter().copied().fold(0.0, f64::max)
    }
}

/// Number of chamfer chords per obstacle corner.
pub const CORNER_CUT: usize = 1;

/// Default padding: a quarter of the average node half-height.
pub fn default_padding(g: &LaidOutGraph) -> f64 {
    let (_, h) = g.average_node_size();
    if h > 0.0 {
        0.25 * 0.5 * h
    } else {
        1.0
    }
}

/// Inflates each box by `padding`. When two padded polygons would collide the
/// padding of both nodes is shrunk below half of their gap.
pub fn build_obstacles(boxes: &[Rect], centers: &[Point], ids: &[&str], padding: f64) -> ObstacleSet {
    assert_eq!(boxes.len(), centers.len());
    let mut paddings = vec![padding; boxes.len()];
    let mut warnings = Vec::new();

    // Sweep over x to find pairs closer than twice the requested padding.
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a].min.x.total_cmp(&boxes[b].min.x).then(a.cmp(&b)));
    let reach = 2.0 * padding;
    let mut active: Vec<usize> = Vec::new();
    let mut shrunk = vec![false; boxes.len()];
    for &i in &order {
        active.retain(|&j| boxes[j].max.x + reach > boxes[i].min.x);
        for &j in &active {
            let gap = boxes[i].gap(&boxes[j]);
            if gap <= paddings[i] + paddings[j] {
                let limit = 0.45 * gap;
                for k in [i, j] {
                    if paddings[k] > limit {
                        paddings[k] = limit;
                        shrunk[k] = true;
                    }
                }
            }
        }
        active.push(i);
    }

    let tiny = EPS_GEOM * 1e3;
    let polygons = boxes
        .iter()
        .zip(&mut paddings)
        .map(|(b, pad)| {
            let floor = tiny * b.max.magnitude().max(b.min.magnitude()).max(1.0);
            let mut b = *b;
            if *pad < floor {
                // Touching neighbors: pull the box in so the floor padding
                // cannot reach the other obstacle.
                *pad = floor;
                let inset = (1.5 * floor).min(0.25 * b.width().min(b.height()));
                b = b.inflate(-inset);
            }
            inflate_box_to_polygon(b, *pad, CORNER_CUT).expect("padding is positive")
        })
        .collect();
    for (k, s) in shrunk.iter().enumerate() {
        if *s {
            warnings.push(Warning {
                message: format!(
                    "padding of node {:?} shrunk from {padding} to {} to keep obstacles disjoint",
                    ids.get(k).copied().unwrap_or("?"),
                    paddings[k]
                ),
            });
        }
    }
    ObstacleSet {
        polygons,
        centers: centers.to_vec(),
        paddings,
        warnings,
    }
}

/// Obstacles for the full-resolution graph.
pub fn graph_obstacles(g: &LaidOutGraph, padding: f64) -> ObstacleSet {
    let boxes: Vec<Rect> = g.nodes.iter().map(|n| n.bbox).collect();
    let centers: Vec<Point> = g.nodes.iter().map(|n| n.center).collect();
    let ids: Vec<&str> = g.nodes.iter().map(|n| n.id.as_str()).collect();
    build_obstacles(&boxes, &centers, &ids, padding)
}

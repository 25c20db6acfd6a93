//! Text formats: edge lists, graph6, free-edge and cycle lists, and the JSON
//! cover document.
//!
//! Edge-list vertex names are arbitrary tokens, numbered in order of first
//! appearance; edges are numbered by line order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{Cover, CoverElement, ElementKind};
use crate::graph::{EdgeId, FreeEdge, FreeEdgeSet, MultiGraph, VertexId, Walk};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("cover document: {0}")]
    Cover(String),
    #[error("graph6 needs a simple graph on vertices 0..n")]
    NotGraph6Compatible,
}

fn line_error(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Line {
        line: line + 1,
        reason: reason.into(),
    }
}

/// A graph together with the name of each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledGraph {
    pub graph: MultiGraph,
    labels: BTreeMap<VertexId, String>,
    by_label: BTreeMap<String, VertexId>,
}

impl LabeledGraph {
    /// Labels every vertex by its numeric id.
    pub fn numbered(graph: MultiGraph) -> Self {
        let mut out = LabeledGraph {
            graph,
            ..Default::default()
        };
        let vs: Vec<VertexId> = out.graph.vertices().collect();
        for v in vs {
            out.name(v, v.0.to_string());
        }
        out
    }

    fn name(&mut self, v: VertexId, label: String) {
        self.by_label.insert(label.clone(), v);
        self.labels.insert(v, label);
    }

    fn vertex_or_add(&mut self, token: &str) -> VertexId {
        if let Some(&v) = self.by_label.get(token) {
            return v;
        }
        let v = self.graph.add_vertex();
        self.name(v, token.to_string());
        v
    }

    pub fn label(&self, v: VertexId) -> String {
        self.labels.get(&v).cloned().unwrap_or_else(|| v.to_string())
    }

    pub fn lookup(&self, label: &str) -> Option<VertexId> {
        self.by_label.get(label).copied()
    }
}

/// One `u v` pair per line; a line with a single token declares an
/// isolated vertex. `#` starts a comment.
pub fn parse_edgelist(text: &str) -> Result<LabeledGraph, ParseError> {
    let mut out = LabeledGraph::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [v] => {
                out.vertex_or_add(v);
            }
            [u, v] => {
                let (u, v) = (out.vertex_or_add(u), out.vertex_or_add(v));
                out.graph.add_edge(u, v).map_err(|e| line_error(n, e.to_string()))?;
            }
            _ => return Err(line_error(n, "expected one or two vertex names")),
        }
    }
    Ok(out)
}

pub fn write_edgelist(g: &LabeledGraph) -> String {
    let mut out = String::new();
    let touched: BTreeSet<VertexId> = g.graph.edges().flat_map(|(_, u, v)| [u, v]).collect();
    for v in g.graph.vertices().filter(|v| !touched.contains(v)) {
        out.push_str(&g.label(v));
        out.push('\n');
    }
    for (_, u, v) in g.graph.edges() {
        out.push_str(&format!("{} {}\n", g.label(u), g.label(v)));
    }
    out
}

fn graph6_size(bytes: &[u8]) -> Result<(usize, &[u8]), ParseError> {
    let bad = || ParseError::Graph6("truncated size".into());
    let first = *bytes.first().ok_or_else(bad)?;
    if first != 126 {
        return Ok(((first - 63) as usize, &bytes[1..]));
    }
    let take = |k: usize| -> Result<(usize, &[u8]), ParseError> {
        if bytes.len() < 1 + k {
            return Err(bad());
        }
        let n = bytes[1..=k].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        Ok((n, &bytes[1 + k..]))
    };
    if bytes.get(1) == Some(&126) {
        let (n, rest) = take(7)?;
        Ok((n, rest))
    } else {
        take(3)
    }
}

/// One graph6 string (no header, no trailing newline). Vertices are
/// numbered `0..n`, edges in column-major upper-triangle order.
pub fn parse_graph6(s: &str) -> Result<MultiGraph, ParseError> {
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s).trim();
    let bytes = s.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(ParseError::Graph6("byte outside 63..126".into()));
    }
    let (n, body) = graph6_size(bytes)?;
    let pairs = n * n.saturating_sub(1) / 2;
    if body.len() != pairs.div_ceil(6) {
        return Err(ParseError::Graph6(format!(
            "expected {} data bytes for {n} vertices, found {}",
            pairs.div_ceil(6),
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i as u32, j as u32));
            }
            k += 1;
        }
    }
    Ok(MultiGraph::from_pairs(n as u32, &edges))
}

/// Every non-empty line of a graph6 file.
pub fn parse_graph6_file(text: &str) -> Result<Vec<MultiGraph>, ParseError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(parse_graph6)
        .collect()
}

pub fn write_graph6(g: &MultiGraph) -> Result<String, ParseError> {
    let n = g.vertex_count();
    if !g.is_simple() || g.vertices().enumerate().any(|(i, v)| v.0 as usize != i) {
        return Err(ParseError::NotGraph6Compatible);
    }
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    }
    let adjacent: BTreeSet<(u32, u32)> = g.edges().map(|(_, u, v)| (u.0, v.0)).collect();
    let mut bits = Vec::new();
    for j in 1..n as u32 {
        for i in 0..j {
            bits.push(adjacent.contains(&(i, j)));
        }
    }
    for chunk in bits.chunks(6) {
        let mut b = 0u8;
        for (k, &on) in chunk.iter().enumerate() {
            if on {
                b |= 1 << (5 - k);
            }
        }
        out.push(b + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// `vertex outerLabel` per line. Free edges get ids and outer vertices past
/// everything in the graph; outer labels join the label table.
pub fn parse_free_edges(text: &str, g: &mut LabeledGraph) -> Result<FreeEdgeSet, ParseError> {
    let mut f = FreeEdgeSet::new();
    let mut scratch = g.graph.clone();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [inner, outer] => {
                let inner = g
                    .lookup(inner)
                    .ok_or_else(|| line_error(n, format!("unknown vertex {inner}")))?;
                if g.lookup(outer).is_some() {
                    return Err(line_error(n, format!("outer label {outer} is already in use")));
                }
                let id = scratch.fresh_edge_id();
                let outer_id = scratch.fresh_vertex_id();
                g.name(outer_id, outer.to_string());
                f.insert(FreeEdge {
                    id,
                    inner,
                    outer: outer_id,
                });
            }
            _ => return Err(line_error(n, "expected `vertex outerLabel`")),
        }
    }
    let (v, e) = f.max_ids();
    g.graph.reserve_past(v, e);
    f.validate(&g.graph).map_err(|e| line_error(0, e.to_string()))?;
    Ok(f)
}

/// Cycles given as vertex sequences, one per line (the closing vertex may
/// be repeated or left out). Between consecutive vertices the smallest edge
/// id not used by an earlier step is taken.
pub fn parse_cycles(text: &str, g: &LabeledGraph) -> Result<Vec<Walk>, ParseError> {
    let adj = g.graph.adjacency();
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut names: Vec<&str> = line.split_whitespace().collect();
        if names.is_empty() {
            continue;
        }
        if names.len() > 1 && names.first() == names.last() {
            names.pop();
        }
        let vs: Vec<VertexId> = names
            .iter()
            .map(|t| g.lookup(t).ok_or_else(|| line_error(n, format!("unknown vertex {t}"))))
            .collect::<Result<_, _>>()?;
        let mut edges = Vec::new();
        for k in 0..vs.len() {
            let (a, b) = (vs[k], vs[(k + 1) % vs.len()]);
            let e = adj
                .get(&a)
                .and_then(|list| list.iter().find(|&&(e, w)| w == b && !used.contains(&e)))
                .map(|&(e, _)| e)
                .ok_or_else(|| line_error(n, format!("no unused edge between {} and {}", names[k], names[(k + 1) % names.len()])))?;
            used.insert(e);
            edges.push(e);
        }
        out.push(Walk::from_edges(&g.graph, vs[0], &edges).map_err(|e| line_error(n, e.to_string()))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementDoc {
    pub kind: ElementKind,
    pub edges: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDoc {
    pub elements: Vec<ElementDoc>,
}

impl CoverDoc {
    /// Canonical form of `cover`, with vertex names from `g`.
    pub fn from_cover(cover: &Cover, g: &LabeledGraph) -> Self {
        let elements = cover
            .canonical()
            .elements
            .iter()
            .map(|el| ElementDoc {
                kind: el.kind,
                edges: el.walk.edges.iter().map(|e| e.0).collect(),
                vertices: el.walk.vertices.iter().map(|&v| g.label(v)).collect(),
            })
            .collect();
        CoverDoc { elements }
    }

    /// Rebuilds walks in `g` (plus any free edges in `f`). Without a vertex
    /// list the start is the endpoint of the first edge that yields a valid
    /// walk, preferring the one not shared with the second edge.
    pub fn to_cover(&self, g: &LabeledGraph, f: &FreeEdgeSet) -> Result<Cover, ParseError> {
        let host = f.attach_to(&g.graph).map_err(|e| ParseError::Cover(e.to_string()))?;
        let mut cover = Cover::new();
        for (k, el) in self.elements.iter().enumerate() {
            let edges: Vec<EdgeId> = el.edges.iter().map(|&e| EdgeId(e)).collect();
            let &first = edges
                .first()
                .ok_or_else(|| ParseError::Cover(format!("element {k} has no edges")))?;
            let (a, b) = host
                .endpoints(first)
                .ok_or_else(|| ParseError::Cover(format!("element {k}: unknown edge {first}")))?;
            let walk = if let Some(name) = el.vertices.first() {
                let start = g
                    .lookup(name)
                    .ok_or_else(|| ParseError::Cover(format!("element {k}: unknown vertex {name}")))?;
                Walk::from_edges(&host, start, &edges).map_err(|e| ParseError::Cover(format!("element {k}: {e}")))?
            } else {
                let second = edges.get(1).and_then(|&e| host.endpoints(e));
                let starts = match second {
                    Some((c, d)) if a != b && (b == c || b == d) && a != c && a != d => [a, b],
                    _ => [b, a],
                };
                starts
                    .iter()
                    .find_map(|&s| Walk::from_edges(&host, s, &edges).ok())
                    .ok_or_else(|| ParseError::Cover(format!("element {k}: edges do not form a walk")))?
            };
            cover.elements.push(CoverElement { kind: el.kind, walk });
        }
        Ok(cover)
    }
}

pub fn parse_cover(text: &str, g: &LabeledGraph, f: &FreeEdgeSet) -> Result<Cover, ParseError> {
    let doc: CoverDoc = serde_json::from_str(text).map_err(|e| ParseError::Cover(e.to_string()))?;
    doc.to_cover(g, f)
}

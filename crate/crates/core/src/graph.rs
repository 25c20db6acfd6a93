//! Multigraph representation and the structural operators used throughout the
//! construction: induced subgraphs, edge cuts, subdivision, cut-off,
//! identification, cones and free edge sets.
//!
//! Edge identity is primary. Vertex and edge ids are allocated from monotone
//! counters carried by the graph, so ids are never reused and every derived
//! graph can keep allocating without colliding with ids created upstream.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),
    #[error("edge {0} already exists")]
    DuplicateEdge(EdgeId),
    #[error("edge {0} is a loop")]
    LoopEdge(EdgeId),
    #[error("edge cut needs a nonempty proper vertex subset")]
    InvalidCut,
    #[error("invalid free edge set: {0}")]
    InvalidFreeEdgeSet(String),
}

/// An undirected multigraph; loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MultiGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    next_vertex: u32,
    next_edge: u32,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with vertices `0..n` and no edges.
    pub fn with_vertices(n: u32) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    /// Builds a graph on vertices `0..n` from index pairs; edge ids follow
    /// the order of `pairs`.
    pub fn from_pairs(n: u32, pairs: &[(u32, u32)]) -> Self {
        let mut g = Self::with_vertices(n);
        for &(u, v) in pairs {
            g.add_edge(VertexId(u), VertexId(v))
                .expect("pair endpoints must be below n");
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertices.insert(v);
        v
    }

    pub fn insert_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if !self.vertices.insert(v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        self.next_vertex = self.next_vertex.max(v.0 + 1);
        Ok(())
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        let e = EdgeId(self.next_edge);
        self.insert_edge(e, u, v)?;
        Ok(e)
    }

    pub fn insert_edge(&mut self, e: EdgeId, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        for w in [u, v] {
            if !self.vertices.contains(&w) {
                return Err(GraphError::UnknownVertex(w));
            }
        }
        if self.edges.contains_key(&e) {
            return Err(GraphError::DuplicateEdge(e));
        }
        self.edges.insert(e, (u.min(v), u.max(v)));
        self.next_edge = self.next_edge.max(e.0 + 1);
        Ok(())
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        self.edges.remove(&e).ok_or(GraphError::UnknownEdge(e))
    }

    /// Removes `v` together with every incident edge.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if !self.vertices.remove(&v) {
            return Err(GraphError::UnknownVertex(v));
        }
        self.edges.retain(|_, &mut (a, b)| a != v && b != v);
        Ok(())
    }

    /// Allocates a fresh vertex id without inserting it.
    pub fn fresh_vertex_id(&mut self) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.next_vertex += 1;
        v
    }

    pub fn fresh_edge_id(&mut self) -> EdgeId {
        let e = EdgeId(self.next_edge);
        self.next_edge += 1;
        e
    }

    /// Moves the id counters past the given ids.
    pub fn reserve_past(&mut self, vertex: Option<VertexId>, edge: Option<EdgeId>) {
        if let Some(v) = vertex {
            self.next_vertex = self.next_vertex.max(v.0 + 1);
        }
        if let Some(e) = edge {
            self.next_edge = self.next_edge.max(e.0 + 1);
        }
    }

    /// Copies the id counters of `other` if they are ahead.
    pub fn inherit_counters(&mut self, other: &MultiGraph) {
        self.next_vertex = self.next_vertex.max(other.next_vertex);
        self.next_edge = self.next_edge.max(other.next_edge);
    }

    pub fn counters(&self) -> (u32, u32) {
        (self.next_vertex, self.next_edge)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(&e), Some((u, v)) if u == v)
    }

    /// The endpoint of `e` opposite to `v`.
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        let (a, b) = self.endpoints(e)?;
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    /// Incidence lists: for each vertex the `(edge, other endpoint)` pairs in
    /// ascending edge order. A loop appears twice at its vertex.
    pub fn adjacency(&self) -> BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> {
        let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (&e, &(u, v)) in &self.edges {
            adj.get_mut(&u).unwrap().push((e, v));
            adj.get_mut(&v).unwrap().push((e, u));
        }
        adj
    }

    pub fn has_loops(&self) -> bool {
        self.edges.values().any(|(u, v)| u == v)
    }

    /// True when there are neither loops nor parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges.values().all(|&(u, v)| u != v && seen.insert((u, v)))
    }

    /// Union with a vertex-disjoint or overlapping graph; edges with equal ids
    /// must agree on endpoints.
    pub fn union(&self, other: &MultiGraph) -> Result<MultiGraph, GraphError> {
        let mut g = self.clone();
        for v in other.vertices() {
            g.vertices.insert(v);
        }
        for (e, u, v) in other.edges() {
            match g.edges.get(&e) {
                Some(&ends) if ends == (u, v) => {}
                Some(_) => return Err(GraphError::DuplicateEdge(e)),
                None => {
                    g.edges.insert(e, (u, v));
                }
            }
        }
        g.inherit_counters(other);
        Ok(g)
    }
}

/// A pendant edge attached to a host graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FreeEdge {
    pub id: EdgeId,
    pub inner: VertexId,
    pub outer: VertexId,
}

/// Pendant edges with one endpoint inside the host and pairwise distinct
/// outer endpoints outside it.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FreeEdgeSet {
    entries: BTreeMap<EdgeId, FreeEdge>,
}

impl FreeEdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, f: FreeEdge) {
        self.entries.insert(f.id, f);
    }

    pub fn remove(&mut self, e: EdgeId) -> Option<FreeEdge> {
        self.entries.remove(&e)
    }

    pub fn get(&self, e: EdgeId) -> Option<&FreeEdge> {
        self.entries.get(&e)
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.entries.contains_key(&e)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &FreeEdge> + '_ {
        self.entries.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.entries.keys().copied()
    }

    /// Inner endpoints, i.e. `V(<F>) ∩ V(G)`.
    pub fn inner_vertices(&self) -> BTreeSet<VertexId> {
        self.entries.values().map(|f| f.inner).collect()
    }

    pub fn by_outer(&self, outer: VertexId) -> Option<&FreeEdge> {
        self.entries.values().find(|f| f.outer == outer)
    }

    pub fn merged(&self, other: &FreeEdgeSet) -> FreeEdgeSet {
        let mut out = self.clone();
        for f in other.iter() {
            out.insert(*f);
        }
        out
    }

    /// Free edges whose inner vertex lies in `vertices`.
    pub fn restricted_to(&self, vertices: &BTreeSet<VertexId>) -> FreeEdgeSet {
        FreeEdgeSet {
            entries: self
                .entries
                .iter()
                .filter(|(_, f)| vertices.contains(&f.inner))
                .map(|(&e, &f)| (e, f))
                .collect(),
        }
    }

    pub fn max_ids(&self) -> (Option<VertexId>, Option<EdgeId>) {
        (
            self.entries.values().map(|f| f.outer).max(),
            self.entries.keys().next_back().copied(),
        )
    }

    /// Checks both defining conditions against the host graph.
    pub fn validate(&self, g: &MultiGraph) -> Result<(), GraphError> {
        let mut outers = BTreeSet::new();
        for f in self.entries.values() {
            if !g.contains_vertex(f.inner) {
                return Err(GraphError::InvalidFreeEdgeSet(format!(
                    "free edge {} has inner vertex {} outside the host",
                    f.id, f.inner
                )));
            }
            if g.contains_vertex(f.outer) {
                return Err(GraphError::InvalidFreeEdgeSet(format!(
                    "free edge {} has outer vertex {} inside the host",
                    f.id, f.outer
                )));
            }
            if g.contains_edge(f.id) {
                return Err(GraphError::InvalidFreeEdgeSet(format!(
                    "free edge id {} collides with a host edge",
                    f.id
                )));
            }
            if !outers.insert(f.outer) {
                return Err(GraphError::InvalidFreeEdgeSet(format!(
                    "outer vertex {} is shared",
                    f.outer
                )));
            }
        }
        Ok(())
    }

    /// The supergraph `G ∪ <F>`.
    pub fn attach_to(&self, g: &MultiGraph) -> Result<MultiGraph, GraphError> {
        self.validate(g)?;
        let mut out = g.clone();
        for f in self.entries.values() {
            out.insert_vertex(f.outer)?;
            out.insert_edge(f.id, f.inner, f.outer)?;
        }
        Ok(out)
    }
}

/// Vertex map from a source graph onto a quotient, with edge correspondence.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct QuotientMap {
    pub forward: BTreeMap<VertexId, VertexId>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
}

impl QuotientMap {
    pub fn identity(g: &MultiGraph) -> Self {
        QuotientMap {
            forward: g.vertices().map(|v| (v, v)).collect(),
            edges: g.edge_ids().map(|e| (e, e)).collect(),
        }
    }

    pub fn image(&self, v: VertexId) -> Option<VertexId> {
        self.forward.get(&v).copied()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &QuotientMap) -> QuotientMap {
        QuotientMap {
            forward: self
                .forward
                .iter()
                .filter_map(|(&v, w)| next.image(*w).map(|x| (v, x)))
                .collect(),
            edges: self
                .edges
                .iter()
                .filter_map(|(&e, f)| next.edges.get(f).map(|&x| (e, x)))
                .collect(),
        }
    }
}

/// A walk stored as its vertex itinerary and edge sequence;
/// `vertices.len() == edges.len() + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Walk {
    pub fn trivial(v: VertexId) -> Self {
        Walk {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    /// Builds a walk from a start vertex and an edge sequence, resolving the
    /// itinerary through `g`.
    pub fn from_edges(g: &MultiGraph, start: VertexId, edges: &[EdgeId]) -> Result<Self, GraphError> {
        let mut vertices = vec![start];
        let mut at = start;
        for &e in edges {
            at = g.opposite(e, at).ok_or(GraphError::UnknownEdge(e))?;
            vertices.push(at);
        }
        Ok(Walk {
            vertices,
            edges: edges.to_vec(),
        })
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn reversed(&self) -> Walk {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Walk { vertices, edges }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn extend(&mut self, other: &Walk) {
        debug_assert_eq!(self.end(), other.start());
        self.vertices.extend_from_slice(&other.vertices[1..]);
        self.edges.extend_from_slice(&other.edges);
    }

    /// Every step is incident in `g`.
    pub fn is_valid_in(&self, g: &MultiGraph) -> bool {
        self.vertices.len() == self.edges.len() + 1
            && self.vertices.iter().all(|&v| g.contains_vertex(v))
            && self.edges.iter().enumerate().all(|(i, &e)| {
                match g.endpoints(e) {
                    Some((a, b)) => {
                        let (x, y) = (self.vertices[i], self.vertices[i + 1]);
                        (a == x && b == y) || (a == y && b == x)
                    }
                    None => false,
                }
            })
    }
}

/// Subgraph formed by the edges `a` and their endpoints; ids preserved.
pub fn induced_by_edges(g: &MultiGraph, a: &BTreeSet<EdgeId>) -> Result<MultiGraph, GraphError> {
    let mut out = MultiGraph::new();
    out.inherit_counters(g);
    for &e in a {
        let (u, v) = g.endpoints(e).ok_or(GraphError::UnknownEdge(e))?;
        out.vertices.insert(u);
        out.vertices.insert(v);
        out.edges.insert(e, (u, v));
    }
    Ok(out)
}

/// Subgraph induced by the vertex set `b`.
pub fn induced_by_vertices(g: &MultiGraph, b: &BTreeSet<VertexId>) -> Result<MultiGraph, GraphError> {
    if let Some(&v) = b.iter().find(|v| !g.contains_vertex(**v)) {
        return Err(GraphError::UnknownVertex(v));
    }
    let mut out = MultiGraph::new();
    out.inherit_counters(g);
    out.vertices = b.clone();
    out.edges = g
        .edges
        .iter()
        .filter(|(_, (u, v))| b.contains(u) && b.contains(v))
        .map(|(&e, &ends)| (e, ends))
        .collect();
    Ok(out)
}

/// `G − B`.
pub fn remove_vertices(g: &MultiGraph, b: &BTreeSet<VertexId>) -> MultiGraph {
    let keep: BTreeSet<VertexId> = g.vertices().filter(|v| !b.contains(v)).collect();
    induced_by_vertices(g, &keep).expect("kept vertices belong to g")
}

/// `E(X, Y)`: edges with one endpoint in `x` and the other in `y`.
pub fn edges_between(g: &MultiGraph, x: &BTreeSet<VertexId>, y: &BTreeSet<VertexId>) -> BTreeSet<EdgeId> {
    g.edges()
        .filter(|&(_, u, v)| (x.contains(&u) && y.contains(&v)) || (x.contains(&v) && y.contains(&u)))
        .map(|(e, _, _)| e)
        .collect()
}

/// The edge cut `∂(X)`; loops never cross a cut.
pub fn edge_cut(g: &MultiGraph, x: &BTreeSet<VertexId>) -> Result<BTreeSet<EdgeId>, GraphError> {
    if let Some(&v) = x.iter().find(|v| !g.contains_vertex(**v)) {
        return Err(GraphError::UnknownVertex(v));
    }
    if x.is_empty() || x.len() == g.vertex_count() {
        return Err(GraphError::InvalidCut);
    }
    Ok(g
        .edges()
        .filter(|&(_, u, v)| x.contains(&u) != x.contains(&v))
        .map(|(e, _, _)| e)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdivision {
    pub original: EdgeId,
    pub vertex: VertexId,
    /// The half incident to the smaller original endpoint, then the other.
    pub halves: (EdgeId, EdgeId),
    pub ends: (VertexId, VertexId),
}

/// Replaces `e` by a path of length two through a fresh vertex.
pub fn subdivide_edge(g: &MultiGraph, e: EdgeId) -> Result<(MultiGraph, Subdivision), GraphError> {
    let (u, v) = g.endpoints(e).ok_or(GraphError::UnknownEdge(e))?;
    let mut out = g.clone();
    out.remove_edge(e)?;
    let w = out.add_vertex();
    let h1 = out.add_edge(u, w)?;
    let h2 = out.add_edge(w, v)?;
    Ok((
        out,
        Subdivision {
            original: e,
            vertex: w,
            halves: (h1, h2),
            ends: (u, v),
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutOff {
    pub graph: MultiGraph,
    pub original: EdgeId,
    pub near: FreeEdge,
    pub far: FreeEdge,
}

impl CutOff {
    pub fn free_edges(&self) -> FreeEdgeSet {
        let mut f = FreeEdgeSet::new();
        f.insert(self.near);
        f.insert(self.far);
        f
    }
}

/// Subdivides `e = uu'` and splits the new vertex, leaving `G \ e` with
/// pendants `f = uw` and `f' = u'w'`. The returned graph does not contain
/// the pendants; its counters are advanced past their ids.
pub fn cut_off(g: &MultiGraph, e: EdgeId) -> Result<CutOff, GraphError> {
    if g.is_loop(e) {
        return Err(GraphError::LoopEdge(e));
    }
    let (mut sub, s) = subdivide_edge(g, e)?;
    let w2 = sub.fresh_vertex_id();
    let near = FreeEdge {
        id: s.halves.0,
        inner: s.ends.0,
        outer: s.vertex,
    };
    let far = FreeEdge {
        id: s.halves.1,
        inner: s.ends.1,
        outer: w2,
    };
    sub.remove_edge(s.halves.0)?;
    sub.remove_edge(s.halves.1)?;
    sub.remove_vertex(s.vertex)?;
    Ok(CutOff {
        graph: sub,
        original: e,
        near,
        far,
    })
}

/// Identifies every member of each class; overlapping classes merge. Each
/// merged class is represented by its smallest vertex id.
pub fn identify(g: &MultiGraph, classes: &[BTreeSet<VertexId>]) -> Result<(MultiGraph, QuotientMap), GraphError> {
    let mut parent: BTreeMap<VertexId, VertexId> = g.vertices().map(|v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
        let mut root = v;
        while parent[&root] != root {
            root = parent[&root];
        }
        let mut cur = v;
        while parent[&cur] != root {
            let next = parent[&cur];
            parent.insert(cur, root);
            cur = next;
        }
        root
    }
    for class in classes {
        let mut it = class.iter();
        let Some(&first) = it.next() else { continue };
        if !g.contains_vertex(first) {
            return Err(GraphError::UnknownVertex(first));
        }
        for &v in it {
            if !g.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v));
            }
            let a = find(&mut parent, first);
            let b = find(&mut parent, v);
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent.insert(hi, lo);
            }
        }
    }
    let vertices: Vec<VertexId> = g.vertices().collect();
    let forward: BTreeMap<VertexId, VertexId> =
        vertices.iter().map(|&v| (v, find(&mut parent, v))).collect();
    let mut out = MultiGraph::new();
    out.inherit_counters(g);
    for &w in forward.values() {
        out.vertices.insert(w);
    }
    for (e, u, v) in g.edges() {
        let (a, b) = (forward[&u], forward[&v]);
        out.edges.insert(e, (a.min(b), a.max(b)));
    }
    let edges = g.edge_ids().map(|e| (e, e)).collect();
    Ok((out, QuotientMap { forward, edges }))
}

/// `cone(G; F)`: attach the free edges and identify their outer endpoints
/// into one apex. `cone(G; ∅) = G`.
pub fn cone(g: &MultiGraph, f: &FreeEdgeSet) -> Result<(MultiGraph, QuotientMap), GraphError> {
    let with_f = f.attach_to(g)?;
    let outers: BTreeSet<VertexId> = f.iter().map(|x| x.outer).collect();
    identify(&with_f, &[outers])
}

/// Loops and parallel classes removed when passing to the underlying simple
/// graph. Each class keeps its smallest edge id as representative.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SimpleProvenance {
    pub loops: Vec<EdgeId>,
    /// representative -> all members of its class, representative first
    pub classes: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl SimpleProvenance {
    pub fn is_trivial(&self) -> bool {
        self.loops.is_empty() && self.classes.is_empty()
    }

    pub fn representative_of(&self, e: EdgeId) -> EdgeId {
        self.classes
            .iter()
            .find(|(_, members)| members.contains(&e))
            .map(|(&r, _)| r)
            .unwrap_or(e)
    }
}

/// Drops loops and collapses parallel classes. Only classes of size at
/// least two are recorded.
pub fn underlying_simple(g: &MultiGraph) -> (MultiGraph, SimpleProvenance) {
    let mut out = g.clone();
    let mut prov = SimpleProvenance::default();
    let mut by_ends: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
    for (e, u, v) in g.edges() {
        if u == v {
            prov.loops.push(e);
        } else {
            by_ends.entry((u, v)).or_default().push(e);
        }
    }
    for &l in &prov.loops {
        out.remove_edge(l).unwrap();
    }
    for members in by_ends.into_values() {
        if members.len() > 1 {
            for &e in &members[1..] {
                out.remove_edge(e).unwrap();
            }
            prov.classes.insert(members[0], members);
        }
    }
    (out, prov)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(ids: &[u32]) -> BTreeSet<VertexId> {
        ids.iter().map(|&i| VertexId(i)).collect()
    }

    fn es(ids: &[u32]) -> BTreeSet<EdgeId> {
        ids.iter().map(|&i| EdgeId(i)).collect()
    }

    fn k4() -> MultiGraph {
        MultiGraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn induced_by_single_edge() {
        let tri = MultiGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]);
        let h = induced_by_edges(&tri, &es(&[0])).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn induced_by_nothing_is_null() {
        let h = induced_by_edges(&k4(), &BTreeSet::new()).unwrap();
        assert!(h.is_empty());
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn induced_triangle_keeps_ids() {
        let h = induced_by_edges(&k4(), &es(&[0, 1, 3])).unwrap();
        assert_eq!(h.vertex_set(), &vs(&[0, 1, 2]));
        assert_eq!(h.edge_ids().collect::<Vec<_>>(), vec![EdgeId(0), EdgeId(1), EdgeId(3)]);
        assert!(induced_by_edges(&k4(), &es(&[9])).is_err());
    }

    #[test]
    fn edge_cut_examples() {
        let path = MultiGraph::from_pairs(3, &[(0, 1), (1, 2)]);
        assert_eq!(edge_cut(&path, &vs(&[0])).unwrap(), es(&[0]));
        for pair in [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]] {
            assert_eq!(edge_cut(&k4(), &vs(&pair)).unwrap().len(), 4);
        }
        let mut g = MultiGraph::from_pairs(2, &[(0, 0)]);
        g.add_vertex();
        assert!(edge_cut(&g, &vs(&[0])).unwrap().is_empty());
        assert_eq!(edge_cut(&path, &vs(&[])), Err(GraphError::InvalidCut));
        assert_eq!(edge_cut(&path, &vs(&[0, 1, 2])), Err(GraphError::InvalidCut));
    }

    #[test]
    fn subdivision_examples() {
        let g = MultiGraph::from_pairs(2, &[(0, 1)]);
        let (h, s) = subdivide_edge(&g, EdgeId(0)).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.degree(s.vertex), 2);
        assert!(!h.contains_edge(EdgeId(0)));

        let lp = MultiGraph::from_pairs(1, &[(0, 0)]);
        let (h, s) = subdivide_edge(&lp, EdgeId(0)).unwrap();
        assert_eq!(h.endpoints(s.halves.0), h.endpoints(s.halves.1));
        assert!(!h.is_simple());

        let tri = MultiGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]);
        let (h, _) = subdivide_edge(&tri, EdgeId(1)).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert!(h.vertices().all(|v| h.degree(v) == 2));
        assert!(subdivide_edge(&tri, EdgeId(7)).is_err());
    }

    #[test]
    fn cut_off_edge_of_k4() {
        let c = cut_off(&k4(), EdgeId(0)).unwrap();
        assert_eq!(c.graph.edge_count(), 5);
        assert_eq!(c.near.inner, VertexId(0));
        assert_eq!(c.far.inner, VertexId(1));
        assert_ne!(c.near.outer, c.far.outer);
        c.free_edges().validate(&c.graph).unwrap();
    }

    #[test]
    fn cut_off_rejects_loops() {
        let g = MultiGraph::from_pairs(1, &[(0, 0)]);
        assert_eq!(cut_off(&g, EdgeId(0)).unwrap_err(), GraphError::LoopEdge(EdgeId(0)));
    }

    #[test]
    fn cut_off_bipartition_of_square() {
        // square 0-1-2-3-0, X = {0,1}, Y = {2,3}; crossing edges 1-2 and 3-0
        let sq = MultiGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let a = cut_off(&sq, EdgeId(1)).unwrap();
        let b = cut_off(&a.graph, EdgeId(3)).unwrap();
        let free = a.free_edges().merged(&b.free_edges());
        free.validate(&b.graph).unwrap();
        let whole = free.attach_to(&b.graph).unwrap();
        // two paths 0-1 and 2-3 each carrying two pendants
        assert_eq!(whole.edge_count(), 6);
        let deg: Vec<usize> = (0..4).map(|i| whole.degree(VertexId(i))).collect();
        assert_eq!(deg, vec![2, 2, 2, 2]);
    }

    #[test]
    fn identify_examples() {
        let g = MultiGraph::from_pairs(2, &[(0, 1)]);
        let (h, q) = identify(&g, &[vs(&[0, 1])]).unwrap();
        assert!(h.is_loop(EdgeId(0)));
        assert_eq!(q.image(VertexId(1)), Some(VertexId(0)));

        let (h, _) = identify(&g, &[BTreeSet::new()]).unwrap();
        assert_eq!(h.vertex_set(), g.vertex_set());
        assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());

        let two = MultiGraph::from_pairs(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let (h, _) = identify(&two, &[vs(&[0, 3])]).unwrap();
        assert_eq!(h.vertex_count(), 5);
        assert_eq!(h.degree(VertexId(0)), 4);
        assert!(identify(&two, &[vs(&[0, 9])]).is_err());
    }

    #[test]
    fn identify_merges_overlapping_classes() {
        let g = MultiGraph::with_vertices(5);
        let (h, q) = identify(&g, &[vs(&[0, 1]), vs(&[1, 2]), vs(&[3, 4])]).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(q.image(VertexId(2)), Some(VertexId(0)));
    }

    fn free(id: u32, inner: u32, outer: u32) -> FreeEdge {
        FreeEdge {
            id: EdgeId(id),
            inner: VertexId(inner),
            outer: VertexId(outer),
        }
    }

    #[test]
    fn cone_examples() {
        let g = k4();
        let (h, _) = cone(&g, &FreeEdgeSet::new()).unwrap();
        assert_eq!(h, g);

        let sq = MultiGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let mut f = FreeEdgeSet::new();
        for i in 0..4 {
            f.insert(free(10 + i, i, 10 + i));
        }
        let (w4, q) = cone(&sq, &f).unwrap();
        let apex = q.image(VertexId(10)).unwrap();
        assert_eq!(w4.vertex_count(), 5);
        assert_eq!(w4.degree(apex), 4);
        assert!((0..4).all(|i| w4.degree(VertexId(i)) == 3));
        assert!(w4.is_simple());

        let single = MultiGraph::with_vertices(1);
        let mut f = FreeEdgeSet::new();
        f.insert(free(0, 0, 1));
        f.insert(free(1, 0, 2));
        let (h, _) = cone(&single, &f).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.endpoints(EdgeId(0)), h.endpoints(EdgeId(1)));
    }

    #[test]
    fn free_edge_set_validation() {
        let g = MultiGraph::with_vertices(2);
        let mut f = FreeEdgeSet::new();
        f.insert(free(0, 0, 5));
        f.insert(free(1, 1, 5));
        assert!(f.validate(&g).is_err());
        let mut f = FreeEdgeSet::new();
        f.insert(free(0, 0, 1));
        assert!(f.validate(&g).is_err());
        let mut f = FreeEdgeSet::new();
        f.insert(free(0, 7, 8));
        assert!(f.validate(&g).is_err());
    }

    #[test]
    fn underlying_simple_examples() {
        let (h, p) = underlying_simple(&k4());
        assert_eq!(h, k4());
        assert!(p.is_trivial());

        let g = MultiGraph::from_pairs(2, &[(0, 1), (1, 0), (0, 0)]);
        let (h, p) = underlying_simple(&g);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(p.loops, vec![EdgeId(2)]);
        assert_eq!(p.classes[&EdgeId(0)], vec![EdgeId(0), EdgeId(1)]);

        let theta = MultiGraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]);
        let (h, p) = underlying_simple(&theta);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(p.classes[&EdgeId(0)].len(), 3);
    }

    #[test]
    fn walk_resolution() {
        let g = k4();
        let w = Walk::from_edges(&g, VertexId(0), &[EdgeId(0), EdgeId(3), EdgeId(1)]).unwrap();
        assert_eq!(w.vertices, vec![VertexId(0), VertexId(1), VertexId(2), VertexId(0)]);
        assert!(w.is_closed());
        assert!(w.is_valid_in(&g));
        assert!(w.reversed().is_valid_in(&g));
    }
}

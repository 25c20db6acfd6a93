//! Covers, the independent verifier, and splicing.
//!
//! Splicing treats every open path as a piece with two ports. A junction
//! strips the terminal edge at two ports and joins the stripped ends by a
//! connector walk. Following pieces through junctions yields closed walks
//! (peeled into cycles) and open walks (peeled down to a path whose ends are
//! the remaining free edges). Every result element is re-checked.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CutOff, EdgeId, FreeEdgeSet, MultiGraph, SimpleProvenance, Subdivision, VertexId, Walk};
use crate::walk::{is_cycle, is_path, peel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Cycle,
    Path,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverElement {
    pub kind: ElementKind,
    pub walk: Walk,
}

impl CoverElement {
    pub fn cycle(walk: Walk) -> Self {
        CoverElement {
            kind: ElementKind::Cycle,
            walk,
        }
    }

    pub fn path(walk: Walk) -> Self {
        CoverElement {
            kind: ElementKind::Path,
            walk,
        }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.walk.edges
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.walk.edges.iter().copied().collect()
    }

    /// First and last edge of a path.
    pub fn terminal_edges(&self) -> Option<(EdgeId, EdgeId)> {
        match self.kind {
            ElementKind::Path => Some((*self.walk.edges.first()?, *self.walk.edges.last()?)),
            ElementKind::Cycle => None,
        }
    }

    /// Resolves an edge sequence against `g`, choosing the smallest start
    /// vertex that makes a walk of the requested kind.
    pub fn from_edges(g: &MultiGraph, kind: ElementKind, edges: &[EdgeId]) -> Option<Self> {
        let &first = edges.first()?;
        let (a, b) = g.endpoints(first)?;
        for start in [a, b] {
            if let Ok(walk) = Walk::from_edges(g, start, edges) {
                let closed = walk.is_closed();
                if closed == (kind == ElementKind::Cycle) {
                    return Some(CoverElement { kind, walk });
                }
            }
        }
        None
    }

    /// Rotation and direction fixed: cycles start at their smallest edge and
    /// run in the direction giving the smaller edge sequence, paths likewise.
    pub fn canonical(&self) -> CoverElement {
        let candidates: Vec<Walk> = match self.kind {
            ElementKind::Path => vec![self.walk.clone(), self.walk.reversed()],
            ElementKind::Cycle => {
                let mut out = Vec::new();
                for w in [self.walk.clone(), self.walk.reversed()] {
                    if let Some(min) = w.edges.iter().min() {
                        for (k, e) in w.edges.iter().enumerate() {
                            if e == min {
                                out.push(rotate_closed(&w, k));
                            }
                        }
                    }
                }
                if out.is_empty() {
                    out.push(self.walk.clone());
                }
                out
            }
        };
        let walk = candidates
            .into_iter()
            .min_by(|x, y| (&x.edges, &x.vertices).cmp(&(&y.edges, &y.vertices)))
            .unwrap();
        CoverElement { kind: self.kind, walk }
    }
}

/// The closed walk restarted at edge position `k`.
pub fn rotate_closed(w: &Walk, k: usize) -> Walk {
    let n = w.edges.len();
    if n == 0 {
        return w.clone();
    }
    let mut vertices: Vec<VertexId> = (0..n).map(|i| w.vertices[(k + i) % n]).collect();
    vertices.push(w.vertices[k % n]);
    let edges = (0..n).map(|i| w.edges[(k + i) % n]).collect();
    Walk { vertices, edges }
}

/// A multiset of cycles and paths.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Cover {
    pub elements: Vec<CoverElement>,
}

impl Cover {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn multiplicity(&self) -> BTreeMap<EdgeId, usize> {
        let mut m = BTreeMap::new();
        for el in &self.elements {
            for &e in &el.walk.edges {
                *m.entry(e).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn extend(&mut self, other: Cover) {
        self.elements.extend(other.elements);
    }

    /// Canonical element order: sorted by kind, then edge sequence.
    pub fn canonical(&self) -> Cover {
        let mut elements: Vec<CoverElement> = self.elements.iter().map(CoverElement::canonical).collect();
        elements.sort_by(|a, b| (a.kind, &a.walk.edges, &a.walk.vertices).cmp(&(b.kind, &b.walk.edges, &b.walk.vertices)));
        Cover { elements }
    }

    /// Whether some cycle element has exactly this edge set.
    pub fn contains_cycle(&self, edges: &BTreeSet<EdgeId>) -> bool {
        self.elements
            .iter()
            .any(|el| el.kind == ElementKind::Cycle && &el.edge_set() == edges && el.walk.len() == edges.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subject {
    Edge(EdgeId),
    Element(usize),
    Cover,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub subject: Subject,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub multiplicity: BTreeMap<EdgeId, usize>,
    pub violations: Vec<Violation>,
}

/// Every element a cycle of `g`, every edge of `g` covered exactly twice.
pub fn verify_cdc(g: &MultiGraph, cover: &Cover) -> VerificationReport {
    verify_ncdc(g, &FreeEdgeSet::new(), cover)
}

/// Every edge of `g ∪ F` covered exactly twice; cycles are cycles of `g`,
/// paths are paths of `g ∪ F` whose two terminal edges are distinct free
/// edges.
pub fn verify_ncdc(g: &MultiGraph, f: &FreeEdgeSet, cover: &Cover) -> VerificationReport {
    let mut violations = Vec::new();
    let host = match f.attach_to(g) {
        Ok(h) => h,
        Err(err) => {
            violations.push(Violation {
                subject: Subject::Cover,
                reason: format!("invalid free edge set: {err}"),
            });
            g.clone()
        }
    };
    if f.len() == 1 {
        violations.push(Violation {
            subject: Subject::Cover,
            reason: "a single free edge cannot be covered by paths with distinct terminals".into(),
        });
    }
    let mut multiplicity: BTreeMap<EdgeId, usize> = host.edge_ids().map(|e| (e, 0)).collect();
    for (i, el) in cover.elements.iter().enumerate() {
        let mut bad = |reason: &str| {
            violations.push(Violation {
                subject: Subject::Element(i),
                reason: reason.into(),
            })
        };
        for &e in &el.walk.edges {
            *multiplicity.entry(e).or_insert(0) += 1;
        }
        if el.walk.vertices.len() != el.walk.edges.len() + 1 {
            bad("itinerary length does not match edge count");
            continue;
        }
        if el.walk.edges.is_empty() {
            bad("empty element");
            continue;
        }
        if !el.walk.is_valid_in(&host) {
            bad("not a walk of the graph");
            continue;
        }
        match el.kind {
            ElementKind::Cycle => {
                if !is_cycle(&el.walk) {
                    bad("not a cycle");
                }
                if el.walk.edges.iter().any(|&e| f.contains(e)) {
                    bad("cycle uses a free edge");
                }
            }
            ElementKind::Path => {
                if !is_path(&el.walk) {
                    bad("not a path");
                    continue;
                }
                let (a, b) = (el.walk.edges[0], *el.walk.edges.last().unwrap());
                if !f.contains(a) || !f.contains(b) {
                    bad("terminal edge is not a free edge");
                } else if a == b {
                    bad("both terminal edges are the same free edge");
                }
            }
        }
    }
    for (&e, &m) in &multiplicity {
        if !host.contains_edge(e) {
            violations.push(Violation {
                subject: Subject::Edge(e),
                reason: "edge not in graph".into(),
            });
        } else if m != 2 {
            violations.push(Violation {
                subject: Subject::Edge(e),
                reason: format!("covered {m} times"),
            });
        }
    }
    VerificationReport {
        ok: violations.is_empty(),
        multiplicity,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum SpliceError {
    #[error("free edge {edge} is a terminal of {found} path ends, expected 2")]
    PendantCoverage { edge: EdgeId, found: usize },
    #[error("spliced element is invalid: {0}")]
    InvalidResult(String),
    #[error("covers are not vertex-disjoint")]
    NotDisjoint,
    #[error("empty side in partition")]
    EmptySide,
    #[error("edge {edge} of the simple cover is covered {found} times")]
    Provenance { edge: EdgeId, found: usize },
    #[error("halves of subdivided edge {0} are not traversed consecutively")]
    Halves(EdgeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Port {
    Start,
    Finish,
}

impl Port {
    fn other(self) -> Port {
        match self {
            Port::Start => Port::Finish,
            Port::Finish => Port::Start,
        }
    }
}

pub type PortRef = (usize, Port);

/// Joins two piece ports after stripping their terminal edges; `connector`
/// runs from the stripped end at `a` to the stripped end at `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Junction {
    pub a: PortRef,
    pub b: PortRef,
    pub connector: Walk,
}

pub(crate) fn terminal(piece: &Walk, port: Port) -> EdgeId {
    match port {
        Port::Start => piece.edges[0],
        Port::Finish => *piece.edges.last().unwrap(),
    }
}

/// Vertex left at `port` once the terminal edge is stripped.
pub(crate) fn stripped_end(piece: &Walk, port: Port) -> VertexId {
    match port {
        Port::Start => piece.vertices[1],
        Port::Finish => piece.vertices[piece.vertices.len() - 2],
    }
}

/// Follows pieces through junctions. Returns closed walks and open walks;
/// each open walk is paired with its two unstripped terminal ports.
pub(crate) fn follow_chains(pieces: &[Walk], junctions: &[Junction]) -> Result<(Vec<Walk>, Vec<Walk>), SpliceError> {
    let mut link: BTreeMap<PortRef, (usize, bool)> = BTreeMap::new();
    for (j, junction) in junctions.iter().enumerate() {
        if junction.a == junction.b
            || link.insert(junction.a, (j, true)).is_some()
            || link.insert(junction.b, (j, false)).is_some()
        {
            return Err(SpliceError::InvalidResult("port joined twice".into()));
        }
    }
    let stripped = |i: usize, enter: Port| -> Walk {
        let w = &pieces[i];
        let mut w = if enter == Port::Start { w.clone() } else { w.reversed() };
        let (lead, trail) = (enter, enter.other());
        if link.contains_key(&(i, lead)) {
            w.vertices.remove(0);
            w.edges.remove(0);
        }
        if link.contains_key(&(i, trail)) {
            w.vertices.pop();
            w.edges.pop();
        }
        w
    };
    let mut visited = vec![false; pieces.len()];
    let mut closed = Vec::new();
    let mut open = Vec::new();
    // run from (i, enter) until an unjoined port or back at the start
    let run = |i0: usize, enter0: Port, visited: &mut Vec<bool>| -> (Walk, bool) {
        let mut walk = Walk::trivial(stripped(i0, enter0).start());
        let (mut i, mut enter) = (i0, enter0);
        loop {
            visited[i] = true;
            walk.extend(&stripped(i, enter));
            let out = (i, enter.other());
            match link.get(&out) {
                None => return (walk, false),
                Some(&(j, from_a)) => {
                    let junction = &junctions[j];
                    let (conn, next) = if from_a {
                        (junction.connector.clone(), junction.b)
                    } else {
                        (junction.connector.reversed(), junction.a)
                    };
                    walk.extend(&conn);
                    if next == (i0, enter0) {
                        return (walk, true);
                    }
                    if visited[next.0] {
                        // entered a piece already used: malformed junction set
                        return (walk, true);
                    }
                    i = next.0;
                    enter = next.1;
                }
            }
        }
    };
    for i in 0..pieces.len() {
        if visited[i] {
            continue;
        }
        for port in [Port::Start, Port::Finish] {
            if !visited[i] && !link.contains_key(&(i, port)) {
                let (w, _) = run(i, port, &mut visited);
                open.push(w);
            }
        }
    }
    for i in 0..pieces.len() {
        if !visited[i] {
            let (w, closed_up) = run(i, Port::Start, &mut visited);
            if !closed_up || !w.is_closed() {
                return Err(SpliceError::InvalidResult("chain did not close".into()));
            }
            closed.push(w);
        }
    }
    Ok((closed, open))
}

/// Turns followed chains into cover elements.
pub(crate) fn chains_to_elements(closed: Vec<Walk>, open: Vec<Walk>) -> Result<Vec<CoverElement>, SpliceError> {
    let mut out = Vec::new();
    for w in closed.iter().chain(&open) {
        out.extend(decompose_walk(w)?);
    }
    Ok(out)
}

/// Breaks a closed walk into cycles, or an open walk into cycles plus one
/// path with the walk's two terminal edges. Peeling is tried first; if it
/// leaves a retraced edge, a bounded search looks for another split of the
/// same edge occurrences.
pub fn decompose_walk(w: &Walk) -> Result<Vec<CoverElement>, SpliceError> {
    if w.is_empty() {
        return Err(SpliceError::InvalidResult("empty chain".into()));
    }
    let open = !w.is_closed();
    let (first, last) = (w.edges[0], *w.edges.last().unwrap());
    if open && first == last {
        return Err(SpliceError::InvalidResult(format!(
            "path would start and end with free edge {first}"
        )));
    }
    let (cycles, rest) = peel(w);
    let peeled_ok = cycles.iter().all(is_cycle)
        && if open {
            rest.edges.first() == Some(&first) && rest.edges.last() == Some(&last) && is_path(&rest)
        } else {
            rest.is_empty()
        };
    if peeled_ok {
        let mut out: Vec<CoverElement> = cycles.into_iter().map(CoverElement::cycle).collect();
        if open {
            out.push(CoverElement::path(rest));
        }
        return Ok(out);
    }
    let retraced = cycles.iter().find(|c| !is_cycle(c)).map_or(first, |c| c.edges[0]);
    search_decomposition(w).ok_or_else(|| {
        let what = if open { "open" } else { "closed" };
        SpliceError::InvalidResult(format!("{what} walk retraces edge {retraced}"))
    })
}

const SEARCH_BUDGET: usize = 200_000;

/// Occurrence-level backtracking: repeatedly take the smallest vertex with
/// unused occurrences and try every simple cycle through it. An open walk is
/// closed by a virtual edge first, whose cycle becomes the path.
fn search_decomposition(w: &Walk) -> Option<Vec<CoverElement>> {
    let open = !w.is_closed();
    let mut occ: Vec<(Option<EdgeId>, VertexId, VertexId)> =
        w.edges.iter().enumerate().map(|(i, &e)| (Some(e), w.vertices[i], w.vertices[i + 1])).collect();
    if open {
        occ.push((None, w.end(), w.start()));
    }
    let mut at: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (i, &(_, u, v)) in occ.iter().enumerate() {
        at.entry(u).or_default().push(i);
        if u != v {
            at.entry(v).or_default().push(i);
        }
    }
    let mut search = Search {
        occ: &occ,
        at: &at,
        alive: vec![true; occ.len()],
        budget: SEARCH_BUDGET,
    };
    let cycles = search.run()?;
    let mut out = Vec::new();
    for c in cycles {
        let walk = Walk {
            vertices: c.iter().map(|&(_, from)| from).chain([c[0].1]).collect(),
            edges: c.iter().map(|&(i, _)| occ[i].0.unwrap_or(EdgeId(u32::MAX))).collect(),
        };
        match c.iter().position(|&(i, _)| occ[i].0.is_none()) {
            None => out.push(CoverElement::cycle(walk)),
            Some(k) => {
                let mut p = rotate_closed(&walk, k + 1);
                p.vertices.pop();
                p.edges.pop();
                if p.start() != w.start() {
                    p = p.reversed();
                }
                if !is_path(&p) {
                    return None;
                }
                out.push(CoverElement::path(p));
            }
        }
    }
    Some(out)
}

struct Search<'a> {
    occ: &'a [(Option<EdgeId>, VertexId, VertexId)],
    at: &'a BTreeMap<VertexId, Vec<usize>>,
    alive: Vec<bool>,
    budget: usize,
}

type Traversal = Vec<(usize, VertexId)>;

impl Search<'_> {
    fn run(&mut self) -> Option<Vec<Traversal>> {
        let start = self
            .at
            .iter()
            .find(|(_, list)| list.iter().any(|&i| self.alive[i]))
            .map(|(&v, _)| v);
        let Some(start) = start else {
            return Some(Vec::new());
        };
        let mut path: Traversal = Vec::new();
        let mut on_path = BTreeSet::from([start]);
        self.extend(start, start, &mut path, &mut on_path)
    }

    fn extend(
        &mut self,
        start: VertexId,
        x: VertexId,
        path: &mut Traversal,
        on_path: &mut BTreeSet<VertexId>,
    ) -> Option<Vec<Traversal>> {
        for &i in &self.at[&x] {
            if self.budget == 0 {
                return None;
            }
            self.budget -= 1;
            if !self.alive[i] {
                continue;
            }
            let (e, u, v) = self.occ[i];
            if e.is_some() && path.iter().any(|&(j, _)| self.occ[j].0 == e) {
                continue;
            }
            let y = if u == x { v } else { u };
            if y == start {
                // earlier occurrences on the path are already marked used
                path.push((i, x));
                self.alive[i] = false;
                if let Some(mut rest) = self.run() {
                    rest.insert(0, path.clone());
                    return Some(rest);
                }
                self.alive[i] = true;
                path.pop();
            } else if !on_path.contains(&y) {
                self.alive[i] = false;
                path.push((i, x));
                on_path.insert(y);
                let found = self.extend(start, y, path, on_path);
                on_path.remove(&y);
                path.pop();
                self.alive[i] = true;
                if found.is_some() {
                    return found;
                }
            }
        }
        None
    }
}

/// Path ports whose terminal edge is `e`, in ascending (element, port) order.
fn ports_on(cover: &Cover, e: EdgeId) -> Vec<PortRef> {
    let mut out = Vec::new();
    for (i, el) in cover.elements.iter().enumerate() {
        if el.kind != ElementKind::Path || el.walk.edges.is_empty() {
            continue;
        }
        for port in [Port::Start, Port::Finish] {
            if terminal(&el.walk, port) == e {
                out.push((i, port));
            }
        }
    }
    out
}

/// Rebuilds `cover` with the elements at `touched` replaced by the chains
/// obtained from `junctions` (given in element-index space).
fn rejoin(cover: &Cover, touched: &BTreeSet<usize>, junctions: &[Junction]) -> Result<Cover, SpliceError> {
    let index: BTreeMap<usize, usize> = touched.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let pieces: Vec<Walk> = touched.iter().map(|&i| cover.elements[i].walk.clone()).collect();
    let local: Vec<Junction> = junctions
        .iter()
        .map(|j| Junction {
            a: (index[&j.a.0], j.a.1),
            b: (index[&j.b.0], j.b.1),
            connector: j.connector.clone(),
        })
        .collect();
    let (closed, open) = follow_chains(&pieces, &local)?;
    let fresh = chains_to_elements(closed, open)?;
    let mut elements: Vec<CoverElement> = cover
        .elements
        .iter()
        .enumerate()
        .filter(|(i, _)| !touched.contains(i))
        .map(|(_, el)| el.clone())
        .collect();
    elements.extend(fresh);
    Ok(Cover { elements })
}

/// Which partner order was used when pasting two pairs of path ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pairing {
    /// first with first, second with second
    Straight,
    /// first with second, second with first
    Crossed,
}

/// Pastes the two paths ending at `near` with the two ending at `far`
/// across the original edge, restoring it. Straight pairing is tried first;
/// the crossed pairing is the fallback when the straight one produces an
/// invalid element.
pub fn splice_cut_edge(cover: &Cover, cut: &CutOff) -> Result<Cover, SpliceError> {
    splice_cut_edge_traced(cover, cut).map(|(c, _)| c)
}

pub fn splice_cut_edge_traced(cover: &Cover, cut: &CutOff) -> Result<(Cover, Pairing), SpliceError> {
    match splice_with(cover, cut, Pairing::Straight) {
        Ok(c) => Ok((c, Pairing::Straight)),
        Err(first @ SpliceError::PendantCoverage { .. }) => Err(first),
        Err(first) => splice_with(cover, cut, Pairing::Crossed)
            .map(|c| (c, Pairing::Crossed))
            .map_err(|_| first),
    }
}

/// Splices `cut` with a fixed pairing.
pub fn splice_with(cover: &Cover, cut: &CutOff, pairing: Pairing) -> Result<Cover, SpliceError> {
    let near = ports_on(cover, cut.near.id);
    let far = ports_on(cover, cut.far.id);
    for (edge, ports) in [(cut.near.id, &near), (cut.far.id, &far)] {
        if ports.len() != 2 {
            return Err(SpliceError::PendantCoverage {
                edge,
                found: ports.len(),
            });
        }
    }
    let connector = Walk {
        vertices: vec![cut.near.inner, cut.far.inner],
        edges: vec![cut.original],
    };
    let touched: BTreeSet<usize> = near.iter().chain(far.iter()).map(|p| p.0).collect();
    let pairs = match pairing {
        Pairing::Straight => [(near[0], far[0]), (near[1], far[1])],
        Pairing::Crossed => [(near[0], far[1]), (near[1], far[0])],
    };
    let junctions: Vec<Junction> = pairs
        .iter()
        .map(|&(a, b)| Junction {
            a,
            b,
            connector: connector.clone(),
        })
        .collect();
    rejoin(cover, &touched, &junctions)
}

/// Where a sequence of splices got stuck: `cover` is the state reached by
/// the greedy pairing choices and `cut` the first cut neither pairing
/// accepts there.
#[derive(Debug, Clone, PartialEq)]
pub struct SpliceFailure {
    pub error: SpliceError,
    pub cover: Cover,
    pub cut: CutOff,
}

const PAIRING_BUDGET: usize = 1024;

/// Splices every cut in ascending original id. The greedy choice (straight,
/// then crossed) is followed first; if it gets stuck, earlier pairing
/// choices are revisited depth-first within a fixed budget of splice
/// attempts.
pub fn splice_all(cover: &Cover, cuts: &[CutOff]) -> Result<Cover, Box<SpliceFailure>> {
    let mut order: Vec<&CutOff> = cuts.iter().collect();
    order.sort_by_key(|c| c.original);
    let mut budget = PAIRING_BUDGET;
    let mut first_failure = None;
    match splice_search(cover, &order, &mut budget, &mut first_failure) {
        Some(c) => Ok(c),
        None => Err(Box::new(first_failure.expect("a failed search records its first dead end"))),
    }
}

fn splice_search(
    cover: &Cover,
    cuts: &[&CutOff],
    budget: &mut usize,
    first_failure: &mut Option<SpliceFailure>,
) -> Option<Cover> {
    let Some((cut, rest)) = cuts.split_first() else {
        return Some(cover.clone());
    };
    let mut error = None;
    for pairing in [Pairing::Straight, Pairing::Crossed] {
        if *budget == 0 {
            break;
        }
        *budget -= 1;
        match splice_with(cover, cut, pairing) {
            Ok(next) => {
                if let Some(done) = splice_search(&next, rest, budget, first_failure) {
                    return Some(done);
                }
            }
            Err(e) => {
                let fatal = matches!(e, SpliceError::PendantCoverage { .. });
                error.get_or_insert(e);
                if fatal {
                    break;
                }
            }
        }
    }
    if first_failure.is_none() {
        if let Some(error) = error {
            *first_failure = Some(SpliceFailure {
                error,
                cover: cover.clone(),
                cut: (*cut).clone(),
            });
        }
    }
    None
}

/// Pastes covers of two vertex-disjoint graphs along shared free edges:
/// each link edge is a terminal of two paths on each side, and the sides are
/// joined through it.
pub fn merge_disjoint(
    cover_g: &Cover,
    g: &MultiGraph,
    cover_h: &Cover,
    h: &MultiGraph,
    links: &BTreeSet<EdgeId>,
) -> Result<Cover, SpliceError> {
    if g.vertices().any(|v| h.contains_vertex(v)) {
        return Err(SpliceError::NotDisjoint);
    }
    let offset = cover_g.len();
    let mut all = cover_g.clone();
    all.extend(cover_h.clone());
    let mut junctions = Vec::new();
    let mut touched = BTreeSet::new();
    for &e in links {
        let ports = ports_on(&all, e);
        let (gs, hs): (Vec<PortRef>, Vec<PortRef>) = ports.into_iter().partition(|p| p.0 < offset);
        for side in [&gs, &hs] {
            if side.len() != 2 {
                return Err(SpliceError::PendantCoverage { edge: e, found: side.len() });
            }
        }
        for k in 0..2 {
            let (a, b) = (gs[k], hs[k]);
            let from = stripped_end(&all.elements[a.0].walk, a.1);
            let to = stripped_end(&all.elements[b.0].walk, b.1);
            if !g.contains_vertex(from) || !h.contains_vertex(to) {
                return Err(SpliceError::InvalidResult(format!("link {e} does not join the two sides")));
            }
            touched.insert(a.0);
            touched.insert(b.0);
            junctions.push(Junction {
                a,
                b,
                connector: Walk {
                    vertices: vec![from, to],
                    edges: vec![e],
                },
            });
        }
    }
    rejoin(&all, &touched, &junctions)
}

/// Joins covers of the two sides of a vertex partition whose crossing edges
/// were all cut off, splicing every cut edge back in ascending id order.
pub fn combine_partition(cover_x: &Cover, cover_y: &Cover, cuts: &[CutOff]) -> Result<Cover, SpliceError> {
    if cover_x.is_empty() || cover_y.is_empty() {
        return Err(SpliceError::EmptySide);
    }
    let mut cover = cover_x.clone();
    cover.extend(cover_y.clone());
    splice_all(&cover, cuts).map_err(|f| f.error)
}

/// Re-expands a cover of the underlying simple graph: in each parallel
/// class the second traversal of the representative is rerouted to the last
/// member and consecutive members form 2-cycles; each loop is added twice.
pub fn lift_multigraph(cover: &Cover, prov: &SimpleProvenance) -> Result<Cover, SpliceError> {
    let mut out = cover.clone();
    for (&rep, members) in &prov.classes {
        let users: Vec<usize> = out
            .elements
            .iter()
            .enumerate()
            .filter(|(_, el)| el.walk.edges.contains(&rep))
            .map(|(i, _)| i)
            .collect();
        let uses: usize = users
            .iter()
            .map(|&i| out.elements[i].walk.edges.iter().filter(|&&e| e == rep).count())
            .sum();
        if uses != 2 || users.len() != 2 {
            return Err(SpliceError::Provenance { edge: rep, found: uses });
        }
        let last = *members.last().unwrap();
        let el = &mut out.elements[users[1]];
        for e in el.walk.edges.iter_mut() {
            if *e == rep {
                *e = last;
            }
        }
        let (u, v) = {
            let w = &out.elements[users[0]].walk;
            let k = w.edges.iter().position(|&e| e == rep).unwrap();
            (w.vertices[k], w.vertices[k + 1])
        };
        for pair in members.windows(2) {
            out.elements.push(CoverElement::cycle(Walk {
                vertices: vec![u, v, u],
                edges: vec![pair[0], pair[1]],
            }));
        }
    }
    Ok(out)
}

/// Loop cycles, each used twice.
pub fn loop_cover(g: &MultiGraph, loops: &[EdgeId]) -> Cover {
    let mut elements = Vec::new();
    for &l in loops {
        let (v, _) = g.endpoints(l).expect("loop belongs to graph");
        let c = CoverElement::cycle(Walk {
            vertices: vec![v, v],
            edges: vec![l],
        });
        elements.push(c.clone());
        elements.push(c);
    }
    Cover { elements }
}

/// Maps a cover of a subdivided graph back by merging each pair of halves
/// into the original edge.
pub fn suppress_subdivision(cover: &Cover, subs: &[Subdivision]) -> Result<Cover, SpliceError> {
    let by_vertex: BTreeMap<VertexId, &Subdivision> = subs.iter().map(|s| (s.vertex, s)).collect();
    let mut out = Cover::new();
    for el in &cover.elements {
        let mut walk = el.walk.clone();
        if el.kind == ElementKind::Cycle && by_vertex.contains_key(&walk.start()) {
            walk = rotate_closed(&walk, 1);
        }
        let mut vertices = vec![walk.vertices[0]];
        let mut edges = Vec::new();
        let mut k = 0;
        while k < walk.edges.len() {
            let next_v = walk.vertices[k + 1];
            match by_vertex.get(&next_v) {
                Some(s) if k + 1 < walk.edges.len() => {
                    let pair = (walk.edges[k], walk.edges[k + 1]);
                    let (h1, h2) = s.halves;
                    if pair != (h1, h2) && pair != (h2, h1) {
                        return Err(SpliceError::Halves(s.original));
                    }
                    edges.push(s.original);
                    vertices.push(walk.vertices[k + 2]);
                    k += 2;
                }
                Some(s) => return Err(SpliceError::Halves(s.original)),
                None => {
                    edges.push(walk.edges[k]);
                    vertices.push(next_v);
                    k += 1;
                }
            }
        }
        out.elements.push(CoverElement {
            kind: el.kind,
            walk: Walk { vertices, edges },
        });
    }
    Ok(out)
}

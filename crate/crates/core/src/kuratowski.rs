//! Covers of K5 and K3,3 subdivisions built from especial walks.
//!
//! An especial walk is a closed walk that traverses every edge once or
//! twice and never runs along an edge in both directions. The walks below,
//! together with their companion cycles, double cover the abstract graphs;
//! they lift to any subdivision by replacing each abstract edge with its
//! branch path. Free edges are absorbed by cutting the walk at their inner
//! vertices.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{verify_ncdc, Cover, CoverElement, SpliceError, VerificationReport};
use crate::cover::splice_all;
use crate::graph::{cut_off, CutOff, EdgeId, FreeEdge, FreeEdgeSet, GraphError, MultiGraph, VertexId, Walk};
use crate::planarity::{KuratowskiKind, KuratowskiWitness, WitnessError};
use crate::walk::{is_cycle, peel};

/// A closed walk plus companion cycles; walk and companions together cover
/// every edge exactly twice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EspecialWalk {
    pub walk: Walk,
    pub companions: Vec<Walk>,
}

impl EspecialWalk {
    /// No edge is traversed in both directions.
    pub fn one_way(&self) -> bool {
        let mut dir: BTreeMap<EdgeId, (VertexId, VertexId)> = BTreeMap::new();
        for (k, &e) in self.walk.edges.iter().enumerate() {
            let step = (self.walk.vertices[k], self.walk.vertices[k + 1]);
            match dir.get(&e) {
                Some(&prev) if prev != step => return false,
                _ => {
                    dir.insert(e, step);
                }
            }
        }
        true
    }

    /// How often the walk traverses each edge.
    pub fn traversals(&self) -> BTreeMap<EdgeId, usize> {
        let mut m = BTreeMap::new();
        for &e in &self.walk.edges {
            *m.entry(e).or_insert(0) += 1;
        }
        m
    }

    /// Checks closedness, the one-way condition, that every edge of `g` is
    /// traversed once or twice, that companions are cycles, and that walk
    /// plus companions cover every edge exactly twice.
    pub fn check(&self, g: &MultiGraph) -> Result<(), String> {
        if !self.walk.is_closed() || !self.walk.is_valid_in(g) {
            return Err("walk is not a closed walk of the graph".into());
        }
        if !self.one_way() {
            return Err("an edge is traversed in both directions".into());
        }
        let t = self.traversals();
        for e in g.edge_ids() {
            let n = t.get(&e).copied().unwrap_or(0);
            if !(1..=2).contains(&n) {
                return Err(format!("edge {e} traversed {n} times"));
            }
        }
        let mut total = t;
        for c in &self.companions {
            if !c.is_valid_in(g) || !is_cycle(c) {
                return Err("companion is not a cycle".into());
            }
            for &e in &c.edges {
                *total.entry(e).or_insert(0) += 1;
            }
        }
        if let Some((e, n)) = total.iter().find(|(_, &n)| n != 2) {
            return Err(format!("edge {e} covered {n} times"));
        }
        if total.len() != g.edge_count() {
            return Err("walk leaves the graph".into());
        }
        Ok(())
    }
}

/// The abstract graph with vertex `i` labelled `i + 1` and edges in
/// `KuratowskiKind::abstract_edges` order.
pub fn abstract_graph(kind: KuratowskiKind) -> MultiGraph {
    let pairs: Vec<(u32, u32)> = kind
        .abstract_edges()
        .into_iter()
        .map(|(i, j)| (i as u32, j as u32))
        .collect();
    MultiGraph::from_pairs(kind.branch_count() as u32, &pairs)
}

fn walk_through(g: &MultiGraph, labels: &[u32]) -> Walk {
    let adj = g.adjacency();
    let mut walk = Walk::trivial(VertexId(labels[0] - 1));
    for pair in labels.windows(2) {
        let (a, b) = (VertexId(pair[0] - 1), VertexId(pair[1] - 1));
        let &(e, _) = adj[&a].iter().find(|(_, w)| *w == b).expect("abstract edge");
        walk.edges.push(e);
        walk.vertices.push(b);
    }
    walk
}

const K5_WALK: [u32; 11] = [1, 2, 4, 5, 2, 3, 5, 1, 3, 4, 1];
const K5_FIRST: [u32; 6] = [1, 2, 3, 4, 5, 1];
const K5_SECOND: [u32; 6] = [1, 3, 5, 2, 4, 1];
const K33_WALK: [u32; 13] = [1, 2, 5, 4, 3, 6, 5, 4, 1, 2, 3, 6, 1];
const K33_COMPANION: [u32; 7] = [1, 4, 3, 2, 5, 6, 1];

/// The fixed especial walk and companions on the abstract graph.
pub fn especial_constants(kind: KuratowskiKind) -> (MultiGraph, EspecialWalk) {
    let g = abstract_graph(kind);
    let ew = match kind {
        KuratowskiKind::K5 => EspecialWalk {
            walk: walk_through(&g, &K5_WALK),
            companions: vec![walk_through(&g, &K5_FIRST), walk_through(&g, &K5_SECOND)],
        },
        KuratowskiKind::K33 => EspecialWalk {
            walk: walk_through(&g, &K33_WALK),
            companions: vec![walk_through(&g, &K33_COMPANION)],
        },
    };
    (g, ew)
}

/// Spells a walk on the abstract graph with its labels, e.g. `v1v2v4`.
pub fn spell(kind: KuratowskiKind, walk: &Walk) -> String {
    let letter = match kind {
        KuratowskiKind::K5 => 'v',
        KuratowskiKind::K33 => 'u',
    };
    walk.vertices.iter().map(|v| format!("{letter}{}", v.0 + 1)).collect()
}

/// Replaces every abstract step by the witness branch path, in the
/// direction of travel.
pub fn lift_to_subdivision(ew: &EspecialWalk, witness: &KuratowskiWitness) -> Result<EspecialWalk, KuratowskiError> {
    let lift = |w: &Walk| -> Result<Walk, KuratowskiError> {
        let start = *witness
            .branch_vertices
            .get(w.start().0 as usize)
            .ok_or(KuratowskiError::Inconsistent)?;
        let mut out = Walk::trivial(start);
        for pair in w.vertices.windows(2) {
            let (i, j) = (pair[0].0 as usize, pair[1].0 as usize);
            let path = witness
                .branch_paths
                .get(&(i.min(j), i.max(j)))
                .ok_or(KuratowskiError::Inconsistent)?;
            out.extend(&if i < j { path.clone() } else { path.reversed() });
        }
        Ok(out)
    };
    Ok(EspecialWalk {
        walk: lift(&ew.walk)?,
        companions: ew.companions.iter().map(lift).collect::<Result<_, _>>()?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KuratowskiError {
    #[error("a single free edge cannot be absorbed")]
    SingleFreeEdge,
    #[error("host is not simple")]
    NotSimple,
    #[error("host is not a Kuratowski subdivision: {0}")]
    NotSubdivision(WitnessError),
    #[error("witness does not match the abstract graph")]
    Inconsistent,
    #[error("free edge {0} has its inner vertex off the walk")]
    AnchorOffWalk(EdgeId),
    #[error("walk splitting produced an invalid element: {0}")]
    Split(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("splicing chord {}: {source}", .cut.original)]
    ChordSplice {
        cover: Box<Cover>,
        cut: Box<CutOff>,
        source: SpliceError,
    },
    #[error("constructed cover fails verification")]
    Verify {
        cover: Box<Cover>,
        report: Box<VerificationReport>,
    },
}

/// Cuts the closed walk at the inner vertices of the free edges and peels
/// each segment. Free edges take occurrences in ascending id order, each
/// the first unused occurrence of its inner vertex (the first occurrence
/// again once all are used). Segments run between consecutive anchors; each
/// becomes cycles plus a path framed by the two anchoring free edges.
pub fn split_especial_walk(walk: &Walk, free: &[FreeEdge]) -> Result<Vec<CoverElement>, KuratowskiError> {
    let mut out = Vec::new();
    match free.len() {
        0 => {
            let (cycles, _) = peel(walk);
            for c in cycles {
                if !is_cycle(&c) {
                    return Err(KuratowskiError::Split("peeled walk is not a cycle".into()));
                }
                out.push(CoverElement::cycle(c));
            }
            return Ok(out);
        }
        1 => return Err(KuratowskiError::SingleFreeEdge),
        _ => {}
    }
    let n = walk.edges.len();
    let mut sorted: Vec<FreeEdge> = free.to_vec();
    sorted.sort_by_key(|f| f.id);
    let mut used = vec![false; n];
    let mut anchors: Vec<(usize, FreeEdge)> = Vec::new();
    for f in sorted {
        let positions: Vec<usize> = (0..n).filter(|&p| walk.vertices[p] == f.inner).collect();
        let &first = positions.first().ok_or(KuratowskiError::AnchorOffWalk(f.id))?;
        let pos = positions.iter().copied().find(|&p| !used[p]).unwrap_or(first);
        used[pos] = true;
        anchors.push((pos, f));
    }
    anchors.sort_by_key(|&(p, f)| (p, f.id));
    let k = anchors.len();
    for idx in 0..k {
        let (p, f) = anchors[idx];
        let (q, g) = anchors[(idx + 1) % k];
        let len = if idx + 1 < k { q - p } else { q + n - p };
        let mut segment = Walk::trivial(walk.vertices[p]);
        for s in 0..len {
            let at = (p + s) % n;
            segment.edges.push(walk.edges[at]);
            segment.vertices.push(walk.vertices[(at + 1) % n]);
        }
        let (cycles, rest) = peel(&segment);
        for c in cycles {
            if !is_cycle(&c) {
                return Err(KuratowskiError::Split("peeled segment is not a cycle".into()));
            }
            out.push(CoverElement::cycle(c));
        }
        let mut path = Walk {
            vertices: vec![f.outer, f.inner],
            edges: vec![f.id],
        };
        path.extend(&rest);
        path.extend(&Walk {
            vertices: vec![g.inner, g.outer],
            edges: vec![g.id],
        });
        out.push(CoverElement::path(path));
    }
    Ok(out)
}

/// `ncdc(K; F)` for a subdivision `K` of K5 or K3,3 with `|F| ≠ 1`.
pub fn ncdc_kuratowski_major(k: &MultiGraph, f: &FreeEdgeSet) -> Result<Cover, KuratowskiError> {
    if f.len() == 1 {
        return Err(KuratowskiError::SingleFreeEdge);
    }
    f.validate(k)?;
    if !k.is_simple() {
        return Err(KuratowskiError::NotSimple);
    }
    let witness = KuratowskiWitness::from_subdivision(k).map_err(KuratowskiError::NotSubdivision)?;
    let (_, abstract_walk) = especial_constants(witness.kind);
    let ew = lift_to_subdivision(&abstract_walk, &witness)?;
    let free: Vec<FreeEdge> = f.iter().copied().collect();
    let mut elements = split_especial_walk(&ew.walk, &free)?;
    elements.extend(ew.companions.into_iter().map(CoverElement::cycle));
    let cover = Cover { elements };
    let report = verify_ncdc(k, f, &cover);
    if !report.ok {
        return Err(KuratowskiError::Verify {
            cover: Box::new(cover),
            report: Box::new(report),
        });
    }
    Ok(cover)
}

/// Edges of `g` outside `h` with exactly one (`E1`) and exactly two (`E2`)
/// endpoints in `V(h)`. A loop at a vertex of `h` counts as two.
pub fn attachment_sets(g: &MultiGraph, h: &MultiGraph) -> (BTreeSet<EdgeId>, BTreeSet<EdgeId>) {
    let mut one = BTreeSet::new();
    let mut two = BTreeSet::new();
    for (e, u, v) in g.edges() {
        if h.contains_edge(e) {
            continue;
        }
        match (h.contains_vertex(u), h.contains_vertex(v)) {
            (true, true) => {
                two.insert(e);
            }
            (true, false) | (false, true) => {
                one.insert(e);
            }
            _ => {}
        }
    }
    (one, two)
}

/// `ncdc(K ∪ chords; F)`: every chord is cut off, the major is covered with
/// the resulting pendants as extra free edges, and the chords are spliced
/// back in ascending id order.
pub fn ncdc_major_with_chords(
    k: &MultiGraph,
    chords: &[(EdgeId, VertexId, VertexId)],
    f: &FreeEdgeSet,
) -> Result<Cover, KuratowskiError> {
    if f.len() == 1 && chords.is_empty() {
        return Err(KuratowskiError::SingleFreeEdge);
    }
    let mut whole = k.clone();
    let (max_v, max_e) = f.max_ids();
    whole.reserve_past(max_v, max_e);
    for &(e, u, v) in chords {
        whole.insert_edge(e, u, v)?;
    }
    let mut sorted: Vec<EdgeId> = chords.iter().map(|c| c.0).collect();
    sorted.sort();
    let mut cuts: Vec<CutOff> = Vec::new();
    let mut current = whole.clone();
    let mut free = f.clone();
    for &e in &sorted {
        let cut = cut_off(&current, e)?;
        free.insert(cut.near);
        free.insert(cut.far);
        current = cut.graph.clone();
        cuts.push(cut);
    }
    let cover = ncdc_kuratowski_major(&current, &free)?;
    let cover = splice_all(&cover, &cuts).map_err(|failure| KuratowskiError::ChordSplice {
        cover: Box::new(failure.cover),
        cut: Box::new(failure.cut),
        source: failure.error,
    })?;
    let report = verify_ncdc(&whole, f, &cover);
    if !report.ok {
        return Err(KuratowskiError::Verify {
            cover: Box::new(cover),
            report: Box::new(report),
        });
    }
    Ok(cover)
}

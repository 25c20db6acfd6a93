//! Cycle double covers that contain prescribed edge-disjoint cycles.
//!
//! Chords of the prescribed union `C` are subdivided, the rest `H` of the
//! graph is covered with the edges into `C` as free edges, and the paths
//! ending at those edges are pasted around Euler circuits of the components
//! of `C`. The prescribed cycles themselves supply the second cover of `C`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::certificate::{Claim, FailureCertificate, Witness};
use crate::cover::{
    follow_chains, loop_cover, suppress_subdivision, verify_cdc, Cover, CoverElement, ElementKind, Junction,
    Port, PortRef, SpliceError,
};
use crate::decompose::{bridges, connectivity_components, surrounding_violation};
use crate::graph::{
    edges_between, induced_by_edges, remove_vertices, subdivide_edge, EdgeId, FreeEdge, FreeEdgeSet, MultiGraph,
    Subdivision, VertexId, Walk,
};
use crate::pipeline::{ncdc_general, PipelineError, PipelineOptions, PipelineTrace};
use crate::walk::is_cycle;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoddynOutcome {
    pub cover: Cover,
    /// Trace of the cover of the graph outside the prescribed cycles.
    pub trace: PipelineTrace,
}

fn fail(claim: Claim, detail: impl Into<String>, witness: Witness) -> PipelineError {
    PipelineError::Certificate(Box::new(FailureCertificate {
        step: 0,
        claim,
        detail: detail.into(),
        witness,
        partial_trace: Vec::new(),
    }))
}

/// Closed trail through every edge of `d` (all degrees even, connected),
/// starting at the smallest vertex and always leaving by the smallest unused
/// edge id.
pub fn euler_circuit(d: &MultiGraph) -> Option<Walk> {
    let start = d.vertices().next()?;
    let adj = d.adjacency();
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut next_at: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(start, None)];
    let mut circuit: Vec<(VertexId, Option<EdgeId>)> = Vec::new();
    while let Some(&(v, _)) = stack.last() {
        let list = &adj[&v];
        let k = next_at.entry(v).or_insert(0);
        while *k < list.len() && used.contains(&list[*k].0) {
            *k += 1;
        }
        if *k < list.len() {
            let (e, w) = list[*k];
            used.insert(e);
            stack.push((w, Some(e)));
        } else {
            circuit.push(stack.pop().unwrap());
        }
    }
    if used.len() != d.edge_count() {
        return None;
    }
    circuit.reverse();
    let vertices = circuit.iter().map(|&(v, _)| v).collect();
    let edges = circuit.iter().filter_map(|&(_, e)| e).collect();
    Some(Walk { vertices, edges })
}

fn check_cycles(g: &MultiGraph, cycles: &[Walk]) -> Result<(), PipelineError> {
    let mut seen = BTreeSet::new();
    for (k, c) in cycles.iter().enumerate() {
        if !c.is_valid_in(g) || !is_cycle(c) {
            return Err(PipelineError::Input(format!("prescribed cycle {k} is not a cycle of the graph")));
        }
        for &e in &c.edges {
            if !seen.insert(e) {
                return Err(PipelineError::Input(format!("prescribed cycles share edge {e}")));
            }
        }
    }
    Ok(())
}

/// A cycle double cover of bridgeless `g` containing each of the
/// edge-disjoint cycles `cycles` as an element.
pub fn goddyn_cover(g: &MultiGraph, cycles: &[Walk], opts: PipelineOptions) -> Result<GoddynOutcome, PipelineError> {
    let b = bridges(g);
    if !b.is_empty() {
        return Err(PipelineError::Bridges(b.into_iter().collect()));
    }
    check_cycles(g, cycles)?;
    let loops: Vec<EdgeId> = g.edges().filter(|(_, u, v)| u == v).map(|(e, _, _)| e).collect();
    let mut base = g.clone();
    for &l in &loops {
        base.remove_edge(l)?;
    }
    let prescribed: Vec<&Walk> = cycles.iter().filter(|c| !(c.len() == 1 && g.is_loop(c.edges[0]))).collect();
    let on_cycles: BTreeSet<VertexId> = prescribed.iter().flat_map(|c| c.vertices.iter().copied()).collect();
    let cycle_edges: BTreeSet<EdgeId> = prescribed.iter().flat_map(|c| c.edges.iter().copied()).collect();

    // subdivide chords so every edge leaving the cycles ends outside them
    let chords: Vec<EdgeId> = base
        .edges()
        .filter(|(e, u, v)| on_cycles.contains(u) && on_cycles.contains(v) && !cycle_edges.contains(e))
        .map(|(e, _, _)| e)
        .collect();
    let mut star = base.clone();
    let mut subs: Vec<Subdivision> = Vec::new();
    for e in chords {
        let (next, s) = subdivide_edge(&star, e)?;
        star = next;
        subs.push(s);
    }

    let mut rest = remove_vertices(&star, &on_cycles);
    rest.inherit_counters(&star);
    let rest_vertices: BTreeSet<VertexId> = rest.vertices().collect();
    let mut free = FreeEdgeSet::new();
    let mut attach: BTreeMap<EdgeId, (VertexId, VertexId)> = BTreeMap::new();
    let mut ids = star.clone();
    for e in edges_between(&star, &on_cycles, &rest_vertices) {
        let (u, v) = star.endpoints(e).unwrap();
        let (on, off) = if on_cycles.contains(&u) { (u, v) } else { (v, u) };
        free.insert(FreeEdge {
            id: e,
            inner: off,
            outer: ids.fresh_vertex_id(),
        });
        attach.insert(e, (on, off));
    }
    if let Some(v) = surrounding_violation(&rest, &free, opts.rule) {
        let detail = format!("component {:?} is {:?} with contact {}", v.component, v.kind, v.contact);
        return Err(fail(
            Claim::ExtensionSurrounding,
            detail,
            Witness::Surrounding {
                graph: rest,
                free,
                rule: opts.rule,
                violation: v,
            },
        ));
    }
    let outside = ncdc_general(&rest, &free, opts)?;

    let mut pieces: Vec<Walk> = Vec::new();
    let mut kept: Vec<CoverElement> = Vec::new();
    for el in &outside.cover.elements {
        match el.kind {
            ElementKind::Path => pieces.push(el.walk.clone()),
            ElementKind::Cycle => kept.push(el.clone()),
        }
    }
    // first and second path end at each free edge
    let mut ends: BTreeMap<EdgeId, Vec<PortRef>> = BTreeMap::new();
    for (i, p) in pieces.iter().enumerate() {
        ends.entry(p.edges[0]).or_default().push((i, Port::Start));
        ends.entry(*p.edges.last().unwrap()).or_default().push((i, Port::Finish));
    }
    for e in free.ids() {
        let found = ends.get(&e).map_or(0, Vec::len);
        if found != 2 {
            return Err(PipelineError::Input(format!("free edge {e} ends {found} paths")));
        }
    }

    let mut junctions: Vec<Junction> = Vec::new();
    let mut second_copies: Vec<CoverElement> = Vec::new();
    let cycle_graph = induced_by_edges(&base, &cycle_edges)?;
    for comp in connectivity_components(&cycle_graph) {
        let part = crate::graph::induced_by_vertices(&cycle_graph, &comp)?;
        let circuit = euler_circuit(&part).ok_or_else(|| PipelineError::Input("cycle union is not Eulerian".into()))?;
        let slots = assign_free_edges(&circuit, &attach);
        if slots.iter().all(Vec::is_empty) {
            for c in &prescribed {
                if comp.contains(&c.start()) {
                    second_copies.push(CoverElement::cycle((*c).clone()));
                }
            }
            continue;
        }
        junctions.extend(circuit_junctions(&circuit, &slots, &attach, &ends));
    }

    let (closed, open) = follow_chains(&pieces, &junctions).map_err(|e| paste_failure(&star, e, None))?;
    if let Some(w) = open.first() {
        return Err(paste_failure(
            &star,
            SpliceError::InvalidResult("pasting left an open chain".into()),
            Some(w.clone()),
        ));
    }
    let mut cover_star = Cover { elements: kept };
    for w in closed {
        let els = crate::cover::decompose_walk(&w).map_err(|e| paste_failure(&star, e, Some(w.clone())))?;
        cover_star.elements.extend(els);
    }
    cover_star.elements.extend(second_copies);
    cover_star
        .elements
        .extend(prescribed.iter().map(|c| CoverElement::cycle((*c).clone())));

    let mut cover = suppress_subdivision(&cover_star, &subs).map_err(|e| paste_failure(&star, e, None))?;
    cover.extend(loop_cover(g, &loops));
    if !verify_cdc(g, &cover).ok {
        return Err(fail(
            Claim::Verify,
            "extended cover",
            Witness::Unverified {
                graph: g.clone(),
                free: FreeEdgeSet::new(),
                cover,
            },
        ));
    }
    for c in cycles {
        if !cover.contains_cycle(&c.edges.iter().copied().collect()) {
            return Err(PipelineError::Input(format!("prescribed cycle through {} is missing", c.edges[0])));
        }
    }
    Ok(GoddynOutcome {
        cover,
        trace: outside.trace,
    })
}

fn paste_failure(graph: &MultiGraph, e: SpliceError, walk: Option<Walk>) -> PipelineError {
    match walk {
        Some(walk) => fail(
            Claim::ExtensionPaste,
            e.to_string(),
            Witness::Walk {
                graph: graph.clone(),
                walk,
            },
        ),
        None => PipelineError::Input(format!("pasting failed: {e}")),
    }
}

/// Free edges at each circuit position. Edges at a vertex go, in ascending
/// id, to the least-loaded occurrence of that vertex, earliest first.
fn assign_free_edges(circuit: &Walk, attach: &BTreeMap<EdgeId, (VertexId, VertexId)>) -> Vec<Vec<EdgeId>> {
    let len = circuit.edges.len();
    let mut slots: Vec<Vec<EdgeId>> = vec![Vec::new(); len];
    let mut positions: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (j, &v) in circuit.vertices[..len].iter().enumerate() {
        positions.entry(v).or_default().push(j);
    }
    for (&e, &(on, _)) in attach {
        if let Some(list) = positions.get(&on) {
            let &j = list.iter().min_by_key(|&&j| (slots[j].len(), j)).unwrap();
            slots[j].push(e);
        }
    }
    slots
}

/// Joins the second path at each free edge to the first path at the next
/// one: within an occurrence through the circuit vertex, and from the last
/// edge of an occurrence along the circuit to the next occupied occurrence.
fn circuit_junctions(
    circuit: &Walk,
    slots: &[Vec<EdgeId>],
    attach: &BTreeMap<EdgeId, (VertexId, VertexId)>,
    ends: &BTreeMap<EdgeId, Vec<PortRef>>,
) -> Vec<Junction> {
    let len = circuit.edges.len();
    let occupied: Vec<usize> = (0..len).filter(|&j| !slots[j].is_empty()).collect();
    let mut out = Vec::new();
    for (k, &j) in occupied.iter().enumerate() {
        let at = circuit.vertices[j];
        let list = &slots[j];
        for pair in list.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            out.push(Junction {
                a: ends[&a][1],
                b: ends[&b][0],
                connector: Walk {
                    vertices: vec![attach[&a].1, at, attach[&b].1],
                    edges: vec![a, b],
                },
            });
        }
        let s = occupied[(k + 1) % occupied.len()];
        let steps = if s > j { s - j } else { s + len - j };
        let last = *list.last().unwrap();
        let first_next = slots[s][0];
        let mut vertices = vec![attach[&last].1, at];
        let mut edges = vec![last];
        for t in 0..steps {
            edges.push(circuit.edges[(j + t) % len]);
            vertices.push(circuit.vertices[(j + t + 1) % len]);
        }
        edges.push(first_next);
        vertices.push(attach[&first_next].1);
        out.push(Junction {
            a: ends[&last][1],
            b: ends[&first_next][0],
            connector: Walk { vertices, edges },
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn triangle(g: &MultiGraph, a: u32, b: u32, c: u32) -> Walk {
        let find = |x: u32, y: u32| {
            g.edges()
                .find(|&(_, u, v)| (u.0, v.0) == (x.min(y), x.max(y)))
                .map(|(e, _, _)| e)
                .unwrap()
        };
        Walk::from_edges(g, VertexId(a), &[find(a, b), find(b, c), find(c, a)]).unwrap()
    }

    #[test]
    fn euler_circuit_of_two_triangles_at_a_vertex() {
        let g = MultiGraph::from_pairs(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        let w = euler_circuit(&g).unwrap();
        assert!(w.is_closed() && w.is_valid_in(&g));
        assert_eq!(w.len(), 6);
    }

    #[test]
    fn cycle_graph_contains_itself_twice() {
        let g = generators::cycle(5);
        let c = Walk::from_edges(&g, VertexId(0), &g.edge_ids().collect::<Vec<_>>()).unwrap();
        let out = goddyn_cover(&g, std::slice::from_ref(&c), PipelineOptions::default()).unwrap();
        assert_eq!(out.cover.len(), 2);
        assert!(out.cover.contains_cycle(&c.edges.iter().copied().collect()));
    }

    #[test]
    fn every_k4_triangle_extends() {
        let g = generators::complete(4);
        for (a, b, c) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            let t = triangle(&g, a, b, c);
            let out = goddyn_cover(&g, std::slice::from_ref(&t), PipelineOptions::default()).unwrap();
            assert!(verify_cdc(&g, &out.cover).ok);
            assert!(out.cover.contains_cycle(&t.edges.iter().copied().collect()));
        }
    }

    #[test]
    fn two_disjoint_triangles_in_k6() {
        let g = generators::complete(6);
        let cycles = [triangle(&g, 0, 1, 2), triangle(&g, 3, 4, 5)];
        match goddyn_cover(&g, &cycles, PipelineOptions::default()) {
            Ok(out) => {
                assert!(verify_cdc(&g, &out.cover).ok);
                for c in &cycles {
                    assert!(out.cover.contains_cycle(&c.edges.iter().copied().collect()));
                }
            }
            Err(PipelineError::Certificate(c)) => assert!(c.recheck()),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn overlapping_cycles_are_rejected() {
        let g = generators::complete(4);
        let t = triangle(&g, 0, 1, 2);
        assert!(matches!(
            goddyn_cover(&g, &[t.clone(), t], PipelineOptions::default()),
            Err(PipelineError::Input(_))
        ));
    }
}

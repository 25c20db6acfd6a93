//! Peeling walks into cycles.
//!
//! A walk is scanned left to right; whenever the current vertex already
//! occurs on the residual prefix, the closed stretch between the two
//! occurrences is cut out as a cycle. This always removes the repetition
//! with the smallest closing index first, and each peel strictly shortens
//! the residual walk.

use std::collections::{BTreeSet, HashMap};

use crate::graph::{EdgeId, VertexId, Walk};

/// Splits `walk` into the peeled cycles and a residual walk with no repeated
/// vertex. For a closed walk the residual is the trivial walk at its start.
pub fn peel(walk: &Walk) -> (Vec<Walk>, Walk) {
    let mut cycles = Vec::new();
    let mut stack_v: Vec<VertexId> = vec![walk.start()];
    let mut stack_e: Vec<EdgeId> = Vec::new();
    let mut pos: HashMap<VertexId, usize> = HashMap::new();
    pos.insert(walk.start(), 0);
    for (i, &e) in walk.edges.iter().enumerate() {
        let v = walk.vertices[i + 1];
        stack_e.push(e);
        if let Some(&j) = pos.get(&v) {
            let cyc_edges: Vec<EdgeId> = stack_e.drain(j..).collect();
            let mut cyc_vertices: Vec<VertexId> = stack_v.drain(j + 1..).collect();
            for w in &cyc_vertices {
                pos.remove(w);
            }
            cyc_vertices.insert(0, v);
            cyc_vertices.push(v);
            cycles.push(Walk {
                vertices: cyc_vertices,
                edges: cyc_edges,
            });
        } else {
            pos.insert(v, stack_v.len());
            stack_v.push(v);
        }
    }
    (
        cycles,
        Walk {
            vertices: stack_v,
            edges: stack_e,
        },
    )
}

/// Closed, nonempty, no repeated vertex besides the endpoints, no repeated
/// edge.
pub fn is_cycle(w: &Walk) -> bool {
    if w.edges.is_empty() || !w.is_closed() {
        return false;
    }
    let inner = &w.vertices[..w.vertices.len() - 1];
    let distinct_v: BTreeSet<_> = inner.iter().collect();
    let distinct_e: BTreeSet<_> = w.edges.iter().collect();
    distinct_v.len() == inner.len() && distinct_e.len() == w.edges.len()
}

/// Open, nonempty, all vertices distinct.
pub fn is_path(w: &Walk) -> bool {
    if w.edges.is_empty() {
        return false;
    }
    let distinct: BTreeSet<_> = w.vertices.iter().collect();
    distinct.len() == w.vertices.len()
}

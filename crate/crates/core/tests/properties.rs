//! Invariants over random inputs.

use std::collections::BTreeMap;

use cdc_core::cover::{
    decompose_walk, lift_multigraph, loop_cover, splice_cut_edge, verify_cdc, verify_ncdc, Cover, CoverElement,
    ElementKind,
};
use cdc_core::decompose::bridges;
use cdc_core::generators;
use cdc_core::graph::{cut_off, underlying_simple, EdgeId, MultiGraph, VertexId, Walk};
use cdc_core::io::{parse_edgelist, parse_graph6, write_edgelist, write_graph6, LabeledGraph};
use cdc_core::pipeline::{cdc, PipelineOptions};
use cdc_core::planarity::planar_cdc;
use cdc_core::walk::{is_cycle, is_path, peel};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn edge_counts<'a>(walks: impl IntoIterator<Item = &'a Walk>) -> BTreeMap<EdgeId, usize> {
    let mut m = BTreeMap::new();
    for w in walks {
        for &e in &w.edges {
            *m.entry(e).or_insert(0) += 1;
        }
    }
    m
}

/// Random walk of up to `len` steps that may reuse edges.
fn random_walk(g: &MultiGraph, len: usize, rng: &mut ChaCha8Rng) -> Walk {
    let adj = g.adjacency();
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut w = Walk::trivial(*vs.choose(rng).unwrap());
    for _ in 0..len {
        let Some(&(e, y)) = adj.get(&w.end()).and_then(|a| a.choose(rng)) else {
            break;
        };
        w.edges.push(e);
        w.vertices.push(y);
    }
    w
}

/// Random walk that never reuses an edge.
fn random_trail(g: &MultiGraph, len: usize, rng: &mut ChaCha8Rng) -> Walk {
    let adj = g.adjacency();
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut w = Walk::trivial(*vs.choose(rng).unwrap());
    for _ in 0..len {
        let options: Vec<&(EdgeId, VertexId)> = adj
            .get(&w.end())
            .into_iter()
            .flatten()
            .filter(|(e, _)| !w.edges.contains(e))
            .collect();
        let Some(&&(e, y)) = options.choose(rng) else {
            break;
        };
        w.edges.push(e);
        w.vertices.push(y);
    }
    w
}

/// Cuts the two traversals of `e` in a cover of `g`, giving a cover of the
/// cut-off graph with its two pendants.
fn open_at(cover: &Cover, g: &MultiGraph, e: EdgeId) -> (Cover, cdc_core::graph::CutOff) {
    let cut = cut_off(g, e).unwrap();
    let mut out = Cover::new();
    for el in &cover.elements {
        let w = &el.walk;
        let Some(i) = w.edges.iter().position(|&x| x == e) else {
            out.elements.push(el.clone());
            continue;
        };
        let n = w.edges.len();
        let after = w.vertices[i + 1];
        let enter = if cut.near.inner == after { cut.near } else { cut.far };
        let leave = if enter == cut.near { cut.far } else { cut.near };
        let mut vertices = vec![enter.outer, after];
        let mut edges = vec![enter.id];
        for k in 1..n {
            let t = (i + k) % n;
            edges.push(w.edges[t]);
            vertices.push(w.vertices[t + 1]);
        }
        edges.push(leave.id);
        vertices.push(leave.outer);
        out.elements.push(CoverElement::path(Walk { vertices, edges }));
    }
    (out, cut)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn peel_splits_a_walk_into_cycles_and_a_path(seed in any::<u64>(), len in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generators::random_multigraph(rng.gen_range(2..9), rng.gen_range(3..16), &mut rng);
        let w = random_walk(&g, len, &mut rng);
        let (cycles, rest) = peel(&w);
        for c in &cycles {
            prop_assert!(c.is_closed() && !c.is_empty() && c.is_valid_in(&g));
            let inner: std::collections::BTreeSet<_> = c.vertices[..c.vertices.len() - 1].iter().collect();
            prop_assert_eq!(inner.len(), c.len());
        }
        prop_assert!(rest.is_empty() || is_path(&rest));
        prop_assert_eq!(rest.start(), w.start());
        prop_assert_eq!(rest.end(), w.end());
        let mut parts = cycles.clone();
        parts.push(rest);
        prop_assert_eq!(edge_counts(&parts), edge_counts([&w]));
    }

    #[test]
    fn closed_trails_decompose_into_cycles(seed in any::<u64>(), len in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generators::random_multigraph(rng.gen_range(2..8), rng.gen_range(4..18), &mut rng);
        let mut w = random_trail(&g, len, &mut rng);
        while !w.is_closed() {
            w.edges.pop();
            w.vertices.pop();
        }
        prop_assume!(!w.is_empty());
        let parts = decompose_walk(&w).unwrap();
        prop_assert!(parts.iter().all(|el| el.kind == ElementKind::Cycle && is_cycle(&el.walk)));
        prop_assert_eq!(edge_counts(parts.iter().map(|el| &el.walk)), edge_counts([&w]));
    }

    #[test]
    fn chains_between_pendants_keep_both_pendants_on_the_path(seed in any::<u64>(), len in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = generators::random_multigraph(rng.gen_range(2..8), rng.gen_range(4..18), &mut rng);
        let inner = random_trail(&g, len, &mut rng);
        let (a, b) = (g.add_vertex(), g.add_vertex());
        let first = g.add_edge(a, inner.start()).unwrap();
        let last = g.add_edge(inner.end(), b).unwrap();
        let mut w = Walk { vertices: vec![a, inner.start()], edges: vec![first] };
        w.extend(&inner);
        w.edges.push(last);
        w.vertices.push(b);
        prop_assert!(w.is_valid_in(&g));
        let parts = decompose_walk(&w).unwrap();
        let paths: Vec<&CoverElement> = parts.iter().filter(|el| el.kind == ElementKind::Path).collect();
        prop_assert_eq!(paths.len(), 1);
        prop_assert!(is_path(&paths[0].walk));
        prop_assert_eq!(paths[0].terminal_edges(), Some((first, last)));
        prop_assert!(parts.iter().all(|el| el.kind == ElementKind::Path || is_cycle(&el.walk)));
        prop_assert_eq!(edge_counts(parts.iter().map(|el| &el.walk)), edge_counts([&w]));
    }

    #[test]
    fn cutting_and_splicing_an_edge_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = generators::random_bridgeless_planar(rng.gen_range(4..13), &mut rng);
        let cover = planar_cdc(&g).unwrap();
        let edges: Vec<EdgeId> = g.edge_ids().collect();
        let e = *edges.choose(&mut rng).unwrap();
        let (opened, cut) = open_at(&cover, &g, e);
        prop_assert!(verify_ncdc(&cut.graph, &cut.free_edges(), &opened).ok);
        let spliced = splice_cut_edge(&opened, &cut).unwrap();
        prop_assert!(verify_cdc(&g, &spliced).ok);
        let before: Vec<EdgeId> = cut.graph.edge_ids().collect();
        prop_assert_eq!(before.len() + 1, g.edge_count());
        prop_assert!(!cut.graph.contains_edge(e));
    }

    #[test]
    fn lifting_restores_parallel_edges_and_loops(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = generators::random_bridgeless_planar(rng.gen_range(4..10), &mut rng);
        let edges: Vec<(EdgeId, VertexId, VertexId)> = g.edges().collect();
        for _ in 0..rng.gen_range(1..5) {
            let &(_, u, v) = edges.choose(&mut rng).unwrap();
            g.add_edge(u, v).unwrap();
        }
        let vs: Vec<VertexId> = g.vertices().collect();
        let apex = *vs.choose(&mut rng).unwrap();
        g.add_edge(apex, apex).unwrap();
        let (simple, prov) = underlying_simple(&g);
        let mut lifted = lift_multigraph(&planar_cdc(&simple).unwrap(), &prov).unwrap();
        lifted.extend(loop_cover(&g, &prov.loops));
        prop_assert!(verify_cdc(&g, &lifted).ok);
    }

    #[test]
    fn edgelists_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = LabeledGraph::numbered(generators::random_multigraph(rng.gen_range(1..10), rng.gen_range(0..20), &mut rng));
        let text = write_edgelist(&g);
        let back = parse_edgelist(&text).unwrap();
        prop_assert_eq!(back.graph.vertex_count(), g.graph.vertex_count());
        prop_assert_eq!(back.graph.edge_count(), g.graph.edge_count());
        let pairs = |h: &LabeledGraph| {
            let mut p: Vec<(String, String)> = h
                .graph
                .edges()
                .map(|(_, u, v)| {
                    let (x, y) = (h.label(u), h.label(v));
                    if x <= y { (x, y) } else { (y, x) }
                })
                .collect();
            p.sort();
            p
        };
        prop_assert_eq!(pairs(&back), pairs(&g));
    }

    #[test]
    fn graph6_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, _) = underlying_simple(&generators::random_multigraph(rng.gen_range(1..70), rng.gen_range(0..120), &mut rng));
        let text = write_graph6(&g).unwrap();
        let back = parse_graph6(&text).unwrap();
        let pairs = |h: &MultiGraph| {
            let mut p: Vec<(VertexId, VertexId)> = h.edges().map(|(_, u, v)| (u.min(v), u.max(v))).collect();
            p.sort();
            p
        };
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        prop_assert_eq!(pairs(&back), pairs(&g));
    }

    #[test]
    fn pipeline_is_deterministic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(5..10);
        let g = generators::random_multigraph(n, 2 * n as usize + 2, &mut rng);
        prop_assume!(bridges(&g).is_empty());
        let opts = PipelineOptions { seed, ..Default::default() };
        let render = || match cdc(&g, opts) {
            Ok(out) => serde_json::to_string(&out.cover).unwrap(),
            Err(e) => e.to_string(),
        };
        prop_assert_eq!(render(), render());
    }
}

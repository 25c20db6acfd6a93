//! End-to-end outcome audits: every run either returns a cover that an
//! independent counter accepts or a certificate whose witness re-checks.

use std::collections::{BTreeMap, BTreeSet};

use cdc_core::cover::{Cover, ElementKind};
use cdc_core::decompose::bridges;
use cdc_core::generators;
use cdc_core::goddyn::goddyn_cover;
use cdc_core::graph::{EdgeId, FreeEdge, FreeEdgeSet, MultiGraph, VertexId, Walk};
use cdc_core::pipeline::{cdc, ncdc_general, PipelineError, PipelineOptions};
use cdc_core::walk::is_cycle;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Multiplicity of every edge, counted straight from the walks.
fn counts(cover: &Cover) -> BTreeMap<EdgeId, usize> {
    let mut m = BTreeMap::new();
    for el in &cover.elements {
        for &e in &el.walk.edges {
            *m.entry(e).or_insert(0) += 1;
        }
    }
    m
}

fn doubly_covers(g: &MultiGraph, cover: &Cover, extra: &BTreeSet<EdgeId>) -> bool {
    let m = counts(cover);
    let expected: BTreeSet<EdgeId> = g.edge_ids().chain(extra.iter().copied()).collect();
    m.keys().all(|e| expected.contains(e)) && expected.iter().all(|e| m.get(e) == Some(&2))
}

#[derive(Default, Debug)]
struct Tally {
    verified: usize,
    certified: usize,
}

fn audit(g: &MultiGraph, result: Result<Cover, PipelineError>, tally: &mut Tally) {
    match result {
        Ok(cover) => {
            assert!(doubly_covers(g, &cover, &BTreeSet::new()));
            assert!(cover
                .elements
                .iter()
                .all(|el| el.kind == ElementKind::Cycle && is_cycle(&el.walk) && el.walk.is_valid_in(g)));
            tally.verified += 1;
        }
        Err(PipelineError::Certificate(c)) => {
            assert!(c.recheck(), "certificate {} does not re-check", c.claim.tag());
            let json = serde_json::to_string(&c).unwrap();
            assert!(json.contains(&format!("\"claim\":\"{}\"", c.claim.tag())));
            tally.certified += 1;
        }
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn random_bridgeless_multigraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut tally = Tally::default();
    for i in 0..250 {
        let n = 5 + i % 9;
        let g = generators::random_multigraph(n, 2 * n as usize + i as usize % 5, &mut rng);
        if !bridges(&g).is_empty() {
            continue;
        }
        let r = cdc(&g, PipelineOptions::default()).map(|o| o.cover);
        audit(&g, r, &mut tally);
    }
    assert!(tally.verified > tally.certified, "{tally:?}");
}

#[test]
fn dense_nonplanar_graphs() {
    let mut tally = Tally::default();
    for g in [
        generators::complete(6),
        generators::complete(7),
        generators::complete(8),
        generators::complete_bipartite(3, 4),
        generators::complete_bipartite(4, 4),
        generators::flower_snark(7),
        generators::flower_snark(9),
    ] {
        let r = cdc(&g, PipelineOptions::default()).map(|o| o.cover);
        audit(&g, r, &mut tally);
    }
}

#[test]
fn seeds_change_nothing_about_validity() {
    let g = generators::petersen();
    for seed in 0..8 {
        let mut tally = Tally::default();
        let r = cdc(&g, PipelineOptions { seed, ..Default::default() }).map(|o| o.cover);
        audit(&g, r, &mut tally);
    }
}

#[test]
fn ncdc_with_free_edges_on_snarks() {
    let g = generators::petersen();
    let mut f = FreeEdgeSet::new();
    for (k, v) in [0u32, 3, 7].into_iter().enumerate() {
        f.insert(FreeEdge {
            id: EdgeId(100 + k as u32),
            inner: VertexId(v),
            outer: VertexId(100 + k as u32),
        });
    }
    match ncdc_general(&g, &f, PipelineOptions::default()) {
        Ok(out) => {
            assert!(doubly_covers(&g, &out.cover, &f.ids().collect()));
            for el in &out.cover.elements {
                if el.kind == ElementKind::Path {
                    let (a, b) = el.terminal_edges().unwrap();
                    assert!(a != b && f.contains(a) && f.contains(b));
                }
            }
        }
        Err(PipelineError::Certificate(c)) => assert!(c.recheck()),
        Err(e) => panic!("{e}"),
    }
}

fn random_cycle(g: &MultiGraph, rng: &mut ChaCha8Rng) -> Option<Walk> {
    let adj = g.adjacency();
    let mut starts: Vec<VertexId> = g.vertices().collect();
    starts.shuffle(rng);
    for s in starts {
        let mut path = vec![s];
        let mut edges = Vec::new();
        for _ in 0..g.vertex_count() {
            let x = *path.last().unwrap();
            let mut options = adj[&x].clone();
            options.shuffle(rng);
            let mut moved = false;
            for (e, y) in options {
                if edges.contains(&e) || x == y {
                    continue;
                }
                if y == s && !edges.is_empty() {
                    edges.push(e);
                    let w = Walk::from_edges(g, s, &edges).ok()?;
                    return is_cycle(&w).then_some(w);
                }
                if !path.contains(&y) {
                    path.push(y);
                    edges.push(e);
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
    }
    None
}

#[test]
fn goddyn_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut tally = Tally::default();
    for i in 0..150 {
        let n = 5 + i % 9;
        let g = generators::random_multigraph(n, 2 * n as usize, &mut rng);
        if !bridges(&g).is_empty() {
            continue;
        }
        let Some(c) = random_cycle(&g, &mut rng) else {
            continue;
        };
        match goddyn_cover(&g, std::slice::from_ref(&c), PipelineOptions::default()) {
            Ok(out) => {
                assert!(doubly_covers(&g, &out.cover, &BTreeSet::new()));
                let target: BTreeSet<EdgeId> = c.edges.iter().copied().collect();
                assert!(out.cover.elements.iter().any(|el| el.edge_set() == target && el.walk.len() == c.len()));
                tally.verified += 1;
            }
            Err(PipelineError::Certificate(cert)) => {
                assert!(cert.recheck());
                tally.certified += 1;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(tally.verified > 0);
}

#[test]
fn goddyn_on_petersen_pentagons() {
    let g = generators::petersen();
    let outer: Vec<EdgeId> = g
        .edges()
        .filter(|(_, u, v)| u.0 < 5 && v.0 < 5)
        .map(|(e, _, _)| e)
        .collect();
    let mut order = vec![];
    let mut at = VertexId(0);
    let mut left: Vec<EdgeId> = outer.clone();
    while let Some(k) = left.iter().position(|&e| {
        let (u, v) = g.endpoints(e).unwrap();
        u == at || v == at
    }) {
        let e = left.remove(k);
        at = g.opposite(e, at).unwrap();
        order.push(e);
    }
    let pentagon = Walk::from_edges(&g, VertexId(0), &order).unwrap();
    match goddyn_cover(&g, &[pentagon], PipelineOptions::default()) {
        Ok(out) => assert!(doubly_covers(&g, &out.cover, &BTreeSet::new())),
        Err(PipelineError::Certificate(c)) => assert!(c.recheck()),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn random_planar_graphs_never_peel() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..30 {
        let g = generators::random_bridgeless_planar(rng.gen_range(4..16), &mut rng);
        let out = cdc(&g, PipelineOptions::default()).unwrap();
        assert_eq!(out.trace.mu(), 1);
        assert!(doubly_covers(&g, &out.cover, &BTreeSet::new()));
    }
}

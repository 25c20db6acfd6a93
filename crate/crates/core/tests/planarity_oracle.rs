//! Planarity answers checked against brute force on small graphs and
//! against their own certificates on larger random ones.

use std::collections::{BTreeMap, BTreeSet};

use cdc_core::generators;
use cdc_core::graph::{MultiGraph, VertexId};
use cdc_core::planarity::{faces, test_planarity, KuratowskiKind, KuratowskiWitness, Planarity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_pairs(n: u32) -> Vec<(u32, u32)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// On at most six vertices a Kuratowski subdivision is K5, K5 with one
/// edge subdivided, or K3,3 itself.
fn nonplanar_brute(n: u32, edges: &BTreeSet<(u32, u32)>) -> bool {
    let has = |a: u32, b: u32| edges.contains(&(a.min(b), a.max(b)));
    let subsets = |k: usize| -> Vec<Vec<u32>> {
        (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    };
    for s in subsets(5) {
        let missing: Vec<(u32, u32)> = all_pairs(5)
            .into_iter()
            .map(|(i, j)| (s[i as usize], s[j as usize]))
            .filter(|&(a, b)| !has(a, b))
            .collect();
        if missing.is_empty() {
            return true;
        }
        if let [(u, v)] = missing[..] {
            if (0..n).any(|w| !s.contains(&w) && has(w, u) && has(w, v)) {
                return true;
            }
        }
    }
    if n == 6 {
        for a in subsets(3) {
            let b: Vec<u32> = (0..6).filter(|x| !a.contains(x)).collect();
            if a.iter().all(|&x| b.iter().all(|&y| has(x, y))) {
                return true;
            }
        }
    }
    false
}

fn components(g: &MultiGraph) -> usize {
    let mut seen = BTreeSet::new();
    let adj = g.adjacency();
    let mut count = 0;
    for v in g.vertices() {
        if seen.insert(v) {
            count += 1;
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                for &(_, y) in adj.get(&x).into_iter().flatten() {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
    }
    count
}

/// Checks a witness from scratch: the right number of branch vertices and
/// one path per abstract edge, each a path in `g` between the right branch
/// vertices, pairwise sharing no edges and no vertices but their ends.
fn witness_holds(g: &MultiGraph, w: &KuratowskiWitness) -> bool {
    let k = match w.kind {
        KuratowskiKind::K5 => 5,
        KuratowskiKind::K33 => 6,
    };
    let branch: BTreeSet<VertexId> = w.branch_vertices.iter().copied().collect();
    if branch.len() != k || w.branch_vertices.len() != k {
        return false;
    }
    let wanted: BTreeSet<(usize, usize)> = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .filter(|(i, j)| w.kind == KuratowskiKind::K5 || (i + j) % 2 == 1)
        .collect();
    let got: BTreeSet<(usize, usize)> = w.branch_paths.keys().copied().collect();
    if wanted != got {
        return false;
    }
    let mut used_edges = BTreeSet::new();
    let mut interior_seen: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (&(i, j), p) in &w.branch_paths {
        if !p.is_valid_in(g) || p.edges.is_empty() {
            return false;
        }
        let ends = BTreeSet::from([p.start(), p.end()]);
        if ends != BTreeSet::from([w.branch_vertices[i], w.branch_vertices[j]]) {
            return false;
        }
        for &e in &p.edges {
            if !used_edges.insert(e) {
                return false;
            }
        }
        let inner = &p.vertices[1..p.vertices.len() - 1];
        for v in inner {
            if branch.contains(v) {
                return false;
            }
            *interior_seen.entry(*v).or_default() += 1;
        }
    }
    interior_seen.values().all(|&c| c == 1)
}

/// Euler's formula per component; an isolated vertex has no face.
fn certified(g: &MultiGraph) -> bool {
    match test_planarity(g) {
        Planarity::Planar(emb) => {
            let f = faces(g, &emb).unwrap().len() as i64;
            let (v, e) = (g.vertex_count() as i64, g.edge_count() as i64);
            let isolated = g.vertices().filter(|&x| g.degree(x) == 0).count() as i64;
            v - e + f == 2 * components(g) as i64 - isolated
        }
        Planarity::NonPlanar(w) => witness_holds(g, &w),
    }
}

#[test]
fn exhaustive_on_five_and_six_vertices() {
    for n in [5u32, 6] {
        let pairs = all_pairs(n);
        for mask in 0u32..1 << pairs.len() {
            let chosen: Vec<(u32, u32)> = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            let g = MultiGraph::from_pairs(n, &chosen);
            let brute = nonplanar_brute(n, &chosen.iter().copied().collect());
            let lib = matches!(test_planarity(&g), Planarity::NonPlanar(_));
            assert_eq!(lib, brute, "disagreement on {chosen:?}");
        }
    }
}

#[test]
fn random_answers_carry_valid_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..400 {
        let n = rng.gen_range(5..12);
        let m = rng.gen_range(n..3 * n);
        let g = generators::random_multigraph(n, m as usize, &mut rng);
        assert!(certified(&g), "uncertified answer on {g:?}");
    }
}

#[test]
fn known_answers() {
    for g in [generators::complete(5), generators::complete_bipartite(3, 3), generators::petersen(), generators::blanusa_first()] {
        assert!(matches!(test_planarity(&g), Planarity::NonPlanar(ref w) if witness_holds(&g, w)));
    }
    for g in [generators::dodecahedron(), generators::cube(), generators::wheel(9)] {
        assert!(matches!(test_planarity(&g), Planarity::Planar(_)));
        assert!(certified(&g));
    }
}


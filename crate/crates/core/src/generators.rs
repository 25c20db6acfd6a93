//! Named graphs and seeded random families used by the corpus and tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::decompose::bridges;
use crate::graph::{EdgeId, MultiGraph};
use crate::planarity::KuratowskiKind;

pub fn complete(n: u32) -> MultiGraph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    MultiGraph::from_pairs(n, &pairs)
}

pub fn complete_bipartite(a: u32, b: u32) -> MultiGraph {
    let mut pairs = Vec::new();
    for i in 0..a {
        for j in 0..b {
            pairs.push((i, a + j));
        }
    }
    MultiGraph::from_pairs(a + b, &pairs)
}

pub fn cycle(n: u32) -> MultiGraph {
    let pairs: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    MultiGraph::from_pairs(n, &pairs)
}

/// Hub 0 joined to a rim cycle on `1..=n`.
pub fn wheel(n: u32) -> MultiGraph {
    let mut pairs: Vec<(u32, u32)> = (1..=n).map(|i| (0, i)).collect();
    pairs.extend((0..n).map(|i| (1 + i, 1 + (i + 1) % n)));
    MultiGraph::from_pairs(n + 1, &pairs)
}

pub fn cube() -> MultiGraph {
    let mut pairs = Vec::new();
    for v in 0u32..8 {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                pairs.push((v, w));
            }
        }
    }
    MultiGraph::from_pairs(8, &pairs)
}

pub fn dodecahedron() -> MultiGraph {
    let mut pairs = Vec::new();
    for i in 0..5u32 {
        pairs.push((i, (i + 1) % 5));
        pairs.push((i, 5 + 2 * i));
        pairs.push((5 + 2 * i + 1, 15 + i));
        pairs.push((15 + i, 15 + (i + 1) % 5));
    }
    for j in 0..10u32 {
        pairs.push((5 + j, 5 + (j + 1) % 10));
    }
    MultiGraph::from_pairs(20, &pairs)
}

pub fn petersen() -> MultiGraph {
    let mut pairs = Vec::new();
    for i in 0..5u32 {
        pairs.push((i, (i + 1) % 5));
        pairs.push((i, i + 5));
        pairs.push((5 + i, 5 + (i + 2) % 5));
    }
    MultiGraph::from_pairs(10, &pairs)
}

/// Flower snark J_n (n odd gives a snark): centres `a_i` with leaves
/// `b_i, c_i, d_i`, the cycle on the `b_i`, and the 2n-cycle
/// `c_0 .. c_{n-1} d_0 .. d_{n-1} c_0`.
pub fn flower_snark(n: u32) -> MultiGraph {
    let (a, b, c, d) = (|i: u32| i, |i: u32| n + i, |i: u32| 2 * n + i, |i: u32| 3 * n + i);
    let mut pairs = Vec::new();
    for i in 0..n {
        pairs.push((a(i), b(i)));
        pairs.push((a(i), c(i)));
        pairs.push((a(i), d(i)));
        pairs.push((b(i), b((i + 1) % n)));
    }
    for i in 0..n - 1 {
        pairs.push((c(i), c(i + 1)));
        pairs.push((d(i), d(i + 1)));
    }
    pairs.push((c(n - 1), d(0)));
    pairs.push((d(n - 1), c(0)));
    MultiGraph::from_pairs(4 * n, &pairs)
}

/// Dot product of two Petersen graphs. The first copy loses the adjacent
/// vertices 0 and 1; the second copy loses two independent edges, which are
/// joined by an edge (`distance_one`) or not. The two choices give the two
/// 18-vertex snarks.
fn petersen_dot(distance_one: bool) -> MultiGraph {
    // first copy: vertices 0..10; delete 0 and 1.
    // neighbours of 0 besides 1: 4, 5; of 1 besides 0: 2, 6.
    let p = petersen();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let keep = |v: u32| v >= 2;
    let relabel = |v: u32| v - 2; // 2..10 -> 0..8
    for (_, u, v) in p.edges() {
        if keep(u.0) && keep(v.0) {
            pairs.push((relabel(u.0), relabel(v.0)));
        }
    }
    // second copy: offset 8. Independent edges: 0-1 with 2-3 (joined by 1-2)
    // or 0-1 with 7-9 (no joining edge).
    let (x, y) = if distance_one { ((0, 1), (2, 3)) } else { ((0, 1), (7, 9)) };
    let removed: BTreeSet<(u32, u32)> = [x, y].into_iter().collect();
    for (_, u, v) in p.edges() {
        if !removed.contains(&(u.0, v.0)) {
            pairs.push((8 + u.0, 8 + v.0));
        }
    }
    let (a, b, c, d) = (relabel(4), relabel(5), relabel(2), relabel(6));
    pairs.push((a, 8 + x.0));
    pairs.push((b, 8 + x.1));
    pairs.push((c, 8 + y.0));
    pairs.push((d, 8 + y.1));
    MultiGraph::from_pairs(18, &pairs)
}

/// The Blanuša snark with 8 automorphisms.
pub fn blanusa_first() -> MultiGraph {
    petersen_dot(false)
}

/// The Blanuša snark with 4 automorphisms.
pub fn blanusa_second() -> MultiGraph {
    petersen_dot(true)
}

/// Random maximal planar graph: stacked insertions followed by random edge
/// flips.
pub fn random_maximal_planar<R: Rng>(n: u32, rng: &mut R) -> MultiGraph {
    assert!(n >= 3);
    let mut faces: Vec<[u32; 3]> = vec![[0, 1, 2], [0, 1, 2]];
    let mut adj: BTreeSet<(u32, u32)> = [(0, 1), (0, 2), (1, 2)].into_iter().collect();
    let key = |a: u32, b: u32| (a.min(b), a.max(b));
    for v in 3..n {
        let k = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(k);
        faces.push([a, b, v]);
        faces.push([b, c, v]);
        faces.push([a, c, v]);
        for w in [a, b, c] {
            adj.insert(key(v, w));
        }
    }
    for _ in 0..3 * n {
        let k = rng.gen_range(0..faces.len());
        let f = faces[k];
        let side = rng.gen_range(0..3);
        let (a, b, c) = (f[side], f[(side + 1) % 3], f[(side + 2) % 3]);
        let Some(k2) = (0..faces.len()).find(|&j| j != k && faces[j].contains(&a) && faces[j].contains(&b)) else {
            continue;
        };
        let d = *faces[k2].iter().find(|&&x| x != a && x != b).unwrap();
        if c == d || adj.contains(&key(c, d)) {
            continue;
        }
        adj.remove(&key(a, b));
        adj.insert(key(c, d));
        faces[k] = [c, d, a];
        faces[k2] = [c, d, b];
    }
    let pairs: Vec<(u32, u32)> = adj.into_iter().collect();
    MultiGraph::from_pairs(n, &pairs)
}

/// Random connected bridgeless planar graph: a maximal planar graph with
/// random edges removed as long as no bridge appears.
pub fn random_bridgeless_planar<R: Rng>(n: u32, rng: &mut R) -> MultiGraph {
    let mut g = random_maximal_planar(n, rng);
    let mut order: Vec<EdgeId> = g.edge_ids().collect();
    order.shuffle(rng);
    let budget = rng.gen_range(0..=order.len() / 2);
    let mut removed = 0;
    for e in order {
        if removed == budget {
            break;
        }
        let mut trial = g.clone();
        trial.remove_edge(e).unwrap();
        if bridges(&trial).is_empty() {
            g = trial;
            removed += 1;
        }
    }
    g
}

/// K5 or K3,3 with `extra` subdivision vertices spread over random edges,
/// vertex labels shuffled.
pub fn random_kuratowski_subdivision<R: Rng>(kind: KuratowskiKind, extra: u32, rng: &mut R) -> MultiGraph {
    let base = match kind {
        KuratowskiKind::K5 => complete(5),
        KuratowskiKind::K33 => complete_bipartite(3, 3),
    };
    let mut paths: Vec<Vec<u32>> = base.edges().map(|(_, u, v)| vec![u.0, v.0]).collect();
    let mut next = base.vertex_count() as u32;
    for _ in 0..extra {
        let p = rng.gen_range(0..paths.len());
        let pos = rng.gen_range(1..paths[p].len());
        paths[p].insert(pos, next);
        next += 1;
    }
    let mut labels: Vec<u32> = (0..next).collect();
    labels.shuffle(rng);
    let mut pairs = Vec::new();
    for p in &paths {
        for w in p.windows(2) {
            pairs.push((labels[w[0] as usize], labels[w[1] as usize]));
        }
    }
    pairs.shuffle(rng);
    MultiGraph::from_pairs(next, &pairs)
}

/// Random multigraph on `n` vertices with `m` edges, loops and parallels
/// allowed.
pub fn random_multigraph<R: Rng>(n: u32, m: usize, rng: &mut R) -> MultiGraph {
    let pairs: Vec<(u32, u32)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    MultiGraph::from_pairs(n, &pairs)
}

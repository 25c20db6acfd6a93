//! Certifying planarity.
//!
//! Every answer carries a certificate: a rotation system whose face count
//! satisfies Euler's formula, or a subdivision of K5 or K3,3 inside the
//! input. Embedding uses path addition (Demoucron–Malgrange–Pertuiset) on
//! the biconnected blocks of the underlying simple graph; parallel edges and
//! loops are inserted afterwards. Witnesses come from deletion-minimising a
//! non-planar subgraph, which always ends at a Kuratowski subdivision.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{Cover, CoverElement};
use crate::decompose::{bridges, connectivity_components};
use crate::graph::{induced_by_edges, underlying_simple, EdgeId, MultiGraph, VertexId, Walk};
use crate::walk::peel;

/// One direction of an edge. A forward dart leaves the smaller endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dart {
    pub edge: EdgeId,
    pub reversed: bool,
}

impl Dart {
    fn tail(self, g: &MultiGraph) -> Option<VertexId> {
        g.endpoints(self.edge).map(|(a, b)| if self.reversed { b } else { a })
    }

    fn head(self, g: &MultiGraph) -> Option<VertexId> {
        g.endpoints(self.edge).map(|(a, b)| if self.reversed { a } else { b })
    }

    fn rev(self) -> Dart {
        Dart {
            edge: self.edge,
            reversed: !self.reversed,
        }
    }
}

/// Cyclic order of outgoing darts at every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PlanarEmbedding {
    pub rotation: BTreeMap<VertexId, Vec<Dart>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

impl KuratowskiKind {
    pub fn branch_count(self) -> usize {
        match self {
            KuratowskiKind::K5 => 5,
            KuratowskiKind::K33 => 6,
        }
    }

    /// Pairs of branch labels (0-based) joined in the abstract graph. For
    /// K3,3 even labels form one side and odd labels the other.
    pub fn abstract_edges(self) -> Vec<(usize, usize)> {
        let n = self.branch_count();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self == KuratowskiKind::K5 || (i + j) % 2 == 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// A subdivision of K5 or K3,3 inside a graph. `branch_vertices[i]` plays
/// the role of the abstract vertex with label `i + 1`; `branch_paths` maps
/// each abstract edge `(i, j)`, `i < j`, to a path from branch `i` to branch
/// `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KuratowskiWitness {
    pub kind: KuratowskiKind,
    pub branch_vertices: Vec<VertexId>,
    #[serde(with = "pair_keyed")]
    pub branch_paths: BTreeMap<(usize, usize), Walk>,
}

/// JSON object keys must be strings, so the pair-keyed map travels as a
/// list of `[[i, j], walk]` entries.
mod pair_keyed {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::graph::Walk;

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, usize), Walk>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), Walk>, D::Error> {
        Ok(Vec::<((usize, usize), Walk)>::deserialize(d)?.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("subgraph is not simple")]
    NotSimple,
    #[error("degree pattern matches neither K5 nor K3,3")]
    DegreePattern,
    #[error("branch paths do not realise the abstract graph: {0}")]
    Structure(String),
}

impl KuratowskiWitness {
    /// Recognises a graph that is exactly a subdivision of K5 or K3,3
    /// (isolated vertices ignored) and labels its branch vertices.
    pub fn from_subdivision(h: &MultiGraph) -> Result<Self, WitnessError> {
        if !h.is_simple() {
            return Err(WitnessError::NotSimple);
        }
        let adj = h.adjacency();
        let degrees: BTreeMap<VertexId, usize> = adj.iter().map(|(&v, n)| (v, n.len())).collect();
        let branch: Vec<VertexId> = degrees.iter().filter(|(_, &d)| d >= 3).map(|(&v, _)| v).collect();
        if degrees.values().any(|&d| d == 1) {
            return Err(WitnessError::DegreePattern);
        }
        let kind = if branch.len() == 5 && branch.iter().all(|v| degrees[v] == 4) {
            KuratowskiKind::K5
        } else if branch.len() == 6 && branch.iter().all(|v| degrees[v] == 3) {
            KuratowskiKind::K33
        } else {
            return Err(WitnessError::DegreePattern);
        };
        let is_branch: BTreeSet<VertexId> = branch.iter().copied().collect();
        // trace every path leaving a branch vertex
        let mut paths: Vec<Walk> = Vec::new();
        let mut used = BTreeSet::new();
        for &b in &branch {
            for &(e, w) in &adj[&b] {
                if used.contains(&e) {
                    continue;
                }
                let mut walk = Walk {
                    vertices: vec![b, w],
                    edges: vec![e],
                };
                used.insert(e);
                let mut at = w;
                let mut via = e;
                while !is_branch.contains(&at) {
                    let &(next_e, next_v) = adj[&at]
                        .iter()
                        .find(|(x, _)| *x != via)
                        .ok_or_else(|| WitnessError::Structure("dead end".into()))?;
                    used.insert(next_e);
                    walk.vertices.push(next_v);
                    walk.edges.push(next_e);
                    via = next_e;
                    at = next_v;
                }
                paths.push(walk);
            }
        }
        if used.len() != h.edge_count() {
            return Err(WitnessError::Structure("edges outside the branch paths".into()));
        }
        let side_of: BTreeMap<VertexId, usize> = match kind {
            KuratowskiKind::K5 => branch.iter().map(|&v| (v, 0)).collect(),
            KuratowskiKind::K33 => {
                let first = branch[0];
                let mut sides = BTreeMap::from([(first, 0usize)]);
                for p in &paths {
                    if p.start() == first {
                        sides.insert(p.end(), 1);
                    } else if p.end() == first {
                        sides.insert(p.start(), 1);
                    }
                }
                for &v in &branch {
                    sides.entry(v).or_insert(0);
                }
                sides
            }
        };
        let labels: Vec<VertexId> = match kind {
            KuratowskiKind::K5 => branch.clone(),
            KuratowskiKind::K33 => {
                let a: Vec<VertexId> = branch.iter().copied().filter(|v| side_of[v] == 0).collect();
                let b: Vec<VertexId> = branch.iter().copied().filter(|v| side_of[v] == 1).collect();
                if a.len() != 3 || b.len() != 3 {
                    return Err(WitnessError::Structure("unbalanced bipartition".into()));
                }
                vec![a[0], b[0], a[1], b[1], a[2], b[2]]
            }
        };
        let label_of: BTreeMap<VertexId, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut branch_paths = BTreeMap::new();
        for p in paths {
            let (i, j) = (label_of[&p.start()], label_of[&p.end()]);
            let (key, walk) = if i < j { ((i, j), p) } else { ((j, i), p.reversed()) };
            if i == j || branch_paths.insert(key, walk).is_some() {
                return Err(WitnessError::Structure("repeated branch pair".into()));
            }
        }
        let expected: BTreeSet<(usize, usize)> = kind.abstract_edges().into_iter().collect();
        if branch_paths.keys().copied().collect::<BTreeSet<_>>() != expected {
            return Err(WitnessError::Structure("branch pairs differ from the abstract graph".into()));
        }
        Ok(KuratowskiWitness {
            kind,
            branch_vertices: labels,
            branch_paths,
        })
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.branch_paths.values().flat_map(|p| p.edges.iter().copied()).collect()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.branch_paths.values().flat_map(|p| p.vertices.iter().copied()).collect()
    }

    /// The witness as a subgraph of `g`.
    pub fn subgraph(&self, g: &MultiGraph) -> MultiGraph {
        induced_by_edges(g, &self.edge_set()).expect("witness edges belong to g")
    }

    /// Checks the witness against `g`: paths are walks of `g` joining the
    /// prescribed branch pairs, internally disjoint, with branch degrees 4
    /// (K5) or 3 (K3,3) and internal degrees 2 in the union.
    pub fn validate(&self, g: &MultiGraph) -> bool {
        let n = self.kind.branch_count();
        if self.branch_vertices.len() != n
            || self.branch_vertices.iter().collect::<BTreeSet<_>>().len() != n
        {
            return false;
        }
        let expected: BTreeSet<(usize, usize)> = self.kind.abstract_edges().into_iter().collect();
        if self.branch_paths.keys().copied().collect::<BTreeSet<_>>() != expected {
            return false;
        }
        let branch: BTreeSet<VertexId> = self.branch_vertices.iter().copied().collect();
        let mut interior_seen = BTreeSet::new();
        let mut edges_seen = BTreeSet::new();
        for (&(i, j), p) in &self.branch_paths {
            if !p.is_valid_in(g)
                || p.start() != self.branch_vertices[i]
                || p.end() != self.branch_vertices[j]
                || p.is_empty()
            {
                return false;
            }
            for &v in &p.vertices[1..p.vertices.len() - 1] {
                if branch.contains(&v) || !interior_seen.insert(v) {
                    return false;
                }
            }
            for &e in &p.edges {
                if !edges_seen.insert(e) {
                    return false;
                }
            }
        }
        let sub = self.subgraph(g);
        let want = if self.kind == KuratowskiKind::K5 { 4 } else { 3 };
        let ok = sub
            .vertices()
            .all(|v| sub.degree(v) == if branch.contains(&v) { want } else { 2 });
        ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Planarity {
    Planar(PlanarEmbedding),
    NonPlanar(KuratowskiWitness),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarityError {
    #[error("embedding inconsistent with graph: {0}")]
    InconsistentEmbedding(String),
    #[error("graph has bridges: {0:?}")]
    HasBridges(Vec<EdgeId>),
    #[error("graph is not planar")]
    NonPlanar(Box<KuratowskiWitness>),
}

pub fn test_planarity(g: &MultiGraph) -> Planarity {
    test_planarity_with_seed(g, 0)
}

/// `seed` permutes the vertex order used by the witness search; seed 0 keeps
/// ascending ids.
pub fn test_planarity_with_seed(g: &MultiGraph, seed: u64) -> Planarity {
    let (simple, _) = underlying_simple(g);
    match embed_simple(&simple) {
        Some(rotation) => Planarity::Planar(lift_rotation(g, &rotation)),
        None => Planarity::NonPlanar(find_witness(&simple, seed)),
    }
}

pub fn is_planar(g: &MultiGraph) -> bool {
    let (simple, _) = underlying_simple(g);
    embed_simple(&simple).is_some()
}

/// Vertex-neighbour rotation of a simple graph.
type SimpleRotation = BTreeMap<VertexId, Vec<VertexId>>;

fn embed_simple(g: &MultiGraph) -> Option<SimpleRotation> {
    let mut rotation: SimpleRotation = g.vertices().map(|v| (v, Vec::new())).collect();
    for block in biconnected_blocks(g) {
        let h = induced_by_edges(g, &block).unwrap();
        let local = if h.edge_count() == 1 {
            let (_, u, v) = h.edges().next().unwrap();
            BTreeMap::from([(u, vec![v]), (v, vec![u])])
        } else {
            embed_block(&h)?
        };
        for (v, order) in local {
            rotation.get_mut(&v).unwrap().extend(order);
        }
    }
    Some(rotation)
}

/// Edge sets of the biconnected blocks (a bridge forms its own block).
fn biconnected_blocks(g: &MultiGraph) -> Vec<BTreeSet<EdgeId>> {
    let adj = g.adjacency();
    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut blocks = Vec::new();
    let mut clock = 0;
    for root in g.vertices() {
        if disc.contains_key(&root) {
            continue;
        }
        disc.insert(root, clock);
        low.insert(root, clock);
        clock += 1;
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, via, idx) = *top;
            if let Some(&(e, w)) = adj[&v].get(idx) {
                top.2 += 1;
                if Some(e) == via {
                    continue;
                }
                match disc.get(&w) {
                    Some(&dw) => {
                        if dw < disc[&v] {
                            edge_stack.push(e);
                            let lv = low[&v].min(dw);
                            low.insert(v, lv);
                        }
                    }
                    None => {
                        edge_stack.push(e);
                        disc.insert(w, clock);
                        low.insert(w, clock);
                        clock += 1;
                        stack.push((w, Some(e), 0));
                    }
                }
            } else {
                stack.pop();
                if let (Some(e), Some(&(p, _, _))) = (via, stack.last()) {
                    let lv = low[&v];
                    let lp = low[&p].min(lv);
                    low.insert(p, lp);
                    if lv >= disc[&p] {
                        let mut block = BTreeSet::new();
                        while let Some(x) = edge_stack.pop() {
                            block.insert(x);
                            if x == e {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Path-addition embedding of a simple biconnected graph with at least
/// three vertices. Faces are kept as oriented vertex cycles so that every
/// directed edge lies on exactly one face.
fn embed_block(h: &MultiGraph) -> Option<SimpleRotation> {
    let adj: BTreeMap<VertexId, Vec<VertexId>> = h
        .adjacency()
        .into_iter()
        .map(|(v, n)| {
            let mut ws: Vec<VertexId> = n.into_iter().map(|(_, w)| w).collect();
            ws.sort();
            (v, ws)
        })
        .collect();
    let key = |a: VertexId, b: VertexId| (a.min(b), a.max(b));

    // initial cycle through the smallest edge
    let (_, a, b) = h.edges().next()?;
    let mut prev: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = BTreeSet::from([a]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[&x] {
            if (x == a && y == b) || !seen.insert(y) {
                continue;
            }
            prev.insert(y, x);
            queue.push_back(y);
        }
    }
    let mut cycle = vec![b];
    let mut at = b;
    while at != a {
        at = *prev.get(&at)?;
        cycle.push(at);
    }
    let mut faces: Vec<Vec<VertexId>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let mut placed_v: BTreeSet<VertexId> = cycle.iter().copied().collect();
    let mut placed_e: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for i in 0..cycle.len() {
        placed_e.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }

    while placed_e.len() < h.edge_count() {
        // fragments: (attachments, path endpoints source)
        let mut fragments: Vec<(BTreeSet<VertexId>, Option<BTreeSet<VertexId>>)> = Vec::new();
        for (_, u, v) in h.edges() {
            if placed_v.contains(&u) && placed_v.contains(&v) && !placed_e.contains(&key(u, v)) {
                fragments.push((BTreeSet::from([u, v]), None));
            }
        }
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        for v in h.vertices() {
            if placed_v.contains(&v) || !seen.insert(v) {
                continue;
            }
            let mut comp = BTreeSet::from([v]);
            let mut att = BTreeSet::new();
            let mut stack = vec![v];
            while let Some(x) = stack.pop() {
                for &y in &adj[&x] {
                    if placed_v.contains(&y) {
                        att.insert(y);
                    } else if seen.insert(y) {
                        comp.insert(y);
                        stack.push(y);
                    }
                }
            }
            fragments.push((att, Some(comp)));
        }
        let admissible: Vec<Vec<usize>> = fragments
            .iter()
            .map(|(att, _)| {
                faces
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| att.iter().all(|x| f.contains(x)))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        if admissible.iter().any(|a| a.is_empty()) {
            return None;
        }
        let pick = admissible.iter().position(|a| a.len() == 1).unwrap_or(0);
        let face_idx = admissible[pick][0];
        let (att, comp) = &fragments[pick];
        let mut it = att.iter();
        let (&s, &t) = (it.next()?, it.next()?);
        let path: Vec<VertexId> = match comp {
            None => vec![s, t],
            Some(comp) => {
                let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
                let mut queue: VecDeque<VertexId> = VecDeque::new();
                for &y in &adj[&s] {
                    if comp.contains(&y) && !parent.contains_key(&y) {
                        parent.insert(y, s);
                        queue.push_back(y);
                    }
                }
                let mut end = None;
                while let Some(x) = queue.pop_front() {
                    if adj[&x].contains(&t) {
                        end = Some(x);
                        break;
                    }
                    for &y in &adj[&x] {
                        if comp.contains(&y) && !parent.contains_key(&y) {
                            parent.insert(y, x);
                            queue.push_back(y);
                        }
                    }
                }
                let mut rev = vec![t];
                let mut at = end?;
                while at != s {
                    rev.push(at);
                    at = parent[&at];
                }
                rev.push(s);
                rev.reverse();
                rev
            }
        };
        for w in path.windows(2) {
            placed_e.insert(key(w[0], w[1]));
        }
        placed_v.extend(path.iter().copied());

        let face = faces.swap_remove(face_idx);
        let k = face.len();
        let i = face.iter().position(|&x| x == s)?;
        let j = face.iter().position(|&x| x == t)?;
        let interior = &path[1..path.len() - 1];
        // s .. t along the face, then back through the path
        let mut f1: Vec<VertexId> = Vec::new();
        let mut idx = i;
        loop {
            f1.push(face[idx]);
            if idx == j {
                break;
            }
            idx = (idx + 1) % k;
        }
        f1.extend(interior.iter().rev().copied());
        // t .. s along the face, then forward through the path
        let mut f2: Vec<VertexId> = Vec::new();
        let mut idx = j;
        loop {
            f2.push(face[idx]);
            if idx == i {
                break;
            }
            idx = (idx + 1) % k;
        }
        f2.extend(interior.iter().copied());
        faces.push(f1);
        faces.push(f2);
    }

    // σ_y(x) = z for consecutive x, y, z on a face
    let mut succ: BTreeMap<VertexId, BTreeMap<VertexId, VertexId>> = BTreeMap::new();
    for f in &faces {
        let k = f.len();
        for idx in 0..k {
            let (x, y, z) = (f[(idx + k - 1) % k], f[idx], f[(idx + 1) % k]);
            succ.entry(y).or_default().insert(x, z);
        }
    }
    let mut rotation = SimpleRotation::new();
    for (v, nbrs) in &adj {
        let s = &succ[v];
        let first = nbrs[0];
        let mut order = vec![first];
        let mut at = s[&first];
        while at != first {
            order.push(at);
            at = s[&at];
        }
        if order.len() != nbrs.len() {
            return None;
        }
        rotation.insert(*v, order);
    }
    Some(rotation)
}

/// Turns a simple rotation into a dart rotation of `g`, inserting parallel
/// copies next to their representative and loops as adjacent dart pairs.
fn lift_rotation(g: &MultiGraph, simple: &SimpleRotation) -> PlanarEmbedding {
    let mut classes: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
    let mut loops: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for (e, u, v) in g.edges() {
        if u == v {
            loops.entry(u).or_default().push(e);
        } else {
            classes.entry((u, v)).or_default().push(e);
        }
    }
    let mut rotation = BTreeMap::new();
    for v in g.vertices() {
        let mut darts = Vec::new();
        for &w in simple.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            let lower = v < w;
            let class = &classes[&(v.min(w), v.max(w))];
            let reversed = !lower;
            if lower {
                darts.extend(class.iter().map(|&edge| Dart { edge, reversed }));
            } else {
                darts.extend(class.iter().rev().map(|&edge| Dart { edge, reversed }));
            }
        }
        for &edge in loops.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            darts.push(Dart { edge, reversed: false });
            darts.push(Dart { edge, reversed: true });
        }
        rotation.insert(v, darts);
    }
    PlanarEmbedding { rotation }
}

/// Face boundaries of an embedding as closed walks; every edge appears
/// twice over all faces. Isolated vertices contribute no walk.
pub fn faces(g: &MultiGraph, emb: &PlanarEmbedding) -> Result<Vec<Walk>, PlanarityError> {
    let bad = |msg: String| PlanarityError::InconsistentEmbedding(msg);
    let mut position: BTreeMap<Dart, (VertexId, usize)> = BTreeMap::new();
    for (&v, darts) in &emb.rotation {
        if !g.contains_vertex(v) {
            return Err(bad(format!("unknown vertex {v}")));
        }
        for (i, &d) in darts.iter().enumerate() {
            if d.tail(g) != Some(v) {
                return Err(bad(format!("dart of {} not leaving {v}", d.edge)));
            }
            if position.insert(d, (v, i)).is_some() {
                return Err(bad(format!("dart of {} listed twice", d.edge)));
            }
        }
    }
    if position.len() != 2 * g.edge_count() {
        return Err(bad("rotation does not list every dart".into()));
    }
    let next = |d: Dart| -> Dart {
        let r = d.rev();
        let (v, i) = position[&r];
        let ring = &emb.rotation[&v];
        ring[(i + 1) % ring.len()]
    };
    let mut visited = BTreeSet::new();
    let mut out = Vec::new();
    for &start in position.keys() {
        if visited.contains(&start) {
            continue;
        }
        let mut walk = Walk::trivial(start.tail(g).unwrap());
        let mut d = start;
        loop {
            visited.insert(d);
            walk.edges.push(d.edge);
            walk.vertices.push(d.head(g).unwrap());
            d = next(d);
            if d == start {
                break;
            }
        }
        out.push(walk);
    }
    Ok(out)
}

/// Euler's formula `V − E + F = 2` on every connectivity component.
pub fn euler_holds(g: &MultiGraph, face_walks: &[Walk]) -> bool {
    connectivity_components(g).iter().all(|comp| {
        let e = g.edges().filter(|(_, u, _)| comp.contains(u)).count() as i64;
        let f = face_walks.iter().filter(|w| comp.contains(&w.start())).count() as i64;
        let f = if e == 0 { 1 } else { f };
        comp.len() as i64 - e + f == 2
    })
}

/// Cycle double cover of a bridgeless planar graph from its face
/// boundaries. A boundary through a cut vertex is a closed trail and is
/// peeled into cycles.
pub fn planar_cdc(g: &MultiGraph) -> Result<Cover, PlanarityError> {
    let b = bridges(g);
    if !b.is_empty() {
        return Err(PlanarityError::HasBridges(b.into_iter().collect()));
    }
    let emb = match test_planarity(g) {
        Planarity::Planar(emb) => emb,
        Planarity::NonPlanar(w) => return Err(PlanarityError::NonPlanar(Box::new(w))),
    };
    let walks = faces(g, &emb)?;
    let mut elements = Vec::new();
    for w in walks {
        let (cycles, _) = peel(&w);
        elements.extend(cycles.into_iter().map(CoverElement::cycle));
    }
    Ok(Cover { elements })
}

/// Deletion-minimises a non-planar simple graph in several deterministic
/// orders and keeps the witness with the fewest vertices, ties broken by the
/// sorted rank sequence of its vertices.
fn find_witness(simple: &MultiGraph, seed: u64) -> KuratowskiWitness {
    let mut order: Vec<VertexId> = simple.vertices().collect();
    if seed != 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let rank: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // a non-planar block suffices
    let start = biconnected_blocks(simple)
        .into_iter()
        .map(|b| induced_by_edges(simple, &b).unwrap())
        .find(|h| embed_simple(h).is_none())
        .expect("a non-planar graph has a non-planar block");

    let by_rank_desc: Vec<VertexId> = {
        let mut v: Vec<VertexId> = start.vertices().collect();
        v.sort_by_key(|x| std::cmp::Reverse(rank[x]));
        v
    };
    let by_rank_asc: Vec<VertexId> = by_rank_desc.iter().rev().copied().collect();
    let edge_key = |g: &MultiGraph, e: EdgeId| {
        let (u, v) = g.endpoints(e).unwrap();
        let (a, b) = (rank[&u].min(rank[&v]), rank[&u].max(rank[&v]));
        (a, b, e)
    };
    let mut edges_desc: Vec<EdgeId> = start.edge_ids().collect();
    edges_desc.sort_by_key(|&e| std::cmp::Reverse(edge_key(&start, e)));
    let edges_asc: Vec<EdgeId> = edges_desc.iter().rev().copied().collect();

    let plans: [(&[VertexId], &[EdgeId]); 3] = [
        (&by_rank_desc, &edges_desc),
        (&by_rank_asc, &edges_asc),
        (&[], &edges_desc),
    ];
    let mut best: Option<(usize, Vec<usize>, KuratowskiWitness)> = None;
    for (vs, es) in plans {
        let h = minimise(&start, vs, es);
        let w = KuratowskiWitness::from_subdivision(&h)
            .expect("an edge-minimal non-planar graph is a Kuratowski subdivision");
        let mut ranks: Vec<usize> = w.vertex_set().iter().map(|v| rank[v]).collect();
        ranks.sort();
        let key = (ranks.len(), ranks);
        if best.as_ref().is_none_or(|(n, r, _)| key < (*n, r.clone())) {
            best = Some((key.0, key.1, w));
        }
    }
    best.unwrap().2
}

fn minimise(g: &MultiGraph, vertex_order: &[VertexId], edge_order: &[EdgeId]) -> MultiGraph {
    let mut h = g.clone();
    for &v in vertex_order {
        let mut trial = h.clone();
        trial.remove_vertex(v).unwrap();
        if embed_simple(&trial).is_none() {
            h = trial;
        }
    }
    for &e in edge_order {
        if !h.contains_edge(e) {
            continue;
        }
        let mut trial = h.clone();
        trial.remove_edge(e).unwrap();
        if embed_simple(&trial).is_none() {
            h = trial;
        }
    }
    let isolated: Vec<VertexId> = h.vertices().filter(|&v| h.degree(v) == 0).collect();
    for v in isolated {
        h.remove_vertex(v).unwrap();
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::verify_cdc;
    use crate::generators;

    fn embedding(g: &MultiGraph) -> PlanarEmbedding {
        match test_planarity(g) {
            Planarity::Planar(e) => e,
            Planarity::NonPlanar(_) => panic!("expected planar"),
        }
    }

    fn witness(g: &MultiGraph) -> KuratowskiWitness {
        match test_planarity(g) {
            Planarity::NonPlanar(w) => w,
            Planarity::Planar(_) => panic!("expected non-planar"),
        }
    }

    #[test]
    fn k4_is_planar_with_four_faces() {
        let g = generators::complete(4);
        let f = faces(&g, &embedding(&g)).unwrap();
        assert_eq!(f.len(), 4);
        assert!(euler_holds(&g, &f));
    }

    #[test]
    fn cube_has_six_quadrilaterals() {
        let g = generators::cube();
        let f = faces(&g, &embedding(&g)).unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|w| w.len() == 4));
    }

    #[test]
    fn c5_has_two_faces() {
        let g = generators::cycle(5);
        let f = faces(&g, &embedding(&g)).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|w| w.len() == 5));
    }

    #[test]
    fn k5_is_its_own_witness() {
        let g = generators::complete(5);
        let w = witness(&g);
        assert_eq!(w.kind, KuratowskiKind::K5);
        assert!(w.branch_paths.values().all(|p| p.len() == 1));
        assert!(w.validate(&g));
    }

    #[test]
    fn petersen_yields_k33() {
        let g = generators::petersen();
        let w = witness(&g);
        assert_eq!(w.kind, KuratowskiKind::K33);
        assert!(w.validate(&g));
        assert_eq!(w.vertex_set().len(), 9);
    }

    #[test]
    fn witness_is_deterministic() {
        let g = generators::petersen();
        assert_eq!(witness(&g), witness(&g));
    }

    #[test]
    fn multigraph_embedding_lifts() {
        // triangle with a doubled side and a loop
        let g = MultiGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0), (0, 1), (2, 2)]);
        let f = faces(&g, &embedding(&g)).unwrap();
        assert!(euler_holds(&g, &f));
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn bowtie_faces_need_peeling() {
        let g = MultiGraph::from_pairs(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        let f = faces(&g, &embedding(&g)).unwrap();
        assert!(euler_holds(&g, &f));
        let cover = planar_cdc(&g).unwrap();
        assert!(verify_cdc(&g, &cover).ok);
    }

    #[test]
    fn planar_cdc_examples() {
        let c5 = generators::cycle(5);
        let cover = planar_cdc(&c5).unwrap();
        assert_eq!(cover.elements.len(), 2);
        assert!(verify_cdc(&c5, &cover).ok);

        let k4 = generators::complete(4);
        let cover = planar_cdc(&k4).unwrap();
        assert_eq!(cover.elements.len(), 4);
        assert!(cover.elements.iter().all(|c| c.walk.len() == 3));
        assert!(verify_cdc(&k4, &cover).ok);

        let d = generators::dodecahedron();
        let cover = planar_cdc(&d).unwrap();
        assert_eq!(cover.elements.len(), 12);
        assert!(cover.elements.iter().all(|c| c.walk.len() == 5));
        assert!(verify_cdc(&d, &cover).ok);
    }

    #[test]
    fn planar_cdc_errors() {
        let path = MultiGraph::from_pairs(3, &[(0, 1), (1, 2)]);
        assert!(matches!(planar_cdc(&path), Err(PlanarityError::HasBridges(_))));
        assert!(matches!(planar_cdc(&generators::complete(5)), Err(PlanarityError::NonPlanar(_))));
    }

    #[test]
    fn rejects_inconsistent_embedding() {
        let g = generators::complete(4);
        let mut emb = embedding(&g);
        emb.rotation.get_mut(&VertexId(0)).unwrap().pop();
        assert!(faces(&g, &emb).is_err());
    }
}

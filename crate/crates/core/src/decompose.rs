//! Bridges, bridgeless components, the component tree and the surrounding
//! condition on free edge sets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{induced_by_vertices, EdgeId, FreeEdgeSet, MultiGraph, VertexId};

/// Maximal connected vertex sets, ordered by their smallest vertex.
pub fn connectivity_components(g: &MultiGraph) -> Vec<BTreeSet<VertexId>> {
    components_avoiding(g, &BTreeSet::new())
}

fn components_avoiding(g: &MultiGraph, skip: &BTreeSet<EdgeId>) -> Vec<BTreeSet<VertexId>> {
    let adj = g.adjacency();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in g.vertices() {
        if !seen.insert(v) {
            continue;
        }
        let mut comp = BTreeSet::from([v]);
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &(e, y) in &adj[&x] {
                if !skip.contains(&e) && seen.insert(y) {
                    comp.insert(y);
                    stack.push(y);
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Cut edges, found with one low-link DFS pass. The tree edge into a vertex
/// is skipped by id only, so a parallel copy still counts as a back edge.
pub fn bridges(g: &MultiGraph) -> BTreeSet<EdgeId> {
    let adj = g.adjacency();
    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut out = BTreeSet::new();
    let mut clock = 0;
    for root in g.vertices() {
        if disc.contains_key(&root) {
            continue;
        }
        disc.insert(root, clock);
        low.insert(root, clock);
        clock += 1;
        // (vertex, edge used to enter it, next adjacency index)
        let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, via, idx) = *top;
            if let Some(&(e, w)) = adj[&v].get(idx) {
                top.2 += 1;
                if Some(e) == via {
                    continue;
                }
                if let Some(&dw) = disc.get(&w) {
                    let lv = low[&v].min(dw);
                    low.insert(v, lv);
                } else {
                    disc.insert(w, clock);
                    low.insert(w, clock);
                    clock += 1;
                    stack.push((w, Some(e), 0));
                }
            } else {
                stack.pop();
                if let (Some(e), Some(&(p, _, _))) = (via, stack.last()) {
                    let lv = low[&v];
                    let lp = low[&p].min(lv);
                    low.insert(p, lp);
                    if lv > disc[&p] {
                        out.insert(e);
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgelessDecomposition {
    pub components: Vec<BTreeSet<VertexId>>,
    pub bridges: BTreeSet<EdgeId>,
    pub component_of: BTreeMap<VertexId, usize>,
}

pub fn bridgeless_decomposition(g: &MultiGraph) -> BridgelessDecomposition {
    let bridges = bridges(g);
    let components = components_avoiding(g, &bridges);
    let component_of = components
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.iter().map(move |&v| (v, i)))
        .collect();
    BridgelessDecomposition {
        components,
        bridges,
        component_of,
    }
}

/// Contraction of each bridgeless component; a forest whose edges are the
/// bridges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentTree {
    pub nodes: usize,
    pub tree_edges: BTreeMap<EdgeId, (usize, usize)>,
}

impl ComponentTree {
    pub fn degree(&self, node: usize) -> usize {
        self.tree_edges
            .values()
            .map(|&(a, b)| usize::from(a == node) + usize::from(b == node))
            .sum()
    }

    /// Per connected piece of the forest, edges = nodes − 1 and no cycle.
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.nodes).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in self.tree_edges.values() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Number of trees in the forest.
    pub fn tree_count(&self) -> usize {
        self.nodes - self.tree_edges.len()
    }
}

pub fn component_tree(g: &MultiGraph, d: &BridgelessDecomposition) -> ComponentTree {
    let tree_edges = d
        .bridges
        .iter()
        .map(|&e| {
            let (u, v) = g.endpoints(e).expect("bridge belongs to g");
            (e, (d.component_of[&u], d.component_of[&v]))
        })
        .collect();
    ComponentTree {
        nodes: d.components.len(),
        tree_edges,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Terminal,
    Isolated,
    Internal,
}

pub fn classify(t: &ComponentTree) -> Vec<ComponentKind> {
    (0..t.nodes)
        .map(|i| match t.degree(i) {
            0 => ComponentKind::Isolated,
            1 => ComponentKind::Terminal,
            _ => ComponentKind::Internal,
        })
        .collect()
}

/// How contact between a free edge set and an isolated component is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurroundingRule {
    /// Number of free edges whose inner vertex lies in the component.
    #[default]
    FreeEdges,
    /// Number of distinct inner vertices lying in the component.
    Vertices,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurroundingViolation {
    pub component: BTreeSet<VertexId>,
    pub kind: ComponentKind,
    /// Contact count under the rule in force.
    pub contact: usize,
}

/// Returns the first bridgeless component breaking the surrounding
/// condition: a terminal one with no contact, or an isolated one with
/// exactly one contact.
pub fn surrounding_violation(
    g: &MultiGraph,
    f: &FreeEdgeSet,
    rule: SurroundingRule,
) -> Option<SurroundingViolation> {
    let d = bridgeless_decomposition(g);
    let t = component_tree(g, &d);
    for (i, kind) in classify(&t).into_iter().enumerate() {
        let comp = &d.components[i];
        let contact = match rule {
            SurroundingRule::FreeEdges => f.iter().filter(|x| comp.contains(&x.inner)).count(),
            SurroundingRule::Vertices => f.inner_vertices().intersection(comp).count(),
        };
        let bad = match kind {
            ComponentKind::Terminal => contact == 0,
            ComponentKind::Isolated => contact == 1,
            ComponentKind::Internal => false,
        };
        if bad {
            return Some(SurroundingViolation {
                component: comp.clone(),
                kind,
                contact,
            });
        }
    }
    None
}

pub fn is_surrounding(g: &MultiGraph, f: &FreeEdgeSet) -> bool {
    surrounding_violation(g, f, SurroundingRule::default()).is_none()
}

/// `[G]_F`: the connectivity components that meet the free edges.
pub fn restrict_to_touched(g: &MultiGraph, f: &FreeEdgeSet) -> MultiGraph {
    let inner = f.inner_vertices();
    let keep: BTreeSet<VertexId> = connectivity_components(g)
        .into_iter()
        .filter(|c| !c.is_disjoint(&inner))
        .flatten()
        .collect();
    induced_by_vertices(g, &keep).expect("components are vertex subsets of g")
}

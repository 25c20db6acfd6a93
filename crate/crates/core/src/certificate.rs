//! Failure certificates: which claimed property broke, where, and a witness
//! that can be checked again without trusting the code that produced it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cover::{decompose_walk, splice_cut_edge, verify_ncdc, Cover};
use crate::decompose::{connectivity_components, ComponentKind, SurroundingRule, SurroundingViolation};
use crate::graph::{CutOff, EdgeId, FreeEdgeSet, MultiGraph, VertexId};
use crate::planarity::KuratowskiWitness;

/// Stable tags naming the property whose failure is certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Claim {
    /// the free edges handed to the next step are surrounding
    #[serde(rename = "P5.3")]
    Surrounding,
    /// every cone in the peeling loop is bridgeless
    #[serde(rename = "P5.4")]
    Bridgeless,
    /// the major with its chords admits a cover with the attached free edges
    #[serde(rename = "P5.6")]
    MajorCover,
    /// covers of the two sides recombine into a cover of the cone
    #[serde(rename = "P5.7")]
    Recombine,
    /// the major is simple
    #[serde(rename = "P4.2-simple")]
    SimpleMajor,
    /// a constructed cover passes the verifier
    #[serde(rename = "verify")]
    Verify,
    /// the cycle-extension free edges are surrounding
    #[serde(rename = "T6.4")]
    ExtensionSurrounding,
    /// pasting paths around the prescribed cycles yields cycles
    #[serde(rename = "T6.4-paste")]
    ExtensionPaste,
}

impl Claim {
    pub fn tag(self) -> &'static str {
        match self {
            Claim::Surrounding => "P5.3",
            Claim::Bridgeless => "P5.4",
            Claim::MajorCover => "P5.6",
            Claim::Recombine => "P5.7",
            Claim::SimpleMajor => "P4.2-simple",
            Claim::Verify => "verify",
            Claim::ExtensionSurrounding => "T6.4",
            Claim::ExtensionPaste => "T6.4-paste",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// `edge` is a bridge of `graph`.
    Bridge { graph: MultiGraph, edge: EdgeId },
    /// `violation.component` is a bridgeless component of `graph` that breaks
    /// the surrounding condition for `free` under `rule`.
    Surrounding {
        graph: MultiGraph,
        free: FreeEdgeSet,
        rule: SurroundingRule,
        violation: SurroundingViolation,
    },
    /// Exactly one free edge and no chords to cut off.
    SingleFreeEdge { free: FreeEdgeSet, chords: Vec<EdgeId> },
    /// The edges leaving the major differ from the cut edges.
    Attachment {
        graph: MultiGraph,
        major: BTreeSet<VertexId>,
        cut: BTreeSet<EdgeId>,
    },
    /// The major is not a simple graph.
    NonSimpleMajor { major: MultiGraph },
    /// The major is not a subdivision of K5 or K3,3.
    NotSubdivision { major: MultiGraph, witness: KuratowskiWitness },
    /// `cover` fails the verifier on `graph` with `free`.
    Unverified { graph: MultiGraph, free: FreeEdgeSet, cover: Cover },
    /// Neither pairing splices `cut` back into `cover`.
    Splice { cover: Cover, cut: CutOff },
    /// A pasted walk of `graph` that does not break into cycles (closed) or
    /// cycles plus one path between distinct free edges (open).
    Walk { graph: MultiGraph, walk: crate::graph::Walk },
}

/// Compact view of one pipeline step for certificates and traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSummary {
    pub index: usize,
    pub graph_vertices: Vec<VertexId>,
    pub graph_edges: Vec<EdgeId>,
    pub free: Vec<EdgeId>,
    pub free_major: Vec<EdgeId>,
    pub free_rest: Vec<EdgeId>,
    pub cone_vertices: usize,
    pub cone_edges: usize,
    pub apex: Option<VertexId>,
    pub major: Option<MajorSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorSummary {
    pub kind: crate::planarity::KuratowskiKind,
    pub branch_vertices: Vec<VertexId>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCertificate {
    pub step: usize,
    pub claim: Claim,
    pub detail: String,
    pub witness: Witness,
    pub partial_trace: Vec<StepSummary>,
}

impl FailureCertificate {
    /// Re-establishes the witness with predicates independent of the
    /// construction: deletion-and-recount for bridges, brute-force component
    /// analysis for the surrounding condition, the verifier for covers.
    pub fn recheck(&self) -> bool {
        match &self.witness {
            Witness::Bridge { graph, edge } => is_bridge_by_deletion(graph, *edge),
            Witness::Surrounding {
                graph,
                free,
                rule,
                violation,
            } => brute_surrounding_violations(graph, free, *rule)
                .iter()
                .any(|(comp, kind)| comp == &violation.component && *kind == violation.kind),
            Witness::SingleFreeEdge { free, chords } => free.len() == 1 && chords.is_empty(),
            Witness::Attachment { graph, major, cut } => {
                let leaving: BTreeSet<EdgeId> = graph
                    .edges()
                    .filter(|(_, u, v)| major.contains(u) != major.contains(v))
                    .map(|(e, _, _)| e)
                    .collect();
                &leaving != cut
            }
            Witness::NonSimpleMajor { major } => !major.is_simple(),
            Witness::NotSubdivision { major, witness } => !witness.validate(major),
            Witness::Unverified { graph, free, cover } => !verify_ncdc(graph, free, cover).ok,
            Witness::Splice { cover, cut } => splice_cut_edge(cover, cut).is_err(),
            Witness::Walk { graph, walk } => walk.is_valid_in(graph) && decompose_walk(walk).is_err(),
        }
    }
}

pub fn is_bridge_by_deletion(g: &MultiGraph, e: EdgeId) -> bool {
    if !g.contains_edge(e) || g.is_loop(e) {
        return false;
    }
    let mut h = g.clone();
    h.remove_edge(e).unwrap();
    connectivity_components(&h).len() > connectivity_components(g).len()
}

/// Every bridgeless component violating the surrounding condition, found
/// by deleting each edge to detect bridges and counting bridge ends per
/// component.
pub fn brute_surrounding_violations(
    g: &MultiGraph,
    f: &FreeEdgeSet,
    rule: SurroundingRule,
) -> Vec<(BTreeSet<VertexId>, ComponentKind)> {
    let bridges: BTreeSet<EdgeId> = g.edge_ids().filter(|&e| is_bridge_by_deletion(g, e)).collect();
    let mut rest = g.clone();
    for &b in &bridges {
        rest.remove_edge(b).unwrap();
    }
    let mut out = Vec::new();
    for comp in connectivity_components(&rest) {
        let ends: usize = bridges
            .iter()
            .map(|&b| {
                let (u, v) = g.endpoints(b).unwrap();
                usize::from(comp.contains(&u)) + usize::from(comp.contains(&v))
            })
            .sum();
        let contact = match rule {
            SurroundingRule::FreeEdges => f.iter().filter(|x| comp.contains(&x.inner)).count(),
            SurroundingRule::Vertices => f.inner_vertices().intersection(&comp).count(),
        };
        match ends {
            0 if contact == 1 => out.push((comp, ComponentKind::Isolated)),
            1 if contact == 0 => out.push((comp, ComponentKind::Terminal)),
            _ => {}
        }
    }
    out
}

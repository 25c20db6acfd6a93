//! The peeling loop and backward reconstruction.
//!
//! Starting from `C_1 = cone(G, F)`, a Kuratowski subdivision `K_i` is
//! removed from each non-planar `C_i`; the edges between `K_i` and the rest
//! are cut off, and the rest is coned over its new pendants to give
//! `C_{i+1}`. Once a cone is planar its faces cover it, and covers are
//! carried back one step at a time: invert the cone, cover the major with
//! its chords and pendants, and splice the cut edges back in.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Claim, FailureCertificate, MajorSummary, StepSummary, Witness};
use crate::cover::{loop_cover, splice_all, verify_cdc, verify_ncdc, Cover, CoverElement, ElementKind};
use crate::cover::rotate_closed;
use crate::decompose::{bridges, surrounding_violation, SurroundingRule, SurroundingViolation};
use crate::graph::{
    cone, cut_off, edges_between, induced_by_vertices, remove_vertices, CutOff, EdgeId, FreeEdgeSet, GraphError,
    MultiGraph, QuotientMap, VertexId,
};
use crate::kuratowski::{attachment_sets, ncdc_major_with_chords, KuratowskiError};
use crate::planarity::{planar_cdc, test_planarity_with_seed, KuratowskiWitness, Planarity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PipelineOptions {
    /// Permutes the vertex order used when searching for Kuratowski
    /// subdivisions; 0 keeps ascending ids.
    pub seed: u64,
    pub rule: SurroundingRule,
}

/// One round of the peeling loop. For `index == 1` the whole input free set
/// is coned and `free_major` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineStep {
    pub index: usize,
    /// `G_i`
    pub graph: MultiGraph,
    /// `F_i`, pendants on both sides of the previous cut
    pub free: FreeEdgeSet,
    /// `F_i^1`, pendants on the previous major
    pub free_major: FreeEdgeSet,
    /// `F_i^2`, pendants on `G_i`
    pub free_rest: FreeEdgeSet,
    /// `C_i = cone(G_i, F_i^2)`
    pub cone: MultiGraph,
    pub cone_map: QuotientMap,
    pub apex: Option<VertexId>,
    /// `K_i`, absent on the final planar step
    pub major: Option<KuratowskiWitness>,
    /// the cut-offs that produced `F_i`
    pub cuts: Vec<CutOff>,
}

impl PipelineStep {
    pub fn summary(&self) -> StepSummary {
        let ids = |f: &FreeEdgeSet| f.ids().collect::<Vec<_>>();
        StepSummary {
            index: self.index,
            graph_vertices: self.graph.vertices().collect(),
            graph_edges: self.graph.edge_ids().collect(),
            free: ids(&self.free),
            free_major: ids(&self.free_major),
            free_rest: ids(&self.free_rest),
            cone_vertices: self.cone.vertex_count(),
            cone_edges: self.cone.edge_count(),
            apex: self.apex,
            major: self.major.as_ref().map(|w| MajorSummary {
                kind: w.kind,
                branch_vertices: w.branch_vertices.clone(),
                vertices: w.vertex_set().into_iter().collect(),
                edges: w.edge_set().into_iter().collect(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub steps: Vec<PipelineStep>,
}

impl PipelineTrace {
    /// Index of the final, planar cone.
    pub fn mu(&self) -> usize {
        self.steps.len()
    }

    /// `mu ≤ ⌈|V(C_1)| / 5⌉ + 1`.
    pub fn within_bound(&self) -> bool {
        let n = self.steps.first().map_or(0, |s| s.cone.vertex_count());
        self.mu() <= n.div_ceil(5) + 1
    }

    pub fn summaries(&self) -> Vec<StepSummary> {
        self.steps.iter().map(PipelineStep::summary).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("graph has bridges: {0:?}")]
    Bridges(Vec<EdgeId>),
    #[error("free edge set is not surrounding: component {:?} ({:?}) has contact {}", .0.component, .0.kind, .0.contact)]
    NotSurrounding(SurroundingViolation),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("certificate at step {}: {} ({})", .0.step, .0.claim.tag(), .0.detail)]
    Certificate(Box<FailureCertificate>),
}

impl From<GraphError> for PipelineError {
    fn from(e: GraphError) -> Self {
        PipelineError::Input(e.to_string())
    }
}

/// A verified cover together with the trace that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub cover: Cover,
    pub trace: PipelineTrace,
}

fn certificate(
    steps: &[PipelineStep],
    step: usize,
    claim: Claim,
    detail: impl Into<String>,
    witness: Witness,
) -> PipelineError {
    PipelineError::Certificate(Box::new(FailureCertificate {
        step,
        claim,
        detail: detail.into(),
        witness,
        partial_trace: steps.iter().map(PipelineStep::summary).collect(),
    }))
}

/// Runs the peeling loop on `(g, f)`; `g` must be loop-free and `f`
/// surrounding.
pub fn peel(g: &MultiGraph, f: &FreeEdgeSet, opts: PipelineOptions) -> Result<PipelineTrace, PipelineError> {
    f.validate(g)?;
    if g.has_loops() {
        return Err(PipelineError::Input("loops must be removed before peeling".into()));
    }
    if let Some(v) = surrounding_violation(g, f, opts.rule) {
        return Err(PipelineError::NotSurrounding(v));
    }
    let mut steps: Vec<PipelineStep> = Vec::new();
    let mut graph = g.clone();
    let mut free = f.clone();
    let mut free_major = FreeEdgeSet::new();
    let mut free_rest = f.clone();
    let mut cuts: Vec<CutOff> = Vec::new();
    loop {
        let index = steps.len() + 1;
        if index > 1 {
            if let Some(v) = surrounding_violation(&graph, &free_rest, opts.rule) {
                let detail = format!("component {:?} is {:?} with contact {}", v.component, v.kind, v.contact);
                return Err(certificate(
                    &steps,
                    index,
                    Claim::Surrounding,
                    detail,
                    Witness::Surrounding {
                        graph: graph.clone(),
                        free: free_rest.clone(),
                        rule: opts.rule,
                        violation: v,
                    },
                ));
            }
        }
        let (cone_graph, cone_map) = cone(&graph, &free_rest)?;
        let apex = free_rest.iter().map(|x| x.outer).min();
        if let Some(&edge) = bridges(&cone_graph).iter().next() {
            return Err(certificate(
                &steps,
                index,
                Claim::Bridgeless,
                format!("cone has bridge {edge}"),
                Witness::Bridge {
                    graph: cone_graph,
                    edge,
                },
            ));
        }
        let major = match test_planarity_with_seed(&cone_graph, opts.seed) {
            Planarity::Planar(_) => None,
            Planarity::NonPlanar(w) => Some(w),
        };
        let mut step = PipelineStep {
            index,
            graph,
            free,
            free_major,
            free_rest,
            cone: cone_graph,
            cone_map,
            apex,
            major,
            cuts,
        };
        let Some(witness) = step.major.clone() else {
            steps.push(step);
            return Ok(PipelineTrace { steps });
        };
        let major_vertices = witness.vertex_set();
        let next_graph_full = remove_vertices(&step.cone, &major_vertices);
        let rest_vertices: BTreeSet<VertexId> = next_graph_full.vertices().collect();
        let crossing = edges_between(&step.cone, &rest_vertices, &major_vertices);
        let mut working = step.cone.clone();
        let mut next_cuts = Vec::new();
        let mut next_free = FreeEdgeSet::new();
        let mut next_major = FreeEdgeSet::new();
        let mut next_rest = FreeEdgeSet::new();
        for &e in &crossing {
            let c = cut_off(&working, e)?;
            working = c.graph.clone();
            for p in [c.near, c.far] {
                next_free.insert(p);
                if rest_vertices.contains(&p.inner) {
                    next_rest.insert(p);
                } else {
                    next_major.insert(p);
                }
            }
            next_cuts.push(c);
        }
        graph = induced_by_vertices(&working, &rest_vertices)?;
        free = next_free;
        free_major = next_major;
        free_rest = next_rest;
        cuts = next_cuts;
        // keep the graph's counters ahead of every pendant id
        let (v, e) = free.max_ids();
        graph.reserve_past(v, e);
        step.cone.reserve_past(v, e);
        steps.push(step);
    }
}

/// Turns a cover of `cone(G, F)` into `ncdc(G; F)`: every cycle through the
/// apex becomes a path whose ends are the outer vertices of its two apex
/// edges.
pub fn invert_cone(cover: &Cover, apex: Option<VertexId>, free: &FreeEdgeSet) -> Cover {
    let Some(apex) = apex else {
        return cover.clone();
    };
    let mut out = Cover::new();
    for el in &cover.elements {
        let n = el.walk.edges.len();
        let at = el.walk.vertices[..n.max(1)].iter().position(|&v| v == apex);
        match (el.kind, at) {
            (ElementKind::Cycle, Some(k)) if n > 0 => {
                let mut w = rotate_closed(&el.walk, k);
                let first = free.get(w.edges[0]).map(|x| x.outer);
                let last = free.get(w.edges[n - 1]).map(|x| x.outer);
                if let (Some(a), Some(b)) = (first, last) {
                    w.vertices[0] = a;
                    w.vertices[n] = b;
                }
                out.elements.push(CoverElement::path(w));
            }
            _ => out.elements.push(el.clone()),
        }
    }
    out
}

/// Carries the planar base cover back to a verified cover of `C_1`.
pub fn reconstruct(trace: &PipelineTrace) -> Result<Cover, PipelineError> {
    let steps = &trace.steps;
    let last = steps.last().ok_or_else(|| PipelineError::Input("empty trace".into()))?;
    let mut cover = match planar_cdc(&last.cone) {
        Ok(c) => c,
        Err(err) => return Err(PipelineError::Input(format!("planar base case failed: {err}"))),
    };
    if !verify_cdc(&last.cone, &cover).ok {
        return Err(certificate(
            steps,
            last.index,
            Claim::Verify,
            "face cover of the planar cone",
            Witness::Unverified {
                graph: last.cone.clone(),
                free: FreeEdgeSet::new(),
                cover,
            },
        ));
    }
    for i in (0..steps.len() - 1).rev() {
        let (step, next) = (&steps[i], &steps[i + 1]);
        let witness = step.major.as_ref().expect("non-final steps carry a major");
        let rest_cover = invert_cone(&cover, next.apex, &next.free_rest);
        if !verify_ncdc(&next.graph, &next.free_rest, &rest_cover).ok {
            return Err(certificate(
                steps,
                next.index,
                Claim::Verify,
                "cone inversion",
                Witness::Unverified {
                    graph: next.graph.clone(),
                    free: next.free_rest.clone(),
                    cover: rest_cover,
                },
            ));
        }
        let major = witness.subgraph(&step.cone);
        let (leaving, chord_ids) = attachment_sets(&step.cone, &major);
        let cut_ids: BTreeSet<EdgeId> = next.cuts.iter().map(|c| c.original).collect();
        if leaving != cut_ids {
            return Err(certificate(
                steps,
                step.index,
                Claim::MajorCover,
                "edges leaving the major differ from the cut edges",
                Witness::Attachment {
                    graph: step.cone.clone(),
                    major: major.vertices().collect(),
                    cut: cut_ids,
                },
            ));
        }
        let chords: Vec<(EdgeId, VertexId, VertexId)> = chord_ids
            .iter()
            .map(|&e| {
                let (u, v) = step.cone.endpoints(e).unwrap();
                (e, u, v)
            })
            .collect();
        let mut major_host = major.clone();
        major_host.inherit_counters(&step.cone);
        let major_cover = match ncdc_major_with_chords(&major_host, &chords, &next.free_major) {
            Ok(c) => c,
            Err(err) => return Err(major_failure(steps, step.index, &major_host, &chords, next, witness, err)),
        };
        let mut combined = rest_cover;
        combined.extend(major_cover);
        let combined = match splice_all(&combined, &next.cuts) {
            Ok(c) => c,
            Err(failure) => {
                return Err(certificate(
                    steps,
                    step.index,
                    Claim::Recombine,
                    format!("splicing cut edge {}: {}", failure.cut.original, failure.error),
                    Witness::Splice {
                        cover: failure.cover,
                        cut: failure.cut,
                    },
                ))
            }
        };
        if !verify_cdc(&step.cone, &combined).ok {
            return Err(certificate(
                steps,
                step.index,
                Claim::Verify,
                "recombined cover of the cone",
                Witness::Unverified {
                    graph: step.cone.clone(),
                    free: FreeEdgeSet::new(),
                    cover: combined,
                },
            ));
        }
        cover = combined;
    }
    Ok(cover)
}

fn major_failure(
    steps: &[PipelineStep],
    index: usize,
    major: &MultiGraph,
    chords: &[(EdgeId, VertexId, VertexId)],
    next: &PipelineStep,
    witness: &KuratowskiWitness,
    err: KuratowskiError,
) -> PipelineError {
    let detail = err.to_string();
    match err {
        KuratowskiError::SingleFreeEdge => certificate(
            steps,
            index,
            Claim::MajorCover,
            detail,
            Witness::SingleFreeEdge {
                free: next.free_major.clone(),
                chords: chords.iter().map(|c| c.0).collect(),
            },
        ),
        KuratowskiError::NotSimple => certificate(
            steps,
            index,
            Claim::SimpleMajor,
            detail,
            Witness::NonSimpleMajor { major: major.clone() },
        ),
        KuratowskiError::Verify { cover, .. } => {
            let mut host = major.clone();
            for &(e, u, v) in chords {
                let _ = host.insert_edge(e, u, v);
            }
            certificate(
                steps,
                index,
                Claim::Verify,
                detail,
                Witness::Unverified {
                    graph: host,
                    free: next.free_major.clone(),
                    cover: *cover,
                },
            )
        }
        KuratowskiError::ChordSplice { cover, cut, .. } => certificate(
            steps,
            index,
            Claim::MajorCover,
            detail,
            Witness::Splice {
                cover: *cover,
                cut: *cut,
            },
        ),
        _ => certificate(
            steps,
            index,
            Claim::MajorCover,
            detail,
            Witness::NotSubdivision {
                major: major.clone(),
                witness: witness.clone(),
            },
        ),
    }
}

/// `ncdc(G; F)` for a surrounding free edge set. Loops are set aside and
/// each is added back as a cycle used twice.
pub fn ncdc_general(g: &MultiGraph, f: &FreeEdgeSet, opts: PipelineOptions) -> Result<Outcome, PipelineError> {
    f.validate(g)?;
    let loops: Vec<EdgeId> = g.edges().filter(|(_, u, v)| u == v).map(|(e, _, _)| e).collect();
    let mut loopless = g.clone();
    for &l in &loops {
        loopless.remove_edge(l)?;
    }
    let trace = peel(&loopless, f, opts)?;
    let cone_cover = reconstruct(&trace)?;
    let mut cover = invert_cone(&cone_cover, trace.steps[0].apex, f);
    cover.extend(loop_cover(g, &loops));
    if !verify_ncdc(g, f, &cover).ok {
        return Err(certificate(
            &trace.steps,
            1,
            Claim::Verify,
            "final cone inversion",
            Witness::Unverified {
                graph: g.clone(),
                free: f.clone(),
                cover,
            },
        ));
    }
    Ok(Outcome { cover, trace })
}

/// Cycle double cover of a bridgeless graph.
pub fn cdc(g: &MultiGraph, opts: PipelineOptions) -> Result<Outcome, PipelineError> {
    let b = bridges(g);
    if !b.is_empty() {
        return Err(PipelineError::Bridges(b.into_iter().collect()));
    }
    let out = ncdc_general(g, &FreeEdgeSet::new(), opts)?;
    debug_assert!(verify_cdc(g, &out.cover).ok);
    Ok(out)
}

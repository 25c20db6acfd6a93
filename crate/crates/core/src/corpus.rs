//! Batch runs over a directory of graphs with a deterministic summary.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::verify_cdc;
use crate::io::{parse_edgelist, parse_graph6_file, LabeledGraph, ParseError};
use crate::pipeline::{cdc, PipelineError, PipelineOptions};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("no graphs found in {0}")]
    Empty(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Verified,
    Certificate,
    Bridges,
    Error,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Verified => "verified",
            Outcome::Certificate => "certificate",
            Outcome::Bridges => "bridges",
            Outcome::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub graph: String,
    pub vertices: usize,
    pub edges: usize,
    /// Number of peeling steps when the loop reached a planar cone.
    pub mu: Option<usize>,
    /// Whether `mu` respects the step bound; `None` when `mu` is.
    pub within_bound: Option<bool>,
    pub outcome: Outcome,
    /// Failing claim tag for certificates.
    pub claim: Option<String>,
    /// Whether the certificate's witness re-checks.
    pub rechecked: Option<bool>,
    pub detail: String,
}

fn graph_files(dir: &Path) -> Result<Vec<std::path::PathBuf>, CorpusError> {
    let io = |source| CorpusError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(io)?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    files.retain(|p| p.is_file() && graph_format(p).is_some());
    files.sort();
    Ok(files)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Edgelist,
    Graph6,
}

/// Format implied by a file extension.
pub fn graph_format(path: &Path) -> Option<Format> {
    match path.extension()?.to_str()? {
        "g6" | "graph6" => Some(Format::Graph6),
        "edgelist" | "el" | "txt" => Some(Format::Edgelist),
        _ => None,
    }
}

/// Every graph in `dir`, named by file stem; graph6 files holding several
/// graphs name them `stem#k` from 1.
pub fn load_dir(dir: &Path) -> Result<Vec<(String, LabeledGraph)>, CorpusError> {
    let mut out = Vec::new();
    for path in graph_files(dir)? {
        let text = fs::read_to_string(&path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let parse = |source| CorpusError::Parse {
            path: path.display().to_string(),
            source,
        };
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph").to_string();
        match graph_format(&path) {
            Some(Format::Graph6) => {
                let graphs = parse_graph6_file(&text).map_err(parse)?;
                let many = graphs.len() > 1;
                for (k, g) in graphs.into_iter().enumerate() {
                    let name = if many { format!("{stem}#{}", k + 1) } else { stem.clone() };
                    out.push((name, LabeledGraph::numbered(g)));
                }
            }
            _ => out.push((stem, parse_edgelist(&text).map_err(parse)?)),
        }
    }
    if out.is_empty() {
        return Err(CorpusError::Empty(dir.display().to_string()));
    }
    Ok(out)
}

/// Runs `cdc` on one graph and summarises the result.
pub fn run_one(name: &str, g: &LabeledGraph, opts: PipelineOptions) -> CorpusRow {
    let mut row = CorpusRow {
        graph: name.to_string(),
        vertices: g.graph.vertex_count(),
        edges: g.graph.edge_count(),
        mu: None,
        within_bound: None,
        outcome: Outcome::Error,
        claim: None,
        rechecked: None,
        detail: String::new(),
    };
    match cdc(&g.graph, opts) {
        Ok(out) => {
            let ok = verify_cdc(&g.graph, &out.cover).ok;
            row.mu = Some(out.trace.mu());
            row.within_bound = Some(out.trace.within_bound());
            row.outcome = if ok { Outcome::Verified } else { Outcome::Error };
            row.detail = format!("{} elements", out.cover.len());
        }
        Err(PipelineError::Certificate(c)) => {
            if c.partial_trace.last().is_some_and(|s| s.major.is_none()) {
                let mu = c.partial_trace.len();
                let first = c.partial_trace[0].cone_vertices;
                row.mu = Some(mu);
                row.within_bound = Some(mu <= first.div_ceil(5) + 1);
            }
            row.outcome = Outcome::Certificate;
            row.claim = Some(c.claim.tag().to_string());
            row.rechecked = Some(c.recheck());
            row.detail = format!("step {}: {}", c.step, c.detail);
        }
        Err(PipelineError::Bridges(b)) => {
            row.outcome = Outcome::Bridges;
            row.detail = format!("{} bridges", b.len());
        }
        Err(e) => row.detail = e.to_string(),
    }
    row
}

/// Runs every graph on a pool of `jobs` threads (0 = rayon default); rows
/// come back sorted by graph name.
pub fn run_corpus(
    items: &[(String, LabeledGraph)],
    opts: PipelineOptions,
    jobs: usize,
) -> Result<Vec<CorpusRow>, CorpusError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CorpusError::Pool(e.to_string()))?;
    let mut rows: Vec<CorpusRow> = pool.install(|| items.par_iter().map(|(n, g)| run_one(n, g, opts)).collect());
    rows.sort_by(|a, b| a.graph.cmp(&b.graph));
    Ok(rows)
}

/// Tab-separated table with a header line.
pub fn summary_table(rows: &[CorpusRow]) -> String {
    let dash = || "-".to_string();
    let mut out = String::from("graph\tvertices\tedges\tmu\toutcome\tclaim\trechecked\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.graph,
            r.vertices,
            r.edges,
            r.mu.map_or_else(dash, |m| m.to_string()),
            r.outcome.as_str(),
            r.claim.clone().unwrap_or_else(dash),
            r.rechecked.map_or_else(dash, |b| b.to_string()),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn items() -> Vec<(String, LabeledGraph)> {
        [
            ("k4", generators::complete(4)),
            ("petersen", generators::petersen()),
            ("cube", generators::cube()),
            ("path", crate::graph::MultiGraph::from_pairs(3, &[(0, 1), (1, 2)])),
        ]
        .into_iter()
        .map(|(n, g)| (n.to_string(), LabeledGraph::numbered(g)))
        .collect()
    }

    #[test]
    fn rows_are_sorted_and_stable_across_thread_counts() {
        let one = run_corpus(&items(), PipelineOptions::default(), 1).unwrap();
        let four = run_corpus(&items(), PipelineOptions::default(), 4).unwrap();
        assert_eq!(one, four);
        let names: Vec<&str> = one.iter().map(|r| r.graph.as_str()).collect();
        assert_eq!(names, ["cube", "k4", "path", "petersen"]);
        assert_eq!(one[2].outcome, Outcome::Bridges);
        assert_eq!(summary_table(&one), summary_table(&four));
    }

    #[test]
    fn directory_loading() {
        let dir = std::env::temp_dir().join(format!("cdc-corpus-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("two.g6"), "C~\nC~\n").unwrap();
        fs::write(dir.join("tri.edgelist"), "a b\nb c\nc a\n").unwrap();
        fs::write(dir.join("notes.md"), "ignored").unwrap();
        let loaded = load_dir(&dir).unwrap();
        let names: Vec<&str> = loaded.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["tri", "two#1", "two#2"]);
        fs::remove_dir_all(&dir).unwrap();
    }
}

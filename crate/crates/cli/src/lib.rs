//! Command-line front end. `run` takes the argument list and the three
//! standard streams so tests can drive it in-process.
//!
//! Exit codes: 0 verified, 1 usage or input error, 2 failure certificate.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use cdc_core::corpus::{self, Outcome};
use cdc_core::cover::{verify_cdc, verify_ncdc, VerificationReport};
use cdc_core::decompose::SurroundingRule;
use cdc_core::goddyn::goddyn_cover;
use cdc_core::graph::FreeEdgeSet;
use cdc_core::io::{self as gio, CoverDoc, LabeledGraph};
use cdc_core::pipeline::{cdc, ncdc_general, PipelineError, PipelineOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CERTIFICATE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cdc", version, about = "Constructive cycle double covers with verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Edgelist,
    Graph6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    FreeEdges,
    Vertices,
}

#[derive(Debug, Args)]
struct Common {
    /// Input graph format; by default inferred from the extension
    /// (.g6/.graph6 for graph6, anything else edge list).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the machine-readable document here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Varies the vertex order used to find Kuratowski subdivisions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How contact with free edges is counted in the surrounding check.
    #[arg(long, value_enum, default_value_t = RuleArg::FreeEdges)]
    surrounding_rule: RuleArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cycle double cover of a bridgeless graph.
    Cdc {
        /// Graph file, or '-' for standard input.
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Naive cover with free edges.
    Ncdc {
        input: PathBuf,
        /// Lines of `vertex outerLabel`.
        #[arg(long)]
        free_edges: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check a cover document against a graph.
    Verify {
        input: PathBuf,
        cover: PathBuf,
        /// Free edges the cover was built for, if any.
        #[arg(long)]
        free_edges: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Cycle double cover containing the given edge-disjoint cycles.
    Goddyn {
        input: PathBuf,
        /// One cycle per line as a vertex sequence.
        cycles: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run `cdc` on every graph in a directory and print a summary table.
    Corpus {
        dir: PathBuf,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        common: Common,
    },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

/// Usage or input failure, reported on standard error with exit code 1.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CmdResult = Result<i32, InputError>;

pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let mut io = Io { stdin, stdout, stderr };
    let result = match &cli.command {
        Command::Cdc { input, common } => cmd_cdc(&mut io, input, common),
        Command::Ncdc {
            input,
            free_edges,
            common,
        } => cmd_ncdc(&mut io, input, free_edges, common),
        Command::Verify {
            input,
            cover,
            free_edges,
            common,
        } => cmd_verify(&mut io, input, cover, free_edges.as_deref(), common),
        Command::Goddyn { input, cycles, common } => cmd_goddyn(&mut io, input, cycles, common),
        Command::Corpus { dir, jobs, common } => cmd_corpus(&mut io, dir, *jobs, common),
    };
    match result {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn options(common: &Common) -> PipelineOptions {
    PipelineOptions {
        seed: common.seed,
        rule: match common.surrounding_rule {
            RuleArg::FreeEdges => SurroundingRule::FreeEdges,
            RuleArg::Vertices => SurroundingRule::Vertices,
        },
    }
}

fn read_text(io: &mut Io, path: &Path) -> Result<String, InputError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io.stdin.read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }
}

fn read_graph(io: &mut Io, path: &Path, common: &Common) -> Result<LabeledGraph, InputError> {
    let text = read_text(io, path)?;
    let graph6 = match common.format {
        Some(f) => f == FormatArg::Graph6,
        None => corpus::graph_format(path) == Some(corpus::Format::Graph6),
    };
    if graph6 {
        let mut graphs = gio::parse_graph6_file(&text)?;
        if graphs.len() != 1 {
            return Err(InputError(format!("expected one graph6 graph, found {}", graphs.len())));
        }
        Ok(LabeledGraph::numbered(graphs.remove(0)))
    } else {
        Ok(gio::parse_edgelist(&text)?)
    }
}

fn emit(io: &mut Io, common: &Common, doc: &str) -> Result<(), InputError> {
    match &common.output {
        Some(path) => fs::write(path, format!("{doc}\n")).map_err(|e| InputError(format!("{}: {e}", path.display()))),
        None => writeln!(io.stdout, "{doc}").map_err(InputError::from),
    }
}

fn emit_json<T: serde::Serialize>(io: &mut Io, common: &Common, value: &T) -> Result<(), InputError> {
    let doc = serde_json::to_string_pretty(value)?;
    emit(io, common, &doc)
}

fn pipeline_failure(io: &mut Io, common: &Common, g: &LabeledGraph, err: PipelineError) -> CmdResult {
    match err {
        PipelineError::Certificate(c) => {
            let _ = writeln!(
                io.stderr,
                "certificate: claim {} failed at step {} ({}); witness re-checks: {}",
                c.claim.tag(),
                c.step,
                c.detail,
                c.recheck()
            );
            emit_json(io, common, &*c)?;
            Ok(EXIT_CERTIFICATE)
        }
        PipelineError::Bridges(b) => {
            let names: Vec<String> = b
                .iter()
                .map(|&e| {
                    let (u, v) = g.graph.endpoints(e).unwrap();
                    format!("{} ({} {})", e.0, g.label(u), g.label(v))
                })
                .collect();
            Err(InputError(format!("graph has bridges: {}", names.join(", "))))
        }
        other => Err(InputError(other.to_string())),
    }
}

fn cmd_cdc(io: &mut Io, input: &Path, common: &Common) -> CmdResult {
    let g = read_graph(io, input, common)?;
    match cdc(&g.graph, options(common)) {
        Ok(out) => {
            let report = verify_cdc(&g.graph, &out.cover);
            if !report.ok {
                return Err(InputError("internal: cover failed verification".into()));
            }
            let _ = writeln!(
                io.stderr,
                "verified: {} elements, {} peeling steps",
                out.cover.len(),
                out.trace.mu()
            );
            emit_json(io, common, &CoverDoc::from_cover(&out.cover, &g))?;
            Ok(EXIT_OK)
        }
        Err(e) => pipeline_failure(io, common, &g, e),
    }
}

fn cmd_ncdc(io: &mut Io, input: &Path, free_path: &Path, common: &Common) -> CmdResult {
    let mut g = read_graph(io, input, common)?;
    let text = read_text(io, free_path)?;
    let f = gio::parse_free_edges(&text, &mut g)?;
    match ncdc_general(&g.graph, &f, options(common)) {
        Ok(out) => {
            if !verify_ncdc(&g.graph, &f, &out.cover).ok {
                return Err(InputError("internal: cover failed verification".into()));
            }
            let _ = writeln!(io.stderr, "verified: {} elements", out.cover.len());
            emit_json(io, common, &CoverDoc::from_cover(&out.cover, &g))?;
            Ok(EXIT_OK)
        }
        Err(PipelineError::NotSurrounding(v)) => Err(InputError(format!(
            "free edges are not surrounding: a {:?} component with contact {}",
            v.kind, v.contact
        ))),
        Err(e) => pipeline_failure(io, common, &g, e),
    }
}

fn cmd_verify(io: &mut Io, input: &Path, cover_path: &Path, free: Option<&Path>, common: &Common) -> CmdResult {
    let mut g = read_graph(io, input, common)?;
    let f = match free {
        Some(p) => {
            let text = read_text(io, p)?;
            gio::parse_free_edges(&text, &mut g)?
        }
        None => FreeEdgeSet::new(),
    };
    let text = read_text(io, cover_path)?;
    let cover = gio::parse_cover(&text, &g, &f)?;
    let report: VerificationReport = verify_ncdc(&g.graph, &f, &cover);
    emit_json(io, common, &report)?;
    if report.ok {
        let _ = writeln!(io.stderr, "ok: every edge covered twice");
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(io.stderr, "not a valid cover: {} violations", report.violations.len());
        Ok(EXIT_INPUT)
    }
}

fn cmd_goddyn(io: &mut Io, input: &Path, cycles_path: &Path, common: &Common) -> CmdResult {
    let g = read_graph(io, input, common)?;
    let text = read_text(io, cycles_path)?;
    let cycles = gio::parse_cycles(&text, &g)?;
    match goddyn_cover(&g.graph, &cycles, options(common)) {
        Ok(out) => {
            let contained = cycles
                .iter()
                .all(|c| out.cover.contains_cycle(&c.edges.iter().copied().collect()));
            if !verify_cdc(&g.graph, &out.cover).ok || !contained {
                return Err(InputError("internal: cover failed verification".into()));
            }
            let _ = writeln!(
                io.stderr,
                "verified: {} elements containing all {} given cycles",
                out.cover.len(),
                cycles.len()
            );
            emit_json(io, common, &CoverDoc::from_cover(&out.cover, &g))?;
            Ok(EXIT_OK)
        }
        Err(e) => pipeline_failure(io, common, &g, e),
    }
}

fn cmd_corpus(io: &mut Io, dir: &Path, jobs: usize, common: &Common) -> CmdResult {
    let items = corpus::load_dir(dir)?;
    let rows = corpus::run_corpus(&items, options(common), jobs)?;
    for r in &rows {
        let _ = writeln!(io.stderr, "{}: {} {}", r.graph, r.outcome.as_str(), r.detail);
    }
    emit(io, common, corpus::summary_table(&rows).trim_end())?;
    let code = if rows.iter().any(|r| r.outcome == Outcome::Certificate) {
        EXIT_CERTIFICATE
    } else if rows.iter().all(|r| r.outcome == Outcome::Verified) {
        EXIT_OK
    } else {
        EXIT_INPUT
    };
    Ok(code)
}

use std::fs;
use std::path::{Path, PathBuf};

use cdc_cli::{run, EXIT_CERTIFICATE, EXIT_INPUT, EXIT_OK};
use tempfile::TempDir;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cdc(args: &[&str], stdin: &str) -> Output {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cdc").chain(args.iter().copied());
    let code = run(argv, &mut input, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn repo_corpus(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(sub)
}

const K4: &str = "a b\na c\na d\nb c\nb d\nc d\n";
const C5: &str = "1 2\n2 3\n3 4\n4 5\n5 1\n";

#[test]
fn cdc_on_k4_prints_a_cover_that_verifies() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.edgelist", K4);
    let out = cdc(&["cdc", &g], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(!doc["elements"].as_array().unwrap().is_empty());
    let cover = write(&dir, "cover.json", &out.stdout);
    assert_eq!(cdc(&["verify", &g, &cover], "").code, EXIT_OK);
}

#[test]
fn graph_from_stdin_and_output_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("out.json");
    let out = cdc(&["cdc", "-", "-o", target.to_str().unwrap()], K4);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(target).unwrap().contains("\"elements\""));
}

#[test]
fn bridges_are_an_input_error() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "path.edgelist", "x y\ny z\n");
    let out = cdc(&["cdc", &g], "");
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("bridges"), "{}", out.stderr);
    assert!(out.stderr.contains("(x y)"));
}

#[test]
fn verify_accepts_the_doubled_pentagon() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c5.edgelist", C5);
    let element = r#"{"kind":"cycle","edges":[0,1,2,3,4]}"#;
    let cover = write(&dir, "cover.json", &format!(r#"{{"elements":[{element},{element}]}}"#));
    let out = cdc(&["verify", &g, &cover], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report["ok"], true);
}

#[test]
fn verify_rejects_three_triangles_of_k4() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.edgelist", K4);
    // Triangles abc, abd, acd leave bcd's edges covered once.
    let cover = write(
        &dir,
        "cover.json",
        r#"{"elements":[{"kind":"cycle","edges":[0,3,1]},{"kind":"cycle","edges":[0,4,2]},{"kind":"cycle","edges":[1,5,2]}]}"#,
    );
    let out = cdc(&["verify", &g, &cover], "");
    assert_ne!(out.code, EXIT_OK);
    let report: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report["ok"], false);
}

#[test]
fn malformed_cover_document() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c5.edgelist", C5);
    let cover = write(&dir, "cover.json", "{ not json");
    assert_eq!(cdc(&["verify", &g, &cover], "").code, EXIT_INPUT);
    let unknown = write(&dir, "unknown.json", r#"{"elements":[{"kind":"cycle","edges":[0,1,99]}]}"#);
    assert_eq!(cdc(&["verify", &g, &unknown], "").code, EXIT_INPUT);
}

#[test]
fn goddyn_keeps_the_given_cycle() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.edgelist", K4);
    let cycles = write(&dir, "cycles.txt", "a b c\n");
    let out = cdc(&["goddyn", &g, &cycles], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let has_triangle = doc["elements"].as_array().unwrap().iter().any(|el| {
        let mut e: Vec<u64> = el["edges"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
        e.sort();
        e == [0, 1, 3]
    });
    assert!(has_triangle, "{}", out.stdout);

    let c5 = write(&dir, "c5.edgelist", C5);
    let whole = write(&dir, "whole.txt", "1 2 3 4 5 1\n");
    assert_eq!(cdc(&["goddyn", &c5, &whole], "").code, EXIT_OK);
}

#[test]
fn goddyn_rejects_overlapping_cycles() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.edgelist", K4);
    let cycles = write(&dir, "cycles.txt", "a b c\na b d\n");
    let out = cdc(&["goddyn", &g, &cycles], "");
    assert_eq!(out.code, EXIT_INPUT, "{}", out.stderr);
}

#[test]
fn ncdc_with_free_edges() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.edgelist", K4);
    let free = write(&dir, "free.txt", "a x\nb y\n");
    let out = cdc(&["ncdc", &g, "--free-edges", &free], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let cover = write(&dir, "cover.json", &out.stdout);
    let check = cdc(&["verify", &g, &cover, "--free-edges", &free], "");
    assert_eq!(check.code, EXIT_OK, "{}", check.stderr);
}

#[test]
fn graph6_input() {
    let out = cdc(&["cdc", repo_corpus("snarks/petersen.g6").to_str().unwrap()], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let forced = cdc(&["cdc", "-", "--format", "graph6"], "IheA@GUAo\n");
    assert_eq!(forced.stdout, out.stdout);
}

#[test]
fn corpus_over_the_planar_directory() {
    let out = cdc(&["corpus", repo_corpus("planar").to_str().unwrap(), "--jobs", "2"], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "graph\tvertices\tedges\tmu\toutcome\tclaim\trechecked");
    assert_eq!(lines.len(), 7);
    assert!(lines[1..].iter().all(|l| l.contains("\tverified\t")));
}

#[test]
fn corpus_with_nothing_to_read() {
    let dir = TempDir::new().unwrap();
    write(&dir, "readme.md", "nothing here");
    assert_eq!(cdc(&["corpus", dir.path().to_str().unwrap()], "").code, EXIT_INPUT);
}

#[test]
fn corpus_reports_bridges_without_a_certificate() {
    let dir = TempDir::new().unwrap();
    write(&dir, "k4.edgelist", K4);
    write(&dir, "path.edgelist", "x y\ny z\n");
    let out = cdc(&["corpus", dir.path().to_str().unwrap()], "");
    assert_eq!(out.code, EXIT_INPUT);
    assert_ne!(out.code, EXIT_CERTIFICATE);
    assert!(out.stdout.contains("path\t3\t2\t-\tbridges"));
}

#[test]
fn output_is_deterministic() {
    let g = repo_corpus("snarks/blanusa-1.g6");
    let a = cdc(&["cdc", g.to_str().unwrap(), "--seed", "5"], "");
    let b = cdc(&["cdc", g.to_str().unwrap(), "--seed", "5"], "");
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors() {
    assert_eq!(cdc(&["cdc"], "").code, EXIT_INPUT);
    assert_eq!(cdc(&["frobnicate"], "").code, EXIT_INPUT);
    assert_eq!(cdc(&["cdc", "/no/such/file.edgelist"], "").code, EXIT_INPUT);
    assert_eq!(cdc(&["--help"], "").code, EXIT_OK);
}

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matchcount"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("matchcount-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_gadget(kind: &str, k: &str, name: &str) -> String {
    let p = scratch(name);
    let text = stdout(&["gadget", kind, "--k", k]);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gadget_round_trips_through_every_count_mode() {
    let b3 = write_gadget("boxes", "3", "b3.txt");
    for mode in ["brute", "ryser", "recursive", "fpt"] {
        let out = stdout(&["count", "--input", &b3, "--mode", mode]);
        assert!(out.contains("\"value\":8"), "{mode}: {out}");
    }
    let h1 = write_gadget("torpid", "1", "h1.txt");
    let out = stdout(&["count", "--input", &h1, "--mode", "recursive", "--pivot", "first", "--backend", "ryser"]);
    assert!(out.contains("\"value\":2"), "{out}");
}

#[test]
fn holes_table_has_pair_rows_and_a_perfect_row() {
    let b2 = write_gadget("boxes", "2", "b2.txt");
    let out = stdout(&["holes-table", "--input", &b2]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "u,v,count");
    assert!(lines.contains(&"v0,v3,1"), "{out}");
    assert_eq!(*lines.last().unwrap(), "perfect,4");
}

#[test]
fn output_flag_writes_a_file() {
    let p = scratch("c4-table.csv");
    let c4 = scratch("c4.txt");
    fs::write(&c4, "p 4 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    stdout(&["holes-table", "--input", c4.to_str().unwrap(), "--output", p.to_str().unwrap()]);
    let text = fs::read_to_string(p).unwrap();
    assert!(text.ends_with("perfect,2\n"), "{text}");
}

#[test]
fn decompose_reports_partition_and_orders() {
    let path = scratch("star.txt");
    // star with three leaves: A = centre, D = the leaves
    fs::write(&path, "p 4 3\n0 1\n0 2\n0 3\n").unwrap();
    let out = stdout(&["decompose", "--input", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(
        out,
        "class,component,size,fc_order,vertices\nD,0,1,0,1\nD,1,1,0,2\nD,2,1,0,3\nA,,1,,0\nC,,0,,\n"
    );
}

#[test]
fn fc_order_rejects_non_factor_critical_input() {
    let path = scratch("k2.txt");
    fs::write(&path, "p 2 1\n0 1\n").unwrap();
    let out = run(&["fc-order", "--input", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("factor-critical"));
}

#[test]
fn reduction_blossoms_match_paths() {
    let graph = scratch("red.txt");
    let matching = scratch("red-m.txt");
    let digraph = scratch("h.txt");
    // two s-t paths: 0-1-3 and 0-2-3
    fs::write(&digraph, "d 4 4\n0 1\n1 3\n0 2\n2 3\n").unwrap();
    let text = stdout(&[
        "gadget",
        "reduction",
        "--k",
        "0",
        "--digraph",
        digraph.to_str().unwrap(),
        "--matching-output",
        matching.to_str().unwrap(),
    ]);
    fs::write(&graph, text).unwrap();
    let out = stdout(&[
        "blossoms",
        "--input",
        graph.to_str().unwrap(),
        "--hole",
        "w",
        "--matching",
        matching.to_str().unwrap(),
    ]);
    assert_eq!(out.lines().count(), 3, "{out}");
    let min = stdout(&[
        "blossoms",
        "--input",
        graph.to_str().unwrap(),
        "--hole",
        "w",
        "--matching",
        matching.to_str().unwrap(),
        "--min",
    ]);
    assert_eq!(min.lines().count(), 2);
    assert!(min.lines().nth(1).unwrap().starts_with("0,7,"));
}

#[test]
fn chain_run_is_reproducible_and_needs_a_seed() {
    let b2 = write_gadget("boxes", "2", "b2-run.txt");
    let args = ["chain", "run", "--input", &b2, "--steps", "500", "--seed", "11", "--weights", "broder"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert_eq!(a.lines().count(), 11);
    let out = run(&["chain", "run", "--input", &b2, "--steps", "5"]);
    assert!(!out.status.success());
}

#[test]
fn chain_analyze_reports_the_named_cut() {
    let h1 = write_gadget("torpid", "1", "h1-an.txt");
    let out = stdout(&["chain", "analyze", "--input", &h1, "--cut", "near:u:v"]);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("N(u;v),143,1,"), "{row}");
}

#[test]
fn chain_analyze_accepts_weight_files() {
    let c4 = scratch("c4-w.txt");
    let w = scratch("c4-weights.txt");
    fs::write(&c4, "p 4 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    fs::write(&w, "perfect 2\n0 1 1\n1 2 1\n2 3 1\n0 3 1\n0 2 1\n1 3 1\n").unwrap();
    let out = stdout(&[
        "chain",
        "analyze",
        "--input",
        c4.to_str().unwrap(),
        "--weights",
        "file",
        "--weight-file",
        w.to_str().unwrap(),
        "--format",
        "records",
    ]);
    // perfect plus the four adjacent-hole classes; opposite holes are never realised
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn torpid_experiment_table() {
    let out = stdout(&["experiment", "torpid", "--k-max", "2"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("H,1,N(u;v),143,"));
    assert!(lines[2].starts_with("H,2,N(u;v),415,"));
}

#[test]
fn accept_runs_a_suite_and_rejects_unknown_names() {
    let out = stdout(&["accept", "gadget-counts"]);
    assert!(out.starts_with("PASS criterion 1 gadget-counts"), "{out}");
    let bad = run(&["accept", "nope"]);
    assert!(!bad.status.success());
    let err = String::from_utf8_lossy(&bad.stderr);
    assert!(err.contains("oracle-agreement") && err.contains("mixing-bound"), "{err}");
}

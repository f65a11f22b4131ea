use std::collections::HashSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use clap::CommandFactory;
use graphonlab_cli::registry::{OPERATIONS, SUBCOMMANDS};
use graphonlab_cli::Cli;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn resolve(args: &[&str]) -> Vec<String> {
    args.iter()
        .map(|a| if a.ends_with(".json") { data(a) } else { a.to_string() })
        .collect()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphonlab"))
        .args(resolve(args))
        .env_remove(graphonlab_cli::BUDGET_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn every_operation_is_exposed_once() {
    let mut seen = HashSet::new();
    for op in OPERATIONS {
        assert!(seen.insert(op.name), "{} listed twice", op.name);
    }
    assert_eq!(OPERATIONS.len(), 38);
    let cmd = Cli::command();
    let names: HashSet<&str> = cmd.get_subcommands().map(|c| c.get_name()).collect();
    assert_eq!(names, SUBCOMMANDS.iter().copied().collect());
    for op in OPERATIONS {
        assert!(names.contains(op.subcommand), "{}: no subcommand {}", op.name, op.subcommand);
        assert_eq!(op.example[0], op.subcommand);
    }
}

#[test]
fn every_example_runs() {
    for op in OPERATIONS {
        let o = run(op.example);
        assert_eq!(o.status.code(), Some(0), "{}: {}", op.name, stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(!v.is_null(), "{}", op.name);
    }
}

#[test]
fn half_triangle_density_is_exact() {
    let o = run(&["density", "--graph", "k3.json", "--graphon", "half.json"]);
    assert_eq!(stdout(&o), "{\"t\": 0.125}\n");
}

#[test]
fn output_is_byte_stable() {
    let cases: [&[&str]; 4] = [
        &["spectrum", "--graphon", "two_block.json"],
        &["expand", "--graph", "k3.json", "--graphon", "two_block.json"],
        &["suite", "--seed", "3", "--trials", "5", "--lemmas", "jensen_rows,cs_p3"],
        &["search", "--graph", "paw.json", "--blocks", "2", "--seed", "4", "--restarts", "3", "--iters", "100"],
    ];
    for args in cases {
        let first = stdout(&run(args));
        assert_eq!(first, stdout(&run(args)));
        let mut threaded: Vec<&str> = args.to_vec();
        threaded.extend(["--threads", "3"]);
        assert_eq!(first, stdout(&run(&threaded)), "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let o = run(&["density", "--graphon", "half.json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "{\"p\": 0.5}\n");
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"n\": 3,\n \"edges\": [[0, 1],, ]}").unwrap();
    let o = run(&["classify", "--graph", path.to_str().unwrap(), "--girth"]);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains("line 2") && err.contains("column"), "{err}");
}

#[test]
fn invalid_inputs_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, "{\"measures\": [1], \"values\": [[1.5]]}").unwrap();
    let o = run(&["density", "--graphon", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));

    let o = run(&["verify", "--coloring", "two_block.json", "two_block.json"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));

    let o = run(&["suite", "--seed", "1", "--trials", "1", "--lemmas", "no_such_lemma"]);
    assert_eq!(o.status.code(), Some(4));

    let o = run(&["construct", "--target", "k2_rooted.json", "--m", "3", "--n", "4", "--ell", "5", "--regime", "local"]);
    assert_eq!(o.status.code(), Some(4));

    // Seeds are mandatory for randomised commands.
    let o = run(&["suite", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["construct", "--random-girth", "20", "--girth", "4"]);
    assert_eq!(o.status.code(), Some(4));

    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn missing_file_exits_1() {
    let o = run(&["classify", "--graph", "/nonexistent/g.json", "--girth"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn hypothesis_violation_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.json");
    std::fs::write(&path, "{\"graph\": {\"n\": 2, \"edges\": [[0, 1]]}, \"a\": 3, \"b\": 2, \"ell\": 2}").unwrap();
    let o = run(&["verify", "--lemma", "entropy_kab", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn budget_exits_3() {
    let o = Command::new(env!("CARGO_BIN_EXE_graphonlab"))
        .args(resolve(&["density", "--graph", "k4.json", "--graphon", "two_block.json", "--method", "enumerate"]))
        .env(graphonlab_cli::BUDGET_ENV, "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn help_exits_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["density", "--help"]).status.code(), Some(0));
}

#[test]
fn k3_search_stays_above_threshold() {
    let o = run(&["search", "--graph", "k3.json", "--blocks", "3", "--seed", "2", "--restarts", "4", "--iters", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["value"].as_f64().unwrap() >= 0.25 - 1e-9);
    assert_eq!(v["counterexample_found"], false);
}

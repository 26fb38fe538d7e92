use std::process::{Command, Output};

use serde_json::Value;

fn plumb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plumb"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn error_kind(out: &Output) -> String {
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_slice(&out.stderr).expect("error is JSON");
    doc["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn errors_exit_two_with_json() {
    assert_eq!(error_kind(&plumb(&["invariants", "no-such-file.json"])), "io");
    assert_eq!(error_kind(&plumb(&["invariants", "corpus:nope"])), "input");
    assert_eq!(error_kind(&plumb(&["h1", "corpus:a1", "--cycle", "v0:-1", "--chern-estar", ""])), "input");
    assert_eq!(error_kind(&plumb(&["h1", "corpus:a1", "--cycle", "v0:1", "--chern-e", "v0:1/3"])), "input");
    let tower =
        ["h1", "corpus:a2", "--cycle", "reduced", "--chern-e", "v0:-1", "--tower", "tests/fixtures/a2_tower.json"];
    assert_eq!(error_kind(&plumb(&tower)), "precondition");
    let table = [
        "h1",
        "corpus:a2",
        "--cycle",
        "v0:2,v1:1",
        "--chern-estar",
        "v1:1",
        "--subgraph",
        "v0",
        "--oracle",
        "tests/fixtures/a2_table.json",
    ];
    assert_eq!(error_kind(&plumb(&table)), "oracle");
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("g.json");
    std::fs::write(&bad, "{\"format\": ").unwrap();
    assert_eq!(error_kind(&plumb(&["validate", bad.to_str().unwrap()])), "syntax");
}

#[test]
fn flag_conflicts_are_usage_errors() {
    for args in [
        &["h1", "corpus:a1", "--cycle", "v0:1", "--chern-estar", "v0:1", "--chern-e", "v0:1"][..],
        &["h1", "corpus:a1", "--cycle", "v0:1"],
        &["h1", "corpus:a1", "--cycle", "v0:1", "--chern-estar", "", "--oracle", "t.json"],
        &["pg", "corpus:a2", "--tower", "tests/fixtures/a2_tower.json", "--subgraph", "v0"],
        &["pg", "corpus:a2", "--layer", "1"],
    ] {
        let out = plumb(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn validate_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"format":"plumbing/1","vertices":[{"id":"a","euler":-1},{"id":"b","euler":-1}],"edges":[["a","b"]]}"#, 1),
        (
            r#"{"format":"plumbing/1","vertices":[{"id":"a","euler":-2},{"id":"b","euler":-2}],"edges":[["a","b"],["a","b"]]}"#,
            1,
        ),
        (r#"{"format":"plumbing/1","vertices":[{"id":"a","euler":-2}],"edges":[]}"#, 0),
    ];
    for (i, (text, code)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("{i}.json"));
        std::fs::write(&path, text).unwrap();
        let out = plumb(&["validate", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(*code), "{text}");
        let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["results"]["valid"], Value::Bool(*code == 0));
    }
    let doc: Value =
        serde_json::from_slice(&plumb(&["validate", &dir.path().join("1.json").to_string_lossy()]).stdout).unwrap();
    assert!(doc["results"]["reason"].as_str().unwrap().contains("not a tree"));
}

#[test]
fn corpus_export_round_trips() {
    let list: Vec<String> = serde_json::from_slice(&plumb(&["corpus"]).stdout).unwrap();
    assert_eq!(list.len(), 9);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e7.json");
    std::fs::write(&path, plumb(&["corpus", "e7"]).stdout).unwrap();
    let from_file: Value =
        serde_json::from_slice(&plumb(&["invariants", path.to_str().unwrap(), "--no-timing"]).stdout).unwrap();
    let bundled: Value = serde_json::from_slice(&plumb(&["invariants", "corpus:e7", "--no-timing"]).stdout).unwrap();
    assert_eq!(from_file["input"]["sha256"], bundled["input"]["sha256"]);
    assert_eq!(from_file["results"], bundled["results"]);
}

#[test]
fn random_graphs_follow_the_seed() {
    let a = plumb(&["invariants", "random:6", "--seed", "11", "--no-timing"]).stdout;
    let b = plumb(&["invariants", "random:6", "--seed", "11", "--no-timing"]).stdout;
    let c = plumb(&["invariants", "random:6", "--seed", "12", "--no-timing"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn output_is_deterministic_across_runs_and_modes() {
    let commands: [&[&str]; 3] = [
        &["invariants", "corpus:e8"],
        &["h1", "corpus:star237", "--cycle", "v0:12,v1:6,v2:4,v3:2", "--chern-estar", "v0:-1", "--subgraph", "v1,v2"],
        &["h1", "corpus:e7", "--cycle", "v0:3,v1:3,v2:3,v3:3,v4:3,v5:3,v6:3", "--chern-estar", "v2:-2"],
    ];
    for args in commands {
        let mut outputs = Vec::new();
        for mode in ["sequential", "parallel"] {
            for _ in 0..3 {
                let out = plumb(&[args, &["--no-timing", "--mode", mode]].concat());
                assert_eq!(out.status.code(), Some(0), "{args:?}");
                outputs.push(out.stdout);
            }
        }
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

#[test]
fn text_output_and_timing() {
    let out = String::from_utf8(plumb(&["classify", "corpus:star237", "--text"]).stdout).unwrap();
    assert!(out.lines().any(|l| l == "results.classify: elliptic"));
    assert!(out.lines().any(|l| l.starts_with("diagnostics.elapsed_ms: ")));
}

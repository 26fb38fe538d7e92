//! Reports for fixed inputs, diffed against checked-in files.
//! Regenerate with `UPDATE_GOLDEN=1 cargo test -p plumbing-cli --test golden`.

use std::fs;
use std::path::Path;
use std::process::Command;

const CASES: &[(&str, &[&str], i32)] = &[
    ("validate_a1", &["validate", "corpus:a1"], 0),
    ("invariants_a1", &["invariants", "corpus:a1"], 0),
    ("invariants_a2", &["invariants", "corpus:a2"], 0),
    ("invariants_an", &["invariants", "corpus:an"], 0),
    ("invariants_d4", &["invariants", "corpus:d4"], 0),
    ("invariants_e6", &["invariants", "corpus:e6"], 0),
    ("invariants_e7", &["invariants", "corpus:e7"], 0),
    ("invariants_e8", &["invariants", "corpus:e8"], 0),
    ("invariants_minus3", &["invariants", "corpus:minus3"], 0),
    ("invariants_star237", &["invariants", "corpus:star237"], 0),
    ("classify_star237", &["classify", "corpus:star237"], 0),
    ("pg_star237_arms", &["pg", "corpus:star237", "--subgraph", "v1,v2,v3"], 0),
    ("h1_a1", &["h1", "corpus:a1", "--cycle", "v0:2", "--chern-estar", "v0:-1"], 0),
    (
        "h1_star237_arms",
        &["h1", "corpus:star237", "--cycle", "v0:6,v1:3,v2:2,v3:1", "--chern-estar", "", "--subgraph", "v1,v2,v3"],
        0,
    ),
    (
        "h1_a2_tower",
        &[
            "h1",
            "corpus:a2",
            "--cycle",
            "reduced",
            "--chern-e",
            "v0:-1,v1:-1",
            "--tower",
            "tests/fixtures/a2_tower.json",
        ],
        0,
    ),
    (
        "h1_a2_table",
        &[
            "h1",
            "corpus:a2",
            "--cycle",
            "reduced",
            "--chern-estar",
            "v1:1",
            "--subgraph",
            "v0",
            "--oracle",
            "tests/fixtures/a2_table.json",
        ],
        0,
    ),
    ("h0_a1", &["h0", "corpus:a1", "--cycle", "v0:2", "--chern-e", "v0:-1"], 0),
    ("dominant_star237", &["dominant", "corpus:star237", "--cycle", "v0:6,v1:3,v2:2,v3:1", "--chern-estar", ""], 1),
    ("eca_a1", &["eca", "corpus:a1", "--cycle", "v0:2", "--chern-estar", "v0:-1"], 0),
    ("rational_e8", &["rational", "corpus:e8", "--cycle", "reduced"], 0),
    ("rational_star237", &["rational", "corpus:star237", "--cycle", "v0:6,v1:3,v2:2,v3:1"], 1),
    ("semigroup_a1_member", &["semigroup", "corpus:a1", "--chern-estar", "v0:1"], 0),
    ("semigroup_a1_outside", &["semigroup", "corpus:a1", "--chern-estar", "v0:-1"], 1),
    ("natural_star237", &["natural", "corpus:star237", "--chern-estar", ""], 0),
    ("elliptic_lemma_star237", &["elliptic-lemma", "corpus:star237", "--vertex", "v0", "--n-max", "4"], 0),
];

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_plumb"))
        .args(args)
        .arg("--no-timing")
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs");
    assert!(out.stderr.is_empty(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn reports_match_golden_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (name, args, code) in CASES {
        let (stdout, status) = run(args);
        assert_eq!(status, *code, "{name}: exit status");
        let path = dir.join(format!("{name}.json"));
        if update {
            fs::write(&path, &stdout).unwrap();
        } else {
            let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
            if expected != stdout {
                mismatches.push(*name);
            }
        }
    }
    assert!(mismatches.is_empty(), "reports differ from golden files: {mismatches:?}");
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use circuitwalk_cli::format::{certificate_to_json, parse_certificate, InstanceFile};
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circuitwalk"))
        .args(args)
        .env_remove(circuitwalk_cli::BUDGET_ENV)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_commands() {
    let o = cli(&["solve-lp", path(&fixture("example2.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("objective: 0\n"));
    assert!(stdout(&o).contains("x: (0, 0, 0, 0, 0, 0, 0)"));
    let o = cli(&["solve-ip", path(&fixture("example2.json"))]);
    assert_eq!(o.status.code(), Some(0));
    for cmd in ["solve-lp", "solve-ip"] {
        let o = cli(&[cmd, path(&fixture("infeasible.json"))]);
        assert_eq!(o.status.code(), Some(2));
        assert!(stdout(&o).contains("infeasible"));
    }
}

#[test]
fn malformed_files_exit_1_with_a_line() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"A\": [[1, 2]],\n  \"b\": [1,\n}\n").unwrap();
    let o = cli(&["solve-lp", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    std::fs::write(&bad, "{\n  \"A\": [[1, 2]],\n  \"b\": [1],\n  \"l\": [0, 0],\n  \"u\": [1],\n  \"w\": [1, 1]\n}\n").unwrap();
    let o = cli(&["solve-lp", path(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 5: u has 1 entries, expected 2"), "{}", stderr(&o));

    assert_eq!(cli(&["solve-lp"]).status.code(), Some(1));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn circuit_walk_writes_verifiable_certificate() {
    let dir = TempDir::new().unwrap();
    let cert = dir.path().join("walk.json");
    let inst = fixture("example2.json");
    let o = cli(&["circuit-walk", path(&inst), "--verify", "-o", path(&cert)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("terminal: (0, 0, 0, 0, 0, 0, 0)"));
    assert!(stderr(&o).contains("verified: ok"));
    let o = cli(&["verify", path(&inst), path(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    // the walk found is the published one
    assert_eq!(
        std::fs::read_to_string(&cert).unwrap(),
        std::fs::read_to_string(fixture("example2_walk.json")).unwrap()
    );
    for delta in ["exact", "bound"] {
        let o = cli(&["circuit-walk", path(&inst), "--delta", delta, "--verify"]);
        assert_eq!(o.status.code(), Some(0));
    }
}

#[test]
fn walk_from_optimum_has_no_steps() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(fixture("example2.json")).unwrap();
    let mut file = InstanceFile::parse(&text).unwrap();
    file.x0 = Some(circuitwalk::RatVector::zeros(7));
    let inst = dir.path().join("opt.json");
    std::fs::write(&inst, file.to_json()).unwrap();
    for cmd in ["circuit-walk", "graver-walk"] {
        let o = cli(&[cmd, path(&inst), "--verify"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("\"steps\": []"));
    }
}

#[test]
fn walk_errors() {
    let dir = TempDir::new().unwrap();
    // no x0
    let o = cli(&["circuit-walk", path(&fixture("infeasible.json"))]);
    assert_eq!(o.status.code(), Some(1));
    let text = std::fs::read_to_string(fixture("example2.json")).unwrap();
    let mut file = InstanceFile::parse(&text).unwrap();
    file.x0 = Some(circuitwalk::RatVector::from_i64(&[1, 0, 0, 0, 0, 0, 0]));
    let inst = dir.path().join("bad_start.json");
    std::fs::write(&inst, file.to_json()).unwrap();
    let o = cli(&["circuit-walk", path(&inst)]);
    assert_eq!(o.status.code(), Some(1));
    let o = cli(&["circuit-walk", path(&fixture("example2.json")), "--steps-limit", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_rejects_tampering() {
    let dir = TempDir::new().unwrap();
    let inst_path = fixture("example2.json");
    let inst = InstanceFile::parse(&std::fs::read_to_string(&inst_path).unwrap())
        .unwrap()
        .instance()
        .unwrap();
    let golden = std::fs::read_to_string(fixture("example2_walk.json")).unwrap();
    let o = cli(&["verify", path(&inst_path), path(&fixture("example2_walk.json"))]);
    assert_eq!(o.status.code(), Some(0));

    // shorter first step: feasible, but not maximal
    let mut cert = parse_certificate(&golden, &inst).unwrap();
    cert.steps[0].multiplier = circuitwalk::arith::rat(1);
    let tampered = dir.path().join("multiplier.json");
    std::fs::write(&tampered, certificate_to_json(&cert)).unwrap();
    let o = cli(&["verify", path(&inst_path), path(&tampered)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("step 1: step not maximal"), "{}", stdout(&o));

    // walk stopped one step short, terminal rewritten to match the replay
    let mut cert = parse_certificate(&golden, &inst).unwrap();
    cert.steps.pop();
    cert.terminal = cert.points().pop().unwrap();
    let tampered = dir.path().join("terminal.json");
    std::fs::write(&tampered, certificate_to_json(&cert)).unwrap();
    let o = cli(&["verify", path(&inst_path), path(&tampered)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("terminal not optimal"), "{}", stdout(&o));

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{\"mode\": \"circuit\"}").unwrap();
    assert_eq!(cli(&["verify", path(&inst_path), path(&garbled)]).status.code(), Some(1));
}

#[test]
fn certificate_round_trip() {
    let inst = InstanceFile::parse(&std::fs::read_to_string(fixture("example2.json")).unwrap())
        .unwrap()
        .instance()
        .unwrap();
    let golden = std::fs::read_to_string(fixture("example2_walk.json")).unwrap();
    let cert = parse_certificate(&golden, &inst).unwrap();
    assert_eq!(certificate_to_json(&cert), golden);
    assert_eq!(parse_certificate(&certificate_to_json(&cert), &inst).unwrap(), cert);
}

#[test]
fn decompose_command() {
    let o = cli(&["decompose", path(&fixture("example1.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("terms: 4\nvalidation: ok"));
    let o = cli(&["decompose", path(&fixture("two_by_one.json")), "--mode", "graver"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("g1 = 5 * (1, -1)"));

    let dir = TempDir::new().unwrap();
    let circuit = dir.path().join("circuit.json");
    std::fs::write(&circuit, "{\"A\": [[1, 1]], \"h\": [\"1\", \"-1\"]}").unwrap();
    let o = cli(&["decompose", path(&circuit)]);
    assert!(stdout(&o).contains("terms: 1\n"));
    let off = dir.path().join("off.json");
    std::fs::write(&off, "{\"A\": [[1, 1]], \"h\": [\"1\", \"1\"]}").unwrap();
    assert_eq!(cli(&["decompose", path(&off)]).status.code(), Some(1));
}

#[test]
fn subset_sum_generation_and_walk() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("ss.json");
    let o = cli(&["gen", "--subset-sum", "5", "2", "3", "4", "-o", path(&inst)]);
    assert_eq!(o.status.code(), Some(0));
    let file = InstanceFile::parse(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    assert_eq!(file.a, circuitwalk::RatMatrix::from_i64_rows(&[[2, 3, 4, -5, -4]]));

    let o = cli(&["graver-walk", path(&inst), "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cert = parse_certificate(&stdout(&o), &file.instance().unwrap()).unwrap();
    assert_eq!(cert.len(), 2);
    let o = cli(&["graver-walk", path(&inst), "--extraction", "standard-form", "--verify"]);
    assert_eq!(o.status.code(), Some(0));

    let o = cli(&["gen", "--subset-sum", "1", "1"]);
    let file = InstanceFile::parse(&stdout(&o)).unwrap();
    assert_eq!(file.a, circuitwalk::RatMatrix::from_i64_rows(&[[1, -1, 0]]));

    assert_eq!(cli(&["gen", "--subset-sum", "0", "1"]).status.code(), Some(1));
    assert_eq!(cli(&["gen"]).status.code(), Some(1));
    assert_eq!(cli(&["gen", "--random", "--subset-sum", "1", "1"]).status.code(), Some(1));
}

#[test]
fn random_generation_is_deterministic() {
    let a = cli(&["gen", "--random", "--seed", "42", "--rows", "3", "--cols", "6"]);
    let b = cli(&["gen", "--random", "--seed", "42", "--rows", "3", "--cols", "6"]);
    let c = cli(&["gen", "--random", "--seed", "43", "--rows", "3", "--cols", "6"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);

    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("r.json");
    std::fs::write(&inst, &a.stdout).unwrap();
    for cmd in ["circuit-walk", "graver-walk"] {
        assert_eq!(cli(&[cmd, path(&inst), "--verify"]).status.code(), Some(0));
    }
    assert_eq!(cli(&["gen", "--random", "--lower", "3", "--upper", "-3"]).status.code(), Some(1));
}

#[test]
fn classify_command() {
    let o = cli(&["classify", path(&fixture("example1.json")), "--max-entry", "2", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("td(A): 6\n") && text.contains("td(A^T): 3\n"), "{text}");
    assert!(text.contains(": yes"));
    let o = cli(&["classify", path(&fixture("example1.json")), "--max-entry", "1", "--depth", "3"]);
    assert!(stdout(&o).contains(": no"));
}

#[test]
fn budget_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_circuitwalk"))
        .args(["circuit-walk", path(&fixture("example2.json")), "--delta", "exact"])
        .env(circuitwalk_cli::BUDGET_ENV, "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_circuitwalk"))
        .args(["circuit-walk", path(&fixture("example2.json"))])
        .env(circuitwalk_cli::BUDGET_ENV, "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

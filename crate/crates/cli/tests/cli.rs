use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lgr(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgr"))
        .args(args)
        .current_dir(dir)
        .env_remove("LGR_SEED")
        .output()
        .expect("lgr runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const CLAW: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[4];\ncx q[0],q[1];\ncx q[0],q[2];\ncx q[0],q[3];\n";

#[test]
fn claw_is_rejected_with_exit_code_two() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("claw.qasm"), CLAW).unwrap();
    let o = lgr(&["route", "--in", "claw.qasm"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("coupling graph is not a line graph"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn shuriken_pipeline_verifies() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for args in [
        &["gen", "--family", "shuriken", "--size", "1x1", "--out", "g.json"][..],
        &["circuit", "--graph", "g.json", "--p", "1", "--out", "c.qasm", "--alpha", "0.3"],
        &["route", "--in", "c.qasm", "--out", "r.json", "--elide-boundary"],
        &["verify", "--original", "c.qasm", "--routed", "r.json", "--trials", "4"],
    ] {
        let o = lgr(args, d);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    }
    let r = lgr(&["verify", "--original", "c.qasm", "--routed", "r.json"], d);
    let report: serde_json::Value = serde_json::from_str(&stdout(&r)).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn symbolic_json_circuit_verifies_with_random_bindings() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert!(lgr(&["circuit", "--family", "kagome", "--size", "1x1", "--p", "2", "--out", "c.json"], d).status.success());
    assert!(lgr(&["route", "--in", "c.json", "--out", "r.json", "--side", "second"], d).status.success());
    let o = lgr(&["verify", "--original", "c.json", "--routed", "r.json", "--trials", "3", "--seed", "9"], d);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn tampered_result_fails_with_exit_code_three() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert!(lgr(&["circuit", "--family", "shuriken", "--size", "1x1", "--alpha", "0.4", "--out", "c.json"], d)
        .status
        .success());
    assert!(lgr(&["route", "--in", "c.json", "--out", "r.json"], d).status.success());
    let mut r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    let gates = r["circuit"]["gates"].as_array_mut().unwrap();
    let drop = gates.iter().position(|g| g["k"] == "HEIS").unwrap();
    gates.remove(drop);
    std::fs::write(d.join("bad.json"), r.to_string()).unwrap();
    let o = lgr(&["verify", "--original", "c.json", "--routed", "bad.json", "--trials", "3"], d);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn route_reads_stdin_and_writes_stdout() {
    let dir = TempDir::new().unwrap();
    let qasm = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncx q[0],q[1];\ncx q[1],q[2];\n";
    let mut child = Command::new(env!("CARGO_BIN_EXE_lgr"))
        .args(["route", "--in", "-"])
        .current_dir(dir.path())
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(qasm.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["metrics"]["n_qubit"], 3);
    assert!(stderr(&o).contains("n_swap"));
}

#[test]
fn host_embedding_relabels_onto_host_nodes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // Path 0-1-2 routes onto the heavy path of length 4; host is a 6-cycle
    // whose labels start at 10.
    let qasm = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncx q[0],q[1];\ncx q[1],q[2];\n";
    std::fs::write(d.join("p.qasm"), qasm).unwrap();
    std::fs::write(d.join("host.txt"), "10 11\n11 12\n12 13\n13 14\n14 15\n15 10\n").unwrap();
    let o = lgr(&["route", "--in", "p.qasm", "--host", "host.txt", "--out", "r.json"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    for v in r["initial_layout"].as_object().unwrap().values() {
        assert!(v.as_u64().unwrap() >= 10);
    }
    let o = lgr(&["verify", "--original", "p.qasm", "--routed", "r.json", "--trials", "2"], d);
    assert!(o.status.success(), "{}", stderr(&o));

    std::fs::write(d.join("tiny.txt"), "0 1\n").unwrap();
    let o = lgr(&["route", "--in", "p.qasm", "--host", "tiny.txt"], d);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn kagome_unit_bench_row() {
    let dir = TempDir::new().unwrap();
    let o = lgr(
        &[
            "bench", "--family", "kagome", "--size", "1x1", "--type", "quantum_simulation", "--p", "1",
            "--methods", "line-graph", "--repetitions", "2", "--no-timing", "--out", "-",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = stdout(&o);
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert_eq!(col("method"), "line-graph");
    assert_eq!(col("av. n_swaps").parse::<f64>().unwrap(), 12.0);
    assert_eq!(col("av. n_qubits").parse::<f64>().unwrap(), 12.0);
}

#[test]
fn bench_without_timing_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let args = [
        "bench", "--family", "shuriken", "--size", "2x2", "--type", "random", "--p", "3000", "--methods",
        "line-graph,naive,naive-random", "--repetitions", "4", "--seed", "5", "--no-timing",
    ];
    let a = lgr(&args, dir.path());
    let b = lgr(&args, dir.path());
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("cfg.json"),
        r#"{"family":"kagome","size":{"rows":1.0,"cols":1.0},"methods":["naive"],"repetitions":1,"p":1}"#,
    )
    .unwrap();
    let from_cfg = lgr(&["bench", "--config", "cfg.json", "--no-timing", "--out", "-"], d);
    assert!(from_cfg.status.success(), "{}", stderr(&from_cfg));
    assert!(stdout(&from_cfg).contains("\nnaive,"));
    let flagged = lgr(&["bench", "--config", "cfg.json", "--methods", "line-graph", "--no-timing", "--out", "-"], d);
    assert!(stdout(&flagged).contains("\nline-graph,"));
    assert!(!stdout(&flagged).contains("\nnaive,"));
}

#[test]
fn seed_env_sets_the_default() {
    let dir = TempDir::new().unwrap();
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_lgr"));
        cmd.args(["circuit", "--family", "kagome", "--size", "1x1", "--type", "random", "--p", "50"])
            .args(extra)
            .current_dir(dir.path())
            .env_remove("LGR_SEED");
        if let Some(s) = env {
            cmd.env("LGR_SEED", s);
        }
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("7"), &[]), run(None, &["--seed", "7"]));
    assert_ne!(run(Some("7"), &[]), run(None, &[]));
    assert_eq!(run(Some("7"), &["--seed", "3"]), run(None, &["--seed", "3"]));
}

#[test]
fn usage_and_input_errors_have_distinct_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(lgr(&["route", "--side", "sideways"], d).status.code(), Some(64));
    assert_eq!(lgr(&["route", "--in", "missing.qasm"], d).status.code(), Some(74));
    std::fs::write(d.join("junk.qasm"), "OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n").unwrap();
    let o = lgr(&["route", "--in", "junk.qasm"], d);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("junk.qasm"));
    assert!(lgr(&["--help"], d).status.success());
}

#[test]
fn sparse_random_circuit_routes_against_its_lattice() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let gen = lgr(&["gen", "--family", "kagome", "--size", "3x3", "--out", "g.json"], d);
    assert!(gen.status.success());
    let c = lgr(&["circuit", "--graph", "g.json", "--type", "random", "--p", "100", "--out", "c.json"], d);
    assert!(c.status.success());
    assert_eq!(lgr(&["route", "--in", "c.json"], d).status.code(), Some(2));
    let o = lgr(&["route", "--in", "c.json", "--coupling", "g.json", "--out", "r.json"], d);
    assert!(o.status.success(), "{}", stderr(&o));
}

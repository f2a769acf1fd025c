//! End-to-end tests of the `netab` binary: output artifacts, manifests,
//! determinism, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn netab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netab"))
        .args(args)
        .current_dir(dir)
        .env_remove("NETAB_SEED")
        .output()
        .expect("failed to spawn netab")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn sample52() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/sample52.edges")
        .display()
        .to_string()
}

#[test]
fn generate_writes_loadable_edge_list_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = netab(
        &[
            "generate", "--n", "40", "--p", "0.2", "--seed", "1", "--out", "g.edges",
        ],
        dir.path(),
    );
    assert_success(&out);

    let edges = fs::read_to_string(dir.path().join("g.edges")).unwrap();
    assert!(edges.lines().count() > 10);

    let manifest: Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("g.edges.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "generate");
    assert_eq!(manifest["seed"], 1);
    assert_eq!(manifest["config"]["n"], 40);

    // generate output is accepted by the design subcommand
    let design = netab(
        &[
            "design",
            "--edges",
            "g.edges",
            "--scenario",
            "I",
            "--seed",
            "7",
            "--out",
            "d.json",
        ],
        dir.path(),
    );
    assert_success(&design);
    let record: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    assert_eq!(record["seed"], 7);
    let x = record["x"].as_array().unwrap();
    assert_eq!(x.len(), record["n"].as_u64().unwrap() as usize);
    assert!(x.iter().all(|v| v == 1 || v == -1));
    let sum: i64 = x.iter().map(|v| v.as_i64().unwrap()).sum();
    assert!(sum.abs() <= 1);
}

#[test]
fn design_is_deterministic_given_seed() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&netab(
        &[
            "generate", "--n", "60", "--p", "0.1", "--seed", "3", "--out", "g.edges",
        ],
        dir.path(),
    ));
    for name in ["a.json", "b.json"] {
        assert_success(&netab(
            &[
                "design",
                "--edges",
                "g.edges",
                "--scenario",
                "II",
                "--seed",
                "11",
                "--out",
                name,
            ],
            dir.path(),
        ));
    }
    let a = fs::read(dir.path().join("a.json")).unwrap();
    let b = fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn design_reruns_identically_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&netab(
        &[
            "generate", "--n", "50", "--p", "0.15", "--seed", "5", "--out", "g.edges",
        ],
        dir.path(),
    ));
    assert_success(&netab(
        &[
            "design",
            "--edges",
            "g.edges",
            "--scenario",
            "I",
            "--alpha",
            "0.01",
            "--T",
            "500",
            "--seed",
            "9",
            "--out",
            "d.json",
        ],
        dir.path(),
    ));
    let original = fs::read(dir.path().join("d.json")).unwrap();
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("d.json.manifest.json")).unwrap())
            .unwrap();

    // reconstruct the command line from the manifest alone
    let cfg = &manifest["config"];
    let rerun = netab(
        &[
            "design",
            "--edges",
            cfg["source"]["edges"].as_str().unwrap(),
            "--scenario",
            cfg["scenario"].as_str().unwrap(),
            "--alpha",
            &cfg["alpha"].to_string(),
            "--T",
            &cfg["T"].to_string(),
            "--delta2",
            &cfg["delta2"].to_string(),
            "--seed",
            &cfg["seed"].to_string(),
            "--threads",
            &cfg["threads"].to_string(),
            "--out",
            "d2.json",
        ],
        dir.path(),
    );
    assert_success(&rerun);
    let replayed = fs::read(dir.path().join("d2.json")).unwrap();
    assert_eq!(original, replayed);
}

#[test]
fn usage_errors_exit_2_naming_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = netab(
        &[
            "design",
            "--edges",
            "x.edges",
            "--scenario",
            "I",
            "--alpha",
            "1.5",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--alpha"), "stderr: {stderr}");

    // missing network source is a usage error too
    let out = netab(&["design", "--scenario", "I"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = netab(
        &["evaluate", "--n", "50", "--p", "0.1", "--n-mc", "10"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n-mc"));
}

#[test]
fn domain_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    // essentially empty network: generation degenerates
    let out = netab(
        &["generate", "--n", "6", "--p", "0.000000001", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));

    let out = netab(
        &["design", "--edges", "missing.edges", "--seed", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seed_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed_env: &str, out_name: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_netab"))
            .args(["generate", "--n", "30", "--p", "0.2", "--out", out_name])
            .current_dir(dir.path())
            .env("NETAB_SEED", seed_env)
            .output()
            .unwrap();
        assert!(out.status.success());
        fs::read(dir.path().join(out_name)).unwrap()
    };
    let a = run("42", "a.edges");
    let b = run("42", "b.edges");
    let c = run("43", "c.edges");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn diagnose_reports_expected_keys_on_sample() {
    let dir = tempfile::tempdir().unwrap();
    let out = netab(
        &[
            "diagnose",
            "--edges",
            &sample52(),
            "--seed",
            "2",
            "--out",
            "diag.json",
        ],
        dir.path(),
    );
    assert_success(&out);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("diag.json")).unwrap()).unwrap();
    for key in [
        "trace_w0",
        "ssq_offdiag",
        "sd",
        "threshold_phi1",
        "threshold_phi2",
        "r1",
        "r2",
        "degree_stat_sd",
        "balance_prob_at_cW",
        "degenerate",
    ] {
        assert!(report.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(report["degenerate"], Value::Bool(false));
}

#[test]
fn evaluate_runs_end_to_end_on_sample() {
    let dir = tempfile::tempdir().unwrap();
    let out = netab(
        &[
            "evaluate",
            "--edges",
            &sample52(),
            "--scenario",
            "I",
            "--n-mc",
            "100",
            "--T",
            "500",
            "--seed",
            "4",
            "--out",
            "eval.json",
        ],
        dir.path(),
    );
    assert_success(&out);
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("eval.json")).unwrap()).unwrap();
    assert_eq!(report["scenario"], "I");
    assert_eq!(report["n_mc"], 100);
    let percentile = report["percentile"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&percentile));

    // csv format carries the same report in one row
    let csv = netab(
        &[
            "evaluate",
            "--edges",
            &sample52(),
            "--scenario",
            "I",
            "--n-mc",
            "100",
            "--T",
            "500",
            "--seed",
            "4",
            "--format",
            "csv",
        ],
        dir.path(),
    );
    assert_success(&csv);
    let text = String::from_utf8_lossy(&csv.stdout);
    assert!(text.starts_with("scenario,percentile,gap,gap_median"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn evaluate_output_is_thread_count_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, out_name: &str| {
        assert_success(&netab(
            &[
                "evaluate",
                "--edges",
                &sample52(),
                "--scenario",
                "II",
                "--n-mc",
                "100",
                "--T",
                "200",
                "--seed",
                "6",
                "--threads",
                threads,
                "--out",
                out_name,
            ],
            dir.path(),
        ));
        fs::read(dir.path().join(out_name)).unwrap()
    };
    assert_eq!(run("1", "t1.json"), run("4", "t4.json"));
}

#[test]
fn study_commands_emit_pinned_csv_headers() {
    let dir = tempfile::tempdir().unwrap();
    let table = netab(
        &[
            "table1",
            "--scenario",
            "I",
            "--n",
            "30",
            "--p",
            "0.2",
            "--reps",
            "2",
            "--n-mc",
            "100",
            "--T",
            "200",
            "--seed",
            "8",
        ],
        dir.path(),
    );
    assert_success(&table);
    let text = String::from_utf8_lossy(&table.stdout);
    assert!(text.starts_with("scenario,n,p,percentile,gap,gap_median\n"));
    assert_eq!(text.lines().count(), 2);

    let prob = netab(
        &["prob-figure", "--edges", &sample52(), "--seed", "8"],
        dir.path(),
    );
    assert_success(&prob);
    let text = String::from_utf8_lossy(&prob.stdout);
    assert!(text.starts_with("network,n,density,prob_upper,prob_actual\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("sample52,52,"));

    let conv = netab(
        &[
            "convergence",
            "--n-list",
            "30,60",
            "--p-list",
            "0.2",
            "--reps",
            "2",
            "--seed",
            "8",
        ],
        dir.path(),
    );
    assert_success(&conv);
    let text = String::from_utf8_lossy(&conv.stdout);
    assert!(text.starts_with("n,p,r1,r2\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn stdout_mode_prints_manifest_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let out = netab(
        &["generate", "--n", "20", "--p", "0.3", "--seed", "2"],
        dir.path(),
    );
    assert_success(&out);
    assert!(!out.stdout.is_empty());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let manifest_line = stderr
        .lines()
        .find(|l| l.starts_with('{'))
        .expect("manifest JSON on stderr");
    let manifest: Value = serde_json::from_str(manifest_line).unwrap();
    assert_eq!(manifest["command"], "generate");
}

#[test]
fn design_threads_do_not_change_the_design() {
    let dir = tempfile::tempdir().unwrap();
    assert_success(&netab(
        &[
            "generate", "--n", "80", "--p", "0.1", "--seed", "12", "--out", "g.edges",
        ],
        dir.path(),
    ));
    let run = |threads: &str, out_name: &str| {
        assert_success(&netab(
            &[
                "design",
                "--edges",
                "g.edges",
                "--scenario",
                "I",
                "--T",
                "400",
                "--seed",
                "13",
                "--threads",
                threads,
                "--out",
                out_name,
            ],
            dir.path(),
        ));
        fs::read(dir.path().join(out_name)).unwrap()
    };
    assert_eq!(run("1", "s.json"), run("3", "p.json"));
}

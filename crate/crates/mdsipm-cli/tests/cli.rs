//! End-to-end behavior of the `mdsipm` binary: exit codes, file outputs,
//! and the matrix dump format.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdsipm"))
}

#[test]
fn solve_synthetic_reports_optimal() {
    let out = bin()
        .args(["solve", "--problem", "synthetic:10", "--tol", "1e-6"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("Optimal"), "{stdout}");
    assert!(stdout.contains("kkt dimension: 23"), "{stdout}");
}

#[test]
fn invalid_problem_spec_is_a_usage_error() {
    for spec in ["synthetic:0", "synthetic", "random:1:2", "nonsense:1"] {
        let out = bin().args(["solve", "--problem", spec]).output().unwrap();
        assert_eq!(
            out.status.code(),
            Some(2),
            "spec {spec}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = bin().args(["solve", "--frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_writes_parseable_csv() {
    let dir = std::env::temp_dir().join("mdsipm_cli_bench_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bench.csv");
    let out = bin()
        .args([
            "bench",
            "--sizes",
            "10,20,30",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let records = mdsipm_cli::io::read_bench_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(records.len(), 3);
    assert_eq!(records[0].k, 10);
    assert_eq!(records[2].kkt_dim, 63);
    for r in &records {
        assert!(r.iterations >= 1);
        assert!((0.0..=1.0).contains(&r.k4_fraction));
    }
}

#[test]
fn solve_log_header_matches_interface() {
    let dir = std::env::temp_dir().join("mdsipm_cli_log_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("log.csv");
    let out = bin()
        .args([
            "solve",
            "--problem",
            "synthetic:5",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(
        text.starts_with("iter,mu,theta,phi,alpha_primal,alpha_dual,delta_w,delta_c,inertia_pos,inertia_zero,inertia_neg,t_K1,t_K2,t_K3,t_K4,t_total\n"),
        "header line: {}",
        text.lines().next().unwrap_or_default()
    );
    let log = mdsipm_cli::io::read_iteration_log_csv(text.as_bytes()).unwrap();
    assert!(!log.is_empty());
    // target inertia of synthetic:5 is (5, 0, 8)
    assert!(log.iter().all(|l| (l.inertia.pos, l.inertia.zero, l.inertia.neg) == (5, 0, 8)));
}

#[test]
fn dump_kkt_writes_triplet_files() {
    let dir = std::env::temp_dir().join("mdsipm_cli_dump_test");
    let _ = std::fs::remove_dir_all(&dir);
    let out = bin()
        .args([
            "solve",
            "--problem",
            "synthetic:3",
            "--dump-kkt",
            dir.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let full0 = std::fs::read_to_string(dir.join("kkt4_iter0000.txt")).unwrap();
    let mut lines = full0.lines();
    // synthetic:3 full system is (2*3 + 3 + 3) = 12-dimensional, dumped densely
    assert_eq!(lines.next(), Some("12 12 144"));
    let first = lines.next().unwrap();
    let fields: Vec<&str> = first.split_whitespace().collect();
    assert_eq!(fields.len(), 3);
    fields[2].parse::<f64>().unwrap();

    let comp0 = std::fs::read_to_string(dir.join("compressed_iter0000.txt")).unwrap();
    assert!(comp0.starts_with("9 9 81\n"));
}

#[test]
fn verify_zero_seeds_is_clean() {
    let out = bin().args(["verify", "--seeds", "0"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("0 checks failed"), "{stdout}");
}

#[test]
fn json_outputs_parse() {
    let dir = std::env::temp_dir().join("mdsipm_cli_json_test");
    std::fs::create_dir_all(&dir).unwrap();
    let bench_path = dir.join("bench.json");
    let out = bin()
        .args([
            "bench",
            "--sizes",
            "10",
            "--format",
            "json",
            "--out",
            bench_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let records: Vec<mdsipm_cli::BenchRecord> =
        serde_json::from_reader(std::fs::File::open(&bench_path).unwrap()).unwrap();
    assert_eq!(records.len(), 1);

    let log_path = dir.join("log.json");
    let out = bin()
        .args([
            "solve",
            "--problem",
            "synthetic:4",
            "--format",
            "json",
            "--out",
            log_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> =
        serde_json::from_reader(std::fs::File::open(&log_path).unwrap()).unwrap();
    assert!(!rows.is_empty());
    assert!(rows[0].get("t_K4").is_some());
}

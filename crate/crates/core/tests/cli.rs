use std::process::{Command, Output};

fn hiergraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hiergraph"))
        .args(args)
        .env_remove("HIERGRAPH_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = hiergraph(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn generate_is_reproducible_for_a_seed() {
    let args = ["generate", "--motif", "M4", "--level", "3", "--p", "0.5", "--seed", "11"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let other = stdout(&["generate", "--motif", "M4", "--level", "3", "--p", "0.5", "--seed", "12"]);
    assert_ne!(a, other);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["motif"], "M4");
    assert_eq!(doc["num_nodes"], 34);
}

#[test]
fn edgelist_of_fully_decorated_m3_level_two() {
    let text = stdout(&["generate", "--motif", "M3", "--level", "2", "--p", "1", "--format", "edgelist"]);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 20);
    assert_eq!(lines.iter().filter(|l| l.ends_with(" B")).count(), 16);
    assert_eq!(lines.iter().filter(|l| l.ends_with(" D")).count(), 4);
}

#[test]
fn output_independent_of_thread_count() {
    let base = ["analyze", "--motif", "M2", "--level", "4", "--p", "0.3", "--samples", "200", "--seed", "5"];
    let one = stdout(&[&["--threads", "1"], &base[..]].concat());
    let four = stdout(&[&["--threads", "4"], &base[..]].concat());
    assert_eq!(one, four);
    let env = Command::new(env!("CARGO_BIN_EXE_hiergraph"))
        .args(base)
        .env("HIERGRAPH_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), one);
}

#[test]
fn analyze_counts_on_bare_graph() {
    let text = stdout(&["analyze", "--motif", "M1", "--level", "3", "--p", "0"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("metric,name,formula_value,empirical_value,stderr"));
    assert!(text.lines().any(|l| l == "count,nodes,15,15,0"));
    assert!(text.lines().any(|l| l == "count,decorating_edges,0,0,0"));
}

#[test]
fn degree_dist_rows_sum_to_one() {
    let text = stdout(&["degree-dist", "--motif", "M1", "--level", "4", "--p", "0.5", "--samples", "100"]);
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("degree,prob_exact,prob_empirical"));
    let (exact, empirical) = rows.fold((0.0, 0.0), |(a, b), row| {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        (a + cols[1], b + cols[2])
    });
    assert!((exact - 1.0).abs() < 1e-12);
    assert!((empirical - 1.0).abs() < 1e-12);
}

#[test]
fn degree_dist_rejects_other_motifs() {
    let out = hiergraph(&["degree-dist", "--motif", "M2", "--level", "3", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn clustering_and_diameter_headers() {
    let c = stdout(&["clustering", "--motif", "M5", "--level", "3", "--p", "1", "--samples", "3"]);
    assert!(c.starts_with("motif,level,p,mode,finite_k_value,stderr,limit_value\n"));
    let d = stdout(&["diameter", "--motif", "M1", "--level", "4", "--p", "0", "--samples", "3"]);
    let mut lines = d.lines();
    assert_eq!(
        lines.next(),
        Some("motif,level,p,formula_value,empirical_value,stderr,small_world_bound,small_world_satisfied")
    );
    assert!(lines.next().unwrap().starts_with("M1,4,0,8,8,0,"));
}

#[test]
fn ising_flow_json() {
    let text = stdout(&["ising-flow", "--K", "0.2", "--L", "-0.3", "--p", "0.6"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["classification"], "converges_to_low_fp");
    assert!(v["K_star"].is_null());
    let text = stdout(&["ising-flow", "--K", "1.0", "--L", "0.07", "--p", "0.6", "--head", "3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["classification"], "diverges");
    assert_eq!(v["trajectory_head"].as_array().unwrap().len(), 3);
}

#[test]
fn ising_phase_grid_size() {
    let text = stdout(&[
        "ising-phase", "--L-min", "0.05", "--L-max", "0.3", "--L-steps", "6", "--p-min", "0.1", "--p-max", "1",
        "--p-steps", "10",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("L,p,t,psi,K_star,regime"));
    assert_eq!(lines.count(), 60);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# defaults\nmotif = M1\nlevel = 3\np = 0\nsamples = 4\n").unwrap();
    let conf = path.to_str().unwrap();
    let from_file = stdout(&["analyze", "--config", conf]);
    assert!(from_file.lines().any(|l| l == "count,nodes,15,15,0"));
    let overridden = stdout(&["analyze", "--config", conf, "--level", "2"]);
    assert!(overridden.lines().any(|l| l == "count,nodes,6,6,0"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let args = ["generate", "--motif", "M1", "--level", "2", "--p", "1", "--format", "edgelist"];
    let out = hiergraph(&[&args[..], &["-o", path.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap(), stdout(&args));
}

#[test]
fn exit_codes() {
    assert_eq!(hiergraph(&["--help"]).status.code(), Some(0));
    assert_eq!(hiergraph(&["generate", "--motif", "M9", "--level", "2", "--p", "0.5"]).status.code(), Some(1));
    assert_eq!(hiergraph(&["generate", "--motif", "M1", "--level", "2", "--p", "1.5"]).status.code(), Some(1));
    assert_eq!(hiergraph(&["generate", "--motif", "M1", "--level", "0", "--p", "0.5"]).status.code(), Some(1));
    let big = hiergraph(&["generate", "--motif", "M1", "--level", "40", "--p", "0.5"]);
    assert_eq!(big.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&big.stderr).contains("capacity"));
}

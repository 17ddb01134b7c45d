use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cnp_cli::commands::{self, XChoice};
use cnp_cli::problem::ProblemFile;
use cnp_core::feasibility::{search_x_grid, FeasStatus, GridOptions};
use cnp_core::interpolant::generate_feasible;
use cnp_core::BlaschkeSpec;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn cnp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnp"))
        .args(args)
        .env_remove("CNP_TOL")
        .output()
        .expect("cnp runs")
}

fn cnp_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = cnp(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), v)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_one_point_reports_disk_and_witness() {
    let (code, v) = cnp_json(&["check", path(&data("one_point.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "cnp/1");
    assert_eq!(v["status"], "feasible");
    let x = v["witness_x"][0][0][0].as_f64().unwrap();
    assert!((x - 0.4762).abs() < 1e-3, "{x}");
    let r = v["one_point_disk"]["radius"].as_f64().unwrap();
    assert!((r - 0.190_476_190_476).abs() < 1e-10);
}

#[test]
fn check_gap_instance_is_infeasible_with_margin_map() {
    let (code, v) = cnp_json(&["check", path(&data("gap.json"))]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "infeasible");
    let map = v["margin_map"].as_array().unwrap();
    assert!(!map.is_empty());
    assert!(map.iter().all(|e| e[2].as_f64().unwrap() < 0.0));
}

#[test]
fn check_overlap_conflict() {
    let (code, v) = cnp_json(&["check", path(&data("overlap.json"))]);
    assert_eq!(code, 1);
    assert!(v["reason"].as_str().unwrap().contains("overlap values differ"));
}

#[test]
fn verdicts_match_the_library() {
    for name in ["one_point.json", "gap.json", "overlap.json", "outside.json", "matrix.json", "zero_target.json"] {
        let p = commands::load_problem(&data(name), None, None).unwrap();
        let lib = search_x_grid(&p.data, &p.blaschke, &GridOptions::default(), &p.tolerances).unwrap();
        let expected = match lib.status {
            FeasStatus::Feasible => 0,
            FeasStatus::Infeasible => 1,
            FeasStatus::Undetermined => 2,
        };
        let out = cnp(&["check", path(&data(name))]);
        assert_eq!(out.status.code(), Some(expected), "{name}");
    }
}

#[test]
fn usage_and_parse_errors_exit_64() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"k\": 1,\n  \"nodes\": [[0.5, 0.0]],\n  \"values\": [[[0.5]]]\n}").unwrap();
    let out = cnp(&["check", path(&bad)]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(cnp(&["check", "/nonexistent/problem.json"]).status.code(), Some(64));
    assert_eq!(cnp(&["check", "--bogus", path(&data("one_point.json"))]).status.code(), Some(64));
    assert_eq!(cnp(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(cnp(&["--help"]).status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_cnp"))
        .args(["check", path(&data("one_point.json"))])
        .env("CNP_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn cnp_tol_is_applied() {
    let out = Command::new(env!("CARGO_BIN_EXE_cnp"))
        .args(["check", path(&data("one_point.json"))])
        .env("CNP_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let p = commands::load_problem(&data("one_point.json"), Some("1e-6"), None).unwrap();
    assert_eq!(p.tolerances.psd_tol, 1e-6);
    let p = commands::load_problem(&data("one_point.json"), Some("1e-6"), Some(1e-3)).unwrap();
    assert_eq!(p.tolerances.psd_tol, 1e-3);
}

fn write_generated(dir: &Path, seed: u64, n: usize) -> PathBuf {
    let g = generate_feasible(seed, n, &BlaschkeSpec::z_squared()).unwrap();
    let f = dir.join(format!("gen{seed}.json"));
    std::fs::write(&f, ProblemFile::from_data(&g.data, None).to_json()).unwrap();
    f
}

#[test]
fn witness_command() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_generated(dir.path(), 11, 3);
    let (code, v) = cnp_json(&["witness", path(&f), "--samples", "300"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "PASS");

    let (code, v) = cnp_json(&["witness", path(&data("outside.json"))]);
    assert_eq!(code, 1);
    assert_eq!(v["result"], "WITNESS");
    assert_eq!(v["witness"]["sample"], 0);
    assert_eq!(v["witness"]["alpha"].as_array().unwrap().len(), 1);

    let a = cnp(&["witness", path(&data("gap.json")), "--seed", "7"]);
    let b = cnp(&["witness", path(&data("gap.json")), "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

fn read_csv(p: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(p).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn body_command_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("body");
    let (code, v) = cnp_json(&[
        "body",
        path(&data("zero_target.json")),
        "--z0",
        "0.3,0",
        "--xres",
        "10",
        "--wres",
        "21",
        "--csv",
        path(&out_dir),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["inner_points_outside_grid_set"], 0);
    let (h, disks) = read_csv(&out_dir.join("disks.csv"));
    assert_eq!(h, "x_re,x_im,c_re,c_im,R");
    assert_eq!(disks.len() as u64, v["inner_disks"].as_u64().unwrap());
    assert!(disks.iter().all(|r| r.len() == 5 && r[4] >= 0.0));
    let (h, grid) = read_csv(&out_dir.join("membership.csv"));
    assert_eq!(h, "w_re,w_im,inside");
    assert_eq!(grid.len(), 21 * 21);
    let origin = grid.iter().find(|r| r[0].abs() < 1e-12 && r[1].abs() < 1e-12).expect("origin on grid");
    assert_eq!(origin[2], 1.0);
    // every grid point strictly inside an inner disk is marked inside
    for r in &grid {
        let w = (r[0], r[1]);
        let covered = disks.iter().any(|d| ((w.0 - d[2]).powi(2) + (w.1 - d[3]).powi(2)).sqrt() < d[4] * (1.0 - 1e-9));
        if covered {
            assert_eq!(r[2], 1.0, "{w:?}");
        }
    }
}

#[test]
fn body_rejects_bad_points() {
    let f = data("zero_target.json");
    assert_eq!(cnp(&["body", path(&f), "--z0", "0.5,0"]).status.code(), Some(64));
    assert_eq!(cnp(&["body", path(&f), "--z0", "1.2,0"]).status.code(), Some(64));
    assert_eq!(cnp(&["body", path(&data("gap.json")), "--z0", "0.1,0"]).status.code(), Some(64));
}

#[test]
fn solve_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let chain = dir.path().join("chain.json");
    let (code, v) = cnp_json(&["solve", path(&data("one_point.json")), "--out", path(&chain)]);
    assert_eq!(code, 0);
    assert!(v["residuals"]["max_interpolation"].as_f64().unwrap() <= 1e-7);
    assert!(v["residuals"]["pass"].as_bool().unwrap());
    let (code, v) = cnp_json(&["verify", path(&chain), path(&data("one_point.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["residuals"]["pass"], true);

    // perturb one step value by 0.1
    let mut c: Value = serde_json::from_str(&std::fs::read_to_string(&chain).unwrap()).unwrap();
    let steps = c["steps"].as_array_mut().unwrap();
    let last = steps.len() - 1;
    let v0 = steps[last][2].as_f64().unwrap();
    steps[last][2] = Value::from(v0 + 0.1);
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&c).unwrap()).unwrap();
    let (code, v) = cnp_json(&["verify", path(&tampered), path(&data("one_point.json"))]);
    assert_eq!(code, 1);
    assert!(v["residuals"]["max_interpolation"].as_f64().unwrap() > 1e-7);
}

#[test]
fn constant_chain_on_constant_data_passes() {
    let dir = tempfile::tempdir().unwrap();
    let problem = dir.path().join("const.json");
    std::fs::write(
        &problem,
        r#"{"k": 1, "nodes": [[0.5, 0.0], [-0.2, 0.4]], "values": [[[[0.3, 0.1]]], [[[0.3, 0.1]]]]}"#,
    )
    .unwrap();
    let chain = dir.path().join("chain.json");
    std::fs::write(&chain, r#"{"schema": "cnp/1", "steps": [], "tail": [0.3, 0.1]}"#).unwrap();
    assert_eq!(cnp(&["verify", path(&chain), path(&problem)]).status.code(), Some(0));
    std::fs::write(&chain, r#"{"schema": "cnp/9", "steps": [], "tail": [0.3, 0.1]}"#).unwrap();
    assert_eq!(cnp(&["verify", path(&chain), path(&problem)]).status.code(), Some(64));
}

#[test]
fn solve_refusals() {
    assert_eq!(cnp(&["solve", path(&data("gap.json"))]).status.code(), Some(1));
    let out = cnp(&["solve", path(&data("one_point.json")), "--x", "-0.5,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("x infeasible"));
    assert_eq!(cnp(&["solve", path(&data("matrix.json"))]).status.code(), Some(64));
    // an explicit interior parameter is accepted
    assert_eq!(cnp(&["solve", path(&data("one_point.json")), "--x", "0.5,0.05"]).status.code(), Some(0));
}

#[test]
fn solve_matches_library_on_generated_instances() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let f = write_generated(dir.path(), 100 + seed, 2);
        let p = commands::load_problem(&f, None, None).unwrap();
        let lib = commands::solve(&p, XChoice::Auto, &GridOptions::default(), None).unwrap();
        let (code, v) = cnp_json(&["solve", path(&f)]);
        assert_eq!(code, lib.status.code());
        assert_eq!(v["chain"], lib.json["chain"]);
    }
}

#[test]
fn stein_for_z_squared() {
    let (code, v) = cnp_json(&["stein", path(&data("z_squared.json")), "--node", "0.5,0", "--node", "-0.2,0.3"]);
    assert_eq!(code, 0);
    let q = &v["Q"];
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((q[i][j][0].as_f64().unwrap() - want).abs() < 1e-14);
            assert!(q[i][j][1].as_f64().unwrap().abs() < 1e-14);
        }
    }
    assert_eq!(v["Q_tilde"][1][1][0].as_f64().unwrap(), -0.2);
    assert_eq!(v["Q_tilde"][1][1][1].as_f64().unwrap(), -0.3);
    assert!(v["residual_q"].as_f64().unwrap() <= 1e-12);
    assert!(v["residual_q_tilde"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["q_ge_identity"], true);
    let (code, _) = cnp_json(&["stein", path(&data("z_squared.json"))]);
    assert_eq!(code, 0);
}

#[test]
fn problem_file_round_trip() {
    for name in ["one_point.json", "overlap.json", "matrix.json"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let f = ProblemFile::parse(&text).unwrap();
        assert_eq!(ProblemFile::parse(&f.to_json()).unwrap(), f);
    }
    for seed in 0..20 {
        let g = generate_feasible(seed, 3, &BlaschkeSpec::z_squared()).unwrap();
        let f = ProblemFile::from_data(&g.data, Some(&BlaschkeSpec::z_squared()));
        let back = ProblemFile::parse(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let p = back.validate().unwrap();
        assert_eq!(p.data.nodes(), g.data.nodes());
        assert_eq!(p.data.values(), g.data.values());
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bergman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bergman")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn entries(path: &Path) -> (usize, Vec<[f64; 2]>) {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let dim = v["dim"].as_u64().unwrap() as usize;
    let e = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| [c[0].as_f64().unwrap(), c[1].as_f64().unwrap()])
        .collect();
    (dim, e)
}

#[test]
fn assemble_spectral_sign_sequence() {
    let dir = TempDir::new().unwrap();
    let sym = write(&dir, "j.json", r#"{"type":"spectral","gamma":[[1,0],[-1,0],[1,0],[-1,0]]}"#);
    let out = dir.path().join("j_op.json");
    let o = bergman(&["assemble", s(&sym), "--dim", "4", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("op_norm = 1.0000000000000000e0"));
    let (dim, e) = entries(&out);
    assert_eq!(dim, 4);
    for l in 0..4 {
        for j in 0..4 {
            let expect = if l != j { 0.0 } else if l % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(e[4 * l + j], [expect, 0.0]);
        }
    }
}

#[test]
fn assemble_rank_one_delta_at_origin() {
    // (1! √2)(2! √3) m = 1 puts a single 1 at row 2, column 1
    let m = 1.0 / (2f64.sqrt() * 2.0 * 3f64.sqrt());
    let dir = TempDir::new().unwrap();
    let text = format!(r#"{{"type":"deriv_delta","terms":[{{"zeta":[0,0],"m":[{m:e},0],"l":1,"j":2}}]}}"#);
    let sym = write(&dir, "phi.json", &text);
    let out = dir.path().join("phi_op.json");
    let o = bergman(&["assemble", s(&sym), "--dim", "4", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, e) = entries(&out);
    for l in 0..4 {
        for j in 0..4 {
            let expect = if (l, j) == (2, 1) { 1.0 } else { 0.0 };
            assert!((e[4 * l + j][0] - expect).abs() < 1e-15 && e[4 * l + j][1] == 0.0);
        }
    }
}

#[test]
fn assemble_point_mass() {
    let dir = TempDir::new().unwrap();
    let sym = write(&dir, "atom.json", r#"{"type":"discrete","atoms":[{"zeta":[0.3,0],"m":[1,0]}]}"#);
    let out = dir.path().join("atom_op.json");
    assert!(bergman(&["assemble", s(&sym), "--dim", "6", "--out", s(&out)]).status.success());
    let (_, e) = entries(&out);
    let basis = |k: i32| ((k + 1) as f64).sqrt() * 0.3f64.powi(k);
    for l in 0..6 {
        for j in 0..6 {
            let expect = basis(j as i32) * basis(l as i32);
            assert!((e[6 * l + j][0] - expect).abs() < 1e-15);
        }
    }
}

#[test]
fn assemble_to_stdout_reports_norm_on_stderr() {
    let dir = TempDir::new().unwrap();
    let sym = write(&dir, "j.json", r#"{"type":"spectral","gamma":[[0.5,0],[2,0]]}"#);
    let o = bergman(&["assemble", s(&sym), "--dim", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 2);
    let line = stderr(&o);
    let norm: f64 = line.trim().strip_prefix("op_norm = ").unwrap().parse().unwrap();
    assert!((norm - 2.0).abs() < 1e-15);
}

#[test]
fn validate_reports() {
    let dir = TempDir::new().unwrap();
    let boundary = write(&dir, "b.json", r#"{"type":"discrete","atoms":[{"zeta":[1.0,0],"m":[1,0]}]}"#);
    let o = bergman(&["validate", s(&boundary)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("support on boundary"));

    let circle = write(&dir, "c.json", r#"{"type":"circle","entries":[{"r":0.5,"m":[1,0]}]}"#);
    let o = bergman(&["validate", s(&circle)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "OK: circle");

    let malformed = write(&dir, "m.json", "{\"type\":\"discrete\",\n\"atoms\":[{\"zeta\":[0.1],\"m\":[1,0]}]}");
    let o = bergman(&["validate", s(&malformed)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("atoms[0].zeta") && err.contains("line 2"), "{err}");
}

#[test]
fn experiment_p0_approx_matches_closed_form() {
    let o = bergman(&["experiment", "p0-approx", "--dim", "40"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(header.iter().last(), Some("provenance"));
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 10);
    for (i, r) in rows.iter().enumerate() {
        let n: f64 = r[0].parse().unwrap();
        assert_eq!(n, (i + 1) as f64);
        let computed: f64 = r[2].parse().unwrap();
        assert!((computed - 2.0 / (n + 4.0)).abs() < 1e-10);
        assert!(!r[4].is_empty());
    }
}

#[test]
fn experiment_decay_rate() {
    let o = bergman(&["experiment", "decay", "--dim", "40", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rate = v[0]["rate"].as_f64().unwrap();
    assert!((rate - 2.0 * (1.0f64 / 0.7).ln()).abs() < 0.02 * 0.713);
    assert_eq!(v[0]["class"], "exponential");
}

#[test]
fn experiment_kcarleson_point_mass() {
    let o = bergman(&["experiment", "kcarleson", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v[0]["varpi"].as_f64().unwrap() - 2.25).abs() < 1e-12);
    assert_eq!(v[0]["method"], "exact");
}

#[test]
fn every_experiment_runs_with_provenance() {
    for name in ["gamma-radial", "gamma-vertical", "gamma-angular", "afn-type", "weak-compress"] {
        let o = bergman(&["experiment", name, "--dim", "24"]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        let text = stdout(&o);
        assert!(text.lines().next().unwrap().ends_with("provenance"), "{name}");
        assert!(text.lines().count() > 2);
    }
    let o = bergman(&["experiment", "gamma-radial", "--param", "table=omega", "--param", "deltas=0.1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn unknown_experiment_lists_names() {
    let o = bergman(&["experiment", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p0-approx") && stderr(&o).contains("weak-compress"));
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        assert!(bergman(&["experiment", "p0-approx", "--seed", "3", "--out", s(out)]).status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"dim": 12, "format": "json", "params": {"n_max": 3}}"#);
    let o = bergman(&["experiment", "p0-approx", "--config", s(&cfg)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    let o = bergman(&["experiment", "p0-approx", "--config", s(&cfg), "--format", "csv", "--param", "n_max=2"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = bergman(&["svd", s(&write(&dir, "d.json", r#"{"type":"spectral","gamma":[[3,0],[0,4]]}"#)), "--config", s(&cfg)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 12);
    assert_eq!(v[0]["singular_value"], 4.0);

    let bad = write(&dir, "bad.json", r#"{"dimension": 3}"#);
    assert_eq!(bergman(&["experiment", "p0-approx", "--config", s(&bad)]).status.code(), Some(2));
    assert_eq!(bergman(&["experiment", "p0-approx", "--p", "2"]).status.code(), Some(2));
}

#[test]
fn norm_and_svd_of_operator_files() {
    let dir = TempDir::new().unwrap();
    let op = write(&dir, "op.json", r#"{"dim":2,"entries":[[0,0],[2,0],[0,0],[0,0]]}"#);
    let o = bergman(&["norm", s(&op)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "dim,op_norm\n2,2.0000000000000000e0\n");
    let o = bergman(&["svd", s(&op), "--count", "1"]);
    assert_eq!(stdout(&o), "m,singular_value\n1,2.0000000000000000e0\n");
    let bad = write(&dir, "bad.json", r#"{"dim":2,"entries":[[0,0]]}"#);
    assert_eq!(bergman(&["norm", s(&bad)]).status.code(), Some(2));
}

#[test]
fn non_convergence_exits_with_three() {
    // nearly equal top singular values keep power iteration moving past a short cap
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"max_iter": 5}"#);
    let sym = write(&dir, "r.json", r#"{"type":"spectral","gamma":[[1,0],[0.99,0],[0.5,0]]}"#);
    let o = bergman(&["norm", s(&sym), "--dim", "3", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("did not converge"));
}

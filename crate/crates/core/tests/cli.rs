use std::path::Path;
use std::process::{Command, Output};

use defectprop::cli::{cmd_spectrum, parse_config, round_sig};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defectprop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const LANDAU: &str = r#"{
  "couplings": {"omega_0": 0.0, "omega_L": 1.0},
  "spectrum": {"n_max": 5, "m_range": [-10, 10]}
}"#;

#[test]
fn spectrum_output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", LANDAU);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&["spectrum", "--config", &cfg, "--output", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("n,m,k,mu,E_transverse,E_total,group_id,status\n"));
    assert!(!text.contains('\r'));
}

#[test]
fn landau_groups_in_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", LANDAU);
    let o = run(&["spectrum", "--config", &cfg]);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut counts = std::collections::BTreeMap::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let e: f64 = cols[4].parse().unwrap();
        let group: usize = cols[6].parse().unwrap();
        if group <= 5 {
            assert!((e - (2.0 * group as f64 + 1.0)).abs() < 1e-12);
            *counts.entry(group).or_insert(0) += 1;
        }
    }
    for (g, n) in counts {
        assert_eq!(n, g + 11);
    }
}

#[test]
fn json_round_trip_at_configured_precision() {
    let body = r#"{"defect": {"gamma": 1.2566370614359172}, "couplings": {"alpha": 0.3, "kappa": 0.5},
                   "output": {"precision": 8}}"#;
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = write_config(dir.path(), "c.json", body);
    let o = run(&["spectrum", "--config", &cfg_path, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    let table = cmd_spectrum(&parse_config(body).unwrap(), None).unwrap();
    assert_eq!(parsed.len(), table.rows.len());
    for (row, obj) in table.rows.iter().zip(&parsed) {
        for (col, cell) in table.columns.iter().zip(row) {
            if let defectprop::cli::Cell::Num(v) = cell {
                assert_eq!(obj[*col].as_f64().unwrap(), round_sig(*v, 8), "{col}");
            }
        }
    }
    let keys: Vec<&String> = parsed[0].as_object().unwrap().keys().collect();
    assert_eq!(keys[0], "n");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write_config(dir.path(), "broken.json", "{\"defect\": ");
    let o = run(&["spectrum", "--config", &broken]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let bad_field = write_config(dir.path(), "bad.json", r#"{"defect": {"gamma": 9.0}}"#);
    let o = run(&["geometry", "--config", &bad_field]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at defect"));

    let unbound = write_config(dir.path(), "free.json", r#"{"couplings": {"omega_0": 0.0}}"#);
    let o = run(&["spectrum", "--config", &unbound]);
    assert_eq!(o.status.code(), Some(3));

    assert_eq!(run(&["bogus", "--config", &unbound]).status.code(), Some(2));
    assert_eq!(run(&["spectrum"]).status.code(), Some(2));
}

#[test]
fn geometry_reports_sigma() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "g.json",
        r#"{"defect": {"gamma": 1.5707963267948966, "b": 0}, "geometry": {"r_grid": [1.0]}}"#,
    );
    let o = run(&["geometry", "--config", &cfg, "--format", "json"]);
    let v: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["sigma"].as_f64(), Some(0.75));
    let saddle = write_config(dir.path(), "s.json", r#"{"defect": {"gamma": -2.0}}"#);
    let o = run(&["geometry", "--config", &saddle]);
    assert!(String::from_utf8(o.stdout).unwrap().contains("n/a"));
}

#[test]
fn propagator_residual_columns() {
    let body = r#"{"defect": {"gamma": 3.141592653589793}, "couplings": {"kappa": 0.0},
                   "propagator": {"tau": [0.3, 0.7], "channels": [1], "windings": []}}"#;
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "p.json", body);
    let o = run(&["propagator", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut seen = 0;
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let check: f64 = match cols[9] {
            "" => continue,
            s => s.parse().unwrap(),
        };
        match cols[5] {
            "radial_closed" => assert!(check < 1e-6),
            "radial_series" => assert!(check < 1e-8),
            _ => {}
        }
        seen += 1;
    }
    assert!(seen >= 4);
    // channel m = 0 falls to the centre at σ = 0.5, κ = 0: row kept, status set
    let body = body.replace("\"channels\": [1]", "\"channels\": [0]");
    let cfg = write_config(dir.path(), "p0.json", &body);
    let text = String::from_utf8(run(&["propagator", "--config", &cfg]).stdout).unwrap();
    assert!(text.contains("radial_closed,0,,,,fall_to_center"));
}

#[test]
fn verify_passes_by_default_and_fails_on_coarse_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "v.json", "{}");
    let o = run(&["verify", "--config", &cfg]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 12);

    let coarse = write_config(dir.path(), "coarse.json", r#"{"verify": {"fd_points": 100}}"#);
    let out = dir.path().join("report.json");
    let o = run(&["verify", "--config", &coarse, "--output", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let report: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report[0]["status"], "fail");
    assert!(report[0]["detail"].as_str().unwrap().contains("grid too coarse"));

    let ftc = write_config(
        dir.path(),
        "ftc.json",
        r#"{"verify": {"sigmas": [0.5], "kappas": [0.0], "xis": [0.0], "m_range": [-1, 1]}}"#,
    );
    let text = String::from_utf8(run(&["verify", "--config", &ftc]).stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("FallToCenter (sigma=0.5,kappa=0,xi=0,m=0)"));
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frenet-ife"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let mut all = args.to_vec();
    all.extend(["--out", dir.to_str().unwrap()]);
    run(&all)
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn error_of(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("stderr line");
    serde_json::from_str(line).expect("error JSON")
}

#[test]
fn solve_writes_one_error_row_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["solve", "--mesh", "16", "--degree", "1", "--dump-system"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&dir.path().join("errors.csv"));
    assert_eq!(header, ["n", "h", "dofs", "l2", "norm_h", "energy"]);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "16");
    assert_eq!(rows[0][2], "1024");

    let rep = json(&dir.path().join("report.json"));
    for key in [
        "command",
        "config",
        "sigma0",
        "trace_constant_max",
        "coercivity_bound",
        "errors",
        "relative_residual",
        "asymmetry",
        "interface_jump",
    ] {
        assert!(rep.get(key).is_some(), "missing {key}");
    }
    let sigma0 = rep["sigma0"].as_f64().unwrap();
    let ct = rep["trace_constant_max"].as_f64().unwrap();
    assert!(rep["sigma0_auto"].as_bool().unwrap());
    assert!(sigma0 >= ct * ct + 0.5);
    assert!(rep["relative_residual"].as_f64().unwrap() <= 1e-11);
    assert!(rep["asymmetry"].as_f64().unwrap() <= 1e-12);
    assert!(rep["interface_jump"]["max_value_jump"].as_f64().unwrap() <= 1e-9);
    assert_eq!(rep["config"]["quad"]["volume"], 3);

    let (sh, srows) = csv_rows(&dir.path().join("solution.csv"));
    assert_eq!(sh, ["element", "x", "y", "side", "value", "exact"]);
    assert_eq!(srows.len(), 256 * 4);
    let s = std::fs::read_to_string(dir.path().join("system_S.mtx")).unwrap();
    let dims = s.lines().find(|l| !l.starts_with('%')).unwrap();
    assert!(dims.starts_with("1024 1024 "));
    let f = std::fs::read_to_string(dir.path().join("system_F.mtx")).unwrap();
    assert_eq!(f.lines().nth(1).unwrap(), "1024 1");
    assert_eq!(f.lines().count(), 1026);
}

#[test]
fn invalid_beta_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "[interface]\nkind = \"circle\"\nradius = 0.6\n[coefficients]\nbeta_minus = 0.0\nbeta_plus = 1.0\n",
    )
    .unwrap();
    let out = run_in(dir.path(), &["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let e = error_of(&out);
    assert_eq!(e["error"]["kind"], "Config");
    assert!(e["error"]["message"].as_str().unwrap().contains("beta"));
}

#[test]
fn other_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["solve", "--degree", "5"],
        vec!["solve", "--sigma0", "-1"],
        vec!["solve", "--sigma0", "lots"],
        vec!["solve", "--mesh", "2"],
        vec!["solve", "--config", "/nonexistent/config.toml"],
    ] {
        let out = run_in(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_of(&out)["error"]["kind"], "Config", "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["solve", "--mesh", "8", "--sigma0", "0.001"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_of(&out)["error"]["kind"], "NotPositiveDefinite");
}

#[test]
fn convergence_rows_and_rates() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["convergence", "--mesh", "8,16,32,64"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&dir.path().join("convergence.csv"));
    assert_eq!(header.len(), 12);
    assert_eq!(&header[8..], ["rate_l2", "rate_h1", "rate_norm_h", "rate_energy"]);
    assert_eq!(rows.len(), 4);
    assert!(rows[0][8..].iter().all(|c| c.is_empty()));
    for r in &rows[1..] {
        assert!(r[8..].iter().all(|c| c.parse::<f64>().unwrap().is_finite()));
    }
    let rep = json(&dir.path().join("report.json"));
    assert_eq!(rep["levels"].as_array().unwrap().len(), 4);
    assert_eq!(rep["rates"].as_array().unwrap().len(), 3);
    assert_eq!(rep["projection_rates"].as_array().unwrap().len(), 3);
    assert!(rep["monotone"].as_bool().unwrap());
    assert_eq!(csv_rows(&dir.path().join("errors.csv")).1.len(), 4);
}

#[test]
fn deterministic_runs_are_bit_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = run_in(d.path(), &["convergence", "--mesh", "8,16", "--degree", "2", "--deterministic"]);
        assert!(out.status.success());
        let out = run_in(d.path(), &["solve", "--mesh", "16", "--deterministic"]);
        assert!(out.status.success());
    }
    for file in ["convergence.csv", "projection.csv", "errors.csv", "solution.csv"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert!(x == y, "{file} differs");
    }
    // reports differ only in the recorded output directory
    let strip = |d: &Path| {
        let mut v = json(&d.join("report.json"));
        v["config"]["output"]["dir"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(a.path()), strip(b.path()));
}

#[test]
fn probe_reports_have_per_level_maxima() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(run_in(p, &["probe-geometry", "--mesh", "8,16,32"]).status.success());
    let g = json(&p.join("geometry_probes.json"));
    let levels = g["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    for l in levels {
        for key in [
            "transition_error",
            "jacobian_error",
            "determinant_error",
            "interval_ratio_min",
            "interval_ratio_max",
            "max_overlap",
        ] {
            assert!(l[key].is_number(), "{key}");
        }
    }
    assert!(g["slopes"]["transition_error"].is_number());

    assert!(run_in(p, &["probe-trace", "--mesh", "8,16"]).status.success());
    let t = json(&p.join("trace_probe.json"));
    assert_eq!(t["levels"].as_array().unwrap().len(), 2);
    assert!(t["levels"][0]["max"].as_f64().unwrap() > 0.0);
    assert!(t["spread"].as_f64().unwrap() >= 1.0);

    assert!(run_in(p, &["probe-coercivity", "--mesh", "8"]).status.success());
    let c = json(&p.join("coercivity_probe.json"));
    let l = &c["levels"][0];
    assert!(l["coercivity"].as_f64().unwrap() >= 0.25);
    assert!(l["asymmetry"].as_f64().unwrap() <= 1e-12);
    assert!(l["threshold_sigma0"].as_f64().unwrap() <= l["sigma0"].as_f64().unwrap());
}

#[test]
fn dump_ife_basis() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(
        &cfg,
        "[interface]\nkind = \"circle\"\nradius = 0.6\n[discretization]\ndegree = 2\nmeshes = [8]\n[output]\ndir = \"unused\"\ndump_ife = true\n",
    )
    .unwrap();
    let out = run_in(dir.path(), &["solve", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let d = json(&dir.path().join("ife_basis.json"));
    let els = d.as_array().unwrap();
    assert!(!els.is_empty());
    for e in els {
        let f = e["functions"].as_array().unwrap();
        assert_eq!(f.len(), 9);
        assert_eq!(f.iter().filter(|x| x["origin"] == "continuous").count(), 3);
    }
}

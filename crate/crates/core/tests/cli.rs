use std::process::{Command, Output};

use bpd_core::sweeps::{ratio_cell, Comparison};
use bpd_core::{ChannelModel, SolverOptions, SourceModel};

fn bpd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bpd"))
        .args(args)
        .env_remove("BPD_WORKERS")
        .output()
        .expect("bpd runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const PROBLEM: [&str; 12] = [
    "--rho", "0.8", "--n1", "1", "--n2", "0.5", "--kappa", "1", "--d1", "0.2", "--d2", "0.3",
];

fn min_power_json(extra: &[&str]) -> serde_json::Value {
    let mut args = vec!["min-power"];
    args.extend(PROBLEM);
    args.extend(extra);
    let o = bpd(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn power_of(doc: &serde_json::Value, scheme: &str) -> f64 {
    doc["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["scheme"] == scheme)
        .and_then(|r| r["power"].as_f64())
        .unwrap()
}

#[test]
fn min_power_hand_values() {
    let doc = min_power_json(&[]);
    assert!((power_of(&doc, "outer") - 4.5).abs() < 1e-9);
    assert!((power_of(&doc, "scheme-c") - 5.566_666_666_666_667).abs() < 1e-9);
    assert!((power_of(&doc, "scheme-a") - 9.833_333_333_333_334).abs() < 1e-9);
    assert!(power_of(&doc, "separate") <= power_of(&doc, "scheme-c"));
    assert_eq!(doc["results"].as_array().unwrap().len(), 5);
    assert_eq!(doc["region"], "nontrivial");
}

#[test]
fn independent_sources_make_schemes_coincide() {
    let o = bpd(&["min-power", "--rho", "0", "--n1", "1", "--n2", "0.5", "--kappa", "1", "--d1", "0.2", "--d2", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sep = power_of(&doc, "separate");
    for s in ["scheme-a", "scheme-b", "scheme-c"] {
        assert!((power_of(&doc, s) - sep).abs() <= 1e-9 * sep, "{s}");
    }
}

#[test]
fn invalid_distortion_exits_2_naming_the_invariant() {
    let o = bpd(&["min-power", "--rho", "0.8", "--n1", "1", "--n2", "0.5", "--kappa", "1", "--d1", "1.5", "--d2", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("DistortionPair"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["min-power", "--rho", "0.8"],
        vec!["min-power", "--rho", "abc"],
        vec!["ratio-map", "--rho", "0.8", "--n1", "1", "--n2", "0.5", "--kappa", "0.3", "--d1-grid", "0.1:0.5", "--d2-grid", "0.1:0.5:2"],
        vec!["ratio-map", "--rho", "0.8", "--n1", "1", "--n2", "0.5", "--kappa", "0.3", "--d1-grid", "0.1:2:3", "--d2-grid", "0.1:0.5:2"],
        vec!["region", "--rho", "0.8", "--n1", "1", "--n2", "0.5", "--kappa", "2", "--power", "threedB"],
        vec!["region", "--rho", "0.8", "--n1", "1", "--n2", "0.5", "--kappa", "2", "--power", "3dB", "--schemes", "z"],
        vec!["verify", "--suite", "nope"],
        vec!["min-power", "--rho", "0.8", "--n1", "0.1", "--n2", "0.5", "--kappa", "1", "--d1", "0.2", "--d2", "0.3"],
        vec!["min-power", "--rho", "NaN", "--n1", "1", "--n2", "0.5", "--kappa", "1", "--d1", "0.2", "--d2", "0.3"],
        vec!["min-power", "--rho", "0.8", "--n1", "1", "--n2", "0.5", "--kappa", "inf", "--d1", "0.2", "--d2", "0.3"],
        vec!["rates", "--rho", "0.8", "--d1", "0.2", "--d2", "0.3", "--nu", "7"],
        vec!["min-power", "--format", "yaml", "--rho", "0.8", "--n1", "1", "--n2", "0.5", "--kappa", "1", "--d1", "0.2", "--d2", "0.3"],
    ] {
        let o = bpd(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn help_exits_0() {
    assert_eq!(bpd(&["--help"]).status.code(), Some(0));
    assert_eq!(bpd(&["ratio-map", "--help"]).status.code(), Some(0));
}

const SMOKE: [&str; 13] = [
    "ratio-map", "--rho", "0.8", "--n1", "1", "--n2", "0.5", "--kappa", "0.3",
    "--d1-grid", "0.1:0.7:2", "--d2-grid", "0.1:0.7:2",
];

#[test]
fn ratio_map_smoke_grid() {
    let o = bpd(&SMOKE);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "d1,d2,p_sep,p_outer,p_a,p_b,p_c,ratio_db,region,nu_opt,eta_bar");
    let keys: Vec<(&str, &str)> = lines[1..].iter().map(|l| {
        let mut f = l.split(',');
        (f.next().unwrap(), f.next().unwrap())
    }).collect();
    assert_eq!(keys, [("0.1", "0.1"), ("0.1", "0.7"), ("0.7", "0.1"), ("0.7", "0.7")]);
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn ratio_map_cells_round_trip_exactly() {
    let o = bpd(&SMOKE);
    let text = stdout(&o);
    let s = SourceModel::new(0.8).unwrap();
    let ch = ChannelModel::new(1.0, 0.5, 0.3).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (d1, d2): (f64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let c = ratio_cell(&s, &ch, d1, d2, Comparison::SepVsOuter, &SolverOptions::default()).unwrap();
        let stored: Vec<f64> = f[2..8].iter().map(|x| x.parse().unwrap()).collect();
        assert_eq!(stored, [c.p_sep, c.p_outer, c.p_a, c.p_b, c.p_c, c.ratio_db]);
        assert_eq!(f[8], c.region.label());
        assert_eq!(f[9].parse::<f64>().ok(), c.nu_opt);
        assert_eq!(f[10].parse::<f64>().unwrap(), c.eta_bar);
    }
}

#[test]
fn workers_env_and_flag_give_identical_bytes() {
    let base = bpd(&SMOKE).stdout;
    let env = Command::new(env!("CARGO_BIN_EXE_bpd"))
        .args(SMOKE)
        .env("BPD_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(0));
    assert_eq!(env.stdout, base);
    let mut with_flag = SMOKE.to_vec();
    with_flag.extend(["--workers", "4"]);
    assert_eq!(bpd(&with_flag).stdout, base);

    let bad_env = Command::new(env!("CARGO_BIN_EXE_bpd"))
        .args(SMOKE)
        .env("BPD_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn region_power_in_db_and_outer_endpoints() {
    let o = bpd(&["region", "--rho", "0.8", "--n1", "1", "--n2", "0.3162", "--kappa", "2", "--power", "3dB", "--schemes", "outer", "--points", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    let p = 10f64.powf(0.3);
    assert!((p - 1.99526).abs() < 1e-5);
    let d1: f64 = rows[0][1].parse().unwrap();
    assert!((d1 - (1.0 + p).powi(-2)).abs() < 1e-15);
    let d2: f64 = rows[1][2].parse().unwrap();
    assert!((d2 - 0.36 * (1.0 + p / 0.3162).powi(-2)).abs() < 1e-15);
    assert!(rows.iter().all(|r| r[0] == "outer"));
}

#[test]
fn region_orders_by_scheme_then_d1() {
    let o = bpd(&["region", "--rho", "0.5", "--n1", "1", "--n2", "0.3162", "--kappa", "2", "--power", "1.995", "--schemes", "a,outer", "--points", "16", "--nu-points", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<(String, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].parse().unwrap())
        })
        .collect();
    let first_a = rows.iter().position(|r| r.0 == "scheme-a").unwrap();
    assert!(rows[..first_a].iter().all(|r| r.0 == "outer"));
    assert!(rows[first_a..].iter().all(|r| r.0 == "scheme-a"));
    for w in rows.windows(2).filter(|w| w[0].0 == w[1].0) {
        assert!(w[0].1 < w[1].1);
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"rho": 0.8, "n1": 1, "n2": 0.5, "kappa": 1, "d1": 0.2, "d2": 0.9, "scheme": "outer"}"#).unwrap();
    let o = bpd(&["min-power", "--config", cfg.to_str().unwrap(), "--d2", "0.3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((power_of(&doc, "outer") - 4.5).abs() < 1e-9);
    assert_eq!(doc["results"].as_array().unwrap().len(), 1);

    std::fs::write(&cfg, r#"{"rho": 0.8, "colour": "blue"}"#).unwrap();
    let o = bpd(&["min-power", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.csv");
    let mut args = SMOKE.to_vec();
    args.extend(["--out", path.to_str().unwrap()]);
    let o = bpd(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), bpd(&SMOKE).stdout);
}

#[test]
fn rates_sweep_with_power() {
    let o = bpd(&["rates", "--rho", "0.8", "--d1", "0.2", "--d2", "0.3", "--n1", "1", "--n2", "0.5", "--kappa", "1", "--nu-points", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "nu,r1,r2,power,eta_bar");
    assert_eq!(lines.len(), 4);
    let first: Vec<f64> = lines[1].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], 0.8);
    assert!((first[3] - 5.566_666_666_666_667).abs() < 1e-9);
}

#[test]
fn verify_suites_report_and_exit_0() {
    let o = bpd(&["verify", "--suite", "thm3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("[PASS] thm3-limit") && text.contains("limit="));

    let o = bpd(&["verify", "--suite", "appendix"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("min_decrease_margin="));

    let o = bpd(&["verify", "--suite", "lemma1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc[0]["passed"], true);
}

#[test]
fn verify_all_passes() {
    let o = bpd(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("0 failed\n"));
}

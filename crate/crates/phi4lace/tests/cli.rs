//! End-to-end checks of the command-line interface: exit codes, summary
//! files, and bit-exact re-runs.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phi4lace"))
}

fn read_summary(dir: &Path, command: &str) -> serde_json::Value {
    let text = fs::read_to_string(dir.join(format!("{command}_summary.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn greens_summary_and_table() {
    let dir = std::env::temp_dir().join("phi4lace_cli_greens");
    let _ = fs::remove_dir_all(&dir);
    let status = bin()
        .args(["greens", "--d", "3", "--p", "0.5", "--L", "8"])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let summary = read_summary(&dir, "greens");
    assert_eq!(summary["status"], "ok");
    let err = summary["results"]["sum_rule_abs_error"].as_f64().unwrap();
    assert!(err < 1e-10, "sum rule error {err}");
    // CSV embeds version and config hash
    let table = fs::read_to_string(dir.join("greens_table.csv")).unwrap();
    let first = table.lines().next().unwrap();
    assert!(first.starts_with("# phi4lace") && first.contains("config="));
    assert!(table.lines().nth(1).unwrap().starts_with("x0,"));
}

#[test]
fn exact_and_lace_roundtrip() {
    let dir = std::env::temp_dir().join("phi4lace_cli_exact");
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    let graph = dir.join("k3.edges");
    fs::write(&graph, "3\n0 1 0.5\n1 2 0.5\n0 2 0.5\n").unwrap();

    let status = bin()
        .args(["exact", "--graph", graph.to_str().unwrap(), "--J", "0.5"])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let summary = read_summary(&dir, "exact");
    assert_eq!(summary["status"], "ok");
    assert!(summary["results"]["all_pass"].as_bool().unwrap());
    let t = 0.5f64.tanh();
    let expect = (t + t * t) / (1.0 + t * t * t);
    let m = summary["results"]["two_point_spin"][1].as_f64().unwrap();
    assert!((m - expect).abs() < 1e-12);

    let status = bin()
        .args(["lace", "--graph", graph.to_str().unwrap(), "--root", "0"])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let summary = read_summary(&dir, "lace");
    assert!(summary["results"]["bound_holds"].as_bool().unwrap());
}

#[test]
fn mc_reruns_bit_exact() {
    let dir = std::env::temp_dir().join("phi4lace_cli_mc");
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    fs::write(
        &cfg,
        "[coupling]\nkind = nn\nd = 4\namplitude = 0.1\n\n[geometry]\nL = 4\n\n\
         [model]\nlambda = 0.25\nmu = 1.3\n\n[schedule]\nsweeps = 2000\nburn_in = 300\n\n\
         [run]\nseed = 9\nchains = 2\ndisplacements = 0 0 0 0; 1 0 0 0\n",
    )
    .unwrap();

    let run = |out: &Path| {
        let status = bin()
            .args(["mc", "--config", cfg.to_str().unwrap()])
            .args(["--out", out.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
        fs::read_to_string(out.join("mc_summary.json")).unwrap()
    };
    let a = run(&dir.join("a"));
    let b = run(&dir.join("b"));
    assert_eq!(a, b, "same config and seeds must reproduce bit-exactly");

    let summary: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(summary["status"], "ok");
    // residuals consistent with zero at a loose gate (short run)
    for entry in summary["results"]["sd_residuals"].as_array().unwrap() {
        let mean = entry[1]["mean"].as_f64().unwrap();
        let err = entry[1]["stderr"].as_f64().unwrap();
        assert!(mean.abs() < 6.0 * err, "residual {mean} ± {err}");
    }
}

#[test]
fn deconv_pipeline() {
    let dir = std::env::temp_dir().join("phi4lace_cli_deconv");
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("dc.cfg");
    fs::write(
        &cfg,
        "[coupling]\nkind = nn\nd = 5\namplitude = 0.1\n\n[geometry]\nL = 8\n\n\
         [gs]\nlambda = 0.5\nmu = 1.0\nN = 64\n\n\
         [pi]\nmode = synthetic-tail\nobar = 0.05\nc_tail = 0.002\n\n\
         [fit]\nwindow = 2.0, 2.9\n",
    )
    .unwrap();
    let status = bin()
        .args(["deconv", "--config", cfg.to_str().unwrap()])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let summary = read_summary(&dir, "deconv");
    assert_eq!(summary["status"], "ok");
    let r = &summary["results"];
    assert!(r["e_sum"].as_f64().unwrap().abs() < 1e-8);
    assert!(r["e_curvature"].as_f64().unwrap().abs() < 1e-8);
    assert!(r["decay"]["pass"].as_bool().unwrap());
    assert!(dir.join("deconv_decay.csv").exists());
}

#[test]
fn critical_scan_smoke() {
    // small Gaussian scan: cheap, and the λ=0 extrapolation must land near
    // the exact massless point jhat = 0.8
    let dir = std::env::temp_dir().join("phi4lace_cli_critical");
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("scan.cfg");
    fs::write(
        &cfg,
        "[coupling]\nkind = nn\nd = 4\namplitude = 0.1\n\n[geometry]\nsides = 4\n\n\
         [model]\nlambda_grid = 0\nmu_grid = 0.85, 0.9, 1.0, 1.1\n\n\
         [schedule]\nsweeps = 20000\nburn_in = 2000\n\n[run]\nseed = 5\nchains = 2\n",
    )
    .unwrap();
    let status = bin()
        .args(["critical", "--config", cfg.to_str().unwrap()])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let summary = read_summary(&dir, "critical");
    assert_eq!(summary["status"], "ok");
    let scan = &summary["results"]["scans"][0];
    let mu_c = scan["mu_c"].as_f64().unwrap();
    let err = scan["mu_c_err"].as_f64().unwrap();
    assert!(
        (mu_c - 0.8).abs() < 4.0 * err + 0.02,
        "mu_c = {mu_c} ± {err} vs exact 0.8"
    );
    assert!(scan["griffiths_monotone"].as_bool().unwrap());
}

#[test]
fn config_errors_exit_two_with_summary() {
    let dir = std::env::temp_dir().join("phi4lace_cli_badcfg");
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.cfg");
    fs::write(&cfg, "[coupling]\nkind = nn\n# missing d\n").unwrap();
    let status = bin()
        .args(["mc", "--config", cfg.to_str().unwrap()])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let summary = read_summary(&dir, "mc");
    assert_eq!(summary["status"], "config-error");
    assert!(summary["results"]["error"].is_string());
}

#[test]
fn module_errors_exit_one_with_summary() {
    let dir = std::env::temp_dir().join("phi4lace_cli_moderr");
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    // p = 1 without the zero-mode flag is a module-level failure
    let status = bin()
        .args(["greens", "--d", "3", "--p", "1.0", "--L", "8"])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    let summary = read_summary(&dir, "greens");
    assert_eq!(summary["status"], "module-error");
    // and with the flag it succeeds
    let status = bin()
        .args(["greens", "--d", "3", "--p", "1.0", "--L", "8", "--subtract-zero-mode"])
        .args(["--out", dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use aqg::checkpoint;
use aqg::config::{InitKind, ModeEntry};
use aqg::run::{
    self, checkpoint_name, FINAL_FILE, GEVREY_FILE, INITIAL_FILE, LEMMAS_FILE, PICARD_FILE,
    SWEEP_FILE, TRACE_FILE,
};
use aqg::RunConfig;
use aqg_core::norms::sobolev_norm;
use aqg_core::spectral::apply_semigroup;
use tempfile::TempDir;

fn small(dir: &Path) -> RunConfig {
    let mut c = RunConfig::default();
    c.grid.n1 = 16;
    c.grid.n2 = 16;
    c.time.horizon = 0.2;
    c.init.amplitude = 0.5;
    c.lemmas.count = 20;
    c.lemmas.scalar_density = 1000;
    c.sweep.horizon = 0.05;
    c.output.directory = dir.to_path_buf();
    c
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, c: &RunConfig) -> PathBuf {
    let path = dir.join("input.toml");
    fs::write(&path, c.to_toml_string()).unwrap();
    path
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    first_line(&path)
}

fn report(path: &Path) -> toml::Table {
    fs::read_to_string(path).unwrap().parse().unwrap()
}

#[test]
fn csv_headers_match_golden_files() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(tmp.path());
    c.time.checkpoints = vec![0.1];
    run::run_simulate(&c).unwrap();
    assert_eq!(
        first_line(&tmp.path().join(TRACE_FILE)),
        golden("trace_header.csv")
    );
    run::run_gevrey(tmp.path(), None).unwrap();
    assert_eq!(
        first_line(&tmp.path().join(GEVREY_FILE)),
        golden("gevrey_header.csv")
    );
    c.sweep.alphas = vec![0.75];
    c.sweep.betas = vec![0.75];
    run::run_sweep(&c, Some(1)).unwrap();
    assert_eq!(
        first_line(&tmp.path().join(SWEEP_FILE)),
        golden("sweep_header.csv")
    );
}

#[test]
fn simulate_reruns_are_bit_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        let path = write_config(d.path(), &small(d.path()));
        let out = bin(&["simulate", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    let read = |d: &TempDir, f: &str| fs::read(d.path().join(f)).unwrap();
    assert_eq!(read(&a, TRACE_FILE), read(&b, TRACE_FILE));
    assert_eq!(read(&a, FINAL_FILE), read(&b, FINAL_FILE));
}

#[test]
fn seed_override_changes_the_data() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let path = write_config(a.path(), &small(a.path()));
    let cfg = path.to_str().unwrap();
    let out_b = b.path().to_str().unwrap();
    assert_eq!(bin(&["simulate", "--config", cfg]).status.code(), Some(0));
    let out = bin(&["simulate", "--config", cfg, "--seed", "99", "--out", out_b]);
    assert_eq!(out.status.code(), Some(0));
    let read = |d: &TempDir| fs::read(d.path().join(INITIAL_FILE)).unwrap();
    assert_ne!(read(&a), read(&b));
    let echo = RunConfig::load(&b.path().join("config.toml")).unwrap();
    assert_eq!(echo.init.seed, 99);
    assert_eq!(echo.output.directory, b.path());
}

#[test]
fn linear_flag_reproduces_closed_form_decay() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(tmp.path());
    c.time.linear_only = true;
    c.time.horizon = 1.0;
    let o = run::run_simulate(&c).unwrap();
    assert_eq!(o.exit_code(), 0);
    let p = c.params().unwrap();
    let theta0 = checkpoint::read(&tmp.path().join(INITIAL_FILE))
        .unwrap()
        .field;
    let mut rdr = csv::Reader::from_path(tmp.path().join(TRACE_FILE)).unwrap();
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let t: f64 = rec[0].parse().unwrap();
        let hs: f64 = rec[2].parse().unwrap();
        let exact = sobolev_norm(&apply_semigroup(&theta0, t, &p).unwrap(), p.s, false);
        assert!(
            (hs - exact).abs() <= 1e-10 * exact,
            "t = {t}: {hs} vs {exact}"
        );
        rows += 1;
    }
    assert!(rows > 2);
}

#[test]
fn invalid_alpha_is_rejected_before_compute() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(&tmp.path().join("out"));
    c.params.alpha = 1.5;
    let path = write_config(tmp.path(), &c);
    let out = bin(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.alpha"));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn unknown_key_and_bad_flags_exit_with_config_code() {
    let tmp = TempDir::new().unwrap();
    let path = tmp.path().join("bad.toml");
    fs::write(&path, "[params]\nalpha = 0.7\nlambda = 2.0\n").unwrap();
    let out = bin(&["picard", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
    assert_eq!(bin(&["simulate", "--bogus"]).status.code(), Some(1));
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = bin(&["simulate", "--config", "/nonexistent/aqg.toml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn picard_zero_field_converges_immediately() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(tmp.path());
    c.init.amplitude = 0.0;
    let o = run::run_picard(&c).unwrap();
    let plain = o.plain.unwrap();
    assert!(plain.converged);
    assert_eq!(plain.iterations, 0);
    let r = report(&tmp.path().join(PICARD_FILE));
    assert_eq!(r["plain"]["converged"].as_bool(), Some(true));
    assert_eq!(r["plain"]["iterations"].as_integer(), Some(0));
}

#[test]
fn picard_single_mode_distances_are_rounding_level() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(tmp.path());
    c.init.kind = InitKind::Modes;
    c.init.modes = vec![ModeEntry {
        k1: 2,
        k2: 1,
        re: 0.0,
        im: -0.025,
    }];
    let o = run::run_picard(&c).unwrap();
    let plain = o.plain.unwrap();
    assert!(plain.converged);
    assert_eq!(plain.iterations, 1);
    assert!(plain.distances[0] < 1e-15, "{:?}", plain.distances);
}

#[test]
fn weighted_picard_report_keeps_t1_below_the_cap() {
    let tmp = TempDir::new().unwrap();
    let c = small(tmp.path());
    let path = write_config(tmp.path(), &c);
    let out = bin(&["picard", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let r = report(&tmp.path().join(PICARD_FILE));
    let t1 = r["T1"].as_float().unwrap();
    assert!(t1 > 0.0 && t1 < 0.40547, "{t1}");
    assert!(r["T0"].as_float().unwrap() > 0.0);
    assert_eq!(r["weighted"]["weighted_ball_inside"].as_bool(), Some(true));
    assert!(r["constants"]["calibration"]["samples"]
        .as_integer()
        .is_some());
}

#[test]
fn picard_horizon_outside_the_ball_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(tmp.path());
    c.picard.horizon = Some(100.0);
    let err = run::run_picard(&c).err().unwrap();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("picard.horizon"));
    c.picard.allow_outside = true;
    c.picard.max_iter = 3;
    let o = run::run_picard(&c).unwrap();
    assert!(o.plain.unwrap().outside_guaranteed_ball);
}

#[test]
fn lemmas_pass_and_report_the_isometry_constant() {
    let tmp = TempDir::new().unwrap();
    let path = write_config(tmp.path(), &small(tmp.path()));
    let out = bin(&["lemmas", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let r = report(&tmp.path().join(LEMMAS_FILE));
    assert_eq!(r["violations"].as_integer(), Some(0));
    let cz = r["calderon_zygmund_p2"].as_float().unwrap();
    assert!((cz - 1.0).abs() <= 1e-12, "{cz}");
}

#[test]
fn lemma_fault_injection_exits_with_violation_code() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(tmp.path());
    c.lemmas.fault_injection = true;
    let path = write_config(tmp.path(), &c);
    let out = bin(&["lemmas", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("interpolation") && stderr.contains("seed"),
        "{stderr}"
    );
    let r = report(&tmp.path().join(LEMMAS_FILE));
    assert!(r["violations"].as_integer().unwrap() > 0);
}

#[test]
fn sweep_labels_regions_and_is_deterministic_across_thread_counts() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let mut c = small(a.path());
    c.sweep.alphas = vec![0.4, 0.6, 0.75, 0.9];
    c.sweep.betas = vec![0.5, 0.6, 0.75, 0.9];
    let o = run::run_sweep(&c, Some(1)).unwrap();
    assert_eq!(o.failures(), 0);
    for r in &o.rows {
        let expected = match (r.alpha, r.beta) {
            (a, b) if a > 0.5 && b > 0.5 => "Y1",
            (0.4, 0.5) => "outside",
            _ => continue,
        };
        assert_eq!(r.region, expected, "({}, {})", r.alpha, r.beta);
    }
    c.output.directory = b.path().to_path_buf();
    run::run_sweep(&c, Some(4)).unwrap();
    assert_eq!(
        fs::read(a.path().join(SWEEP_FILE)).unwrap(),
        fs::read(b.path().join(SWEEP_FILE)).unwrap()
    );
}

#[test]
fn sweep_rows_follow_lattice_order() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(tmp.path());
    c.sweep.alphas = vec![0.9, 0.6];
    c.sweep.betas = vec![0.7, 0.8];
    let path = write_config(tmp.path(), &c);
    let out = bin(&[
        "sweep",
        "--config",
        path.to_str().unwrap(),
        "--threads",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let mut rdr = csv::Reader::from_path(tmp.path().join(SWEEP_FILE)).unwrap();
    let pairs: Vec<(String, String)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].to_string())
        })
        .collect();
    let expected: Vec<(String, String)> = [
        ("0.9", "0.7"),
        ("0.9", "0.8"),
        ("0.6", "0.7"),
        ("0.6", "0.8"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    assert_eq!(pairs, expected);
}

#[test]
fn restart_from_checkpoint_file_matches_the_full_run() {
    let (full, rest) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let mut c = small(full.path());
    c.time.horizon = 0.4;
    c.time.checkpoints = vec![0.2];
    let a = run::run_simulate(&c).unwrap();

    let mut r = small(rest.path());
    r.init.kind = InitKind::File;
    r.init.path = Some(full.path().join(checkpoint_name(0)));
    r.time.horizon = 0.2;
    r.time.checkpoints = vec![];
    let b = run::run_simulate(&r).unwrap();
    assert_eq!(b.t_start, 0.2);
    assert_eq!(b.result.time, 0.4);
    let s = c.params().unwrap().s;
    let diff = sobolev_norm(&(&a.result.final_state - &b.result.final_state), s, false);
    assert!(diff <= 1e-8, "{diff}");
    let tail: Vec<f64> = a
        .result
        .trace
        .times()
        .into_iter()
        .filter(|&t| t >= 0.2)
        .collect();
    assert_eq!(tail, b.result.trace.times());
}

#[test]
fn restart_with_mismatched_grid_names_the_checkpoint_key() {
    let tmp = TempDir::new().unwrap();
    let c = small(tmp.path());
    run::run_simulate(&c).unwrap();
    let mut r = small(&tmp.path().join("rest"));
    r.grid.n1 = 32;
    r.init.kind = InitKind::File;
    r.init.path = Some(tmp.path().join(FINAL_FILE));
    let err = run::run_simulate(&r).err().unwrap();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("init.path") && err.to_string().contains("grid mismatch"));
}

#[test]
fn restart_with_mismatched_params_names_the_field() {
    let tmp = TempDir::new().unwrap();
    let c = small(tmp.path());
    run::run_simulate(&c).unwrap();
    let mut r = small(&tmp.path().join("rest"));
    r.params.beta = 0.8;
    r.init.kind = InitKind::File;
    r.init.path = Some(tmp.path().join(FINAL_FILE));
    let err = run::run_simulate(&r).err().unwrap();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("beta"), "{err}");
}

#[test]
fn checkpoint_files_round_trip_and_reject_damage() {
    let tmp = TempDir::new().unwrap();
    let c = small(tmp.path());
    run::run_simulate(&c).unwrap();
    let path = tmp.path().join(FINAL_FILE);
    let bytes = fs::read(&path).unwrap();
    let copy = tmp.path().join("copy.bin");
    checkpoint::write(&copy, &checkpoint::read(&path).unwrap()).unwrap();
    assert_eq!(fs::read(&copy).unwrap(), bytes);

    fs::write(&copy, &bytes[..bytes.len() - 8]).unwrap();
    let err = checkpoint::read(&copy).unwrap_err();
    assert!(err.to_string().contains("corrupt checkpoint"), "{err}");

    let mut bumped = bytes.clone();
    bumped[4..8].copy_from_slice(&7u32.to_le_bytes());
    fs::write(&copy, &bumped).unwrap();
    let err = checkpoint::read(&copy).unwrap_err();
    assert!(err.to_string().contains("unsupported version"), "{err}");
}

#[test]
fn damaged_restart_file_exits_with_io_code() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.aqgs");
    fs::write(&bad, b"AQGS\x01\x00").unwrap();
    let mut c = small(&tmp.path().join("out"));
    c.init.kind = InitKind::File;
    c.init.path = Some(bad);
    let path = write_config(tmp.path(), &c);
    let out = bin(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt checkpoint"));
}

#[test]
fn gevrey_reads_a_run_directory() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(tmp.path());
    c.time.linear_only = true;
    c.time.checkpoints = vec![0.1];
    run::run_simulate(&c).unwrap();
    let out = bin(&["gevrey", "--run", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let o = run::run_gevrey(tmp.path(), None).unwrap();
    let times: Vec<f64> = o.rows.iter().map(|r| r.t).collect();
    assert_eq!(times, vec![0.0, 0.1, 0.2]);
    // linear flow: the fitted rate is the elapsed time
    for r in &o.rows[1..] {
        assert!((r.rate1 - r.t).abs() <= 1e-6 * r.t, "{r:?}");
        assert!((r.rate2 - r.t).abs() <= 1e-6 * r.t, "{r:?}");
    }
    let missing = bin(&["gevrey", "--run", "/nonexistent/run"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn solver_abort_exits_with_code_two() {
    let tmp = TempDir::new().unwrap();
    let mut c = small(tmp.path());
    c.init.amplitude = 1e200;
    c.time.horizon = 1.0;
    let path = write_config(tmp.path(), &c);
    let out = bin(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    assert!(tmp.path().join(TRACE_FILE).exists());
}

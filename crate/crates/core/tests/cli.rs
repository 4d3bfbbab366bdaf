use std::path::Path;
use std::process::{Command, Output};

fn postvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_postvar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

#[test]
fn presets_list_names_every_preset() {
    let out = postvar(&["presets", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for p in postvar::experiment::presets() {
        assert!(text.contains(p.name), "{}", p.name);
    }
}

#[test]
fn variance_run_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "v.toml",
        "experiment = \"variance-vanishing\"\nkernel = \"matern\"\nschedule_alpha = 0.3333333333333333\nn_max = 60\ndatasets = 5\nseed = 4\n",
    );
    let a = dir.path().join("a.csv").display().to_string();
    let b = dir.path().join("b.csv").display().to_string();
    assert!(postvar(&["variance", "--config", &cfg, "--out", &a])
        .status
        .success());
    assert!(postvar(&["variance", "--config", &cfg, "--out", &b])
        .status
        .success());
    let a = std::fs::read(a).unwrap();
    assert_eq!(a, std::fs::read(b).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), Some("idx,sig_m,sig_bm,sig_bm_gen"));

    // a different seed changes the data
    let c = postvar(&["variance", "--config", &cfg, "--seed", "5"]);
    assert!(c.status.success());
    assert_ne!(c.stdout, text.as_bytes());
}

#[test]
fn learning_curve_header_and_noise_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        "experiment = \"learning-curve\"\nkernel = \"se\"\nlengthscale = 0.3\nnoise_variance = 0.05\nn_max = 20\ntest_points = 20\ndatasets = 4\n",
    );
    let plain = postvar(&["learning-curve", "--config", &cfg]);
    assert!(plain.status.success());
    let plain = String::from_utf8(plain.stdout).unwrap();
    assert_eq!(plain.lines().next(), Some("idx,y_exact,y_bound,yE1,yE2"));
    let first: Vec<&str> = plain.lines().nth(1).unwrap().split(',').collect();
    // greedy selection starts from the one-point bound
    assert_eq!(first[2], first[3]);

    let shifted = postvar(&["learning-curve", "--config", &cfg, "--subtract-noise"]);
    let shifted = String::from_utf8(shifted.stdout).unwrap();
    let a: f64 = plain
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .nth(4)
        .unwrap()
        .parse()
        .unwrap();
    let b: f64 = shifted
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .nth(4)
        .unwrap()
        .parse()
        .unwrap();
    assert!((a - b - 0.05).abs() < 1e-12);
}

#[test]
fn convergence_reports_first_failure() {
    let out = postvar(&["convergence", "--preset", "convergence-vanishing"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("satisfied = false"));
    assert!(text.contains("first_failing_n = 17"));
    assert!(text.contains("N,mean_count,min_count,expected_count"));
}

#[test]
fn plot_script_points_at_csv() {
    let out = postvar(&[
        "plot-script",
        "--preset",
        "learning-curve-se",
        "--csv",
        "curve.csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("'curve.csv'") && text.contains("set logscale xy"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(
        dir.path(),
        "bad.toml",
        "experiment = \"variance-uniform\"\nkernel = \"se\"\nnoise_variance = 0.0\n",
    );
    let out = postvar(&["variance", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("noise_variance"));

    let out = postvar(&["variance", "--preset", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));

    let out = postvar(&["variance", "--preset", "learning-curve-se"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    // many inputs in a tiny interval with negligible noise: the data covariance
    // matrix is numerically singular
    let cfg = write_config(
        dir.path(),
        "n.toml",
        "experiment = \"variance-uniform\"\nkernel = \"se\"\nlengthscale = 100.0\nnoise_variance = 1e-300\ndomain = [1.0, 1.0000001]\ntest_point = 1.0\nn_min = 50\nn_max = 50\ndatasets = 1\n",
    );
    let out = postvar(&["variance", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("seed"));
}

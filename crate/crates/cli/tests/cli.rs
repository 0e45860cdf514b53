use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn rbrdo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbrdo"))
        .args(args)
        .env_remove("RBRDO_OUTPUT_DIR")
        .output()
        .expect("spawn rbrdo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ok(o: &Output) {
    assert!(o.status.success(), "exit {:?}\nstderr: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
}

/// `key=value` lines of the mpp report.
fn field(out: &str, key: &str) -> Vec<f64> {
    let line = out
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {out}"));
    line.split(',').map(|v| v.parse().unwrap()).collect()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn prefix(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

/// Small benchmark sweep used by the determinism tests.
const SMALL_SWEEP: &[&str] = &[
    "run",
    "--problem",
    "benchmark",
    "--delta",
    "0,0.05",
    "--np",
    "12",
    "--generations",
    "8",
    "--pseudo-fronts",
    "2",
    "--samples",
    "8",
    "--seed",
    "7",
];

#[test]
fn list_problems_names_all_four() {
    let o = rbrdo(&["list-problems"]);
    ok(&o);
    let out = stdout(&o);
    for name in ["benchmark", "heat-exchanger", "reactor", "catalyst"] {
        assert!(out.lines().any(|l| l.starts_with(name)), "{name} missing from {out}");
    }
}

#[test]
fn deterministic_benchmark_single_row() {
    let dir = TempDir::new().unwrap();
    let p = prefix(&dir, "bm");
    let o = rbrdo(&["run", "--problem", "benchmark", "--mode", "deterministic", "--seed", "1", "--output", &p]);
    ok(&o);
    let (header, rows) = read_csv(&Path::new(&format!("{p}-delta0.csv")));
    assert_eq!(header, ["d1", "d2", "f", "delta_level"]);
    assert_eq!(rows.len(), 1);
    assert!((rows[0][2] - 5.176532).abs() < 1e-3, "f = {}", rows[0][2]);
    assert!(Path::new(&format!("{p}.meta.toml")).exists());
}

#[test]
fn reruns_are_byte_identical_and_metadata_replays() {
    let dir = TempDir::new().unwrap();
    let (a, b, c) = (prefix(&dir, "a"), prefix(&dir, "b"), prefix(&dir, "c"));
    for p in [&a, &b] {
        let mut args = SMALL_SWEEP.to_vec();
        args.extend(["--output", p.as_str()]);
        ok(&rbrdo(&args));
    }
    let meta = format!("{a}.meta.toml");
    ok(&rbrdo(&["run", "--config", &meta, "--output", &c]));
    for level in ["0", "0.05"] {
        let front = |p: &str| fs::read(format!("{p}-delta{level}.csv")).unwrap();
        assert_eq!(front(&a), front(&b), "rerun differs at delta {level}");
        assert_eq!(front(&a), front(&c), "metadata replay differs at delta {level}");
    }
}

#[test]
fn saved_fronts_are_mutually_non_dominated() {
    let dir = TempDir::new().unwrap();
    let p = prefix(&dir, "nd");
    let mut args = SMALL_SWEEP.to_vec();
    args.extend(["--output", p.as_str()]);
    ok(&rbrdo(&args));
    for level in ["0", "0.05"] {
        let (header, rows) = read_csv(Path::new(&format!("{p}-delta{level}.csv")));
        assert_eq!(header, ["d1", "d2", "beta", "f", "delta_level"]);
        assert!(!rows.is_empty());
        // f is minimized, beta maximized
        for r in &rows {
            for s in &rows {
                let no_worse = s[3] <= r[3] && s[2] >= r[2];
                let better = s[3] < r[3] || s[2] > r[2];
                assert!(!(no_worse && better), "{s:?} dominates {r:?}");
            }
        }
    }
}

#[test]
fn reactor_sweep_writes_fronts_and_stats() {
    let dir = TempDir::new().unwrap();
    let p = prefix(&dir, "rx");
    let o = rbrdo(&[
        "run",
        "--problem",
        "reactor",
        "--np",
        "16",
        "--generations",
        "15",
        "--pseudo-fronts",
        "2",
        "--samples",
        "10",
        "--history",
        "--output",
        &p,
    ]);
    ok(&o);
    for level in ["0", "0.05", "0.1"] {
        assert!(Path::new(&format!("{p}-delta{level}.csv")).exists());
        assert!(Path::new(&format!("{p}-delta{level}-history.csv")).exists());
    }
    let stats = fs::read_to_string(format!("{p}-stats.csv")).unwrap();
    assert!(stats.starts_with("delta_level,n,a0,a1,a2,sqr,r2,r2_adj,rms"));
    assert_eq!(stats.lines().count(), 4, "{stats}");
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("fit ")).count(), 3);
}

#[test]
fn output_dir_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_rbrdo"))
        .args(["run", "--problem", "benchmark", "--mode", "deterministic", "--generations", "5"])
        .env("RBRDO_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    ok(&o);
    assert!(dir.path().join("benchmark-deterministic-delta0.csv").exists());
    assert!(dir.path().join("benchmark-deterministic.meta.toml").exists());
}

#[test]
fn mpp_benchmark_constraint_one() {
    let o = rbrdo(&["mpp", "--problem", "benchmark", "--constraint", "1", "--d", "3.440563,3.279963", "--beta", "3"]);
    ok(&o);
    let out = stdout(&o);
    let g = field(&out, "g_star")[0];
    assert!(g.abs() < 1e-2, "g* = {g}");
    let x = field(&out, "x_star");
    for (xi, ref_i) in x.iter().zip([2.6435, 2.8619]) {
        assert!((xi - ref_i).abs() < 0.05, "x* = {x:?}");
    }
    // the exact minimizer on the circle, by brute force
    let (d1, d2) = (3.440563, 3.279963);
    let best = (0..200_000)
        .map(|k| {
            let t = k as f64 / 200_000.0 * std::f64::consts::TAU;
            let (a, b) = (d1 + 0.9 * t.cos(), d2 + 0.9 * t.sin());
            (a * a * b / 20.0 - 1.0, a, b)
        })
        .min_by(|p, q| p.0.total_cmp(&q.0))
        .unwrap();
    assert!((g - best.0).abs() < 1e-6);
    assert!((x[0] - best.1).abs() < 1e-2 && (x[1] - best.2).abs() < 1e-2);
    assert_eq!(field(&out, "u_star").len(), 2);
}

#[test]
fn mpp_catalyst_linear_closed_form() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("trace.csv");
    let o = rbrdo(&[
        "mpp",
        "--problem",
        "catalyst",
        "--constraint",
        "2",
        "--d",
        "0.5,0.5,0.5,0.2,0.8",
        "--beta",
        "2",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    ok(&o);
    let g = field(&stdout(&o), "g_star")[0];
    assert!((g - 0.4).abs() < 1e-9, "g* = {g}");
    assert!(fs::read_to_string(&trace).unwrap().starts_with("k,u_1,u_2,u_3,G,tau,t_bar,error"));
}

#[test]
fn mpp_rejects_zero_beta() {
    let o = rbrdo(&["mpp", "--problem", "benchmark", "--constraint", "1", "--d", "3,3", "--beta", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_fit_exact_quadratic_and_bad_columns() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("q.csv");
    let mut text = String::from("beta,f,delta_level\n");
    for i in 0..12 {
        let x = 0.1 + 0.4 * i as f64;
        text.push_str(&format!("{x},{},0\n", 2.0 - 0.5 * x + 0.125 * x * x));
    }
    fs::write(&path, text).unwrap();
    let file = path.to_str().unwrap();

    let o = rbrdo(&["stats-fit", file, "--y", "f"]);
    ok(&o);
    let out = stdout(&o);
    assert!(out.starts_with("delta_level=0 n=12 "), "{out}");
    assert!(out.contains("R2=1.000000"), "{out}");
    let sqr: f64 = out.split("SQR=").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!(sqr < 1e-20, "{out}");

    assert_eq!(rbrdo(&["stats-fit", file, "--y", "objective"]).status.code(), Some(2));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "beta,f\n1,x\n").unwrap();
    assert_eq!(rbrdo(&["stats-fit", bad.to_str().unwrap(), "--y", "f"]).status.code(), Some(4));
}

#[test]
fn error_categories_map_to_exit_codes() {
    assert_eq!(rbrdo(&["run", "--problem", "reactors"]).status.code(), Some(2));
    assert_eq!(
        rbrdo(&["run", "--problem", "benchmark", "--strategy", "none", "--delta", "0,0.05"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rbrdo(&["run", "--problem", "benchmark", "--mode", "deterministic", "--beta", "3"]).status.code(),
        Some(2)
    );
    let o = rbrdo(&[
        "run",
        "--problem",
        "benchmark",
        "--mode",
        "deterministic",
        "--generations",
        "2",
        "--output",
        "/dev/null/sub/run",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error[io]"));
    assert_eq!(rbrdo(&["run", "--config", "/nonexistent/run.toml"]).status.code(), Some(4));
}

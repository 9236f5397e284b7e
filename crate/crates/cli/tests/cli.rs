use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use abe_cli::error::CliError;
use abe_core::info::binary_entropy;
use serde_json::Value;

fn abe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abe"))
        .args(args)
        .output()
        .expect("binary runs")
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let p = std::env::temp_dir().join(format!("abe-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        Self(p)
    }

    fn file(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

/// Metadata line, header, and rows as column maps.
fn read_csv(path: &Path) -> (Value, Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let meta_line = lines.next().unwrap();
    let meta: Value = serde_json::from_str(meta_line.strip_prefix("# ").unwrap()).unwrap();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (meta, header, rows)
}

fn col(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn measure_reports() {
    let out = abe(&["measure", "ghz", "0.70710678"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["report"]["abe"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((v["report"]["delta_s"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(v["class"], "GHZClass");
    assert_eq!(v["metadata"]["schema"], "measure/1");
    assert!(v["metadata"]["prng"].as_str().unwrap().contains("ChaCha20"));

    let out = abe(&["measure", "w2", "0.57735", "0.57735"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["report"]["delta_s"].as_f64().unwrap() - 0.9183).abs() < 1e-4);
    assert_eq!(v["class"], "WClass");

    let out = abe(&[
        "measure",
        "amplitudes",
        "1",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class"], "ProductABC");
    assert_eq!(v["report"]["abe"].as_f64().unwrap(), 0.0);
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["measure", "w2", "0.9", "0.9"],
        vec!["measure", "ghz", "abc"],
        vec![
            "measure",
            "amplitudes",
            "1",
            "1",
            "0",
            "0",
            "0",
            "0",
            "0",
            "0",
        ],
        vec!["scan-ghz", "--steps", "1"],
        vec!["haar-scatter", "--n", "0"],
        vec!["nonsense"],
    ] {
        let out = abe(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = abe(&[
        "measure",
        "amplitudes",
        "1",
        "1",
        "0",
        "0",
        "0",
        "0",
        "0",
        "0",
    ]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("squared norm"));
}

#[test]
fn numerical_failures_map_to_two() {
    let e = CliError::from(abe_core::Error::NegativeTangle { value: -1.0 });
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn classify_command() {
    let out = abe(&["classify", "ghz", "1/√2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class"], "GHZClass");
    assert_eq!(v["evidence"]["thresholds"]["tau_tol"].as_f64(), Some(1e-6));

    let bisep = abe(&[
        "classify",
        "amplitudes",
        "1/√2",
        "0",
        "0",
        "1/√2",
        "0",
        "0",
        "0",
        "0",
    ]);
    let v: Value = serde_json::from_slice(&bisep.stdout).unwrap();
    assert_eq!(v["class"], "Biseparable(C|AB)");
}

#[test]
fn scan_ghz_saturates() {
    let dir = TempDir::new("ghz");
    let path = dir.file("g.csv");
    assert!(
        abe(&["scan-ghz", "--steps", "41", "--out", path.to_str().unwrap()])
            .status
            .success()
    );
    let (meta, header, rows) = read_csv(&path);
    assert_eq!(meta["schema"], "scan-ghz/1");
    assert_eq!(rows.len(), 41);
    let l1 = col(&header, &rows, "lambda1");
    let d_e = col(&header, &rows, "abe");
    let d_s = col(&header, &rows, "delta_s");
    for ((l, e), s) in l1.iter().zip(&d_e).zip(&d_s) {
        assert!((e - s).abs() < 1e-6);
        assert!((e - binary_entropy(l * l)).abs() < 1e-6);
    }
    assert_eq!(*l1.last().unwrap(), 1.0);
    assert_eq!(*d_e.last().unwrap(), 0.0);
}

#[test]
fn scan_w_bounded() {
    let dir = TempDir::new("w");
    let path = dir.file("w.csv");
    assert!(
        abe(&["scan-w", "--steps", "41", "--out", path.to_str().unwrap()])
            .status
            .success()
    );
    let (_, header, rows) = read_csv(&path);
    let d_e = col(&header, &rows, "abe");
    let exact = col(&header, &rows, "abe_analytic");
    let max = d_e.iter().copied().fold(0.0, f64::max);
    assert!((0.14..=0.16).contains(&max), "{max}");
    for (a, b) in d_e.iter().zip(&exact) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn haar_scatter_rows() {
    let dir = TempDir::new("haar");
    let (a, b) = (dir.file("a.csv"), dir.file("b.csv"));
    for p in [&a, &b] {
        let out = abe(&[
            "haar-scatter",
            "--n",
            "200",
            "--seed",
            "99",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (meta, header, rows) = read_csv(&a);
    assert_eq!(
        header,
        [
            "index",
            "seed",
            "abe",
            "delta_s",
            "tangle",
            "r_a",
            "r_b",
            "r_c",
            "class",
            "e_f",
            "e_a",
            "argmax_theta",
            "argmax_phi"
        ]
    );
    assert_eq!(meta["seeds"]["base"], 99);
    assert_eq!(rows.len(), 200);
    assert_eq!(rows, read_csv(&b).2);
    let d_e = col(&header, &rows, "abe");
    let d_s = col(&header, &rows, "delta_s");
    for (e, s) in d_e.iter().zip(&d_s) {
        assert!(*e >= -1e-9 && *e <= s + 1e-6);
    }
    assert_eq!(col(&header, &rows, "seed")[5], 104.0);

    let one = dir.file("one.csv");
    let out = abe(&[
        "haar-scatter",
        "--n",
        "1",
        "--seed",
        "104",
        "--out",
        one.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let single = read_csv(&one).2;
    assert_eq!(single[0][1..], rows[5][1..]);
}

#[test]
fn simulate_optics_runs() {
    let dir = TempDir::new("optics");
    let p = dir.file("g.csv");
    let out = abe(&[
        "simulate-optics",
        "ghz",
        "--trials",
        "100",
        "--error-halfwidth",
        "1",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (_, header, rows) = read_csv(&p);
    assert!(header.contains(&"angle_hwp_theta".to_string()));
    for v in col(&header, &rows, "abe") {
        assert!((0.95..=1.0).contains(&v), "{v}");
    }

    let out = abe(&[
        "simulate-optics",
        "ghz",
        "--theta",
        "10",
        "--trials",
        "2",
        "--error-halfwidth",
        "0",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (_, header, rows) = read_csv(&p);
    let c = 20f64.to_radians().cos();
    for v in col(&header, &rows, "abe") {
        assert!((v - binary_entropy(c * c)).abs() < 1e-9);
    }

    let out = abe(&[
        "simulate-optics",
        "w",
        "--trials",
        "1",
        "--error-halfwidth",
        "0",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (_, header, rows) = read_csv(&p);
    assert!((col(&header, &rows, "abe")[0] - 0.1167).abs() < 1e-3);
    assert_eq!(col(&header, &rows, "fidelity")[0], 1.0);
}

#[test]
fn json_tables() {
    let out = abe(&["scan-ghz", "--steps", "3", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["rows"][2]["lambda1"].as_f64(), Some(1.0));
    assert_eq!(v["metadata"]["schema"], "scan-ghz/1");
}

#[test]
fn plots() {
    let dir = TempDir::new("plot");
    let (csv, svg) = (dir.file("h.csv"), dir.file("h.svg"));
    assert!(
        abe(&["haar-scatter", "--n", "20", "--out", csv.to_str().unwrap()])
            .status
            .success()
    );
    let out = abe(&[
        "plot",
        "--in",
        csv.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert!(text.contains("stroke-dasharray"));

    let g = dir.file("g.csv");
    assert!(
        abe(&["scan-ghz", "--steps", "5", "--out", g.to_str().unwrap()])
            .status
            .success()
    );
    let out = abe(&[
        "plot",
        "--in",
        g.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
        "--kind",
        "curve",
    ]);
    assert!(out.status.success());

    let empty = dir.file("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let out = abe(&[
        "plot",
        "--in",
        empty.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let bad = dir.file("bad.csv");
    std::fs::write(&bad, "x,y\n1,2\n").unwrap();
    let out = abe(&[
        "plot",
        "--in",
        bad.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

use std::path::Path;
use std::process::{Command, Output};

fn opent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opent"))
        .args(args)
        .env("OPENT_WORKERS", "2")
        .output()
        .expect("run opent")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn saturation_prints_estimate_and_references() {
    let o = opent(&["saturation", "--n", "21", "--m", "21"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let est: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("saturation_estimate="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((est - (441f64.ln() - 0.5)).abs() < 1e-3);
    assert!(text.contains("ln(0.6*N^2)="));
    assert!(text.contains("ln(N^2)=6.08904487545"));
}

#[test]
fn sweep_writes_one_csv_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = opent(&[
        "sweep",
        "--j1",
        "2",
        "--j2",
        "3",
        "--k",
        "1,6",
        "--eps",
        "0.1",
        "--nmax",
        "20",
        "--stride",
        "5",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["sweep_k1_eps0.1.csv", "sweep_k6_eps0.1.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,S_V,S_L");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("20,"));
        for l in &lines[1..] {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            assert!(f[1] >= 0.0 && f[1] <= 25f64.ln() + 1e-9);
            assert!(f[2] >= 0.0 && f[2] < 1.0);
        }
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# small run\nj1 = 1\nj2 = 1\nk = 3\neps = 0.5\nnmax = 100\nstride = 2\n",
    )
    .unwrap();
    let o = opent(&[
        "sweep",
        "--config",
        path_str(&cfg),
        "--nmax",
        "4",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("sweep_k3_eps0.5.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn diagonal_includes_zero_and_product_rotation_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = opent(&[
        "diagonal",
        "--j1",
        "2",
        "--j2",
        "2",
        "--alpha",
        "0.3,1",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("diagonal_j12_j22.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,S_V,S_L");
    assert_eq!(lines[1], "0,0,0");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("# U_p p=0.7 S_V=0 "));
}

#[test]
fn spectrum_writes_dump_histogram_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = opent(&[
        "spectrum",
        "--j1",
        "2",
        "--j2",
        "2,3",
        "--window-start",
        "10",
        "--window-end",
        "30",
        "--window-stride",
        "10",
        "--bins",
        "6",
        "--out",
        path_str(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("j2=2 N=5 M=5 Q=1 steps=3 eigenvalues=75"));
    assert!(out.contains("j2=3 N=5 M=7"));

    let dump = std::fs::read_to_string(dir.path().join("eigenvalues_j12_j22.txt")).unwrap();
    assert!(dump.starts_with("# N=5 M=5 Q=1 k=6 eps=1 window=10:30:10\n"));
    let mut sums = Vec::new();
    for line in dump.lines().skip(1) {
        if line.starts_with("# n=") {
            sums.push(0.0);
        } else {
            *sums.last_mut().unwrap() += line.parse::<f64>().unwrap();
        }
    }
    assert_eq!(sums.len(), 3);
    assert!(sums.iter().all(|s| (s - 1.0).abs() < 1e-10));

    let hist = std::fs::read_to_string(dir.path().join("histogram_j12_j22.csv")).unwrap();
    let rows: Vec<Vec<f64>> = hist
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    let mass: f64 = rows.iter().map(|r| r[2] * (r[1] - r[0])).sum();
    assert!(mass <= 25.0 + 1e-9);
    assert!(dir.path().join("spectrum_report.txt").exists());
}

#[test]
fn bad_input_gives_machine_readable_error() {
    let o = opent(&["sweep", "--stride", "0"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.starts_with("error kind=config message=\""), "{err}");

    let o = opent(&["saturation", "--n", "5", "--m", "3"]);
    assert!(!o.status.success());
    assert!(
        stderr(&o).starts_with("error kind=invalid_parameter"),
        "{}",
        stderr(&o)
    );

    let o = opent(&["saturation", "--config", "/nonexistent/opent.cfg"]);
    assert!(stderr(&o).starts_with("error kind=io"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "nmax = 10\nbogus = 1\n").unwrap();
    let o = opent(&["sweep", "--config", path_str(&cfg)]);
    assert!(stderr(&o).contains("unknown key `bogus`"));
}

#[test]
fn failing_points_are_reported_without_stopping_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let o = opent(&[
        "sweep",
        "--j1",
        "3",
        "--j2",
        "2",
        "--k",
        "1,2",
        "--eps",
        "0.1",
        "--nmax",
        "5",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(
        err.lines()
            .filter(|l| l.starts_with("point_failed k="))
            .count(),
        2
    );
}

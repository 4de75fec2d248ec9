use std::path::Path;
use std::process::{Command, Output};

fn rieszflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rieszflow")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn mms_times_at_r_one() {
    let (header, rows) = csv_rows(&stdout(&rieszflow(&["mms", "--r", "1", "--tau", "0.1", "--steps", "10"])));
    assert_eq!(header, ["n", "t_n"]);
    assert_eq!(rows.len(), 11);
    for row in rows {
        let n: usize = row[0].parse().unwrap();
        let t: f64 = row[1].parse().unwrap();
        assert_eq!(t, n as f64 * 0.1);
    }
    let (header, rows) =
        csv_rows(&stdout(&rieszflow(&["mms", "--r", "1.5", "--tau", "0.1", "--steps", "5", "--emit", "f-curves"])));
    assert_eq!(header, ["n", "t_n", "f_tau", "f_limit"]);
    assert_eq!(rows.len(), 6);
}

#[test]
fn equilibrium_json() {
    let text = stdout(&rieszflow(&["equilibrium", "--d", "3", "--r", "1"]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["energy"].as_f64().unwrap() + 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["variant"], "uniform_sphere");
    let text = stdout(&rieszflow(&["equilibrium", "--d", "1", "--r", "1", "--format", "csv"]));
    assert!(text.starts_with("d,r,variant,scale,energy,tau,c_tau\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(rieszflow(&[]).status.code(), Some(1));
    let out = rieszflow(&["nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(rieszflow(&["mms", "--r", "1"]).status.code(), Some(1));
    assert_eq!(rieszflow(&["mms", "--r", "2.5", "--tau", "0.1", "--steps", "3"]).status.code(), Some(2));
    assert_eq!(rieszflow(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_wraps_rows() {
    let csv = stdout(&rieszflow(&["flow", "--variant", "double-well", "--w", "0.25", "--samples", "3"]));
    let json = stdout(&rieszflow(&["flow", "--variant", "double-well", "--w", "0.25", "--samples", "3", "--format", "json"]));
    let (header, rows) = csv_rows(&csv);
    let records: Vec<serde_json::Value> = serde_json::from_str(&json).unwrap();
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(&rows) {
        for (name, cell) in header.iter().zip(row) {
            assert_eq!(rec[name].as_f64().unwrap(), cell.parse::<f64>().unwrap());
        }
    }
}

fn run_to_file(args: &[&str], path: &Path) -> Vec<u8> {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", path.to_str().unwrap()]);
    let out = rieszflow(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn reproducible_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("out.csv");
    let target = r#"{"points": [[1.0, 0.0], [0.5, 0.5]], "weights": [0.75, 0.25]}"#;
    let base = ["particles", "--d", "2", "--M", "40", "--steps", "25", "--snapshot-every", "5", "--target", target, "--seed", "9"];
    let first = run_to_file(&base, &file);
    assert_eq!(first, run_to_file(&base, &file));
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let mut four = base.to_vec();
    four.extend(["--threads", "4"]);
    assert_eq!(run_to_file(&one, &file), run_to_file(&four, &file));
    assert_eq!(first, run_to_file(&one, &file));
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("step,i,x1,x2\n"));
    assert_eq!(text.lines().count(), 1 + 6 * 40);
}

#[test]
fn particles_energy_trace() {
    let dir = tempfile::tempdir().unwrap();
    let energy = dir.path().join("energy.csv");
    let target_file = dir.path().join("target.json");
    std::fs::write(&target_file, "[[0.0], [1.0]]").unwrap();
    stdout(&rieszflow(&[
        "particles",
        "--d",
        "1",
        "--M",
        "20",
        "--steps",
        "100",
        "--snapshot-every",
        "50",
        "--target",
        target_file.to_str().unwrap(),
        "--start",
        "0.5",
        "--energy",
        energy.to_str().unwrap(),
    ]));
    let (header, rows) = csv_rows(&std::fs::read_to_string(&energy).unwrap());
    assert_eq!(header, ["step", "model_time", "discrepancy"]);
    assert_eq!(rows.len(), 3);
    let d: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(d[2] < d[0]);
}

#[test]
fn disc_from_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let mu = dir.path().join("mu.csv");
    let nu = dir.path().join("nu.csv");
    std::fs::write(&mu, "x1,w\n0,0.5\n1,0.5\n").unwrap();
    std::fs::write(&nu, "x1,w\n0.5,1\n").unwrap();
    let text = stdout(&rieszflow(&["disc", "--mu", mu.to_str().unwrap(), "--nu", nu.to_str().unwrap()]));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header.last().unwrap(), "discrepancy");
    // D² = −½·½ + ½ − 0 = ¼
    let d: f64 = rows[0][3].parse().unwrap();
    assert!((d - 0.25).abs() < 1e-15);
}

#[test]
fn flow1d_frames() {
    let text = stdout(&rieszflow(&["flow1d", "--n", "8", "--dt", "0.01", "--steps", "100", "--record-every", "50"]));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["step", "s", "q"]);
    assert_eq!(rows.len(), 3 * 8);
    let last: Vec<f64> = rows[16..].iter().map(|r| r[2].parse().unwrap()).collect();
    // at t = 1 the analytic state is ½λ[−1, 0] + ½δ₀
    assert!(last.windows(2).all(|w| w[0] <= w[1]));
    assert!((last[7]).abs() < 0.02 && (last[0] + 0.875).abs() < 0.02);
}

#[test]
fn halftone_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("img.pgm");
    std::fs::write(&img, rieszflow::halftone::GrayImage::horizontal_gradient(16, 16).to_binary()).unwrap();
    let svg = dir.path().join("dots.svg");
    let dots = dir.path().join("dots.csv");
    let text = stdout(&rieszflow(&[
        "halftone",
        "--input",
        img.to_str().unwrap(),
        "--dots",
        "50",
        "--steps",
        "60",
        "--svg",
        svg.to_str().unwrap(),
        "--csv",
        dots.to_str().unwrap(),
    ]));
    let (_, energy) = csv_rows(&text);
    let first: f64 = energy[0][2].parse().unwrap();
    let last: f64 = energy.last().unwrap()[2].parse().unwrap();
    assert!(last < first);
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<circle").count(), 50);
    assert_eq!(std::fs::read_to_string(&dots).unwrap().lines().count(), 51);
    let missing = dir.path().join("none.pgm");
    let out = rieszflow(&["halftone", "--input", missing.to_str().unwrap(), "--dots", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

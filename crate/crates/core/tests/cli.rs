use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hdom(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdom"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("polydisc11.json"), r#"{"type":"polydisc","r":[1,1]}"#).unwrap();
    fs::write(dir.path().join("ball.json"), r#"{"type":"ball","r":1}"#).unwrap();
    dir
}

#[test]
fn separates_reports_verdicts() {
    let dir = setup();
    let o = hdom(dir.path(), &["separates", "--domain", "polydisc11.json", "--z", "0.6,0.6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "NotSeparated");
    let o = hdom(
        dir.path(),
        &["separates", "--domain", "polydisc11.json", "--z", " 0.3+0.1i , -0.2i ", "--certificate", "c.csv"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Separated");
    let cert = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert!(cert.starts_with("re,im\n"));
    assert!(cert.lines().count() > 4);
}

#[test]
fn invalid_input_exits_2() {
    let dir = setup();
    let o = hdom(dir.path(), &["separates", "--domain", "missing.json", "--z", "0.6,0.6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hdom(dir.path(), &["separates", "--domain", "polydisc11.json", "--z", "0.6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hdom(dir.path(), &["hstar", "--g", "polydisc11.json", "--grid", "100", "--out", "s.csv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hdom(dir.path(), &["hstar", "--g", "polydisc11.json", "--out", "polydisc11.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hdom(dir.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn undetermined_exits_1() {
    let dir = setup();
    // A tiny grid without refinement cannot resolve a point on the threshold.
    let o = Command::new(env!("CARGO_BIN_EXE_hdom"))
        .current_dir(dir.path())
        .env("HD_MAX_REFINE", "0")
        .args(["separates", "--domain", "polydisc11.json", "--z", "0.5,0.5", "--ns", "16", "--ntheta", "16"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "Undetermined");
}

#[test]
fn star_of_polydiscs_is_the_unit_square() {
    let dir = setup();
    let args = [
        "star", "--d", "polydisc11.json", "--g", "polydisc11.json", "--grid", "64", "--out", "s.csv", "--svg", "s.svg",
    ];
    let o = hdom(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,y,state"));
    let rows: Vec<(f64, f64, String)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].to_string())
        })
        .collect();
    assert_eq!(rows.len(), 64 * 64);
    let inside = rows.iter().filter(|r| r.2 == "IN").count() as f64 / rows.len() as f64;
    assert!(inside > 0.85, "IN fraction {inside}");
    for (x, y, s) in &rows {
        if x.max(*y) < 0.85 {
            assert_eq!(s, "IN", "({x}, {y})");
        }
        assert_ne!(s, "OUT");
    }
    let svg = fs::read_to_string(dir.path().join("s.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("class=\"IN\"") && svg.contains("url(#hatch)"));

    // byte-identical on a second run
    fs::rename(dir.path().join("s.csv"), dir.path().join("first.csv")).unwrap();
    assert_eq!(hdom(dir.path(), &args).status.code(), Some(0));
    assert_eq!(fs::read(dir.path().join("first.csv")).unwrap(), fs::read(dir.path().join("s.csv")).unwrap());
}

#[test]
fn hstar_writes_a_triangle() {
    let dir = setup();
    let o = hdom(dir.path(), &["hstar", "--g", "polydisc11.json", "--grid", "32", "--out", "h.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("h.csv")).unwrap();
    for l in csv.lines().skip(1) {
        let f: Vec<&str> = l.split(',').collect();
        let (x, y): (f64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let h = 0.5 / 32.0;
        if x + y < 1.0 - 4.0 * h {
            assert_eq!(f[2], "IN", "({x}, {y})");
        } else if x + y > 1.0 + 2.0 * h {
            assert_eq!(f[2], "OUT", "({x}, {y})");
        }
    }
}

#[test]
fn dual_of_polydisc_is_the_simplex() {
    let dir = setup();
    let o = hdom(dir.path(), &["dual", "--domain", "polydisc11.json", "--samples", "9", "--out", "d.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a,b"));
    let mut n = 0;
    for l in lines {
        let f: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((f[0] + f[1] - 1.0).abs() < 1e-12);
        n += 1;
    }
    assert_eq!(n, 9);
}

#[test]
fn series_subcommands() {
    let dir = setup();
    let o = hdom(dir.path(), &["series", "hxi", "--xi", "1,1", "--cap", "3", "--out", "h.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let h = fs::read_to_string(dir.path().join("h.csv")).unwrap();
    assert!(h.starts_with("a1,a2,re,im\n"));
    assert!(h.contains("\n2,1,12.0,0.0\n"));

    fs::write(dir.path().join("f.csv"), "a1,a2,re,im\n1,0,1,0\n1,1,2,0\n").unwrap();
    let o = hdom(dir.path(), &["series", "hadamard", "--f", "h.csv", "--g", "f.csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "a1,a2,re,im\n1,0,2.0,0.0\n1,1,12.0,0.0\n");

    let o = hdom(dir.path(), &["series", "lambda", "--f", "f.csv"]);
    assert_eq!(stdout(&o), "a1,a2,re,im\n1,0,2.0,0.0\n1,1,4.0,0.0\n");

    let o = hdom(dir.path(), &["series", "contour", "--f", "f.csv", "--z", "0.5,0.7"]);
    assert_eq!(o.status.code(), Some(0));
    // 2·0.5 + 6·2·0.35
    let v: f64 = stdout(&o).split(',').next().unwrap().parse().unwrap();
    assert!((v - 5.2).abs() < 1e-10, "{v}");

    let o = hdom(dir.path(), &["series", "torus", "--f", "f.csv", "--g", "f.csv", "--rho", "1", "--z", "0.3,0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).split(',').next().unwrap().parse().unwrap();
    assert!((v - (0.3 + 4.0 * 0.15)).abs() < 1e-12, "{v}");

    let o = hdom(dir.path(), &["series", "contour", "--f", "f.csv", "--z", "0.5,0.7", "--center", "1", "--radius", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_contour_report_is_reproducible() {
    let dir = setup();
    let args = ["verify", "--suite", "contour", "--seed", "4", "--trials", "10", "--report", "r.json"];
    let o = hdom(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let first = fs::read(dir.path().join("r.json")).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["summary"]["total"], 13);
    assert_eq!(v["summary"]["ok"], true);
    assert_eq!(v["summary"]["controls_failed"], 1);
    assert_eq!(hdom(dir.path(), &args).status.code(), Some(0));
    assert_eq!(first, fs::read(dir.path().join("r.json")).unwrap());
}

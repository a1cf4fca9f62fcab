use std::path::Path;
use std::process::{Command, Output};

fn wp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wp-geom")).args(args).output().expect("spawn wp-geom")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(out)).expect("valid JSON")
}

#[test]
fn teich_dist_of_i_and_2i() {
    let v = json(&wp(&["torus", "teich-dist", "--tau1", "i", "--tau2", "2i", "--cutoff", "20"]));
    let d = v["value"].as_f64().unwrap();
    assert!((d - 0.5 * 2f64.ln()).abs() < 1e-12, "{d}");
    assert_eq!(v["argmax_class"]["p"], 1);
    assert_eq!(v["argmax_class"]["q"], 0);
}

#[test]
fn cusp_curvature_at_one() {
    let v = json(&wp(&["cusp", "curvature", "--u", "1", "--prefactor", "1"]));
    assert!((v["value"].as_f64().unwrap() + 6.0).abs() < 1e-12);
}

#[test]
fn numbers_round_trip_through_json() {
    let out = wp(&["torus", "dist", "--tau1", "0.3+1.1i", "--tau2", "-0.7+2.9i"]);
    let raw = stdout(&out);
    let text = raw.trim().trim_start_matches("{\"value\":").trim_end_matches('}');
    // 17 significant digits in scientific notation.
    assert_eq!(text.split('e').next().unwrap().replace(['.', '-'], "").len(), 17, "{text}");
    assert_eq!(text.parse::<f64>().unwrap(), json(&out)["value"].as_f64().unwrap());
}

#[test]
fn energy_profile_csv_and_json_agree() {
    let args = ["energy", "profile", "--tau0", "i", "--h", "0.3,-0.4", "--range", "-1:1", "--samples", "11"];
    let csv = stdout(&wp(&args));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,E,E_second"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][2], "");
    let js = json(&wp(&[&args[..], &["--format", "json"]].concat()));
    let recs = js.as_array().unwrap();
    assert_eq!(recs.len(), 11);
    assert!(recs[0]["E_second"].is_null());
    for (r, row) in recs.iter().zip(&rows) {
        assert_eq!(r["E"].as_f64().unwrap(), row[1].parse::<f64>().unwrap());
    }
}

#[test]
fn empty_cusp_path_is_header_only() {
    let out = wp(&["cusp", "geodesic", "--u0", "1", "--v", "0,0", "--T", "1", "--samples", "0"]);
    let text = stdout(&out);
    if out.status.success() {
        assert!(text.starts_with("t,u,theta,v_radial,v_angular\n"));
    } else {
        assert_eq!(out.status.code(), Some(2));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(wp(&["torus", "dist", "--tau1", "i"]).status.code(), Some(2));
    assert_eq!(wp(&["torus", "dist", "--tau1", "-i", "--tau2", "i"]).status.code(), Some(2));
    assert_eq!(wp(&["coxeter", "reduce", "--word", "s9"]).status.code(), Some(2));
    assert_eq!(wp(&["cat0", "check", "--space", "moon"]).status.code(), Some(2));
    let missing = wp(&["funk", "--polytope", "/definitely/not/here", "--x", "0", "--y", "0"]);
    assert_eq!(missing.status.code(), Some(3));
    assert_eq!(wp(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_is_io_error() {
    let out = wp(&["cusp", "curvature", "--u", "1", "--output", "/definitely/not/here/x.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fr.json");
    let pts = dir.path().join("pts.txt");
    std::fs::write(&pts, "0 0\n1 0\n0.5 0.8660254037844386\n").unwrap();
    let args = ["cat0", "fr", "--space", "euclid", "--points", pts.to_str().unwrap()];
    let direct = stdout(&wp(&args));
    let out = wp(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(Path::new(&path)).unwrap(), direct);
    let v: serde_json::Value = serde_json::from_str(&direct).unwrap();
    assert_eq!(v["report"]["implied_k"], 2);
}

#[test]
fn runs_are_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_wp-geom"))
            .args(["cat0", "check", "--space", "cusp", "--trials", "300", "--seed", "7"])
            .env("WP_GEOM_THREADS", threads)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run("0").status.code(), Some(2));
}

#[test]
fn funk_modes_on_the_square() {
    let dir = tempfile::tempdir().unwrap();
    let sq = dir.path().join("square.txt");
    std::fs::write(&sq, "1 0 1\n-1 0 1\n0 1 1\n0 -1 1\n").unwrap();
    let sq = sq.to_str().unwrap();
    let value = |mode: &str, x: &str, y: &str| {
        json(&wp(&["funk", "--polytope", sq, "--x", x, "--y", y, "--mode", mode]))["value"].as_f64().unwrap()
    };
    // F(0, y) = log(1/(1-y₁)) toward the facet x₁ = 1.
    assert!((value("sup", "0,0", "0.5,0") - 2f64.ln()).abs() < 1e-14);
    assert!((value("ray", "0,0", "0.5,0") - 2f64.ln()).abs() < 1e-14);
    assert!((value("hilbert", "0,0", "0.5,0") - 0.5 * 3f64.ln()).abs() < 1e-14);
}

#[test]
fn verify_reports_json_and_exit_status() {
    let out = wp(&["verify", "--suite", "1,11", "--seed", "5"]);
    let v = json(&out);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    assert_eq!(v["pass"], true);
    assert_eq!(wp(&["verify", "--suite", "99"]).status.code(), Some(2));
}

#[test]
fn coxeter_reduce_default_system() {
    let v = json(&wp(&["coxeter", "reduce", "--word", "s0,s0,s1,s2,s1"]));
    assert_eq!(v["normal_form"], "s2");
    let v = json(&wp(&["coxeter", "enumerate", "--maxlen", "2"]));
    assert_eq!(v["growth"][0], 1);
}

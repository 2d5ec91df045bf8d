use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rootlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootlab"))
        .args(args)
        .env_remove("ROOTLAB_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn quad_grid_rows() {
    let out = rootlab(&["quad", "--selector", "empty", "--box", "-4:4:-4:4", "--grid", "100"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a0,a1,region,re,im"));
    assert_eq!(lines.count(), 10_000);
}

#[test]
fn quad_known_points() {
    let out = rootlab(&["quad", "--selector", "empty", "--box", "-4:4:-4:4", "--grid", "9"]);
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "-1,0,plus,1,0"), "{text}");
    assert!(text.lines().any(|l| l == "1,0,minus,0,1"), "{text}");
}

#[test]
fn quad_rejects_bad_flags() {
    assert_eq!(code(&rootlab(&["quad", "--selector", "sideways"])), 2);
    assert_eq!(code(&rootlab(&["quad", "--selector", "plus", "--box", "1:2:3"])), 2);
    assert_eq!(code(&rootlab(&["quad", "--selector", "plus", "--grid", "1"])), 2);
}

#[test]
fn quad_custom_witness() {
    let dir = tempfile::tempdir().unwrap();
    let sel = write(dir.path(), "sel.json", r#"{"kind": "half_plane", "normal": [0.0, 1.0], "offset": 0.0}"#);
    let out = rootlab(&["quad", "--custom", &sel, "--grid", "21", "--witness"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["found"], true);
    assert_eq!(v["report"]["verdict"], "Discontinuous");

    let canon = write(dir.path(), "canon.json", r#"{"kind": "canonical", "id": "PlusSet"}"#);
    let v = json(&rootlab(&["quad", "--custom", &canon, "--grid", "21", "--witness"]));
    assert_eq!(v["found"], false);
}

#[test]
fn track_quad_loop() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let summary = dir.path().join("s.json");
    let out = rootlab(&[
        "track",
        "--preset",
        "quad_complex_loop",
        "--out",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,re_1,im_1,re_2,im_2\n"));
    let s: Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert!(s["rho_max"].as_f64().unwrap() <= 1e-8);
    // trajectories follow +-e^{it/2}
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (c, s) = ((v[0] / 2.0).cos(), (v[0] / 2.0).sin());
        let d1 = (v[1] - c).hypot(v[2] - s).min((v[1] + c).hypot(v[2] + s));
        assert!(d1 < 1e-8, "{line}");
    }
}

#[test]
fn track_cubic_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "cubic.json",
        r#"{"degree": 3, "field": "real", "samples": [
            {"t": 0.01, "coeffs": [[0, 0], [-0.01, 0], [0, 0]]},
            {"t": 1.0, "coeffs": [[0, 0], [-1.0, 0], [0, 0]]}]}"#,
    );
    let out = rootlab(&["track", "--file", &f, "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let end = v["summary"]["final_roots"].as_array().unwrap();
    assert_eq!(end.len(), 3);
    let mut re: Vec<f64> = end.iter().map(|z| z[0].as_f64().unwrap()).collect();
    re.sort_by(f64::total_cmp);
    for (a, b) in re.iter().zip([-1.0, 0.0, 1.0]) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn track_constant_loop_does_not_move() {
    let out = rootlab(&["track", "--preset", "constant_loop:2", "--format", "json"]);
    assert_eq!(json(&out)["summary"]["delta_max"].as_f64(), Some(0.0));
}

#[test]
fn track_collision_exits_3() {
    let out = rootlab(&["track", "--preset", "cubic_fold"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn malformed_path_file_names_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write(dir.path(), "a.json", "{\"degree\": 2,\n \"field\": \"real\",\n \"samples\": [}");
    let out = rootlab(&["track", "--file", &bad_json]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let bad_t = write(
        dir.path(),
        "b.json",
        r#"{"degree": 1, "field": "real", "samples": [{"t": 1, "coeffs": [[0, 0]]}, {"t": 0, "coeffs": [[1, 0]]}]}"#,
    );
    let out = rootlab(&["track", "--file", &bad_t]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("samples[1].t"));

    let bad_field = write(
        dir.path(),
        "c.json",
        r#"{"degree": 1, "field": "real", "samples": [{"t": 0, "coeffs": [[0, 1]]}, {"t": 1, "coeffs": [[1, 0]]}]}"#,
    );
    assert_eq!(code(&rootlab(&["track", "--file", &bad_field])), 2);
}

#[test]
fn monodromy_presets() {
    let v = json(&rootlab(&["monodromy", "--preset", "quad_complex_loop"]));
    assert_eq!(v["notation"], "(1 2)");
    assert_eq!(v["has_fixed_point"], false);
    assert_eq!(code(&rootlab(&["monodromy", "--preset", "quartic_real_loop"])), 3);
    assert_eq!(code(&rootlab(&["monodromy", "--preset", "cubic_fold"])), 2);
}

#[test]
fn certify_deg2c() {
    let out = rootlab(&["certify", "deg2c"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["verdict"], "ObstructionCertified");
    assert_eq!(v["permutation"], "(1 2)");
}

#[test]
fn certify_deg4r_endpoint_table() {
    let v = json(&rootlab(&["certify", "deg4r"]));
    assert_eq!(v["verdict"], "ObstructionCertified");
    let rows = v["endpoints"].as_array().unwrap();
    let want = [(0.0, 2.0), (2.0, 0.0), (0.0, -2.0), (-2.0, 0.0)];
    for (row, (s, e)) in rows.iter().zip(want) {
        assert!((row["start"][1].as_f64().unwrap() - s).abs() < 1e-9);
        assert!((row["end"][1].as_f64().unwrap() - e).abs() < 1e-9);
        assert!(row["start"][0].as_f64().unwrap().abs() < 1e-9);
    }
}

#[test]
fn certify_deg5r_chain() {
    let v = json(&rootlab(&["certify", "deg5r"]));
    assert_eq!(v["verdict"], "ObstructionCertified");
    let chain: Vec<&str> = v["chain"].as_array().unwrap().iter().map(|l| l["locked"].as_str().unwrap()).collect();
    assert_eq!(chain, ["x5", "x5", "x4"]);
    assert!(v["contradiction"].as_str().unwrap().contains("|0 - 2π|"));
}

#[test]
fn certify_input_errors() {
    assert_eq!(code(&rootlab(&["certify", "deg9"])), 2);
    let out = rootlab(&["certify", "deg4r", "--eps-end-fraction", "0.6"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn recheck_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.json");
    assert_eq!(code(&rootlab(&["certify", "deg5r", "--out", p.to_str().unwrap()])), 0);
    let out = rootlab(&["certify", "--recheck", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["consistent"], true);

    let mut v: Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    v["checks"][0]["margin"] = Value::from(1.0);
    let tampered = write(dir.path(), "t.json", &v.to_string());
    let out = rootlab(&["certify", "--recheck", &tampered]);
    assert_eq!(code(&out), 4);
    let r = json(&out);
    assert_eq!(r["consistent"], false);
    assert_eq!(r["recomputed"], "Inconclusive");
}

#[test]
fn stability_degree_one() {
    let v = json(&rootlab(&["stability", "--n", "1", "--box-a", "-1:-1", "--box-w", "1:1", "--xi-max", "5"]));
    // (1 + xi^0) = 2 in the denominator
    assert!((v["report"]["c_tilde"].as_f64().unwrap() - 0.5).abs() < 1e-6);
}

#[test]
fn stability_raster_all_stable() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let v = json(&rootlab(&[
        "stability",
        "--n",
        "2",
        "--box-a",
        "-2:-0.5:-2:-0.5",
        "--hurwitz-raster",
        "--raster-csv",
        csv.to_str().unwrap(),
        "--grid-a",
        "3",
        "--grid-w",
        "2",
        "--xi-max",
        "10",
    ]));
    assert_eq!(v["hurwitz_raster"]["all_stable"], true);
    assert!(v["report"]["kappa"].as_f64().unwrap() > 0.0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("a0,a1,stable\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1")));
}

#[test]
fn stability_unstable_box() {
    let v = json(&rootlab(&[
        "stability", "--n", "2", "--box-a", "-1:1:-1:1", "--grid-a", "3", "--grid-w", "2", "--xi-max", "5",
    ]));
    assert!(v["report"]["kappa"].is_null());
    assert!(v["report"]["c_tilde"].as_f64().unwrap().is_finite());
    assert_eq!(code(&rootlab(&["stability", "--n", "2", "--box-a", "-1:1"])), 2);
}

#[test]
fn solve_flags_double_root() {
    let v = json(&rootlab(&["solve", "--coeffs", "1,-2"]));
    assert_eq!(v["roots"]["clustered"], serde_json::json!([true, true]));
}

#[test]
fn output_is_byte_identical() {
    let a = rootlab(&["certify", "deg2c"]);
    let b = rootlab(&["certify", "deg2c"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_from_environment_and_config() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_rootlab"));
        cmd.env_remove("ROOTLAB_SEED");
        if let Some(s) = env {
            cmd.env("ROOTLAB_SEED", s);
        }
        cmd.args(extra).args(["solve", "--coeffs", "0,0,0,1"]);
        cmd.output().unwrap().stdout
    };
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"seed": 5}"#);
    let default = run(None, &[]);
    let env5 = run(Some("5"), &[]);
    let cfg5 = run(None, &["--config", &cfg]);
    assert_eq!(env5, cfg5);
    assert_eq!(default, run(Some("0"), &[]));
    // flag beats config
    assert_eq!(run(None, &["--config", &cfg, "--seed", "0"]), default);

    let bad = write(dir.path(), "bad.json", r#"{"sed": 5}"#);
    let out = rootlab(&["--config", &bad, "solve", "--coeffs", "1"]);
    assert_eq!(code(&out), 2);
}

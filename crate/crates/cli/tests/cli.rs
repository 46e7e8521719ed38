use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rodov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rodov"))
        .args(args)
        .env_remove("RODOV_LOG")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn table(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn p(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

/// ψ1(0,0; ·) on [0, 4): the unit triangle wave.
fn triangle(t: f64) -> f64 {
    let t = t.rem_euclid(4.0);
    if t < 1.0 {
        t
    } else if t < 3.0 {
        2.0 - t
    } else {
        t - 4.0
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn spline_r2_starts_at_minus_half() {
    let o = rodov(&["spline", "--r", "2", "--a1", "0", "--a2", "0", "-n", "5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("t,value\n"));
    let rows = table(&text);
    assert_eq!(rows.len(), 5);
    // zero-mean antiderivative of the triangle wave, by nested quadrature
    let prim = |t: f64| simpson(triangle, 0.0, t, 400);
    let mean = simpson(prim, 0.0, 4.0, 400) / 4.0;
    // Simpson loses order at the kinks of the triangle
    for row in &rows {
        assert!((row[1] - (prim(row[0]) - mean)).abs() < 1e-6, "{row:?}");
    }
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] + 0.5).abs() < 1e-12);
    // 17 significant digits
    assert!(text.lines().nth(1).unwrap().contains("-5.0000000000000000e-1"));
}

#[test]
fn spline_plateau_rows() {
    let o = rodov(&["spline", "--r", "1", "--a1", "1", "--a2", "2", "-n", "9"]);
    assert_eq!(code(&o), 0);
    let rows = table(&stdout(&o));
    let plateau: Vec<_> = rows.iter().filter(|r| r[0] > 2.0 && r[0] < 4.0).collect();
    assert_eq!(plateau.len(), 2);
    assert!(plateau.iter().all(|r| r[1] == 1.0));
}

#[test]
fn spline_zero_samples_is_config_error() {
    assert_eq!(code(&rodov(&["spline", "--r", "2", "-n", "0"])), 2);
    assert_eq!(code(&rodov(&["spline", "--r", "0"])), 2);
    assert_eq!(code(&rodov(&["spline", "--r", "2", "--a1", "-1"])), 2);
    assert_eq!(code(&rodov(&["spline", "--r", "2", "--lambda", "0"])), 2);
}

#[test]
fn spline_sidecar_reproduces_samples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("psi.csv");
    let o = rodov(&[
        "spline", "--r", "3", "--a1", "0.5", "--a2", "1.5", "--b", "2", "--lambda", "3", "-n", "64", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let rows = table(&fs::read_to_string(&out).unwrap());
    let side: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("psi.json")).unwrap()).unwrap();
    assert_eq!(p(&side["period"]), 3.0);
    assert_eq!(p(&side["params"]["lambda"]), 3.0);
    let bps: Vec<f64> = side["breakpoints"].as_array().unwrap().iter().map(p).collect();
    let segs: Vec<Vec<f64>> = side["segments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_array().unwrap().iter().map(p).collect())
        .collect();
    for row in rows {
        let i = bps.iter().rposition(|&b| b <= row[0]).unwrap();
        let h = row[0] - bps[i];
        let v = segs[i].iter().rev().fold(0.0, |acc, c| acc * h + c);
        assert!((v - row[1]).abs() < 1e-12, "{row:?} vs {v}");
    }
}

#[test]
fn norms_triangle_wave() {
    let o = rodov(&["norms", "--r", "1", "--a1", "0", "--a2", "0", "--b", "1", "--lambda", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("k,norm"));
    let rows = table(&text);
    assert_eq!(rows, vec![vec![0.0, 1.0], vec![1.0, 1.0]]);
}

#[test]
fn norms_match_sampled_maxima() {
    let shape = ["--r", "3", "--a1", "1", "--a2", "1", "--b", "1", "--lambda", "8"];
    let o = rodov(&[&["norms"], &shape[..]].concat());
    assert_eq!(code(&o), 0);
    let rows = table(&stdout(&o));
    for k in 0..=3 {
        let kk = k.to_string();
        let s = rodov(&[&["spline", "--k", &kk, "-n", "8000"], &shape[..]].concat());
        let grid = table(&stdout(&s)).iter().fold(0.0f64, |m, r| m.max(r[1].abs()));
        assert!((rows[k][1] - grid).abs() < 1e-6, "k = {k}: {} vs {grid}", rows[k][1]);
    }
    // the construction gives 35/24 here
    assert!((rows[0][1] - 35.0 / 24.0).abs() < 1e-12);
    assert_eq!(&rows[1..].iter().map(|r| r[1]).collect::<Vec<_>>(), &[1.0, 1.0, 1.0]);
}

#[test]
fn norms_top_row_is_abs_b() {
    for (r, b) in [("2", "-2.5"), ("4", "0.75"), ("6", "3")] {
        let o = rodov(&["norms", "--r", r, "--a1", "0.3", "--a2", "1.7", "--b", b, "--lambda", "2.2"]);
        let rows = table(&stdout(&o));
        let last = rows.last().unwrap();
        assert_eq!(last[0], r.parse::<f64>().unwrap());
        assert!((last[1] - b.parse::<f64>().unwrap().abs()).abs() < 1e-12);
    }
}

#[test]
fn match_case_a_fixture_and_round_trip() {
    let o = rodov(&["match", "--case", "a", "--r", "2", "--targets", "1.5,1,1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!((p(&v["a2"]) - 2.0).abs() < 1e-6);
    assert!((p(&v["lambda"]) - 8.0).abs() < 1e-6);
    assert!((p(&v["b"]) - 1.0).abs() < 1e-6);
    assert_eq!(p(&v["a1"]), 0.0);
    assert_eq!(v["case"], "a");

    // the emitted JSON is accepted back as a parameter file
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    fs::write(&path, &o.stdout).unwrap();
    let n = rodov(&["norms", "--params", path.to_str().unwrap()]);
    assert_eq!(code(&n), 0);
    let rows = table(&stdout(&n));
    for (k, want) in [(0, 1.5), (1, 1.0), (2, 1.0)] {
        assert!((rows[k][1] - want).abs() < 1e-9);
    }
}

#[test]
fn match_case_b_and_c() {
    let o = rodov(&["match", "--case", "b", "--r", "3", "--targets", "0.5833333333333334,0.5,1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!((p(&v["a1"]) - 1.0).abs() < 1e-6 && (p(&v["lambda"]) - 6.0).abs() < 1e-6);
    assert!(v["residuals"].as_object().unwrap().values().all(|r| p(r) <= 1e-8));

    let o = rodov(&["match", "--case", "c", "--r", "3", "--targets", "1.4583333333333333,1,1,1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for (key, want) in [("a1", 1.0), ("a2", 1.0), ("lambda", 8.0), ("b", 1.0)] {
        assert!((p(&v[key]) - want).abs() < 1e-6, "{key}");
    }
}

#[test]
fn match_exit_codes() {
    assert_eq!(code(&rodov(&["match", "--case", "a", "--r", "2", "--targets", "0.4,1,1"])), 3);
    assert_eq!(code(&rodov(&["match", "--case", "a", "--r", "2", "--targets", "1,1"])), 2);
    assert_eq!(code(&rodov(&["match", "--case", "b", "--r", "2", "--targets", "1,1,1"])), 2);
    assert_eq!(code(&rodov(&["match", "--case", "d", "--r", "2", "--targets", "1,1,1"])), 2);
    assert_eq!(code(&rodov(&["match", "--case", "a", "--r", "2", "--targets", "1.5,-1,1"])), 2);
}

#[test]
fn rearrange_triangle_is_one_minus_u() {
    let o = rodov(&["rearrange", "--r", "2", "-n", "257", "--unit"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("u,r,cumulative"));
    let rows = table(&text);
    assert_eq!(rows[0][2], 0.0);
    for row in &rows {
        assert!((row[1] - (1.0 - row[0])).abs() < 1e-8);
        assert!((row[2] - (row[0] - row[0] * row[0] / 2.0)).abs() < 1e-12);
    }
}

#[test]
fn rearrange_constant_input() {
    let rows = table(&stdout(&rodov(&["rearrange", "--r", "1", "-n", "11"])));
    assert!(rows[..rows.len() - 1].iter().all(|r| r[1] == 1.0));
    assert_eq!(rows[0][2], 0.0);
    assert!((rows.last().unwrap()[2] - 4.0).abs() < 1e-12);
}

#[test]
fn rearrange_trig_input_preserves_l1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.json");
    fs::write(&path, r#"{"period": 1, "cos": [0.3, 1.0], "sin": [0.0, 0.5]}"#).unwrap();
    let o = rodov(&["rearrange", "--input", path.to_str().unwrap(), "-n", "65"]);
    assert_eq!(code(&o), 0);
    let rows = table(&stdout(&o));
    // |x'| = 2π·|-sin 2πt + 0.5 cos 2πt| has integral 4·sqrt(1.25)
    let total = rows.last().unwrap()[2];
    assert!((total - 4.0 * 1.25f64.sqrt()).abs() < 1e-9, "{total}");
    assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1]));
}

#[test]
fn verify_comparison_suite_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = rodov(&[
            "verify", "--suite", "comparison", "--case", "a", "--trials", "100", "--seed", "7", "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        fs::read(out).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["suites"][0]["violations"], 0);
    assert!(v["suites"][0]["worst"]["reading"].as_str().unwrap().contains("Psi"));
}

#[test]
fn verify_all_suites_small_run() {
    let o = rodov(&["verify", "--trials", "4", "--seed", "11"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["suites"].as_array().unwrap().len(), 21);
}

#[test]
fn verify_self_reproduces_equality() {
    for shape in [
        ["--r", "4", "--a1", "0", "--a2", "1.5", "--b", "-1.2", "--lambda", "0.7"],
        ["--r", "5", "--a1", "2", "--a2", "0", "--b", "0.8", "--lambda", "1"],
        ["--r", "4", "--a1", "1", "--a2", "2", "--b", "1.5", "--lambda", "2"],
    ] {
        let o = rodov(&[&["verify", "--self", "--suite", "all"], &shape[..]].concat());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v = json(&o);
        for case in v["cases"].as_array().unwrap() {
            for c in case["checks"].as_array().unwrap() {
                assert_eq!(c["pass"], true);
                if c["name"] != "sign_changes" {
                    let rel = p(&c["worst_slack"]).abs() / p(&c["scale"]);
                    assert!(rel <= 1e-9, "{}: {rel:e}", c["name"]);
                }
            }
        }
    }
}

#[test]
fn verify_config_errors() {
    assert_eq!(code(&rodov(&["verify", "--suite", "nonsense"])), 2);
    assert_eq!(code(&rodov(&["verify", "--case", "q"])), 2);
    assert_eq!(code(&rodov(&["verify", "--trials", "0"])), 2);
    assert_eq!(code(&rodov(&["verify", "--self"])), 2);
    assert_eq!(code(&rodov(&["verify", "--self", "--r", "1"])), 2);
    assert_eq!(code(&rodov(&["verify", "--input", "/nonexistent.json", "--r", "3"])), 2);
}

fn write_trig(dir: &Path, body: &str) -> String {
    let path = dir.join("x.json");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_user_input() {
    let dir = tempfile::tempdir().unwrap();
    let small = write_trig(dir.path(), r#"{"period": 1, "cos": [0, 1e-4], "sin": [0, 0, 2e-5]}"#);
    let shape = ["--r", "4", "--a1", "0", "--a2", "1", "--b", "1", "--lambda", "1", "--case", "a"];
    let o = rodov(&[&["verify", "--suite", "comparison", "--input", &small], &shape[..]].concat());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["input"]["kind"], "trig");
    assert_eq!(v["checks"][0]["report"]["pass"], true);

    let o = rodov(&[&["verify", "--suite", "ligun", "--p", "2", "--input", &small], &shape[..]].concat());
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["checks"].as_array().unwrap().len(), 2);

    let big = write_trig(dir.path(), r#"{"period": 1, "cos": [0, 1.0]}"#);
    let o = rodov(&[&["verify", "--suite", "comparison", "--input", &big], &shape[..]].concat());
    assert_eq!(code(&o), 5);
    assert!(json(&o)["checks"][0]["error"].as_str().unwrap().contains("hypothesis"));

    let bad = write_trig(dir.path(), r#"{"period": -1, "cos": [0, 1.0]}"#);
    assert_eq!(code(&rodov(&[&["verify", "--input", &bad], &shape[..]].concat())), 2);
}

#[test]
fn log_level_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_rodov"))
        .args(["verify", "--suite", "comparison", "--case", "b", "--trials", "2"])
        .env("RODOV_LOG", "info")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("INFO"));
}

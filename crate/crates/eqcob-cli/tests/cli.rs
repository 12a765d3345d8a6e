use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqcob")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("eqcob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn fgl_outputs() {
    let o = run(&["fgl", "inverse", "--order", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("-u - 2 m1 u^2 - 4 m1^2 u^3"));
    assert_eq!(stdout(&run(&["fgl", "a", "1", "1"])).trim(), "-2 m1");
    assert_eq!(stdout(&run(&["fgl", "rho", "1", "2", "--law", "additive"])).trim(), "1/2");
    assert!(stdout(&run(&["fgl", "divide", "2", "--order", "3"])).starts_with("1/2 u + 1/4 m1 u^2"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["fgl", "inverse", "--order", "2"]).status.code(), Some(2));
    assert_eq!(run(&["horo", "build", "--family", "9"]).status.code(), Some(2));
}

#[test]
fn membership_exit_codes() {
    let t = tmp("x45.json");
    let o = run(&["mult", "point-class", "--point", "x45", "-o", t.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["gkm", "check", "ig25", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    v["x45"].as_array_mut().unwrap().push(serde_json::json!({"coeff": "1", "m_exponents": [], "t_exponents": [0, 0]}));
    let bad = tmp("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["gkm", "check", "ig25", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.contains("edge") && l.contains("x45")), "{}", stdout(&o));

    let ones = tmp("ones.json");
    let pts = ["x12", "x13", "x14", "x23", "x25", "x34", "x35", "x45"];
    let obj: serde_json::Map<_, _> = pts.iter().map(|p| (p.to_string(), serde_json::json!("1"))).collect();
    std::fs::write(&ones, serde_json::Value::Object(obj).to_string()).unwrap();
    assert_eq!(run(&["gkm", "check", "ig25", ones.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn horo_build_is_stable_and_round_trips() {
    let a = run(&["horo", "build", "--family", "3", "--n", "2", "--m", "2"]);
    let b = run(&["horo", "build", "--family", "3", "--n", "2", "--m", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a), eqcob::fixtures::IG25_DATUM);
    let f = tmp("datum.json");
    std::fs::write(&f, &a.stdout).unwrap();
    let c = run(&["gkm", "congruences", f.to_str().unwrap()]);
    let d = run(&["gkm", "congruences", "ig25"]);
    assert!(c.status.success());
    assert_eq!(c.stdout, d.stdout);
    assert_eq!(stdout(&c).lines().count(), 20);
}

#[test]
fn unresolved_family_exits_3() {
    let o = run(&["horo", "build", "--family", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(run(&["horo", "build", "--family", "4", "--force-kind", "F2"]).status.success());
}

#[test]
fn scans() {
    let s = stdout(&run(&["horo", "scan", "--family", "1", "--n", "3"]));
    assert!(s.contains("kind none"), "{s}");
    let s = stdout(&run(&["horo", "scan", "--family", "5"]));
    assert!(s.contains("pairings 1 3") && s.contains("kind F3"), "{s}");
    let j: serde_json::Value =
        serde_json::from_slice(&run(&["horo", "scan", "--family", "3", "--n", "2", "--m", "2", "--format", "json"]).stdout)
            .unwrap();
    assert_eq!(j["fixed_points"], 3);
    assert_eq!(j["alpha"], serde_json::json!(["0", "2"]));
}

#[test]
fn flag_curves() {
    let s = stdout(&run(&["flag", "curves", "--type", "G2", "--parabolic", "a1"]));
    assert_eq!(s.lines().next(), Some("6 points, 15 curves"));
    assert_eq!(s.lines().filter(|l| l.starts_with("curve ")).count(), 15);
}

#[test]
fn fiber_sum_clears() {
    let o = run(&["mult", "fiber-sum", "--point", "x12", "--fiber", "x4", "--order", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!stdout(&o).trim().is_empty());
}

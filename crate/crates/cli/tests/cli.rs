use std::process::{Command, Output};

fn ellqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellqg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn parse_value(line: &str) -> (f64, f64) {
    let s = line.trim().trim_end_matches('i');
    let cut = s.rfind(['+', '-']).filter(|&i| i > 0 && !s[..i].ends_with('e')).unwrap();
    (s[..cut].parse().unwrap(), s[cut..].parse().unwrap())
}

#[test]
fn theta_at_one_is_zero() {
    let o = ellqg(&["eval", "theta", "--z", "1", "--p", "0.1"]);
    assert!(o.status.success());
    assert_eq!(parse_value(&stdout(&o)), (0.0, 0.0));
}

#[test]
fn theta_small_nome() {
    let o = ellqg(&["eval", "theta", "--z", "0.5", "--p", "1e-20"]);
    let (re, im) = parse_value(&stdout(&o));
    assert!((re - 0.5).abs() < 1e-15 && im == 0.0);
}

#[test]
fn tracked_pochhammer_zero() {
    let o = ellqg(&["eval", "pochhammer", "--a", "q^:-4", "--n", "3"]);
    assert!(o.status.success());
    assert_eq!(parse_value(&stdout(&o)), (0.0, 0.0));
}

#[test]
fn r_entries_at_one() {
    let o = ellqg(&["eval", "r-entries", "--z", "1", "--lambda", "0.3+0.2i"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let v: Vec<(f64, f64)> = out.lines().map(|l| parse_value(l.split('=').nth(1).unwrap())).collect();
    assert_eq!(v.len(), 4);
    assert!(v[0].0.abs() < 1e-15 && v[3].0.abs() < 1e-15);
    assert!((v[1].0 - 1.0).abs() < 1e-14 && (v[2].0 - 1.0).abs() < 1e-14);
}

#[test]
fn tau_oracles_printed() {
    let o = ellqg(&["eval", "tau", "--N", "2", "--k", "1", "--j", "1", "--m", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for l in out.lines().skip(1) {
        let d: f64 = l.split('=').nth(1).unwrap().trim().parse().unwrap();
        assert!(d < 1e-10, "{l}");
    }
}

#[test]
fn parse_error_exits_2_with_caret() {
    let o = ellqg(&["eval", "theta", "--z", "1+2x"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("unexpected character") && err.contains('^'), "{err}");
}

#[test]
fn unknown_suite_exits_2() {
    assert_eq!(ellqg(&["check", "bogus"]).status.code(), Some(2));
    assert_eq!(ellqg(&["check"]).status.code(), Some(2));
}

#[test]
fn check_passes_and_writes_json() {
    let path = std::env::temp_dir().join(format!("ellqg-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = ellqg(&["check", "theta", "--suite", "qdybe", "--samples", "5", "--seed", "9", "--json", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["config"]["seed"], 9);
    let recs = v["records"].as_array().unwrap();
    assert!(recs.iter().any(|r| r["suite"] == "qdybe"));
    assert!(recs.iter().all(|r| r["pass"] == true && r["samples"] == 5));
}

#[test]
fn impossible_tolerance_exits_1() {
    let o = ellqg(&["check", "theta", "--samples", "3", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
}

#[test]
fn same_seed_same_report() {
    let a = ellqg(&["check", "series", "--samples", "4", "--seed", "3"]);
    let b = ellqg(&["check", "series", "--samples", "4", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

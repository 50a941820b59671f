use ellqg::harness::{run_suite, run_suites, RunConfig};
use ellqg::report::Report;
use ellqg::C64;

fn quick(seed: u64) -> RunConfig {
    RunConfig {
        seed,
        samples: Some(8),
        ..RunConfig::default()
    }
}

#[test]
fn same_seed_same_bytes() {
    let a = run_suites(&["theta", "qdybe"], &quick(7)).unwrap().to_json();
    let b = run_suites(&["theta", "qdybe"], &quick(7)).unwrap().to_json();
    assert_eq!(a, b);
    let c = run_suites(&["theta", "qdybe"], &quick(8)).unwrap().to_json();
    assert_ne!(a, c);
}

#[test]
fn report_round_trips_through_json() {
    let r = run_suite("theta", &quick(3)).unwrap();
    let back: Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back.to_json(), r.to_json());
    assert!(r.records.iter().all(|x| x.samples == 8));
}

#[test]
fn unknown_suite_is_an_error() {
    assert!(run_suite("nope", &RunConfig::default()).is_err());
}

#[test]
fn tolerance_override_can_fail_a_suite() {
    let cfg = RunConfig {
        tol: Some(1e-30),
        ..quick(1)
    };
    let r = run_suite("theta", &cfg).unwrap();
    assert!(!r.pass);
    assert!(r.records.iter().any(|x| !x.pass && x.max_rel_residual > 1e-30));
}

#[test]
fn forced_pole_is_rejected_not_failed() {
    // λ = −1 puts θ(q^{−2(λ+1)}) = θ(1) in every coefficient denominator.
    let cfg = RunConfig {
        lambda: Some(C64::new(-1.0, 0.0)),
        max_redraws: 2,
        samples: Some(3),
        ..RunConfig::default()
    };
    let r = run_suite("relations", &cfg).unwrap();
    for rec in &r.records {
        assert_eq!(rec.rejected, 3, "{}", rec.check);
        assert_eq!(rec.samples, 0);
        assert!(rec.max_rel_residual == 0.0);
    }
}

#[test]
fn fixed_nome_is_echoed() {
    let cfg = RunConfig {
        p: Some(0.2),
        q: Some(0.6),
        ..quick(5)
    };
    let json = run_suite("qdybe", &cfg).unwrap().to_json();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["config"]["p"], 0.2);
    assert_eq!(v["config"]["q"], 0.6);
}

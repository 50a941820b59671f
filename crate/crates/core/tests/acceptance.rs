//! End-to-end acceptance: runs every suite with the default seed and judges each
//! criterion against its own tolerance. One line per criterion is printed; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use ellqg::harness::{run_suite, RunConfig};
use ellqg::report::{CheckRecord, Report};

struct Criterion {
    id: u32,
    what: &'static str,
    /// (suite, check, tolerance). A tolerance of 0 means exact.
    checks: &'static [(&'static str, &'static str, f64)],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        what: "theta quasi-periodicity and addition formula, 200 draws",
        checks: &[("theta", "quasi-periodicity", 1e-10), ("theta", "addition-formula", 1e-10)],
    },
    Criterion {
        id: 2,
        what: "dynamical Yang-Baxter equation, 100 draws; middle-block determinant",
        checks: &[("qdybe", "qdybe", 1e-10), ("qdybe", "middle-determinant", 1e-12)],
    },
    Criterion {
        id: 3,
        what: "representation preserves RLL, residual, reversal and antipode relations, m <= 6",
        checks: &[
            ("relations", "rll", 1e-9),
            ("relations", "moment-maps", 1e-9),
            ("relations", "degenerate-rll", 1e-9),
            ("relations", "alphabeta-reverse", 1e-9),
            ("relations", "antipode", 1e-9),
        ],
    },
    Criterion {
        id: 4,
        what: "all determinant expressions act as the scalar on e_m",
        checks: &[("relations", "det", 1e-10)],
    },
    Criterion {
        id: 5,
        what: "matrix element oracle tower (N <= 4) and starred closed form (N <= 3)",
        checks: &[("corep", "tau-tower", 1e-8), ("corep", "tau-tilde", 1e-8)],
    },
    Criterion {
        id: 6,
        what: "coproduct of basis words via tensor evaluation; tensor action preserves RLL",
        checks: &[("corep", "coproduct", 1e-8), ("corep", "tensor-rll", 1e-9)],
    },
    Criterion {
        id: 7,
        what: "counit of matrix elements is exactly delta_kj T_{N-2k}, N <= 5",
        checks: &[("corep", "counit", 0.0)],
    },
    Criterion {
        id: 8,
        what: "unitarity, N <= 3, full (k, j) sweep, 20 draws",
        checks: &[("unitarity", "unitarity", 1e-8)],
    },
    Criterion {
        id: 9,
        what: "biorthogonality and its dual, N <= 5, M in {0,1,2}; termwise oracle agreement",
        checks: &[
            ("biorth", "biorth", 1e-6),
            ("dual-biorth", "dual-biorth", 1e-6),
            ("biorth", "termwise-oracle", 1e-7),
            ("biorth", "rep-oracle", 1e-7),
        ],
    },
    Criterion {
        id: 10,
        what: "Bailey transformation, n <= 6, 50 constrained draws",
        checks: &[("bailey", "bailey", 1e-7)],
    },
];

fn find<'a>(r: &'a Report, suite: &str, check: &str) -> Option<&'a CheckRecord> {
    r.records.iter().find(|x| x.suite == suite && x.check == check)
}

fn judge(r: &Report, c: &Criterion) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(suite, check, tol) in c.checks {
        match find(r, suite, check) {
            Some(rec) => {
                let good = rec.pass && rec.samples > 0 && rec.max_rel_residual <= tol;
                ok &= good;
                parts.push(format!(
                    "{suite}/{check} {:.2e} <= {tol:.0e} ({} samples, {} rejected){}",
                    rec.max_rel_residual,
                    rec.samples,
                    rec.rejected,
                    if good { "" } else { " FAILED" }
                ));
            }
            None => {
                ok = false;
                parts.push(format!("{suite}/{check} missing"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn line(id: u32, ok: bool, what: &str, detail: &str) -> String {
    format!("criterion {id:>2}: {}  {what}\n              {detail}", if ok { "PASS" } else { "FAIL" })
}

#[test]
fn acceptance_criteria() {
    let cfg = RunConfig::default();
    let start = std::time::Instant::now();
    let report = run_suite("all", &cfg).expect("suites run");
    let elapsed = start.elapsed().as_secs_f64();

    let mut failed = Vec::new();
    for c in CRITERIA {
        let (ok, detail) = judge(&report, c);
        println!("{}", line(c.id, ok, c.what, &detail));
        if !ok {
            failed.push(c.id);
        }
    }

    // Same seed twice, once on a single thread: the report must not change by a byte.
    let again = run_suite("all", &cfg).unwrap().to_json();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| run_suite("all", &cfg).unwrap().to_json());
    let first = report.to_json();
    let same = first == again && first == serial;
    println!(
        "{}",
        line(
            11,
            same,
            "identical seeds give byte-identical JSON reports",
            &format!("{} bytes, parallel rerun and single-thread rerun compared", first.len())
        )
    );
    if !same {
        failed.push(11);
    }
    println!("full run: {elapsed:.1}s");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

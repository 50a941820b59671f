//! The suite registry. Each suite draws parameters per sample, evaluates its checks and
//! hands the residuals to [`assemble`]. Default sample counts and tolerances are the
//! acceptance targets; [`RunConfig`] can override both.

use super::{assemble, sample_loop, Draw, Obs, Outcome, RunConfig, SUITES};
use crate::biorth::{check_biorth, check_dual_biorth, check_printed_biorth, biorth_rep_oracle_terms, termwise_residual, BiorthParams};
use crate::corep::{
    check_coproduct, check_unitarity, counit_is_exact, independence_ratio, rel_diff, tau_oracles,
    tau_tilde_closed, tau_tilde_word, tensor_rll_residual, CorepParams,
};
use crate::error::{Error, Result};
use crate::relations::{
    alpha_beta_reverse, antipode_relations, det_residual, moment_relations, residual_relations, rll_relations,
    test_function,
};
use crate::rep::RepContext;
use crate::report::CheckRecord;
use crate::rmatrix::{check_qdybe, middle_determinant, middle_determinant_closed, r_entries, RMatrix};
use crate::series::{check_bailey, eval_omega, SeriesSpec};
use crate::theta::ThetaContext;
use crate::tracked::{pochhammer_ratio, TrackedArg};
use crate::C64;
use serde_json::{json, Value};

/// Largest tolerated ratio of the biggest term to the sum before a draw is redrawn.
const MAX_CANCELLATION: f64 = 1e6;

type Checks<'a> = Vec<(&'a str, f64, Vec<(&'a str, Value)>)>;

pub(crate) fn run(id: usize, cfg: &RunConfig) -> Vec<CheckRecord> {
    match SUITES[id] {
        "theta" => theta(id, cfg),
        "series" => series(id, cfg),
        "bailey" => bailey(id, cfg),
        "qdybe" => qdybe(id, cfg),
        "relations" => relations(id, cfg),
        "corep" => corep(id, cfg),
        "unitarity" => unitarity(id, cfg),
        "biorth" => biorth(id, cfg, false),
        "dual-biorth" => biorth(id, cfg, true),
        other => unreachable!("suite {other} not registered"),
    }
}

fn samples(cfg: &RunConfig, default: usize) -> usize {
    cfg.samples.unwrap_or(default)
}

fn n_range(cfg: &RunConfig, max: usize) -> Vec<usize> {
    match cfg.n {
        Some(n) => vec![n],
        None => (1..=max).collect(),
    }
}

fn outcome(obs: Vec<Obs>) -> Outcome {
    Outcome { obs, notes: Vec::new() }
}

/// |a − b| / (|a| + |b|), 0 when both vanish.
fn sym_rel(a: C64, b: C64) -> f64 {
    let s = a.norm() + b.norm();
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

fn theta(id: usize, cfg: &RunConfig) -> Vec<CheckRecord> {
    let results = sample_loop(cfg, id, samples(cfg, 200), |d, _| {
        let ctx = d.ctx()?;
        let p = C64::new(ctx.p, 0.0);
        let z = d.z();
        let t = ctx.theta(z)?;
        let tp = ctx.theta(p * z)?;
        let quasi = sym_rel(tp, -t / z).max(sym_rel(ctx.theta(z.inv())?, tp));

        let (x, y, u, w) = (d.z(), d.z(), d.z(), d.z());
        let th = |args: &[C64]| ctx.theta_multi(args);
        let t1 = th(&[x * y, x / y, u * w, u / w])?;
        let t2 = th(&[x * w, x / w, u * y, u / y])?;
        let t3 = (u / y) * th(&[x * u, x / u, y * w, y / w])?;
        let scale = t1.norm() + t2.norm() + t3.norm();
        let addition = if scale == 0.0 { 0.0 } else { (t1 - t2 - t3).norm() / scale };

        let a = d.z();
        let (m, n) = (d.index(8) as i64, d.index(8) as i64);
        let q2m = ctx.qpow_r(2.0 * m as f64);
        let splice = rel_diff(
            ctx.pochhammer(a, m + n)?,
            ctx.pochhammer(a, m)? * ctx.pochhammer(a * q2m, n)?,
        );
        let (l, j) = if m <= n { (m, n) } else { (n, m) };
        let ratio = rel_diff(
            pochhammer_ratio(&ctx, &TrackedArg::raw(a), j, l)? * ctx.pochhammer(a, l)?,
            ctx.pochhammer(a, j)?,
        );
        Ok(outcome(vec![
            Obs::new("quasi-periodicity", quasi),
            Obs::new("addition-formula", addition),
            Obs::new("pochhammer-splicing", splice),
            Obs::new("pochhammer-ratio", ratio),
        ]))
    });
    let checks: Checks = vec![
        ("quasi-periodicity", 1e-12, vec![]),
        ("addition-formula", 1e-10, vec![]),
        ("pochhammer-splicing", 1e-12, vec![("max_len", json!(8))]),
        ("pochhammer-ratio", 1e-12, vec![("max_len", json!(8))]),
    ];
    assemble(cfg, "theta", &checks, results)
}

/// Per-term oracle: every term rebuilt from its own Pochhammer factors, numerator and
/// denominator interleaved so that long products stay in range.
fn naive_omega(ctx: &ThetaContext, a1: C64, upper: &[C64], n: usize) -> Result<C64> {
    let q2 = ctx.qpow_r(2.0);
    let mut num = vec![a1];
    num.extend_from_slice(upper);
    let mut den = vec![q2];
    den.extend(upper.iter().map(|&a| a1 * q2 / a));
    let mut s = C64::new(0.0, 0.0);
    for k in 0..=n as i32 {
        let mut t = ctx.theta(a1 * q2.powi(2 * k))? / ctx.theta(a1)? * q2.powi(k);
        for i in 0..k {
            let qi = q2.powi(i);
            for (&a, &b) in num.iter().zip(&den) {
                t *= ctx.theta(a * qi)? / ctx.theta(b * qi)?;
            }
        }
        s += t;
    }
    Ok(s)
}

/// A balanced 10ω9 with random parameters and termination index n.
fn random_spec(d: &mut Draw, ctx: &ThetaContext, n: usize) -> (C64, Vec<C64>) {
    let a = d.z();
    let (b, c, e, f, g) = (d.z(), d.z(), d.z(), d.z(), d.z());
    let h = a * a * a * ctx.qpow_r(2.0 * (n as f64 + 2.0)) / (b * c * e * f * g);
    (a, vec![b, c, e, f, g, h, ctx.qpow_r(-2.0 * n as f64)])
}

fn series(id: usize, cfg: &RunConfig) -> Vec<CheckRecord> {
    let results = sample_loop(cfg, id, samples(cfg, 50), |d, _| {
        let ctx = d.ctx()?;
        let n = d.index(10);
        let (a1, upper) = random_spec(d, &ctx, n);
        let slot = upper.len() - 1;
        let mut tracked: Vec<TrackedArg> = upper.iter().map(|&u| TrackedArg::raw(u)).collect();
        tracked[slot] = TrackedArg::qpow(-2 * n as i64);
        let spec = SeriesSpec::new(TrackedArg::raw(a1), tracked.clone(), slot)?;
        let v = eval_omega(&ctx, &spec)?;
        let naive = naive_omega(&ctx, a1, &upper, n)?;
        tracked.rotate_left(3);
        let rotated = SeriesSpec::new(TrackedArg::raw(a1), tracked, slot - 3)?;
        let r = eval_omega(&ctx, &rotated)?;
        // Cancellation in the sum is judged against the largest term.
        let scale = v.value.norm().max(v.max_term_magnitude);
        Ok(outcome(vec![
            Obs::new("term-ratio-vs-naive", (v.value - naive).norm() / scale),
            Obs::new("permutation-invariance", (v.value - r.value).norm() / scale),
        ]))
    });
    let checks: Checks = vec![
        ("term-ratio-vs-naive", 1e-11, vec![("max_n", json!(10))]),
        ("permutation-invariance", 1e-12, vec![("max_n", json!(10))]),
    ];
    assemble(cfg, "series", &checks, results)
}

fn bailey(id: usize, cfg: &RunConfig) -> Vec<CheckRecord> {
    let results = sample_loop(cfg, id, samples(cfg, 50), |d, _| {
        let ctx = d.ctx()?;
        let n = d.index(6);
        let a = d.z();
        // Balancing forces bcdefg = a³q^{2(n+2)}; drawing b..f independently leaves g far
        // from the unit circle and the sums cancel catastrophically. Keep all six near the
        // balanced modulus instead.
        let s = a.sqrt() * ctx.qpow_r((n as f64 + 2.0) / 3.0);
        let mut near = || s * C64::from_polar(d.uniform(0.7, 1.4), d.uniform(0.0, 2.0 * std::f64::consts::PI));
        let (b, c, dd, e, f) = (near(), near(), near(), near(), near());
        let r = check_bailey(&ctx, a, b, c, dd, e, f, n)?;
        let cond = (r.lhs_max_term / r.lhs.norm()).max(r.rhs_max_term / r.rhs.norm());
        if !(cond <= MAX_CANCELLATION) {
            return Err(Error::IllConditioned(format!("max term / sum = {cond:.1e}")));
        }
        Ok(outcome(vec![Obs::keyed("bailey", format!("n={n}"), r.residual)]))
    });
    let checks: Checks = vec![(
        "bailey",
        1e-7,
        vec![("max_n", json!(6)), ("max_cancellation", json!(MAX_CANCELLATION))],
    )];
    assemble(cfg, "bailey", &checks, results)
}

fn qdybe(id: usize, cfg: &RunConfig) -> Vec<CheckRecord> {
    let results = sample_loop(cfg, id, samples(cfg, 100), |d, _| {
        let ctx = d.ctx()?;
        let lam = d.lambda();
        let (z1, z2, z3) = (d.z(), d.z(), d.z());
        let r = check_qdybe(&ctx, lam, z1, z2, z3)?;
        let z = z1 / z2;
        let det = rel_diff(
            middle_determinant(&r_entries(&ctx, lam, z)?),
            middle_determinant_closed(&ctx, z)?,
        );
        let weight = if RMatrix::new(&ctx, lam, z)?.is_weight_preserving() { 0.0 } else { 1.0 };
        Ok(outcome(vec![
            Obs::new("qdybe", r),
            Obs::new("middle-determinant", det),
            Obs::new("weight-preserving", weight),
        ]))
    });
    let checks: Checks = vec![
        ("qdybe", 1e-10, vec![]),
        ("middle-determinant", 1e-12, vec![]),
        ("weight-preserving", 0.0, vec![]),
    ];
    assemble(cfg, "qdybe", &checks, results)
}

fn relations(id: usize, cfg: &RunConfig) -> Vec<CheckRecord> {
    let ms = 0..=6usize;
    let results = sample_loop(cfg, id, samples(cfg, 50), |d, _| {
        let ctx = d.ctx()?;
        let rc = RepContext::new(ctx, d.omega(), d.lambda());
        let (z1, z2) = (d.z(), d.z());
        let f = test_function(d.boxed(), d.z());
        let mut obs = Vec::new();
        let mut family = |name: &str, rels: Vec<crate::relations::Relation>| -> Result<()> {
            for r in rels {
                obs.push(Obs::keyed(name, r.name.clone(), r.residual(&rc, ms.clone())?));
            }
            Ok(())
        };
        family("rll", rll_relations(z1, z2))?;
        family("moment-maps", moment_relations(&f, z1))?;
        family("degenerate-rll", residual_relations(&ctx, z1))?;
        let mut ab = Vec::new();
        for k in 1..=4 {
            for l in 1..=k {
                ab.push(alpha_beta_reverse(k, l, z1, &ctx));
            }
        }
        family("alphabeta-reverse", ab)?;
        family("antipode", antipode_relations(z1, &ctx))?;
        obs.push(Obs::new("det", det_residual(&rc, z1, ms.clone())?));
        Ok(outcome(obs))
    });
    let p = || vec![("max_m", json!(6))];
    let checks: Checks = vec![
        ("rll", 1e-9, p()),
        ("moment-maps", 1e-9, p()),
        ("degenerate-rll", 1e-9, p()),
        ("alphabeta-reverse", 1e-9, vec![("max_m", json!(6)), ("max_k", json!(4))]),
        ("antipode", 1e-9, p()),
        ("det", 1e-10, p()),
    ];
    assemble(cfg, "relations", &checks, results)
}

fn corep(id: usize, cfg: &RunConfig) -> Vec<CheckRecord> {
    let tower_n = n_range(cfg, 4);
    let tilde_n: Vec<usize> = n_range(cfg, 3).into_iter().filter(|&n| n <= 3).collect();
    let results = sample_loop(cfg, id, samples(cfg, 20), |d, _| {
        let ctx = d.ctx()?;
        let rc = RepContext::new(ctx, d.omega(), d.lambda());
        let z = d.z();
        let mut obs = Vec::new();
        for &n in &tower_n {
            for k in 0..=n {
                for j in 0..=n {
                    for m in 0..=3 {
                        let p = CorepParams::new(n, k, j, m, z)?;
                        let o = tau_oracles(&rc, &p)?;
                        let key = format!("N={n}");
                        let r = rel_diff(o["word"], o["product"])
                            .max(rel_diff(o["word"], o["closed"]))
                            .max(rel_diff(o["product"], o["closed"]));
                        obs.push(Obs::keyed("tau-tower", key, r));
                        if tilde_n.contains(&n) {
                            let r = rel_diff(tau_tilde_word(&rc, &p)?, tau_tilde_closed(&rc, &p)?);
                            obs.push(Obs::keyed("tau-tilde", format!("N={n}"), r));
                        }
                    }
                }
            }
            if n <= 3 {
                let r = independence_ratio(&rc, n, z)?;
                obs.push(Obs::keyed("independence", format!("N={n}"), if r > 0.0 { r.recip() } else { f64::INFINITY }));
            }
        }
        let (om1, om2) = (d.omega(), d.omega());
        let lam = d.lambda();
        for n in n_range(cfg, 3).into_iter().filter(|&n| n <= 3) {
            for k in 0..=n {
                for m in 0..=2 {
                    for n2 in 0..=2 {
                        let r = check_coproduct(&ctx, n, k, om1, om2, lam, z, m, n2)?;
                        obs.push(Obs::keyed("coproduct", format!("N={n}"), r));
                    }
                }
            }
        }
        let z2 = d.z();
        for m in 0..=2 {
            for n2 in 0..=2 {
                obs.push(Obs::new("tensor-rll", tensor_rll_residual(&ctx, om1, om2, lam, z, z2, m, n2)?));
            }
        }
        let mut exact = true;
        for n in 0..=5 {
            for k in 0..=n {
                for j in 0..=n {
                    exact &= counit_is_exact(&ctx, n, k, j);
                }
            }
        }
        obs.push(Obs::new("counit", if exact { 0.0 } else { 1.0 }));
        Ok(outcome(obs))
    });
    let checks: Checks = vec![
        ("tau-tower", 1e-8, vec![("N", json!(tower_n)), ("max_m", json!(3))]),
        ("tau-tilde", 1e-8, vec![("max_N", json!(3)), ("max_m", json!(3))]),
        ("coproduct", 1e-8, vec![("max_N", json!(3)), ("max_m", json!(2)), ("max_n", json!(2))]),
        ("tensor-rll", 1e-9, vec![("max_m", json!(2)), ("max_n", json!(2))]),
        ("counit", 0.0, vec![("max_N", json!(5))]),
        // σ_max/σ_min of the t^N_Nj evaluation matrix; full rank means below 1e8.
        ("independence", 1e8, vec![("max_N", json!(3))]),
    ];
    assemble(cfg, "corep", &checks, results)
}

fn unitarity(id: usize, cfg: &RunConfig) -> Vec<CheckRecord> {
    let ns = n_range(cfg, 3);
    let results = sample_loop(cfg, id, samples(cfg, 20), |d, _| {
        let ctx = d.ctx()?;
        let rc = RepContext::new(ctx, d.omega(), d.lambda());
        let z = d.z();
        let mut obs = Vec::new();
        for &n in &ns {
            for k in 0..=n {
                for j in 0..=n {
                    for m in 0..=2 {
                        let r = check_unitarity(&rc, &CorepParams::new(n, k, j, m, z)?)?;
                        obs.push(Obs::keyed("unitarity", format!("N={n}"), r));
                    }
                }
            }
        }
        Ok(outcome(obs))
    });
    let checks: Checks = vec![("unitarity", 1e-8, vec![("N", json!(ns)), ("max_m", json!(2))])];
    assemble(cfg, "unitarity", &checks, results)
}

fn biorth(id: usize, cfg: &RunConfig, dual: bool) -> Vec<CheckRecord> {
    let ns = n_range(cfg, 5);
    let ms = cfg.m_values.clone().unwrap_or_else(|| vec![0, 1, 2]);
    // Both suites use the biorthogonality draws.
    let stream = SUITES.iter().position(|s| *s == "biorth").unwrap_or(id);
    let results = sample_loop(cfg, stream, samples(cfg, 10), |d, _| {
        let ctx = d.ctx()?;
        let (lambda, omega, z) = (d.lambda(), d.omega(), d.z());
        let mut obs = Vec::new();
        for &n in &ns {
            for &m in &ms {
                let p = BiorthParams { n, lambda, m, omega, z, ctx };
                for k in 0..=n {
                    for l in 0..=n {
                        let key = format!("N={n},M={m},k={k},l={l}");
                        if dual {
                            obs.push(Obs::keyed("dual-biorth", key, check_dual_biorth(&p, k, l)?.residual));
                            continue;
                        }
                        obs.push(Obs::keyed("biorth", key.clone(), check_biorth(&p, k, l)?.residual));
                        obs.push(Obs::keyed("termwise-oracle", key.clone(), termwise_residual(&p, k, l)?));
                        let target = if k == l { 1.0 } else { 0.0 };
                        let terms = biorth_rep_oracle_terms(&p, k, l)?;
                        let sum: C64 = terms.iter().sum();
                        let scale = terms.iter().map(|t| t.norm()).fold(target, f64::max);
                        obs.push(Obs::keyed("rep-oracle", key, (sum - target).norm() / scale));
                        let printed = check_printed_biorth(&p, k, l)?.residual;
                        obs.push(Obs::info("biorth", format!("printed weights N={n},M={m}"), printed));
                    }
                }
            }
        }
        Ok(outcome(obs))
    });
    let params = || vec![("N", json!(ns)), ("M", json!(ms))];
    if dual {
        return assemble(cfg, "dual-biorth", &[("dual-biorth", 1e-6, params())], results);
    }
    let checks: Checks = vec![
        ("biorth", 1e-6, params()),
        ("termwise-oracle", 1e-7, params()),
        ("rep-oracle", 1e-7, params()),
    ];
    assemble(cfg, "biorth", &checks, results)
}


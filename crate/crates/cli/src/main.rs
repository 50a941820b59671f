//! `ellqg`: evaluate single quantities or run the seeded identity-check suites.
//!
//! `ellqg check <suite>` prints a JSON report (to stdout or `--json <path>`) and exits 0
//! iff every check passed. `ellqg eval <kind>` prints one value.

use clap::{Args, Parser, Subcommand};
use ellqg::corep::{tau_oracles, tau_tilde_closed, tau_tilde_word, CorepParams};
use ellqg::harness::{parse_complex, parse_tracked, run_suites, RunConfig, SUITES};
use ellqg::rep::RepContext;
use ellqg::rmatrix::r_entries;
use ellqg::series::{eval_omega, SeriesSpec};
use ellqg::tracked::ZeroOrder;
use ellqg::{ThetaContext, C64};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "ellqg", version, about = "Elliptic dynamical quantum group identity checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one or more check suites and emit a JSON report.
    Check(CheckArgs),
    /// Evaluate a single quantity.
    Eval {
        #[command(subcommand)]
        kind: EvalKind,
    },
}

fn complex(s: &str) -> Result<C64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct CheckArgs {
    /// Suite name (one of theta, series, bailey, qdybe, relations, corep, unitarity,
    /// biorth, dual-biorth, all).
    name: Option<String>,
    /// Additional suites; may be repeated or comma separated.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    /// Fix the nome instead of sampling it.
    #[arg(long)]
    p: Option<f64>,
    /// Fix the base instead of sampling it.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Samples per suite (overrides each suite's default).
    #[arg(long)]
    samples: Option<usize>,
    /// Tolerance for every check (overrides the defaults).
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 50)]
    max_redraws: usize,
    /// Restrict N sweeps to this N.
    #[arg(long = "N")]
    n: Option<usize>,
    /// M values for the biorthogonality suites; may be repeated.
    #[arg(long = "M", value_delimiter = ',')]
    m: Vec<usize>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    omega: Option<C64>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    lambda: Option<C64>,
    /// With `biorth`, run the dual relation instead.
    #[arg(long)]
    dual: bool,
}

#[derive(Args, Clone)]
struct CtxArgs {
    #[arg(long, default_value_t = 0.15)]
    p: f64,
    #[arg(long, default_value_t = 0.7)]
    q: f64,
    #[arg(long, default_value_t = 1e-17)]
    theta_floor: f64,
    #[arg(long, default_value_t = 1e-12)]
    zero_guard: f64,
}

impl CtxArgs {
    fn ctx(&self) -> Result<ThetaContext, String> {
        ThetaContext::with_policy(self.p, self.q, self.theta_floor, self.zero_guard).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum EvalKind {
    /// θ(z); `--z` accepts a+bi or q^:<int>.
    Theta {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// The elliptic Pochhammer symbol (a)_n.
    Pochhammer {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z: Option<C64>,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// A terminating very-well-poised series.
    Omega {
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        /// Upper parameters, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        upper: Vec<String>,
        /// Index into `--upper` of the terminating parameter q^:<-2n>.
        #[arg(long)]
        slot: usize,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z: Option<C64>,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// A corepresentation matrix element on e_m, with the deltas between its oracles.
    Tau {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "0.3+0.2i")]
        omega: C64,
        #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "0.37+0.21i")]
        lambda: C64,
        #[arg(long, value_parser = complex, allow_hyphen_values = true, default_value = "0.8+0.9i")]
        z: C64,
        /// Evaluate the starred matrix element instead.
        #[arg(long)]
        tilde: bool,
        #[command(flatten)]
        ctx: CtxArgs,
    },
    /// The middle-block R-matrix entries a, b, c, d.
    REntries {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z: C64,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        lambda: C64,
        #[command(flatten)]
        ctx: CtxArgs,
    },
}

fn fmt(z: C64) -> String {
    let sign = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) { '-' } else { '+' };
    format!("{:e}{}{:e}i", z.re, sign, z.im.abs())
}

fn eval(kind: EvalKind) -> Result<(), String> {
    let e = |x: ellqg::Error| x.to_string();
    let p = |x: ellqg::harness::ParseError| x.to_string();
    match kind {
        EvalKind::Theta { z, ctx } => {
            let ctx = ctx.ctx()?;
            let a = parse_tracked(&z, None).map_err(p)?;
            let mut r = ZeroOrder::one();
            r.theta(&ctx, &a, 1).map_err(e)?;
            println!("{}", fmt(r.realize().map_err(e)?));
        }
        EvalKind::Pochhammer { a, n, z, ctx } => {
            let ctx = ctx.ctx()?;
            let a = parse_tracked(&a, z).map_err(p)?;
            let mut r = ZeroOrder::one();
            r.poch(&ctx, &a, n, 1).map_err(e)?;
            println!("{}", fmt(r.realize().map_err(e)?));
        }
        EvalKind::Omega { a1, upper, slot, z, ctx } => {
            let ctx = ctx.ctx()?;
            let a1 = parse_tracked(&a1, z).map_err(p)?;
            let upper = upper.iter().map(|u| parse_tracked(u, z)).collect::<Result<Vec<_>, _>>().map_err(p)?;
            let v = eval_omega(&ctx, &SeriesSpec::new(a1, upper, slot).map_err(e)?).map_err(e)?;
            println!("{}", fmt(v.value));
            println!("terms: {}  max |term|: {:e}", v.terms, v.max_term_magnitude);
            if let Some(w) = v.warning {
                println!("warning: {w}");
            }
        }
        EvalKind::Tau { n, k, j, m, omega, lambda, z, tilde, ctx } => {
            let rc = RepContext::new(ctx.ctx()?, omega, lambda);
            let params = CorepParams::new(n, k, j, m, z).map_err(e)?;
            if tilde {
                let c = tau_tilde_closed(&rc, &params).map_err(e)?;
                let w = tau_tilde_word(&rc, &params).map_err(e)?;
                println!("{}", fmt(c));
                println!("|closed - word| = {:e}", (c - w).norm());
            } else {
                let o = tau_oracles(&rc, &params).map_err(e)?;
                println!("{}", fmt(o["closed"]));
                println!("|closed - word| = {:e}", (o["closed"] - o["word"]).norm());
                println!("|product - word| = {:e}", (o["product"] - o["word"]).norm());
            }
        }
        EvalKind::REntries { z, lambda, ctx } => {
            let r = r_entries(&ctx.ctx()?, lambda, z).map_err(e)?;
            println!("a = {}\nb = {}\nc = {}\nd = {}", fmt(r.a), fmt(r.b), fmt(r.c), fmt(r.d));
        }
    }
    Ok(())
}

fn check(a: CheckArgs) -> Result<bool, String> {
    let mut names: Vec<String> = a.name.into_iter().chain(a.suite).collect();
    if names.is_empty() {
        return Err("no suite given".into());
    }
    if names.iter().any(|n| n == "all") {
        names = SUITES.iter().map(|s| s.to_string()).collect();
    }
    if a.dual {
        for n in names.iter_mut().filter(|n| *n == "biorth") {
            *n = "dual-biorth".into();
        }
    }
    let mut seen = std::collections::HashSet::new();
    names.retain(|n| seen.insert(n.clone()));
    for n in &names {
        if !SUITES.contains(&n.as_str()) {
            return Err(format!("unknown suite '{n}' (expected one of {}, all)", SUITES.join(", ")));
        }
    }
    let cfg = RunConfig {
        p: a.p,
        q: a.q,
        seed: a.seed,
        samples: a.samples,
        tol: a.tol,
        max_redraws: a.max_redraws,
        n: a.n,
        m_values: if a.m.is_empty() { None } else { Some(a.m) },
        omega: a.omega,
        lambda: a.lambda,
    };
    let start = Instant::now();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let report = run_suites(&refs, &cfg).map_err(|e| e.to_string())?;
    for r in &report.records {
        eprintln!(
            "{:<5} {}/{}: max residual {:.3e} (tol {:.0e}, {} samples, {} rejected)",
            if r.pass { "pass" } else { "FAIL" },
            r.suite,
            r.check,
            r.max_rel_residual,
            r.tol,
            r.samples,
            r.rejected
        );
    }
    eprintln!("elapsed: {:.2}s", start.elapsed().as_secs_f64());
    let json = report.to_json();
    match a.json {
        Some(path) => std::fs::write(&path, json + "\n").map_err(|e| format!("{}: {e}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Check(a) => check(a),
        Cmd::Eval { kind } => eval(kind).map(|_| true),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

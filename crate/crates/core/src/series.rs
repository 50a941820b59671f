//! Terminating very-well-poised elliptic hypergeometric series
//!
//! ```text
//! _{r+1}ω_r[a1; a4, …, a_{r+1}] = Σ_k θ(a1 q^{4k})/θ(a1) · (a1, a4, …, a_{r+1})_k q^{2k}
//!                                   / (q², a1q²/a4, …, a1q²/a_{r+1})_k
//! ```
//!
//! evaluated by accumulating the term ratio, plus the elliptic Bailey transformation.

use crate::error::{Error, Result};
use crate::theta::ThetaContext;
use crate::tracked::{TrackedArg, ZeroOrder};
use crate::C64;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub a1: TrackedArg,
    /// The upper parameters a4, …, a_{r+1}.
    pub upper: Vec<TrackedArg>,
    /// Index into `upper` of the parameter q^{−2n} that terminates the sum.
    pub term_slot: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesValue {
    #[serde(with = "crate::report::complex")]
    pub value: C64,
    pub terms: usize,
    pub max_term_magnitude: f64,
    pub warning: Option<String>,
}

impl SeriesSpec {
    pub fn new(a1: TrackedArg, upper: Vec<TrackedArg>, term_slot: usize) -> Result<Self> {
        if upper.len() < 3 {
            return Err(Error::Invalid("series needs r >= 4".into()));
        }
        let spec = SeriesSpec {
            a1,
            upper,
            term_slot,
        };
        spec.termination_index()?;
        Ok(spec)
    }

    /// The n with upper[term_slot] = q^{−2n}.
    pub fn termination_index(&self) -> Result<usize> {
        let t = self
            .upper
            .get(self.term_slot)
            .ok_or_else(|| Error::Invalid("termination slot out of range".into()))?;
        if !t.is_generic_one() || t.q_exp > 0 || t.q_exp % 2 != 0 {
            return Err(Error::Invalid(
                "termination slot is not of the form q^(-2n)".into(),
            ));
        }
        Ok((-t.q_exp / 2) as usize)
    }

    /// Balancing check (a4⋯a_{r+1})² = a1^{r−3} q^{2(r−5)}, modulo integer powers of p.
    pub fn balancing_warning(&self, ctx: &ThetaContext) -> Option<String> {
        let r = self.upper.len() as i32 + 2;
        let prod = self.upper.iter().fold(TrackedArg::one(), |acc, a| acc.mul(a));
        let ratio = prod
            .powi(2)
            .div(&self.a1.powi(r - 3))
            .shift_q(-2 * (r as i64 - 5));
        if !ratio.opaque {
            return if ratio.is_exact_one() {
                None
            } else {
                Some("series is not balanced (exact exponent check)".into())
            };
        }
        let v = ratio.value(ctx);
        let k = (v.norm().ln() / ctx.p.ln()).round();
        let dev = (v / ctx.p.powf(k) - C64::new(1.0, 0.0)).norm();
        if dev <= 1e-8 {
            None
        } else {
            Some(format!("series balancing off by relative {dev:.3e}"))
        }
    }
}

/// Evaluate the series.
pub fn eval_omega(ctx: &ThetaContext, spec: &SeriesSpec) -> Result<SeriesValue> {
    eval_omega_scaled(ctx, spec, &ZeroOrder::one())
}

/// Evaluate `prefactor · series`, letting exact zeros of the prefactor cancel exact
/// poles of individual terms.
pub fn eval_omega_scaled(
    ctx: &ThetaContext,
    spec: &SeriesSpec,
    prefactor: &ZeroOrder,
) -> Result<SeriesValue> {
    let n = spec.termination_index()?;
    let a1 = &spec.a1;
    let dens: Vec<TrackedArg> = spec
        .upper
        .iter()
        .map(|a| a1.shift_q(2).div(a))
        .collect();
    let mut term = *prefactor;
    let mut sum = C64::new(0.0, 0.0);
    let mut terms = 0;
    let mut max_term: f64 = 0.0;
    let q2 = ctx.qpow_r(2.0);
    for k in 0..=n as i64 {
        match term.order {
            0 => {
                sum += term.value;
                terms += 1;
                max_term = max_term.max(term.value.norm());
            }
            o if o < 0 => {
                return Err(Error::pole("series term", k));
            }
            _ => {}
        }
        if k == n as i64 {
            break;
        }
        // t_{k+1}/t_k
        let step = (|| -> Result<ZeroOrder> {
            let mut s = ZeroOrder::scalar(q2);
            s.theta(ctx, &a1.shift_q(4 * k + 4), 1)?;
            s.theta(ctx, &a1.shift_q(4 * k), -1)?;
            s.theta(ctx, &a1.shift_q(2 * k), 1)?;
            s.theta(ctx, &TrackedArg::qpow(2 * k + 2), -1)?;
            for (a, d) in spec.upper.iter().zip(&dens) {
                s.theta(ctx, &a.shift_q(2 * k), 1)?;
                s.theta(ctx, &d.shift_q(2 * k), -1)?;
            }
            Ok(s)
        })()
        .map_err(|e| match e {
            Error::Pole { .. } => Error::pole("series term denominator", k + 1),
            other => other,
        })?;
        term = term.mul(&step);
    }
    Ok(SeriesValue {
        value: sum,
        terms,
        max_term_magnitude: max_term,
        warning: spec.balancing_warning(ctx),
    })
}

/// Both sides of the elliptic Bailey transformation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BaileyResidual {
    #[serde(with = "crate::report::complex")]
    pub lhs: C64,
    #[serde(with = "crate::report::complex")]
    pub rhs: C64,
    /// Largest single term on each side; a sum much smaller than this lost precision to
    /// cancellation.
    pub lhs_max_term: f64,
    pub rhs_max_term: f64,
    pub residual: f64,
}

/// Check the Bailey transformation at (a, b, c, d, e, f), solving bcdefg = a³q^{2(n+2)} for g.
#[allow(clippy::too_many_arguments)]
pub fn check_bailey(
    ctx: &ThetaContext,
    a: C64,
    b: C64,
    c: C64,
    d: C64,
    e: C64,
    f: C64,
    n: usize,
) -> Result<BaileyResidual> {
    let g = a * a * a * ctx.qpow_r(2.0 * (n as f64 + 2.0)) / (b * c * d * e * f);
    let lam = a * a * ctx.qpow_r(2.0) / (b * c * d);
    let raw = TrackedArg::raw;
    let term = TrackedArg::qpow(-2 * n as i64);
    let lhs_spec = SeriesSpec::new(
        raw(a),
        vec![raw(b), raw(c), raw(d), raw(e), raw(f), raw(g), term.clone()],
        6,
    )?;
    let rhs_spec = SeriesSpec::new(
        raw(lam),
        vec![
            raw(lam * b / a),
            raw(lam * c / a),
            raw(lam * d / a),
            raw(e),
            raw(f),
            raw(g),
            term,
        ],
        6,
    )?;
    let q2 = ctx.qpow_r(2.0);
    let nn = n as i64;
    let mut pre = ZeroOrder::one();
    pre.pochs(
        ctx,
        &[
            raw(a * q2),
            raw(a * q2 / (e * f)),
            raw(lam * q2 / e),
            raw(lam * q2 / f),
        ],
        nn,
        1,
    )?;
    pre.pochs(
        ctx,
        &[raw(a * q2 / e), raw(a * q2 / f), raw(lam * q2 / (e * f)), raw(lam * q2)],
        nn,
        -1,
    )?;
    let l = eval_omega(ctx, &lhs_spec)?;
    let r = eval_omega_scaled(ctx, &rhs_spec, &pre)?;
    let (lhs, rhs) = (l.value, r.value);
    let den = lhs.norm() + rhs.norm();
    let residual = if den == 0.0 { 0.0 } else { (lhs - rhs).norm() / den };
    Ok(BaileyResidual {
        lhs,
        rhs,
        lhs_max_term: l.max_term_magnitude,
        rhs_max_term: r.max_term_magnitude,
        residual,
    })
}

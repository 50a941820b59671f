//! Biorthogonality of two families of 10ω9 functions, the dual relation, and the
//! representation-theoretic oracle they come from.
//!
//! The weights are normalized against the representation oracle: the printed weights
//! w₁(j,k), w₂(j,l) carry the correct j-dependence but are off by a j-independent factor
//! u(k)v(l). [`weight_w1`] and [`weight_w2`] return the corrected weights, with the
//! printed ones available as [`printed_w1`] and [`printed_w2`]. With the corrected weights
//! the norm h_k is the printed one.

use crate::corep::{gamma_fn, tau_closed, tau_tilde_closed, CorepParams};
use crate::error::{Error, Result};
use crate::rep::RepContext;
use crate::series::{eval_omega_scaled, SeriesSpec};
use crate::theta::ThetaContext;
use crate::tracked::{sym, TrackedArg, ZeroOrder};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiorthParams {
    pub n: usize,
    /// Λ.
    pub lambda: C64,
    /// M ≥ 0.
    pub m: usize,
    pub omega: C64,
    pub z: C64,
    pub ctx: ThetaContext,
}

impl BiorthParams {
    fn arg(&self, q: i64, l: i32, w: i32, z: i32) -> TrackedArg {
        TrackedArg::monomial(
            q,
            &[
                (sym::LAMBDA, self.ctx.qpow(2.0 * self.lambda), l),
                (sym::OMEGA, self.ctx.qpow(self.omega), w),
                (sym::Z, self.z, z),
            ],
        )
    }

    fn ints(&self) -> (i64, i64) {
        (self.n as i64, self.m as i64)
    }

    fn check_index(&self, i: usize) -> Result<i64> {
        if i > self.n {
            return Err(Error::Invalid(format!("index {i} exceeds N = {}", self.n)));
        }
        Ok(i as i64)
    }
}

/// Multiply by (q^{−2s})_j written as (−1)^j q^{−2sj+j(j−1)} (q^{2(s−j+1)})_j, so that its
/// exact zero has the same orientation as the series pole it cancels.
fn reflected_poch(ctx: &ThetaContext, r: &mut ZeroOrder, s: i64, j: i64) -> Result<()> {
    let sgn = if j % 2 == 0 { 1.0 } else { -1.0 };
    r.scale(ctx.qpow_r((-2 * s * j + j * (j - 1)) as f64) * sgn);
    r.poch(ctx, &TrackedArg::qpow(2 * (s - j + 1)), j, 1)
}

/// Printed w₁(j,k), with exact zeros still tracked.
pub fn printed_w1_tracked(p: &BiorthParams, j: usize, k: usize) -> Result<ZeroOrder> {
    let ctx = &p.ctx;
    let (n, m) = p.ints();
    let (j, k) = (p.check_index(j)?, p.check_index(k)?);
    let q = TrackedArg::qpow;
    let b = p.arg(2 * (2 * m - n + 1), 1, -2, 0);
    let mut r = ZeroOrder::scalar(ctx.qpow_r((2 * j - 2 * k) as f64));
    r.theta(ctx, &b.shift_q(4 * j), 1)?;
    r.theta(ctx, &b, -1)?;
    r.poch(ctx, &b, j, 1)?;
    r.poch(ctx, &p.arg(2 * (2 * m + 2), 1, -2, 0), j, -1)?;
    r.poch(ctx, &p.arg(2 * (m - k) - 1, 1, -1, 1), j, 1)?;
    r.poch(ctx, &p.arg(-2 * (n - 2 - m - k) + 1, 0, -1, -1), j, -1)?;
    r.pochs(
        ctx,
        &[
            q(2 * (m + k + 1)),
            p.arg(-2 * (1 - k), -1, 0, 0),
            p.arg(2 * (m + k), 0, -2, 0),
        ],
        j,
        1,
    )?;
    reflected_poch(ctx, &mut r, n - k, j)?;
    r.pochs(
        ctx,
        &[
            q(2),
            p.arg(2 * (m - n + 2), 1, 0, 0),
            q(2 * (m + 1)),
            p.arg(-2 * (1 - 2 * k), -1, 0, 0),
            q(-2 * n),
            p.arg(2 * m, 0, -2, 0),
            p.arg(2 * (m - n + 1), 1, -2, 0),
        ],
        j,
        -1,
    )?;
    Ok(r)
}

/// Printed w₂(j,l), with exact zeros still tracked.
pub fn printed_w2_tracked(p: &BiorthParams, j: usize, l: usize) -> Result<ZeroOrder> {
    let ctx = &p.ctx;
    let (n, m) = p.ints();
    let (j, l) = (p.check_index(j)?, p.check_index(l)?);
    let q = TrackedArg::qpow;
    let mut r = ZeroOrder::one();
    r.pochs(
        ctx,
        &[
            q(2 * (m + l + 1)),
            p.arg(-2 * (1 - l), -1, 0, 0),
            p.arg(2 * (m + l), 0, -2, 0),
        ],
        j,
        1,
    )?;
    reflected_poch(ctx, &mut r, n - l, j)?;
    r.poch(ctx, &p.arg(-2 * (1 - 2 * l), -1, 0, 0), j, -1)?;
    r.poch(ctx, &p.arg(-2 * (n - 3 + l - m) - 1, 1, -1, -1), j, 1)?;
    r.poch(ctx, &p.arg(2 * (m + l) - 1, 0, -1, 1), j, -1)?;
    Ok(r)
}

pub fn printed_w1(p: &BiorthParams, j: usize, k: usize) -> Result<C64> {
    printed_w1_tracked(p, j, k)?.realize()
}

pub fn printed_w2(p: &BiorthParams, j: usize, l: usize) -> Result<C64> {
    printed_w2_tracked(p, j, l)?.realize()
}

/// The normalization v(l) multiplying the printed w₂(·, l).
pub fn v_factor(p: &BiorthParams, l: usize) -> Result<C64> {
    let ctx = &p.ctx;
    let (n, m) = p.ints();
    let l = p.check_index(l)?;
    let e = -2 * n * l + (3 * l * (l - 1)) / 2 + l * m;
    let mut r = ZeroOrder::scalar(ctx.binom(n, l) * ctx.qpow_r(e as f64));
    r.theta(ctx, &TrackedArg::qpow(2), l as i32)?;
    r.poch(ctx, &p.arg(2 * (m - l) + 1, 1, -1, 1), l, 1)?;
    r.poch(ctx, &p.arg(2 * (2 - l), 1, 0, 0), m, 1)?;
    r.poch(ctx, &p.arg(2 * (1 - n - l), 1, 0, 0), l, -1)?;
    r.poch(ctx, &p.arg(2 * m - 1, 0, -1, 1), l, -1)?;
    r.poch(ctx, &p.arg(4, 1, 0, 0), m, -1)?;
    r.realize()
}

/// The normalization u(k) multiplying the printed w₁(·, k).
pub fn u_factor(p: &BiorthParams, k: usize) -> Result<C64> {
    let ctx = &p.ctx;
    let ki = p.check_index(k)?;
    let mut r = ZeroOrder::scalar(ctx.qpow_r(2.0 * ki as f64) / v_factor(p, k)?);
    r.theta(ctx, &p.arg(2, 1, 0, 0), 1)?;
    r.theta(ctx, &p.arg(2 * (1 - ki), 1, 0, 0), -1)?;
    r.realize()
}

/// The weight u(k)w₁(j,k).
pub fn weight_w1(p: &BiorthParams, j: usize, k: usize) -> Result<C64> {
    Ok(u_factor(p, k)? * printed_w1(p, j, k)?)
}

/// The weight v(l)w₂(j,l).
pub fn weight_w2(p: &BiorthParams, j: usize, l: usize) -> Result<C64> {
    Ok(v_factor(p, l)? * printed_w2(p, j, l)?)
}

/// The quadratic norm h_k.
pub fn norm_h(p: &BiorthParams, k: usize) -> Result<C64> {
    let ctx = &p.ctx;
    let (n, m) = p.ints();
    let k = p.check_index(k)?;
    let q = TrackedArg::qpow;
    let mut r = ZeroOrder::one();
    r.pochs(
        ctx,
        &[q(2), p.arg(-2 * (m + 1), -1, 0, 0), p.arg(-2 * m, -1, 2, 0), p.arg(2 * n, -1, 0, 0)],
        k,
        1,
    )?;
    r.pochs(ctx, &[q(2 * (m + 1)), q(-2 * n), p.arg(2 * m, 0, -2, 0), p.arg(0, -1, 0, 0)], k, -1)?;
    r.poch(ctx, &p.arg(-2, -1, 0, 0), 2 * k, 1)?;
    r.poch(ctx, &p.arg(0, -1, 0, 0), 2 * k, -1)?;
    r.pochs(ctx, &[p.arg(2 * m - 1, 0, -1, 1), p.arg(2 * (m - n) + 5, 0, -1, -1)], k, 1)?;
    r.pochs(ctx, &[p.arg(-2 * m + 1, -1, 1, -1), p.arg(2 * (n - m) - 5, -1, 1, 1)], k, -1)?;
    r.pochs(ctx, &[p.arg(-2 * (2 * m + 1), -1, 2, 0), p.arg(0, -1, 0, 0)], n, 1)?;
    r.pochs(ctx, &[p.arg(-2 * (m + 1), -1, 0, 0), p.arg(-2 * m, -1, 2, 0)], n, -1)?;
    r.pochs(ctx, &[p.arg(-1, 0, 1, 1), p.arg(-3, 0, -1, 1)], n, 1)?;
    r.pochs(ctx, &[p.arg(2 * m - 1, 0, -1, 1), p.arg(-2 * m - 3, 0, 1, 1)], n, -1)?;
    r.realize()
}

/// The 10ω9 factor of index pair (j, i). `shifted` selects the family whose z-dependent
/// parameters are zq^{2(N−M−j−i)+ω−3} and q^{−2(M+j+i−2)+ω+1}/z, which pairs with w₁;
/// otherwise zq^{2(N−M−j−i)+ω−1} and q^{−2(M+j+i−2)+ω−1}/z, pairing with w₂.
pub fn series_spec(p: &BiorthParams, j: usize, i: usize, shifted: bool) -> Result<SeriesSpec> {
    let (n, m) = p.ints();
    let (j, i) = (p.check_index(j)?, p.check_index(i)?);
    let (zq, zi) = if shifted { (-3, 1) } else { (-1, -1) };
    let a1 = p.arg(2 * (1 - 2 * i - j), 1, 0, 0);
    let upper = vec![
        TrackedArg::qpow(-2 * j),
        TrackedArg::qpow(-2 * i),
        p.arg(2 * (1 - i - n), 1, 0, 0),
        p.arg(2 * (m - i + 1), 1, -2, 0),
        p.arg(2 * (m - i + 2), 1, 0, 0),
        p.arg(2 * (n - m - j - i) + zq, 0, 1, 1),
        p.arg(-2 * (m + j + i - 2) + zi, 0, 1, -1),
    ];
    SeriesSpec::new(a1, upper, if j <= i { 0 } else { 1 })
}

/// The series factor alone, as a plain number.
pub fn biorth_lhs_member(p: &BiorthParams, j: usize, i: usize, shifted: bool) -> Result<C64> {
    Ok(eval_omega_scaled(&p.ctx, &series_spec(p, j, i, shifted)?, &ZeroOrder::one())?.value)
}

/// u(k)w₁(j,k) times its series, with the zeros of w₁ cancelling series poles.
fn first_factor(p: &BiorthParams, j: usize, k: usize, printed: bool) -> Result<C64> {
    let w = printed_w1_tracked(p, j, k)?;
    let s = eval_omega_scaled(&p.ctx, &series_spec(p, j, k, true)?, &w)?.value;
    Ok(if printed { s } else { s * u_factor(p, k)? })
}

/// v(l)w₂(j,l) times its series.
fn second_factor(p: &BiorthParams, j: usize, l: usize, printed: bool) -> Result<C64> {
    let w = printed_w2_tracked(p, j, l)?;
    let s = eval_omega_scaled(&p.ctx, &series_spec(p, j, l, false)?, &w)?.value;
    Ok(if printed { s } else { s * v_factor(p, l)? })
}

/// Summands j = 0..N of the biorthogonality sum for (k, l).
pub fn biorth_terms(p: &BiorthParams, k: usize, l: usize) -> Result<Vec<C64>> {
    (0..=p.n)
        .map(|j| Ok(first_factor(p, j, k, false)? * second_factor(p, j, l, false)?))
        .collect()
}

/// The same summands with the printed (uncorrected) weights.
pub fn printed_biorth_terms(p: &BiorthParams, k: usize, l: usize) -> Result<Vec<C64>> {
    (0..=p.n)
        .map(|j| Ok(first_factor(p, j, k, true)? * second_factor(p, j, l, true)?))
        .collect()
}

/// Outcome of a sum that should equal δ_kl · target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumCheck {
    pub sum: C64,
    pub target: C64,
    pub max_term: f64,
    /// |sum − target| / |target| on the diagonal, |sum| / max |term| off it.
    pub residual: f64,
}

fn sum_check(terms: &[C64], target: C64) -> SumCheck {
    let sum: C64 = terms.iter().sum();
    let max_term = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    let scale = if target != C64::new(0.0, 0.0) {
        target.norm()
    } else {
        max_term
    };
    let err = (sum - target).norm();
    SumCheck {
        sum,
        target,
        max_term,
        residual: if scale == 0.0 { err } else { err / scale },
    }
}

/// Σ_j u(k)w₁(j,k)v(l)w₂(j,l) · (two series) against δ_kl h_k.
pub fn check_biorth(p: &BiorthParams, k: usize, l: usize) -> Result<SumCheck> {
    let target = if k == l { norm_h(p, k)? } else { C64::new(0.0, 0.0) };
    Ok(sum_check(&biorth_terms(p, k, l)?, target))
}

/// The same check with the printed weights, for reporting the discrepancy.
pub fn check_printed_biorth(p: &BiorthParams, k: usize, l: usize) -> Result<SumCheck> {
    let target = if k == l { norm_h(p, k)? } else { C64::new(0.0, 0.0) };
    Ok(sum_check(&printed_biorth_terms(p, k, l)?, target))
}

/// Σ_j [u(j)w₁(l,j)·series] [v(j)w₂(k,j)·series] / h_j against δ_kl.
pub fn check_dual_biorth(p: &BiorthParams, k: usize, l: usize) -> Result<SumCheck> {
    let terms = (0..=p.n)
        .map(|j| Ok(first_factor(p, l, j, false)? * second_factor(p, k, j, false)? / norm_h(p, j)?))
        .collect::<Result<Vec<_>>>()?;
    let target = if k == l { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    Ok(sum_check(&terms, target))
}

/// Summands of the representation-level orthogonality relation from which the
/// biorthogonality follows, with λ = Λ − 2l, m = M + k and representation spectral
/// variable z̄. Their sum is δ_kl.
pub fn biorth_rep_oracle_terms(p: &BiorthParams, k: usize, l: usize) -> Result<Vec<C64>> {
    let ctx = &p.ctx;
    let n = p.n;
    let lam = p.lambda - 2.0 * l as f64;
    let m = p.m + k;
    let zr = p.z.conj();
    let zp = ctx.qpow_r(-2.0 * (n as f64 - 2.0)) / p.z;
    let rc = RepContext::new(*ctx, p.omega, lam);
    let mut dets = C64::new(1.0, 0.0);
    for i in 0..n {
        dets /= rc.det_scalar(ctx.qpow_r(-2.0 * i as f64) / p.z)?;
    }
    let shift = lam - n as f64 + 2.0 * l as f64;
    let gk = gamma_fn(n, k).eval(shift, ctx)?;
    (0..=n)
        .map(|j| {
            let tt = tau_tilde_closed(&rc, &CorepParams::new(n, j, l, m + j - k, zr)?)?;
            let ta = tau_closed(&rc.at(shift), &CorepParams::new(n, j, k, m, zp)?)?;
            let gj = gamma_fn(n, j).eval(shift - p.omega + 2.0 * (m + j - k) as f64, ctx)?;
            Ok(tt * gj / gk * ta * dets)
        })
        .collect()
}

/// The oracle sum, expected δ_kl.
pub fn biorth_rep_oracle(p: &BiorthParams, k: usize, l: usize) -> Result<C64> {
    Ok(biorth_rep_oracle_terms(p, k, l)?.iter().sum())
}

/// Max over j of the relative difference between the biorthogonality summands divided by
/// h_k and the oracle summands, measured against the largest summand.
pub fn termwise_residual(p: &BiorthParams, k: usize, l: usize) -> Result<f64> {
    let h = norm_h(p, k)?;
    let a: Vec<C64> = biorth_terms(p, k, l)?.into_iter().map(|t| t / h).collect();
    let b = biorth_rep_oracle_terms(p, k, l)?;
    let scale = a.iter().chain(&b).map(|t| t.norm()).fold(0.0, f64::max);
    let err = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    Ok(if scale == 0.0 { err } else { err / scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, m: usize) -> BiorthParams {
        BiorthParams {
            n,
            lambda: C64::new(0.37, 0.21),
            m,
            omega: C64::new(0.3, 0.2),
            z: C64::from_polar(1.3, 0.7),
            ctx: ThetaContext::new(0.15, 0.7).unwrap(),
        }
    }

    #[test]
    fn series_terminate_trivially() {
        let p = params(3, 1);
        for i in 0..=3 {
            assert_eq!(biorth_lhs_member(&p, 0, i, true).unwrap(), C64::new(1.0, 0.0));
            assert_eq!(biorth_lhs_member(&p, i, 0, false).unwrap(), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn biorth_small() {
        for n in 1..=3 {
            for mm in 0..=2 {
                let p = params(n, mm);
                for k in 0..=n {
                    for l in 0..=n {
                        let c = check_biorth(&p, k, l).unwrap();
                        assert!(c.residual < 1e-8, "N={n} M={mm} k={k} l={l}: {c:?}");
                        let d = check_dual_biorth(&p, k, l).unwrap();
                        assert!(d.residual < 1e-8, "dual N={n} M={mm} k={k} l={l}: {d:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_termwise_small() {
        for n in 1..=3 {
            let p = params(n, 1);
            for k in 0..=n {
                for l in 0..=n {
                    let r = termwise_residual(&p, k, l).unwrap();
                    assert!(r < 1e-8, "N={n} k={k} l={l}: {r}");
                }
            }
        }
    }
}

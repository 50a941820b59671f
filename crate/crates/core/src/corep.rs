//! Matrix elements t^N_kj of the corepresentations on the span of the words v_k, their
//! images τ and τ̃ in the dynamical representation, and the checks built on them.
//!
//! Three independent evaluations of τ are provided: the word `t_word` applied through
//! [`RepContext::apply`], the explicit product of representation coefficients
//! [`tau_product`], and the closed 10ω9 form [`tau_closed`]. For τ̃ the word-level
//! evaluation goes through the star structure.

use crate::algebra::{Element, Letter, Tensor};
use crate::coef::CoefFn;
use crate::error::{Error, Result};
use crate::relations::rll_relations;
use crate::rep::{apply_tensor_scaled, scaled_residual, RepContext};
use crate::series::{eval_omega_scaled, SeriesSpec};
use crate::theta::ThetaContext;
use crate::tracked::{sym, TrackedArg, ZeroOrder};
use crate::C64;
use std::collections::BTreeMap;

/// Indices of a matrix element τ^N_kj acting on e_m, at spectral parameter z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorepParams {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub m: usize,
    pub z: C64,
}

impl CorepParams {
    pub fn new(n: usize, k: usize, j: usize, m: usize, z: C64) -> Result<Self> {
        if k > n || j > n {
            return Err(Error::Invalid(format!("indices k = {k}, j = {j} exceed N = {n}")));
        }
        Ok(CorepParams { n, k, j, m, z })
    }

    /// Output index of t^N_kj on e_m, if any.
    pub fn out_index(&self) -> Option<usize> {
        (self.m + self.k).checked_sub(self.j)
    }

    /// Range of the internal summation index.
    fn l_range(&self) -> std::ops::RangeInclusive<usize> {
        (self.k + self.j).saturating_sub(self.n)..=self.k.min(self.j)
    }
}

fn qz(ctx: &ThetaContext, e: i64, z: C64) -> C64 {
    ctx.qpow_r(2.0 * e as f64) * z
}

/// v_k(z) = γ(z)γ(q²z)⋯γ(q^{2(N−k−1)}z) α(q^{2(N−k)}z)⋯α(q^{2(N−1)}z).
pub fn v_word(ctx: &ThetaContext, n: usize, k: usize, z: C64) -> Element {
    let n = n as i64;
    let k = k as i64;
    let mut w: Vec<Letter> = (0..n - k).map(|e| Letter::gamma(qz(ctx, e, z))).collect();
    w.extend((n - k..n).map(|e| Letter::alpha(qz(ctx, e, z))));
    Element::word(w)
}

/// The coefficient of the l-th word of t^N_kj, a function of μ.
pub fn t_coef(n: usize, k: usize, j: usize, l: usize) -> CoefFn {
    let (n, k, j, l) = (n as i64, k as i64, j as i64, l as i64);
    let c = |x: i64| 2.0 * x as f64;
    CoefFn::binom(k, l)
        .mul(&CoefFn::binom(n - k, j - l))
        .mul(&CoefFn::poch_q(2.0, c(n - k - 2 * j + l + 2), l))
        .div(&CoefFn::poch_q(2.0, c(n - 2 * j + 2), l))
        .mul(&CoefFn::poch_q(2.0, c(l - j + 2), j - l))
        .div(&CoefFn::poch_q(2.0, c(n - 2 * j - k + 2 * l + 2), j - l))
}

/// t^N_kj(μ, z) as a sum of words with f(μ) coefficients.
pub fn t_word(ctx: &ThetaContext, n: usize, k: usize, j: usize, z: C64) -> Element {
    let p = CorepParams { n, k, j, m: 0, z };
    let (ni, ki, ji) = (n as i64, k as i64, j as i64);
    let mut out = Element::zero();
    for l in p.l_range() {
        let li = l as i64;
        let mut w = vec![Letter::Right(t_coef(n, k, j, l))];
        w.extend(((ni - ji - ki + li)..(ni - ki)).rev().map(|e| Letter::gamma(qz(ctx, e, z))));
        w.extend((0..(ni - ji - ki + li)).rev().map(|e| Letter::delta(qz(ctx, e, z))));
        w.extend(((ni - li)..ni).rev().map(|e| Letter::alpha(qz(ctx, e, z))));
        w.extend(((ni - ki)..(ni - li)).rev().map(|e| Letter::beta(qz(ctx, e, z))));
        out = out.add(&Element::word(w));
    }
    out
}

/// τ^N_kj(λ0, z) on e_m from the word.
pub fn tau_word(rc: &RepContext, p: &CorepParams) -> Result<C64> {
    match p.out_index() {
        Some(o) => rc.coefficient(&t_word(&rc.ctx, p.n, p.k, p.j, p.z), p.m, o),
        None => Ok(C64::new(0.0, 0.0)),
    }
}

/// τ from explicit products of the representation coefficients.
pub fn tau_product(rc: &RepContext, p: &CorepParams) -> Result<C64> {
    if p.out_index().is_none() {
        return Ok(C64::new(0.0, 0.0));
    }
    let ctx = &rc.ctx;
    let lam = rc.lambda0;
    let (n, k, j, m) = (p.n as i64, p.k as i64, p.j as i64, p.m as i64);
    let z = p.z;
    let f = |x: i64| x as f64;
    let mut s = C64::new(0.0, 0.0);
    for l in p.l_range() {
        let li = l as i64;
        let mut c = t_coef(p.n, p.k, p.j, l).eval(lam, ctx)?;
        for i in 0..(j - li) {
            c *= rc.c_coef((m + k - li - i) as usize, lam + f(-j + li + 1 + i), qz(ctx, i + n - k - j + li, z))?;
        }
        for i in 0..(n - k - j + li) {
            c *= rc.d_coef((m + k - li) as usize, lam + f(n - k - 2 * j + 2 * li - 1 - i), qz(ctx, i, z))?;
        }
        for i in 0..li {
            c *= rc.a_coef((m + k - li) as usize, lam + f(i + n - k - 2 * j + li + 1), qz(ctx, n - li + i, z))?;
        }
        for i in 0..(k - li) {
            c *= rc.b_coef((m + i) as usize, lam + f(n - 2 * j - 1 - i), qz(ctx, i + n - k, z))?;
        }
        s += c;
    }
    Ok(s)
}

/// Builder for tracked monomials q^e (q^{2λ})^a (q^ω)^b z^c.
struct Monomials {
    lam: C64,
    om: C64,
    z: C64,
}

impl Monomials {
    fn new(ctx: &ThetaContext, lambda: C64, omega: C64, z: C64) -> Self {
        Monomials {
            lam: ctx.qpow(2.0 * lambda),
            om: ctx.qpow(omega),
            z,
        }
    }

    fn arg(&self, q: i64, l: i32, w: i32, z: i32) -> TrackedArg {
        TrackedArg::monomial(q, &[(sym::LAMBDA, self.lam, l), (sym::OMEGA, self.om, w), (sym::Z, self.z, z)])
    }

    fn q(&self, q: i64) -> TrackedArg {
        TrackedArg::qpow(q)
    }
}

fn sign(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// τ^N_kj(λ0, z) on e_m in closed form: a prefactor times a 10ω9 series whose exact
/// zeros cancel against the prefactor when k + j > N.
pub fn tau_closed(rc: &RepContext, p: &CorepParams) -> Result<C64> {
    if p.out_index().is_none() {
        return Ok(C64::new(0.0, 0.0));
    }
    let ctx = &rc.ctx;
    let lam = rc.lambda0;
    let s = Monomials::new(ctx, lam, rc.omega, p.z);
    let (n, k, j, m) = (p.n as i64, p.k as i64, p.j as i64, p.m as i64);
    let e0 = (3 * k * (k - 1)) / 2 + n * (n + 1) + (5 * j * (j + 1)) / 2 - 2 * n * (k + 2 * j) + m * (k - j) + 3 * j * k;
    let mut pre = ZeroOrder::scalar(
        sign(n - k) * ctx.qpow(C64::new(e0 as f64, 0.0) + lam * (2 * n - 2 * k) as f64),
    );
    pre.theta(ctx, &s.q(2), (k - j) as i32)?;
    pre.pochs(
        ctx,
        &[
            s.arg(-2, -1, 0, 0),
            s.q(2 * (m + k - j + 1)),
            s.q(2 * (n - k - j + 1)),
            s.arg(2 * (1 - m - k), 0, 2, 0),
            s.arg(2 * (n - 2 * j + m + 2) - 1, 1, -1, 1),
        ],
        j,
        1,
    )?;
    pre.pochs(ctx, &[s.q(2), s.arg(2 * (n - k - 2 * j + 2), 1, 0, 0), s.arg(2 * (2 - j), 1, 0, 0)], j, -1)?;
    pre.poch(ctx, &s.arg(-2 * (-2 * j + m + k) - 1, -1, 1, 1), k, 1)?;
    pre.poch(ctx, &s.arg(-2 * (n - 2 * j), -1, 0, 0), k, -1)?;
    pre.pochs(ctx, &[s.arg(-2 * (n - 2 * j + m), -1, 2, 0), s.arg(2 * (m + k) + 1, 0, -1, 1)], n - k - j, 1)?;
    pre.poch(ctx, &s.arg(2 * (1 - j), 1, 0, 0), n - k - j, -1)?;
    pre.poch(ctx, &s.arg(1, 0, 1, 1), n, -1)?;
    let a1 = s.arg(2 * (n - 2 * j - k + 1), 1, 0, 0);
    let upper = vec![
        s.q(-2 * k),
        s.q(-2 * j),
        s.arg(2 * (1 - j), 1, 0, 0),
        s.arg(2 * (n - 2 * j + m + 1), 1, -2, 0),
        s.arg(2 * (n + 2 + m - 2 * j), 1, 0, 0),
        s.arg(2 * (n - m - k) + 1, 0, 1, 1),
        s.arg(-2 * (m + k - 1) - 1, 0, 1, -1),
    ];
    let slot = if k <= j { 0 } else { 1 };
    let spec = SeriesSpec::new(a1, upper, slot)?;
    Ok(eval_omega_scaled(ctx, &spec, &pre)?.value)
}

/// τ̃^N_kj(λ0, z) on e_m from the starred word.
pub fn tau_tilde_word(rc: &RepContext, p: &CorepParams) -> Result<C64> {
    match (p.m + p.j).checked_sub(p.k) {
        Some(o) => {
            let w = t_word(&rc.ctx, p.n, p.k, p.j, p.z).star(&rc.ctx);
            rc.coefficient(&w, p.m, o)
        }
        None => Ok(C64::new(0.0, 0.0)),
    }
}

/// τ̃^N_kj(λ0, z) on e_m in closed form.
pub fn tau_tilde_closed(rc: &RepContext, p: &CorepParams) -> Result<C64> {
    if p.m + p.j < p.k {
        return Ok(C64::new(0.0, 0.0));
    }
    let ctx = &rc.ctx;
    let lam = rc.lambda0;
    let s = Monomials::new(ctx, lam, rc.omega, p.z.conj());
    let (n, k, j, m) = (p.n as i64, p.k as i64, p.j as i64, p.m as i64);
    let e0 = 2 * j * j + (k * (k - 1)) / 2 - (j * (j - 1)) / 2 + k * (1 - m - j) + 2 * m * (n - j - k) + m * j
        + 2 * (n - k) * (1 - k)
        - (n - k - j) * (n - k - j - 1);
    let mut pre = ZeroOrder::scalar(
        sign(n - j) * ctx.qpow(C64::new(e0 as f64, 0.0) + lam * (2 * (n - k)) as f64),
    );
    pre.theta(ctx, &s.q(2), (j - k) as i32)?;
    pre.pochs(
        ctx,
        &[
            s.q(2 * (n - k - j + 1)),
            s.arg(-2 * (2 * j - n + 1), -1, 0, 0),
            s.arg(-2 * (2 * j - k + m) + 1, -1, 1, -1),
        ],
        j,
        1,
    )?;
    pre.pochs(
        ctx,
        &[
            s.q(2),
            s.arg(2 * (2 - k), 1, 0, 0),
            s.arg(-2 * (2 * j - n), -1, 0, 0),
            s.arg(-2 * (n - k - 1) + 1, 0, 1, -1),
        ],
        j,
        -1,
    )?;
    pre.pochs(
        ctx,
        &[
            s.q(2 * (m + j - k + 1)),
            s.arg(2 * (1 - m - j), 0, 2, 0),
            s.arg(-2 * (n - 3 + k - m - j) - 1, 1, -1, -1),
        ],
        k,
        1,
    )?;
    pre.pochs(ctx, &[s.arg(2 * (2 - k), 1, 0, 0), s.arg(-2 * (n - 1) + 1, 0, 1, -1)], k, -1)?;
    pre.pochs(ctx, &[s.arg(-2 * (j + m + 1 - k), -1, 0, 0), s.arg(-2 * (n - k + m - 1) + 1, 0, 1, -1)], n - j - k, 1)?;
    pre.pochs(ctx, &[s.arg(2 * (2 - n + j), 1, 0, 0), s.arg(-2 * (n - j - k - 1) + 1, 0, 1, -1)], n - j - k, -1)?;
    let a1 = s.arg(2 * (1 - k), 1, 0, 0);
    let upper = vec![
        s.q(-2 * k),
        s.q(-2 * j),
        s.arg(2 * (j - n + 1), 1, 0, 0),
        s.arg(2 * (m + j - k + 1), 1, -2, 0),
        s.arg(2 * (j + m - k + 2), 1, 0, 0),
        s.arg(2 * (n - m - j) - 1, 0, 1, 1),
        s.arg(-2 * (m + j - 1) + 1, 0, 1, -1),
    ];
    let slot = if k <= j { 0 } else { 1 };
    let spec = SeriesSpec::new(a1, upper, slot)?;
    Ok(eval_omega_scaled(ctx, &spec, &pre)?.value)
}

/// Γ_k(μ) of the unitarity relation.
pub fn gamma_fn(n: usize, k: usize) -> CoefFn {
    let (n, k) = (n as i64, k as i64);
    let f = |x: i64| x as f64;
    let mut r = CoefFn::binom(n, k)
        .mul(&CoefFn::poch_q(2.0, f(2 * (2 - k)), k))
        .div(&CoefFn::poch_q(2.0, f(2 * (n - 2 * k + 2)), k));
    for i in 0..(n - k) {
        r = r
            .mul(&CoefFn::pow_q(-1.0, f(-(n - 2 * k - i))))
            .div(&CoefFn::theta_q(-2.0, f(-2 * (n - 2 * k - i + 1))));
    }
    for i in 0..k {
        r = r
            .mul(&CoefFn::pow_q(-1.0, f(k - i)))
            .div(&CoefFn::theta_q(-2.0, f(-2 * (i - k + 1))));
    }
    r
}

/// Both sides of the coproduct identity Δ(v_k) = Σ_j t^N_kj ⊗ v_j on e_m ⊗ e_n'.
#[allow(clippy::too_many_arguments)]
pub fn check_coproduct(
    ctx: &ThetaContext,
    n: usize,
    k: usize,
    omega1: C64,
    omega2: C64,
    lambda0: C64,
    z: C64,
    m: usize,
    n2: usize,
) -> Result<f64> {
    let lhs = v_word(ctx, n, k, z).coproduct();
    let mut rhs = Tensor::default();
    for j in 0..=n {
        let t = t_word(ctx, n, k, j, z);
        let v = &v_word(ctx, n, j, z).terms[0].1;
        for (c, w) in t.terms {
            rhs.terms.push((c, w, v.clone()));
        }
    }
    let (a, sa) = apply_tensor_scaled(ctx, omega1, omega2, lambda0, &lhs, m, n2)?;
    let (b, sb) = apply_tensor_scaled(ctx, omega1, omega2, lambda0, &rhs, m, n2)?;
    Ok(scaled_residual(&a, &b, sa.max(sb)))
}

/// Max residual of the RLL relations in the two-leg tensor action on e_m ⊗ e_n'.
#[allow(clippy::too_many_arguments)]
pub fn tensor_rll_residual(
    ctx: &ThetaContext,
    omega1: C64,
    omega2: C64,
    lambda0: C64,
    z1: C64,
    z2: C64,
    m: usize,
    n2: usize,
) -> Result<f64> {
    let mut r: f64 = 0.0;
    for rel in rll_relations(z1, z2) {
        let (a, sa) = apply_tensor_scaled(ctx, omega1, omega2, lambda0, &rel.lhs.coproduct(), m, n2)?;
        let (b, sb) = apply_tensor_scaled(ctx, omega1, omega2, lambda0, &rel.rhs.coproduct(), m, n2)?;
        r = r.max(scaled_residual(&a, &b, sa.max(sb)));
    }
    Ok(r)
}

/// Γ_k(μ) S(t^N_kj(μ, z))* against Γ_j(λ) t^N_jk(μ, q^{−2(N−2)}/z̄) ∏_i det⁻¹(q^{−2i}/z̄), on
/// e_m.
pub fn check_unitarity(rc: &RepContext, p: &CorepParams) -> Result<f64> {
    let ctx = &rc.ctx;
    let zb = p.z.conj();
    let lhs = Element::letter(Letter::Right(gamma_fn(p.n, p.k)))
        .mul(&t_word(ctx, p.n, p.k, p.j, p.z).antipode(ctx).star(ctx));
    let dets: Vec<Letter> = (0..p.n as i64)
        .map(|i| Letter::DetInv(ctx.qpow_r(-2.0 * i as f64) / zb))
        .collect();
    let rhs = Element::letter(Letter::Left(gamma_fn(p.n, p.j)))
        .mul(&t_word(ctx, p.n, p.j, p.k, ctx.qpow_r(-2.0 * (p.n as f64 - 2.0)) / zb))
        .mul(&Element::word(dets));
    let (a, sa) = rc.apply_scaled(&lhs, p.m)?;
    let (b, sb) = rc.apply_scaled(&rhs, p.m)?;
    Ok(scaled_residual(&a, &b, sa.max(sb)))
}

/// True iff ε(t^N_kj) is exactly δ_kj T_{N−2k}.
pub fn counit_is_exact(ctx: &ThetaContext, n: usize, k: usize, j: usize) -> bool {
    let e = t_word(ctx, n, k, j, C64::new(0.8, 0.3)).counit();
    if k != j {
        return e.is_empty();
    }
    e.len() == 1 && e[0].0 == C64::new(1.0, 0.0) && e[0].1.f.is_one() && e[0].1.shift == n as i64 - 2 * k as i64
}

/// Ratio of smallest to largest singular value of the matrix of coefficients of
/// t^N_Nj(μ, z) e_m at e_{m+N−j}, over m, j ∈ {0, …, N}, after row and column
/// equilibration.
pub fn independence_ratio(rc: &RepContext, n: usize, z: C64) -> Result<f64> {
    let mut mat = nalgebra::DMatrix::<C64>::zeros(n + 1, n + 1);
    for m in 0..=n {
        for j in 0..=n {
            mat[(m, j)] = tau_word(rc, &CorepParams::new(n, n, j, m, z)?)?;
        }
    }
    // Rank is invariant under diagonal scaling; equilibrate rows then columns so the
    // ratio measures dependence rather than the spread of magnitudes across m and j.
    for mut row in mat.row_iter_mut() {
        let s = row.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            row /= C64::new(s, 0.0);
        }
    }
    for mut col in mat.column_iter_mut() {
        let s = col.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            col /= C64::new(s, 0.0);
        }
    }
    let sv = mat.singular_values();
    let max = sv.max();
    Ok(if max == 0.0 { 0.0 } else { sv.min() / max })
}

/// All τ oracles for one parameter set, keyed by name.
pub fn tau_oracles(rc: &RepContext, p: &CorepParams) -> Result<BTreeMap<&'static str, C64>> {
    let mut out = BTreeMap::new();
    out.insert("word", tau_word(rc, p)?);
    out.insert("product", tau_product(rc, p)?);
    out.insert("closed", tau_closed(rc, p)?);
    Ok(out)
}

/// |a − b| / max(|a|, |b|), 0 when both vanish.
pub fn rel_diff(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

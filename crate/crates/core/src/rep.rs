//! The dynamical representation on H^ω = ⊕_k C e_k. Generators act as weighted shift
//! operators whose coefficients depend on the dynamical variable λ, and words are
//! evaluated right to left with the λ-shifts composed lazily.

use crate::algebra::{Element, Gen, Letter, Tensor};
use crate::error::{Error, Result};
use crate::theta::ThetaContext;
use crate::C64;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepContext {
    pub omega: C64,
    /// Point at which final coefficients are evaluated.
    pub lambda0: C64,
    pub ctx: ThetaContext,
}

/// A multiple of the basis vector e_index, the coefficient already evaluated at λ0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorState {
    pub index: usize,
    pub coeff: C64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepCoefficients {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl RepContext {
    pub fn new(ctx: ThetaContext, omega: C64, lambda0: C64) -> Self {
        RepContext {
            omega,
            lambda0,
            ctx,
        }
    }

    pub fn at(&self, lambda0: C64) -> Self {
        RepContext { lambda0, ..*self }
    }

    fn common_den(&self, lambda: C64, z: C64) -> Result<C64> {
        let ctx = &self.ctx;
        Ok(ctx.theta_den(ctx.qpow(-2.0 * (lambda + 1.0)), "theta(q^{-2(lambda+1)})")?
            * ctx.theta_den(z * ctx.qpow(self.omega + 1.0), "theta(z q^{omega+1})")?)
    }

    pub fn a_coef(&self, k: usize, lambda: C64, z: C64) -> Result<C64> {
        let ctx = &self.ctx;
        let k = k as f64;
        let w = self.omega;
        Ok(ctx.qpow_r(2.0 * k)
            * ctx.theta(ctx.qpow(-2.0 * (lambda + 1.0) - 2.0 * k))?
            * ctx.theta(z * ctx.qpow(w - 2.0 * k + 1.0))?
            / self.common_den(lambda, z)?)
    }

    pub fn b_coef(&self, k: usize, lambda: C64, z: C64) -> Result<C64> {
        let ctx = &self.ctx;
        let k = k as f64;
        let w = self.omega;
        Ok(ctx.qpow_r(k)
            * ctx.theta(ctx.qpow_r(2.0))?
            * ctx.theta(z * ctx.qpow(-2.0 * (lambda + 1.0) + w - 2.0 * k - 1.0))?
            / self.common_den(lambda, z)?)
    }

    pub fn c_coef(&self, k: usize, lambda: C64, z: C64) -> Result<C64> {
        if k == 0 {
            return Ok(C64::new(0.0, 0.0));
        }
        let ctx = &self.ctx;
        let k = k as f64;
        let w = self.omega;
        Ok(ctx.qpow_r(1.0 - k)
            * ctx.theta(ctx.qpow_r(2.0 * k))?
            * ctx.theta(ctx.qpow(2.0 * (w - k + 1.0)))?
            * ctx.theta(z * ctx.qpow(2.0 * (lambda + 1.0) - w + 2.0 * k - 1.0))?
            / (ctx.theta(ctx.qpow_r(2.0))?
                * ctx.theta_den(ctx.qpow(2.0 * (lambda + 1.0)), "theta(q^{2(lambda+1)})")?
                * ctx.theta_den(z * ctx.qpow(w + 1.0), "theta(z q^{omega+1})")?))
    }

    pub fn d_coef(&self, k: usize, lambda: C64, z: C64) -> Result<C64> {
        let ctx = &self.ctx;
        let k = k as f64;
        let w = self.omega;
        Ok(ctx.theta(ctx.qpow(-2.0 * (lambda + 1.0 - w + k)))?
            * ctx.theta(z * ctx.qpow(-w + 2.0 * k + 1.0))?
            / self.common_den(lambda, z)?)
    }

    /// (A_k, B_k, C_k, D_k)(λ, z).
    pub fn rep_coefficients(&self, k: usize, lambda: C64, z: C64) -> Result<RepCoefficients> {
        Ok(RepCoefficients {
            a: self.a_coef(k, lambda, z)?,
            b: self.b_coef(k, lambda, z)?,
            c: self.c_coef(k, lambda, z)?,
            d: self.d_coef(k, lambda, z)?,
        })
    }

    /// The scalar by which det(z) acts: q^ω θ(zq^{1−ω})/θ(zq^{1+ω}).
    pub fn det_scalar(&self, z: C64) -> Result<C64> {
        let ctx = &self.ctx;
        let w = self.omega;
        Ok(ctx.qpow(w) * ctx.theta(z * ctx.qpow(1.0 - w))?
            / ctx.theta_den(z * ctx.qpow(1.0 + w), "det scalar")?)
    }

    /// Apply a single word to e_m. `None` is the zero vector.
    pub fn apply_word(&self, word: &[Letter], m: usize) -> Result<Option<VectorState>> {
        // Index of the state each letter acts on, scanning right to left.
        let mut ks = vec![0usize; word.len()];
        let mut k = m as i64;
        for (i, l) in word.iter().enumerate().rev() {
            ks[i] = k as usize;
            k += match l {
                Letter::Gen(Gen::Beta, _) => 1,
                Letter::Gen(Gen::Gamma, _) => -1,
                _ => 0,
            };
            if k < 0 {
                return Ok(None);
            }
        }
        let out = k as usize;
        // Coefficients compose as f · T_a g, so reading left to right the evaluation
        // point moves by each letter's shift.
        let mut lam = self.lambda0;
        let mut coeff = C64::new(1.0, 0.0);
        for (pos, (l, &kk)) in word.iter().zip(&ks).enumerate() {
            let tag = |e: Error| match e {
                Error::Pole { context, .. } => Error::pole(format!("letter {l}: {context}"), pos as i64),
                other => other,
            };
            let (factor, shift) = match l {
                Letter::Gen(Gen::Alpha, z) => (self.a_coef(kk, lam, *z), -1.0),
                Letter::Gen(Gen::Beta, z) => (self.b_coef(kk, lam, *z), 1.0),
                Letter::Gen(Gen::Gamma, z) => (self.c_coef(kk, lam, *z), -1.0),
                Letter::Gen(Gen::Delta, z) => (self.d_coef(kk, lam, *z), 1.0),
                Letter::DetInv(z) => (self.det_scalar(*z).map(|d| d.inv()), 0.0),
                Letter::Left(f) => (f.eval(lam - self.omega + 2.0 * kk as f64, &self.ctx), 0.0),
                Letter::Right(f) => (f.eval(lam, &self.ctx), 0.0),
            };
            coeff *= factor.map_err(tag)?;
            lam += shift;
        }
        Ok(Some(VectorState { index: out, coeff }))
    }

    /// Apply an element to e_m; the result maps output index to coefficient.
    pub fn apply(&self, x: &Element, m: usize) -> Result<BTreeMap<usize, C64>> {
        let mut out = BTreeMap::new();
        for (c, w) in &x.terms {
            if let Some(v) = self.apply_word(w, m)? {
                *out.entry(v.index).or_insert(C64::new(0.0, 0.0)) += c * v.coeff;
            }
        }
        Ok(out)
    }

    /// As [`apply`](Self::apply), also returning the largest single-word contribution, the
    /// natural scale for judging cancellation in the sum.
    pub fn apply_scaled(&self, x: &Element, m: usize) -> Result<(BTreeMap<usize, C64>, f64)> {
        let mut out = BTreeMap::new();
        let mut scale: f64 = 0.0;
        for (c, w) in &x.terms {
            if let Some(v) = self.apply_word(w, m)? {
                let t = c * v.coeff;
                scale = scale.max(t.norm());
                *out.entry(v.index).or_insert(C64::new(0.0, 0.0)) += t;
            }
        }
        Ok((out, scale))
    }

    /// Coefficient of e_index in x·e_m.
    pub fn coefficient(&self, x: &Element, m: usize, index: usize) -> Result<C64> {
        Ok(self
            .apply(x, m)?
            .get(&index)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0)))
    }
}

/// Evaluate a two-leg tensor on e_m ⊗ e_n. The second leg is evaluated under `omega2` at
/// λ0; the first leg under `omega1` at λ0 − ω2 + 2n′, where n′ is the second leg's output
/// index.
pub fn apply_tensor(
    ctx: &ThetaContext,
    omega1: C64,
    omega2: C64,
    lambda0: C64,
    t: &Tensor,
    m: usize,
    n: usize,
) -> Result<BTreeMap<(usize, usize), C64>> {
    Ok(apply_tensor_scaled(ctx, omega1, omega2, lambda0, t, m, n)?.0)
}

/// [`apply_tensor`] plus the largest single-term contribution.
pub fn apply_tensor_scaled(
    ctx: &ThetaContext,
    omega1: C64,
    omega2: C64,
    lambda0: C64,
    t: &Tensor,
    m: usize,
    n: usize,
) -> Result<(BTreeMap<(usize, usize), C64>, f64)> {
    let second = RepContext::new(*ctx, omega2, lambda0);
    let mut out = BTreeMap::new();
    let mut scale: f64 = 0.0;
    for (c, w1, w2) in &t.terms {
        let Some(v2) = second.apply_word(w2, n)? else {
            continue;
        };
        let first = RepContext::new(*ctx, omega1, lambda0 - omega2 + 2.0 * v2.index as f64);
        let Some(v1) = first.apply_word(w1, m)? else {
            continue;
        };
        let term = c * v1.coeff * v2.coeff;
        scale = scale.max(term.norm());
        *out.entry((v1.index, v2.index)).or_insert(C64::new(0.0, 0.0)) += term;
    }
    Ok((out, scale))
}

/// max |a − b| / max(|a|, |b|) over the union of keys; 0 when both are empty.
pub fn map_residual<K: Ord + Copy>(a: &BTreeMap<K, C64>, b: &BTreeMap<K, C64>) -> f64 {
    scaled_residual(a, b, 0.0)
}

/// max |a − b| / max(scale, |a|, |b|) over the union of keys.
pub fn scaled_residual<K: Ord + Copy>(a: &BTreeMap<K, C64>, b: &BTreeMap<K, C64>, scale: f64) -> f64 {
    let zero = C64::new(0.0, 0.0);
    let mut err: f64 = 0.0;
    let mut scale = scale;
    for k in a.keys().chain(b.keys()) {
        let x = a.get(k).copied().unwrap_or(zero);
        let y = b.get(k).copied().unwrap_or(zero);
        err = err.max((x - y).norm());
        scale = scale.max(x.norm()).max(y.norm());
    }
    if scale == 0.0 {
        err
    } else {
        err / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Letter;

    fn rc() -> RepContext {
        RepContext::new(
            ThetaContext::new(0.15, 0.7).unwrap(),
            C64::new(0.3, 0.2),
            C64::new(0.37, 0.21),
        )
    }

    #[test]
    fn gamma_kills_e0() {
        let z = C64::new(1.1, 0.4);
        assert_eq!(rc().apply_word(&[Letter::gamma(z)], 0).unwrap(), None);
    }

    #[test]
    fn d0_at_zero_omega_is_one() {
        let r = RepContext {
            omega: C64::new(0.0, 0.0),
            ..rc()
        };
        let d = r.d_coef(0, C64::new(0.4, -0.3), C64::new(0.8, 0.9)).unwrap();
        assert!((d - 1.0).norm() < 1e-14);
    }

    #[test]
    fn single_alpha_is_a_coefficient() {
        let r = rc();
        let z = C64::new(0.7, -0.5);
        let v = r.apply_word(&[Letter::alpha(z)], 3).unwrap().unwrap();
        assert_eq!(v.index, 3);
        assert_eq!(v.coeff, r.a_coef(3, r.lambda0, z).unwrap());
    }

    #[test]
    fn right_to_left_shift() {
        // β(z₁)α(z₂) e_m = A_m(λ+1, z₂) B_m(λ, z₁) e_{m+1}
        let r = rc();
        let (z1, z2) = (C64::new(0.7, -0.5), C64::new(1.2, 0.3));
        let v = r
            .apply_word(&[Letter::beta(z1), Letter::alpha(z2)], 2)
            .unwrap()
            .unwrap();
        let expect = r.b_coef(2, r.lambda0, z1).unwrap() * r.a_coef(2, r.lambda0 + 1.0, z2).unwrap();
        assert_eq!(v.index, 3);
        assert!((v.coeff - expect).norm() < 1e-14 * expect.norm());
    }
}

//! Coefficient functions λ ↦ ℂ built from theta factors and powers of q.
//!
//! A [`CoefFn`] is `scale · ∏ factor(λ)^power` where each factor is either
//! `θ(w · q^{aλ + c})` or `q^{aλ + c}`. The class is closed under products, quotients,
//! shifts λ ↦ λ + α and the conjugation f ↦ conj(f(conj λ)), which is all the algebra
//! needs. Factors are kept in canonical order so equal functions compare equal.

use crate::error::{Error, Result};
use crate::theta::ThetaContext;
use crate::C64;
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, Copy)]
pub enum Factor {
    /// θ(w · q^{aλ + c}).
    Theta { a: f64, c: C64, w: C64 },
    /// q^{aλ + c}.
    Pow { a: f64, c: C64 },
}

impl Factor {
    fn key(&self) -> (u8, [u64; 5]) {
        match *self {
            Factor::Theta { a, c, w } => (
                0,
                [
                    a.to_bits(),
                    c.re.to_bits(),
                    c.im.to_bits(),
                    w.re.to_bits(),
                    w.im.to_bits(),
                ],
            ),
            Factor::Pow { a, c } => (1, [a.to_bits(), c.re.to_bits(), c.im.to_bits(), 0, 0]),
        }
    }

    fn eval(&self, lambda: C64, ctx: &ThetaContext) -> Result<C64> {
        match *self {
            Factor::Theta { a, c, w } => ctx.theta(w * ctx.qpow(lambda * a + c)),
            Factor::Pow { a, c } => Ok(ctx.qpow(lambda * a + c)),
        }
    }

    fn shifted(&self, alpha: C64) -> Factor {
        match *self {
            Factor::Theta { a, c, w } => Factor::Theta {
                a,
                c: c + alpha * a,
                w,
            },
            Factor::Pow { a, c } => Factor::Pow { a, c: c + alpha * a },
        }
    }

    fn conj(&self) -> Factor {
        match *self {
            Factor::Theta { a, c, w } => Factor::Theta {
                a,
                c: c.conj(),
                w: w.conj(),
            },
            Factor::Pow { a, c } => Factor::Pow { a, c: c.conj() },
        }
    }
}

impl PartialEq for Factor {
    fn eq(&self, o: &Self) -> bool {
        self.key() == o.key()
    }
}

impl Eq for Factor {}

impl PartialOrd for Factor {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Factor {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefFn {
    pub scale: C64,
    pub factors: Vec<(Factor, i32)>,
}

impl CoefFn {
    pub fn constant(v: C64) -> Self {
        CoefFn {
            scale: v,
            factors: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    /// θ(w · q^{aλ + c}).
    pub fn theta(a: f64, c: C64, w: C64) -> Self {
        CoefFn {
            scale: C64::new(1.0, 0.0),
            factors: vec![(Factor::Theta { a, c, w }, 1)],
        }
        .canonical()
    }

    /// θ(q^{aλ + c}).
    pub fn theta_q(a: f64, c: f64) -> Self {
        Self::theta(a, C64::new(c, 0.0), C64::new(1.0, 0.0))
    }

    /// q^{aλ + c}.
    pub fn pow(a: f64, c: C64) -> Self {
        CoefFn {
            scale: C64::new(1.0, 0.0),
            factors: vec![(Factor::Pow { a, c }, 1)],
        }
        .canonical()
    }

    pub fn pow_q(a: f64, c: f64) -> Self {
        Self::pow(a, C64::new(c, 0.0))
    }

    /// F(λ) = q^λ θ(q^{−2(λ+1)}).
    pub fn f_fn() -> Self {
        Self::pow_q(1.0, 0.0).mul(&Self::theta_q(-2.0, -2.0))
    }

    /// (q^{aλ + c})_n in base q² (n ≥ 0).
    pub fn poch_q(a: f64, c: f64, n: i64) -> Self {
        let mut r = Self::one();
        for i in 0..n.max(0) {
            r = r.mul(&Self::theta_q(a, c + 2.0 * i as f64));
        }
        r
    }

    /// The elliptic binomial [k, l] as a constant built from theta factors, so that equal
    /// binomials cancel structurally.
    pub fn binom(k: i64, l: i64) -> Self {
        if l < 0 || l > k {
            return Self::constant(C64::new(0.0, 0.0));
        }
        let mut r = Self::one();
        for i in 1..=l {
            r = r
                .mul(&Self::theta_q(0.0, 2.0 * (k - l + i) as f64))
                .div(&Self::theta_q(0.0, 2.0 * i as f64));
        }
        r
    }

    fn canonical(mut self) -> Self {
        let mut pow_a = 0.0;
        let mut pow_c = C64::new(0.0, 0.0);
        let mut thetas: Vec<(Factor, i32)> = Vec::new();
        for (f, p) in self.factors.drain(..) {
            match f {
                Factor::Pow { a, c } => {
                    pow_a += a * p as f64;
                    pow_c += c * p as f64;
                }
                t => thetas.push((t, p)),
            }
        }
        thetas.sort_by(|x, y| x.0.cmp(&y.0));
        let mut merged: Vec<(Factor, i32)> = Vec::new();
        for (f, p) in thetas {
            match merged.last_mut() {
                Some(last) if last.0 == f => last.1 += p,
                _ => merged.push((f, p)),
            }
        }
        merged.retain(|&(_, p)| p != 0);
        if pow_a != 0.0 || pow_c != C64::new(0.0, 0.0) {
            merged.push((Factor::Pow { a: pow_a, c: pow_c }, 1));
        }
        self.factors = merged;
        self
    }

    pub fn mul(&self, o: &CoefFn) -> CoefFn {
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().copied());
        CoefFn {
            scale: self.scale * o.scale,
            factors,
        }
        .canonical()
    }

    pub fn inv(&self) -> CoefFn {
        CoefFn {
            scale: self.scale.inv(),
            factors: self.factors.iter().map(|&(f, p)| (f, -p)).collect(),
        }
        .canonical()
    }

    pub fn div(&self, o: &CoefFn) -> CoefFn {
        self.mul(&o.inv())
    }

    pub fn scaled(&self, s: C64) -> CoefFn {
        CoefFn {
            scale: self.scale * s,
            factors: self.factors.clone(),
        }
    }

    /// λ ↦ f(λ + α).
    pub fn shift(&self, alpha: C64) -> CoefFn {
        CoefFn {
            scale: self.scale,
            factors: self
                .factors
                .iter()
                .map(|&(f, p)| (f.shifted(alpha), p))
                .collect(),
        }
        .canonical()
    }

    /// λ ↦ conj(f(conj λ)).
    pub fn conj(&self) -> CoefFn {
        CoefFn {
            scale: self.scale.conj(),
            factors: self.factors.iter().map(|&(f, p)| (f.conj(), p)).collect(),
        }
        .canonical()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.scale == C64::new(1.0, 0.0)
    }

    pub fn eval(&self, lambda: C64, ctx: &ThetaContext) -> Result<C64> {
        let mut r = self.scale;
        for &(f, p) in &self.factors {
            let v = f.eval(lambda, ctx)?;
            if p < 0 && v.norm() <= ctx.zero_guard {
                return Err(Error::pole("coefficient function", p as i64));
            }
            r *= v.powi(p);
        }
        Ok(r)
    }
}

fn fmt_c(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

impl fmt::Display for CoefFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_c(self.scale))?;
        for (fac, p) in &self.factors {
            match fac {
                Factor::Theta { a, c, w } => {
                    write!(f, "*th({}*q^({}l+{}))^{}", fmt_c(*w), a, fmt_c(*c), p)?
                }
                Factor::Pow { a, c } => write!(f, "*q^({}l+{})^{}", a, fmt_c(*c), p)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_composes() {
        let ctx = ThetaContext::new(0.2, 0.7).unwrap();
        let f = CoefFn::theta_q(2.0, 0.6).mul(&CoefFn::pow_q(-1.0, 0.3));
        let a = C64::new(0.4, -0.2);
        let b = C64::new(-1.0, 0.5);
        let lam = C64::new(0.1, 0.3);
        let lhs = f.shift(a).shift(b).eval(lam, &ctx).unwrap();
        let rhs = f.shift(a + b).eval(lam, &ctx).unwrap();
        assert!((lhs - rhs).norm() < 1e-14 * lhs.norm());
    }

    #[test]
    fn quotient_cancels_structurally() {
        let f = CoefFn::poch_q(2.0, 3.0, 3);
        assert!(f.div(&f).is_one());
    }

    #[test]
    fn conj_is_involution() {
        let f = CoefFn::theta(2.0, C64::new(0.3, 0.2), C64::new(0.5, -0.7)).scaled(C64::new(0.0, 2.0));
        assert_eq!(f.conj().conj(), f);
        let ctx = ThetaContext::new(0.2, 0.7).unwrap();
        let lam = C64::new(0.1, 0.3);
        let v = f.conj().eval(lam, &ctx).unwrap();
        let w = f.eval(lam.conj(), &ctx).unwrap().conj();
        assert!((v - w).norm() < 1e-14);
    }
}

//! The normalized theta function θ(z) = ∏_{j≥0}(1 − z p^j)(1 − p^{j+1}/z), elliptic
//! Pochhammer symbols in base (q², p) and elliptic binomial coefficients.

use crate::error::{Error, Result};
use crate::C64;
use serde::{Deserialize, Serialize};

const MAX_FACTORS: usize = 2000;

/// Nome `p`, base `q` and the numerical policy shared by every theta evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaContext {
    pub p: f64,
    pub q: f64,
    pub truncation_floor: f64,
    pub zero_guard: f64,
}

impl ThetaContext {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        Self::with_policy(p, q, 1e-17, 1e-12)
    }

    pub fn with_policy(p: f64, q: f64, truncation_floor: f64, zero_guard: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Invalid(format!("nome p = {p} outside (0,1)")));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Invalid(format!("base q = {q} outside (0,1)")));
        }
        if !(truncation_floor > 0.0 && zero_guard >= 0.0) {
            return Err(Error::Invalid("nonpositive truncation floor".into()));
        }
        Ok(ThetaContext {
            p,
            q,
            truncation_floor,
            zero_guard,
        })
    }

    /// q^x = exp(x ln q) for complex x.
    pub fn qpow(&self, x: C64) -> C64 {
        (x * self.q.ln()).exp()
    }

    pub fn qpow_r(&self, x: f64) -> C64 {
        C64::new(self.q.powf(x), 0.0)
    }

    pub fn theta(&self, z: C64) -> Result<C64> {
        if z == C64::new(0.0, 0.0) {
            return Err(Error::Domain("theta at z = 0".into()));
        }
        let zi = z.inv();
        // Dropped factors differ from 1 by about p^j·max(|z|, 1/|z|).
        let size = z.norm().max(zi.norm()).max(1.0);
        let mut r = C64::new(1.0, 0.0);
        let mut pj = 1.0;
        for _ in 0..MAX_FACTORS {
            if pj * size < self.truncation_floor {
                break;
            }
            r *= (C64::new(1.0, 0.0) - z * pj) * (C64::new(1.0, 0.0) - zi * (pj * self.p));
            pj *= self.p;
        }
        Ok(r)
    }

    pub fn theta_multi(&self, args: &[C64]) -> Result<C64> {
        args.iter()
            .try_fold(C64::new(1.0, 0.0), |acc, &a| Ok(acc * self.theta(a)?))
    }

    /// θ(z) for use in a denominator; values below the zero guard are poles.
    pub fn theta_den(&self, z: C64, context: &str) -> Result<C64> {
        let t = self.theta(z)?;
        if t.norm() <= self.zero_guard {
            return Err(Error::pole(context, 0));
        }
        Ok(t)
    }

    /// (a)_n = ∏_{i=0}^{n-1} θ(a q^{2i}); for n < 0, (a)_n = 1/(a q^{2n})_{-n}.
    pub fn pochhammer(&self, a: C64, n: i64) -> Result<C64> {
        let q2 = self.q * self.q;
        if n >= 0 {
            let mut r = C64::new(1.0, 0.0);
            let mut x = a;
            for _ in 0..n {
                r *= self.theta(x)?;
                x *= q2;
            }
            return Ok(r);
        }
        let mut r = C64::new(1.0, 0.0);
        let mut x = a;
        for i in 1..=(-n) {
            x /= q2;
            let t = self.theta(x)?;
            if t.norm() <= self.zero_guard {
                return Err(Error::pole("pochhammer", -i));
            }
            r *= t;
        }
        Ok(r.inv())
    }

    pub fn pochhammer_multi(&self, args: &[C64], n: i64) -> Result<C64> {
        args.iter()
            .try_fold(C64::new(1.0, 0.0), |acc, &a| Ok(acc * self.pochhammer(a, n)?))
    }

    /// Elliptic binomial ∏_{i=1}^{l} θ(q^{2(k−l+i)})/θ(q^{2i}); zero outside 0 ≤ l ≤ k.
    pub fn binom(&self, k: i64, l: i64) -> C64 {
        if l < 0 || l > k {
            return C64::new(0.0, 0.0);
        }
        let mut r = C64::new(1.0, 0.0);
        for i in 1..=l {
            // q^{2i} with i ≥ 1 is never 1, so neither theta vanishes
            let num = self.theta(self.qpow_r(2.0 * (k - l + i) as f64)).unwrap();
            let den = self.theta(self.qpow_r(2.0 * i as f64)).unwrap();
            r *= num / den;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn theta_vanishes_at_one() {
        let ctx = ThetaContext::new(0.2, 0.7).unwrap();
        assert!(ctx.theta(c(1.0, 0.0)).unwrap().norm() < 1e-300);
    }

    #[test]
    fn theta_small_nome_degenerates() {
        let ctx = ThetaContext::new(1e-18, 0.7).unwrap();
        let t = ctx.theta(c(0.5, 0.0)).unwrap();
        assert!((t - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn theta_zero_is_domain_error() {
        let ctx = ThetaContext::new(0.2, 0.7).unwrap();
        assert!(matches!(ctx.theta(c(0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn long_product_agrees() {
        let ctx = ThetaContext::new(0.1, 0.7).unwrap();
        let z = c(2.0, 0.0);
        let mut r = c(1.0, 0.0);
        for j in 0..500 {
            let pj = 0.1f64.powi(j);
            r *= (c(1.0, 0.0) - z * pj) * (c(1.0, 0.0) - c(0.1 * pj, 0.0) / z);
        }
        let t = ctx.theta(z).unwrap();
        assert!((t - r).norm() <= 1e-14 * r.norm());
    }

    #[test]
    fn multi_is_product() {
        let ctx = ThetaContext::new(0.2, 0.7).unwrap();
        let x = c(0.3, 0.0);
        let y = c(1.7, 0.0);
        let m = ctx.theta_multi(&[x, y]).unwrap();
        let direct = ctx.theta(x).unwrap() * ctx.theta(y).unwrap();
        assert!((m - direct).norm() <= 1e-15 * direct.norm());
        let z = c(0.4, 0.9);
        assert_eq!(ctx.theta_multi(&[z]).unwrap(), ctx.theta(z).unwrap());
        assert!(ctx.theta_multi(&[c(1.0, 0.0), z]).unwrap().norm() < 1e-300);
    }

    #[test]
    fn pochhammer_basics() {
        let ctx = ThetaContext::new(0.15, 0.7).unwrap();
        let a = c(0.4, 0.3);
        assert_eq!(ctx.pochhammer(a, 0).unwrap(), c(1.0, 0.0));
        assert_eq!(ctx.pochhammer(a, 1).unwrap(), ctx.theta(a).unwrap());
        let n = 3;
        let v = ctx.pochhammer(ctx.qpow_r(-2.0 * n as f64), n + 1).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn negative_pochhammer_convention() {
        let ctx = ThetaContext::new(0.15, 0.7).unwrap();
        let a = c(0.4, 0.3);
        let q2 = ctx.q * ctx.q;
        let neg = ctx.pochhammer(a, -2).unwrap();
        let direct = ctx.pochhammer(a * q2.powi(-2), 2).unwrap().inv();
        assert!((neg - direct).norm() <= 1e-14 * direct.norm());
    }

    #[test]
    fn binomial_values() {
        let ctx = ThetaContext::new(0.15, 0.7).unwrap();
        assert_eq!(ctx.binom(4, 0), c(1.0, 0.0));
        assert!((ctx.binom(4, 4) - c(1.0, 0.0)).norm() < 1e-15);
        let expect = ctx.theta(ctx.qpow_r(4.0)).unwrap() / ctx.theta(ctx.qpow_r(2.0)).unwrap();
        assert!((ctx.binom(2, 1) - expect).norm() < 1e-15);
        assert_eq!(ctx.binom(2, 3), c(0.0, 0.0));
    }
}

//! Exact zero bookkeeping for theta arguments.
//!
//! A [`TrackedArg`] is a theta argument `q^e · g` where the generic part `g` is a
//! monomial in named symbols (for instance `q^{2λ}`, `q^ω`, `z`) possibly times an
//! opaque complex constant. Since `p`, `q` and the symbols are treated as generic, the
//! argument equals 1 exactly when `e = 0` and the monomial is empty. Products of theta
//! factors are accumulated in a [`ZeroOrder`], which counts such exact zeros instead of
//! multiplying by a floating zero, so that structurally cancelling zeros and poles
//! never form `0/0`.
//!
//! A cancelled pair contributes the ratio 1, which is the right limit only when both
//! factors approach 1 from the same side. Callers write a zero such as (q^{−2s})_j in the
//! orientation of the pole it cancels.

use crate::error::{Error, Result};
use crate::theta::ThetaContext;
use crate::C64;

/// Symbol ids used by the closed forms of this crate.
pub mod sym {
    /// q^{2λ} (or q^{2Λ}).
    pub const LAMBDA: u32 = 1;
    /// q^ω.
    pub const OMEGA: u32 = 2;
    /// The spectral variable z.
    pub const Z: u32 = 3;
    pub const A: u32 = 10;
    pub const B: u32 = 11;
    pub const C: u32 = 12;
    pub const D: u32 = 13;
    pub const E: u32 = 14;
    pub const F: u32 = 15;
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackedArg {
    /// Exponent of q (not q²) in the exact part.
    pub q_exp: i64,
    /// Numerical value of the generic part.
    pub generic: C64,
    /// Sorted (symbol id, power) pairs with nonzero powers.
    pub symbols: Vec<(u32, i32)>,
    /// True when the generic part carries an untracked complex factor.
    pub opaque: bool,
}

impl TrackedArg {
    pub fn one() -> Self {
        TrackedArg {
            q_exp: 0,
            generic: C64::new(1.0, 0.0),
            symbols: Vec::new(),
            opaque: false,
        }
    }

    /// q^e.
    pub fn qpow(e: i64) -> Self {
        TrackedArg {
            q_exp: e,
            ..Self::one()
        }
    }

    /// A named generic symbol with numerical value `value`.
    pub fn symbol(id: u32, value: C64) -> Self {
        TrackedArg {
            q_exp: 0,
            generic: value,
            symbols: vec![(id, 1)],
            opaque: false,
        }
    }

    /// q^e · ∏ value^power over named symbols given as (id, value, power).
    pub fn monomial(q_exp: i64, parts: &[(u32, C64, i32)]) -> Self {
        parts.iter().fold(Self::qpow(q_exp), |acc, &(id, v, pw)| {
            acc.mul(&Self::symbol(id, v).powi(pw))
        })
    }

    /// An untracked complex constant; never treated as exactly 1.
    pub fn raw(value: C64) -> Self {
        TrackedArg {
            q_exp: 0,
            generic: value,
            symbols: Vec::new(),
            opaque: true,
        }
    }

    pub fn is_generic_one(&self) -> bool {
        self.symbols.is_empty() && !self.opaque
    }

    pub fn is_exact_one(&self) -> bool {
        self.q_exp == 0 && self.is_generic_one()
    }

    pub fn value(&self, ctx: &ThetaContext) -> C64 {
        ctx.qpow_r(self.q_exp as f64) * self.generic
    }

    pub fn mul(&self, o: &TrackedArg) -> TrackedArg {
        let mut symbols = self.symbols.clone();
        for &(id, pw) in &o.symbols {
            match symbols.iter_mut().find(|(i, _)| *i == id) {
                Some(e) => e.1 += pw,
                None => symbols.push((id, pw)),
            }
        }
        symbols.retain(|&(_, pw)| pw != 0);
        symbols.sort_unstable();
        TrackedArg {
            q_exp: self.q_exp + o.q_exp,
            generic: self.generic * o.generic,
            symbols,
            opaque: self.opaque || o.opaque,
        }
    }

    pub fn inv(&self) -> TrackedArg {
        TrackedArg {
            q_exp: -self.q_exp,
            generic: self.generic.inv(),
            symbols: self.symbols.iter().map(|&(i, p)| (i, -p)).collect(),
            opaque: self.opaque,
        }
    }

    pub fn div(&self, o: &TrackedArg) -> TrackedArg {
        self.mul(&o.inv())
    }

    pub fn powi(&self, n: i32) -> TrackedArg {
        let mut r = TrackedArg::one();
        let base = if n >= 0 { self.clone() } else { self.inv() };
        for _ in 0..n.unsigned_abs() {
            r = r.mul(&base);
        }
        r
    }

    /// Multiply by q^e.
    pub fn shift_q(&self, e: i64) -> TrackedArg {
        TrackedArg {
            q_exp: self.q_exp + e,
            ..self.clone()
        }
    }
}

/// A product of theta factors with exact zeros counted separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroOrder {
    /// Product of all factors that are not exact zeros.
    pub value: C64,
    /// Number of exact zero factors in the numerator minus those in the denominator.
    pub order: i32,
}

impl Default for ZeroOrder {
    fn default() -> Self {
        Self::one()
    }
}

impl ZeroOrder {
    pub fn one() -> Self {
        ZeroOrder {
            value: C64::new(1.0, 0.0),
            order: 0,
        }
    }

    pub fn scalar(v: C64) -> Self {
        ZeroOrder { value: v, order: 0 }
    }

    pub fn scale(&mut self, v: C64) {
        self.value *= v;
    }

    pub fn mul(&self, o: &ZeroOrder) -> ZeroOrder {
        ZeroOrder {
            value: self.value * o.value,
            order: self.order + o.order,
        }
    }

    pub fn div(&self, o: &ZeroOrder) -> ZeroOrder {
        ZeroOrder {
            value: self.value / o.value,
            order: self.order - o.order,
        }
    }

    /// Multiply by θ(arg)^power.
    pub fn theta(&mut self, ctx: &ThetaContext, arg: &TrackedArg, power: i32) -> Result<()> {
        if arg.is_exact_one() {
            self.order += power;
            return Ok(());
        }
        let t = ctx.theta(arg.value(ctx))?;
        if power < 0 && t.norm() <= ctx.zero_guard {
            return Err(Error::pole("theta factor below zero guard", 0));
        }
        self.value *= t.powi(power);
        Ok(())
    }

    /// Multiply by ((arg)_n)^power with the negative-length convention.
    pub fn poch(&mut self, ctx: &ThetaContext, arg: &TrackedArg, n: i64, power: i32) -> Result<()> {
        if n >= 0 {
            for i in 0..n {
                self.theta(ctx, &arg.shift_q(2 * i), power)?;
            }
        } else {
            for i in 1..=(-n) {
                self.theta(ctx, &arg.shift_q(-2 * i), -power)?;
            }
        }
        Ok(())
    }

    pub fn pochs(&mut self, ctx: &ThetaContext, args: &[TrackedArg], n: i64, power: i32) -> Result<()> {
        for a in args {
            self.poch(ctx, a, n, power)?;
        }
        Ok(())
    }

    /// Numerical value: 0 for a surviving zero, an error for a surviving pole.
    pub fn realize(&self) -> Result<C64> {
        match self.order {
            0 => Ok(self.value),
            o if o > 0 => Ok(C64::new(0.0, 0.0)),
            o => Err(Error::pole("uncancelled exact zero in denominator", o as i64)),
        }
    }
}

/// (a)_j/(a)_l as the product ∏_{i=l}^{j−1} θ(a q^{2i}); for j < l the reciprocal of
/// ∏_{i=j}^{l−1}. Exact zeros are detected through the tracked argument.
pub fn pochhammer_ratio(ctx: &ThetaContext, a: &TrackedArg, j: i64, l: i64) -> Result<C64> {
    let mut z = ZeroOrder::one();
    if j >= l {
        for i in l..j {
            z.theta(ctx, &a.shift_q(2 * i), 1)?;
        }
    } else {
        for i in j..l {
            z.theta(ctx, &a.shift_q(2 * i), -1)?;
        }
    }
    z.realize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_with_equal_lengths_is_one() {
        let ctx = ThetaContext::new(0.2, 0.7).unwrap();
        let a = TrackedArg::raw(C64::new(0.3, 0.4));
        assert_eq!(pochhammer_ratio(&ctx, &a, 3, 3).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn ratio_cancels_shared_zero() {
        let ctx = ThetaContext::new(0.2, 0.7).unwrap();
        // N = 3, k = 2, j = 2: a = q^{2(N-k-j+1)} = q^0, so (a)_1 = θ(1) = 0
        let a = TrackedArg::qpow(0);
        let r = pochhammer_ratio(&ctx, &a, 2, 1).unwrap();
        let expect = ctx.theta(ctx.qpow_r(2.0)).unwrap();
        assert!((r - expect).norm() < 1e-15);
    }

    #[test]
    fn ratio_matches_quotient_for_generic() {
        let ctx = ThetaContext::new(0.2, 0.7).unwrap();
        let v = C64::new(0.3, 0.4);
        let a = TrackedArg::symbol(sym::Z, v);
        let r = pochhammer_ratio(&ctx, &a, 3, 1).unwrap();
        let direct = ctx.pochhammer(v, 3).unwrap() / ctx.pochhammer(v, 1).unwrap();
        assert!((r - direct).norm() <= 1e-12 * direct.norm());
    }

    #[test]
    fn uncancelled_zero_is_pole() {
        let ctx = ThetaContext::new(0.2, 0.7).unwrap();
        let a = TrackedArg::qpow(-2);
        assert!(pochhammer_ratio(&ctx, &a, 0, 2).unwrap_err().is_pole());
    }

    #[test]
    fn symbols_cancel_exactly() {
        let lam = TrackedArg::symbol(sym::LAMBDA, C64::new(0.2, 0.1));
        let a = lam.shift_q(4);
        let b = lam.shift_q(2);
        let c = a.div(&b).shift_q(-2);
        assert!(c.is_exact_one());
        assert!(!TrackedArg::raw(C64::new(1.0, 0.0)).is_exact_one());
    }
}

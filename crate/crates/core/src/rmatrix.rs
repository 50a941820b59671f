//! The elliptic dynamical R-matrix on V ⊗ V, V = C e₁ ⊕ C e₋₁, and the quantum
//! dynamical Yang–Baxter equation.

use crate::error::{Error, Result};
use crate::theta::ThetaContext;
use crate::C64;

pub type Mat4 = [[C64; 4]; 4];
type Mat8 = [[C64; 8]; 8];

/// Weights of the basis vectors e₁, e₋₁ (index 0, 1).
const WEIGHT: [f64; 2] = [1.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct REntries {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    pub lambda: C64,
    pub z: C64,
    /// Basis order e₁⊗e₁, e₁⊗e₋₁, e₋₁⊗e₁, e₋₁⊗e₋₁.
    pub entries: Mat4,
}

pub fn r_entries(ctx: &ThetaContext, lambda: C64, z: C64) -> Result<REntries> {
    let q2 = ctx.qpow_r(2.0);
    let up = ctx.qpow(2.0 * (lambda + 1.0));
    let down = ctx.qpow(-2.0 * (lambda + 1.0));
    let th_q2z = ctx.theta_den(q2 * z, "r-matrix theta(q^2 z)")?;
    let th_up = ctx.theta_den(up, "r-matrix theta(q^{2(lambda+1)})")?;
    let th_down = ctx.theta_den(down, "r-matrix theta(q^{-2(lambda+1)})")?;
    let th_z = ctx.theta(z)?;
    let th_q2 = ctx.theta(q2)?;
    Ok(REntries {
        a: th_z * ctx.theta(ctx.qpow(2.0 * (lambda + 2.0)))? / (th_q2z * th_up),
        b: th_q2 * ctx.theta(down * z)? / (th_q2z * th_down),
        c: th_q2 * ctx.theta(up * z)? / (th_q2z * th_up),
        d: th_z * ctx.theta(ctx.qpow(-2.0 * lambda))? / (th_q2z * th_down),
    })
}

impl RMatrix {
    pub fn new(ctx: &ThetaContext, lambda: C64, z: C64) -> Result<Self> {
        let e = r_entries(ctx, lambda, z)?;
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        Ok(RMatrix {
            lambda,
            z,
            entries: [
                [one, zero, zero, zero],
                [zero, e.a, e.b, zero],
                [zero, e.c, e.d, zero],
                [zero, zero, zero, one],
            ],
        })
    }

    /// True when every entry outside the weight blocks is exactly zero.
    pub fn is_weight_preserving(&self) -> bool {
        let zero = C64::new(0.0, 0.0);
        (0..4).all(|i| {
            (0..4).all(|j| {
                let same_block = i == j || (i == 1 && j == 2) || (i == 2 && j == 1);
                same_block || self.entries[i][j] == zero
            })
        })
    }
}

/// ad − bc.
pub fn middle_determinant(e: &REntries) -> C64 {
    e.a * e.d - e.b * e.c
}

/// q²θ(zq^{−2})/θ(zq²).
pub fn middle_determinant_closed(ctx: &ThetaContext, z: C64) -> Result<C64> {
    let q2 = ctx.qpow_r(2.0);
    Ok(q2 * ctx.theta(z / q2)? / ctx.theta_den(z * q2, "theta(z q^2)")?)
}

/// R on legs (i, j) of V⊗V⊗V, with λ replaced by `lam(μ)` where μ is the weight of the
/// remaining leg.
fn leg_operator(
    ctx: &ThetaContext,
    legs: (usize, usize),
    lam: impl Fn(f64) -> C64,
    z: C64,
) -> Result<Mat8> {
    let other = 3 - legs.0 - legs.1;
    let mut blocks = Vec::with_capacity(2);
    for &w in &WEIGHT {
        blocks.push(RMatrix::new(ctx, lam(w), z)?.entries);
    }
    let mut out = [[C64::new(0.0, 0.0); 8]; 8];
    for row in 0..8usize {
        for col in 0..8usize {
            let r = [row >> 2 & 1, row >> 1 & 1, row & 1];
            let c = [col >> 2 & 1, col >> 1 & 1, col & 1];
            if r[other] != c[other] {
                continue;
            }
            let block = &blocks[c[other]];
            out[row][col] = block[2 * r[legs.0] + r[legs.1]][2 * c[legs.0] + c[legs.1]];
        }
    }
    Ok(out)
}

fn mat_mul(a: &Mat8, b: &Mat8) -> Mat8 {
    let mut out = [[C64::new(0.0, 0.0); 8]; 8];
    for i in 0..8 {
        for k in 0..8 {
            if a[i][k] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..8 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Both sides of the QDYBE
/// R¹²(λ−h⁽³⁾, z₁₂) R¹³(λ, z₁₃) R²³(λ−h⁽¹⁾, z₂₃) = R²³(λ, z₂₃) R¹³(λ−h⁽²⁾, z₁₃) R¹²(λ, z₁₂);
/// returns max |LHS − RHS| / max(|LHS|, |RHS|) over entries.
pub fn check_qdybe(ctx: &ThetaContext, lambda: C64, z1: C64, z2: C64, z3: C64) -> Result<f64> {
    if z1 == C64::new(0.0, 0.0) || z2 == C64::new(0.0, 0.0) || z3 == C64::new(0.0, 0.0) {
        return Err(Error::Domain("spectral parameters must be nonzero".into()));
    }
    let (z12, z13, z23) = (z1 / z2, z1 / z3, z2 / z3);
    let shifted = |mu: f64| lambda - mu;
    let fixed = |_: f64| lambda;
    let lhs = mat_mul(
        &mat_mul(
            &leg_operator(ctx, (0, 1), shifted, z12)?,
            &leg_operator(ctx, (0, 2), fixed, z13)?,
        ),
        &leg_operator(ctx, (1, 2), shifted, z23)?,
    );
    let rhs = mat_mul(
        &mat_mul(
            &leg_operator(ctx, (1, 2), fixed, z23)?,
            &leg_operator(ctx, (0, 2), shifted, z13)?,
        ),
        &leg_operator(ctx, (0, 1), fixed, z12)?,
    );
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..8 {
        for j in 0..8 {
            diff = diff.max((lhs[i][j] - rhs[i][j]).norm());
            scale = scale.max(lhs[i][j].norm()).max(rhs[i][j].norm());
        }
    }
    Ok(if scale == 0.0 { diff } else { diff / scale })
}

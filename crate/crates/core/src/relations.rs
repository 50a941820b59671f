//! The defining and derived relations of the algebra, as pairs of elements that must act
//! identically in every dynamical representation.

use crate::algebra::{det_element, Element, Letter};
use crate::coef::CoefFn;
use crate::error::Result;
use crate::rep::{scaled_residual, RepContext};
use crate::theta::ThetaContext;
use crate::C64;

#[derive(Debug, Clone)]
pub struct Relation {
    pub name: String,
    pub lhs: Element,
    pub rhs: Element,
}

impl Relation {
    fn new(name: impl Into<String>, lhs: Element, rhs: Element) -> Self {
        Relation {
            name: name.into(),
            lhs,
            rhs,
        }
    }

    /// Max residual of lhs·e_m vs rhs·e_m over m in `ms`, relative to the largest
    /// single-word contribution on either side.
    pub fn residual(&self, rc: &RepContext, ms: impl IntoIterator<Item = usize>) -> Result<f64> {
        let mut r: f64 = 0.0;
        for m in ms {
            let (a, sa) = rc.apply_scaled(&self.lhs, m)?;
            let (b, sb) = rc.apply_scaled(&self.rhs, m)?;
            r = r.max(scaled_residual(&a, &b, sa.max(sb)));
        }
        Ok(r)
    }
}

/// R-matrix entries (a, b, c, d)(λ, z) as functions of λ.
pub fn r_entry_fns(z: C64) -> [CoefFn; 4] {
    let zero = C64::new(0.0, 0.0);
    let th_z = CoefFn::theta(0.0, zero, z);
    let th_q2z = CoefFn::theta(0.0, C64::new(2.0, 0.0), z);
    let th_q2 = CoefFn::theta_q(0.0, 2.0);
    let up = CoefFn::theta_q(2.0, 2.0);
    let down = CoefFn::theta_q(-2.0, -2.0);
    let a = th_z.mul(&CoefFn::theta_q(2.0, 4.0)).div(&th_q2z.mul(&up));
    let b = th_q2
        .mul(&CoefFn::theta(-2.0, C64::new(-2.0, 0.0), z))
        .div(&th_q2z.mul(&down));
    let c = th_q2
        .mul(&CoefFn::theta(2.0, C64::new(2.0, 0.0), z))
        .div(&th_q2z.mul(&up));
    let d = th_z.mul(&CoefFn::theta_q(-2.0, 0.0)).div(&th_q2z.mul(&down));
    [a, b, c, d]
}

fn w(letters: Vec<Letter>) -> Element {
    Element::word(letters)
}

fn with_left(f: &CoefFn, letters: Vec<Letter>) -> Element {
    let mut v = vec![Letter::Left(f.clone())];
    v.extend(letters);
    Element::word(v)
}

fn with_right(f: &CoefFn, letters: Vec<Letter>) -> Element {
    let mut v = vec![Letter::Right(f.clone())];
    v.extend(letters);
    Element::word(v)
}

/// The sixteen RLL relations at spectral parameters (z1, z2), R taken at z1/z2.
pub fn rll_relations(z1: C64, z2: C64) -> Vec<Relation> {
    let [a, b, c, d] = r_entry_fns(z1 / z2);
    let (al, be, ga, de) = (Letter::alpha, Letter::beta, Letter::gamma, Letter::delta);
    let rel = Relation::new;
    vec![
        rel("ab1", w(vec![al(z1), be(z2)]), with_right(&a, vec![be(z2), al(z1)]).add(&with_right(&c, vec![al(z2), be(z1)]))),
        rel("ab2", w(vec![be(z1), al(z2)]), with_right(&b, vec![be(z2), al(z1)]).add(&with_right(&d, vec![al(z2), be(z1)]))),
        rel("ac1", with_left(&a, vec![al(z1), ga(z2)]).add(&with_left(&b, vec![ga(z1), al(z2)])), w(vec![ga(z2), al(z1)])),
        rel("ac2", with_left(&c, vec![al(z1), ga(z2)]).add(&with_left(&d, vec![ga(z1), al(z2)])), w(vec![al(z2), ga(z1)])),
        rel("cd1", w(vec![ga(z1), de(z2)]), with_right(&a, vec![de(z2), ga(z1)]).add(&with_right(&c, vec![ga(z2), de(z1)]))),
        rel("cd2", w(vec![de(z1), ga(z2)]), with_right(&b, vec![de(z2), ga(z1)]).add(&with_right(&d, vec![ga(z2), de(z1)]))),
        rel("bd1", with_left(&a, vec![be(z1), de(z2)]).add(&with_left(&b, vec![de(z1), be(z2)])), w(vec![de(z2), be(z1)])),
        rel("bd2", with_left(&c, vec![be(z1), de(z2)]).add(&with_left(&d, vec![de(z1), be(z2)])), w(vec![be(z2), de(z1)])),
        rel(
            "adbc1",
            with_left(&a, vec![al(z1), de(z2)]).add(&with_left(&b, vec![ga(z1), be(z2)])),
            with_right(&a, vec![de(z2), al(z1)]).add(&with_right(&c, vec![ga(z2), be(z1)])),
        ),
        rel(
            "adbc2",
            with_left(&c, vec![al(z1), de(z2)]).add(&with_left(&d, vec![ga(z1), be(z2)])),
            with_right(&a, vec![be(z2), ga(z1)]).add(&with_right(&c, vec![al(z2), de(z1)])),
        ),
        rel(
            "adbc3",
            with_left(&a, vec![be(z1), ga(z2)]).add(&with_left(&b, vec![de(z1), al(z2)])),
            with_right(&b, vec![de(z2), al(z1)]).add(&with_right(&d, vec![ga(z2), be(z1)])),
        ),
        rel(
            "adbc4",
            with_left(&c, vec![be(z1), ga(z2)]).add(&with_left(&d, vec![de(z1), al(z2)])),
            with_right(&b, vec![be(z2), ga(z1)]).add(&with_right(&d, vec![al(z2), de(z1)])),
        ),
        rel("aa", w(vec![al(z1), al(z2)]), w(vec![al(z2), al(z1)])),
        rel("bb", w(vec![be(z1), be(z2)]), w(vec![be(z2), be(z1)])),
        rel("gg", w(vec![ga(z1), ga(z2)]), w(vec![ga(z2), ga(z1)])),
        rel("dd", w(vec![de(z1), de(z2)]), w(vec![de(z2), de(z1)])),
    ]
}

/// Commutation of the moment maps with the generators, for a test function f.
pub fn moment_relations(f: &CoefFn, z: C64) -> Vec<Relation> {
    let one = C64::new(1.0, 0.0);
    let (up, down) = (f.shift(one), f.shift(-one));
    let gens = [
        ("alpha", Letter::alpha(z), &up, &up),
        ("beta", Letter::beta(z), &up, &down),
        ("gamma", Letter::gamma(z), &down, &up),
        ("delta", Letter::delta(z), &down, &down),
    ];
    let mut out = Vec::new();
    for (name, g, left_shifted, right_shifted) in gens {
        out.push(Relation::new(
            format!("left-{name}"),
            w(vec![Letter::Left(f.clone()), g.clone()]),
            w(vec![g.clone(), Letter::Left((*left_shifted).clone())]),
        ));
        out.push(Relation::new(
            format!("right-{name}"),
            w(vec![Letter::Right(f.clone()), g.clone()]),
            w(vec![g, Letter::Right((*right_shifted).clone())]),
        ));
    }
    out.push(Relation::new(
        "left-right",
        w(vec![Letter::Left(f.clone()), Letter::Right(f.shift(C64::new(0.5, 0.0)))]),
        w(vec![Letter::Right(f.shift(C64::new(0.5, 0.0))), Letter::Left(f.clone())]),
    ));
    out
}

/// The relations that survive at z1/z2 = q², where R degenerates.
pub fn residual_relations(ctx: &ThetaContext, z: C64) -> Vec<Relation> {
    let q2 = ctx.qpow_r(2.0);
    let qz = q2 * z;
    let (al, be, ga, de) = (Letter::alpha, Letter::beta, Letter::gamma, Letter::delta);
    let [a, b, _, _] = r_entry_fns(q2);
    let th0 = CoefFn::theta_q(-2.0, 0.0);
    let th2 = CoefFn::theta_q(-2.0, -4.0);
    let bracket = w(vec![ga(z), be(qz)]).add(&w(vec![de(z), al(qz)]));
    let rel = Relation::new;
    vec![
        rel("s-ab", with_right(&th0, vec![al(qz), be(z)]), with_right(&th2, vec![be(qz), al(z)]).scaled(q2)),
        rel("s-ga", w(vec![ga(z), al(qz)]), w(vec![al(z), ga(qz)])),
        rel("s-gd", with_right(&th0, vec![ga(qz), de(z)]), with_right(&th2, vec![de(qz), ga(z)]).scaled(q2)),
        rel("s-db", w(vec![de(z), be(qz)]), w(vec![be(z), de(qz)])),
        rel(
            "adbc-a",
            with_left(&a, vec![al(qz), de(z)]).add(&with_left(&b, vec![ga(qz), be(z)])),
            w(vec![Letter::Right(a.clone())]).mul(&bracket),
        ),
        rel(
            "adbc-b",
            with_left(&a, vec![be(qz), ga(z)]).add(&with_left(&b, vec![de(qz), al(z)])),
            w(vec![Letter::Right(b.clone())]).mul(&bracket),
        ),
        rel(
            "adbc-c",
            w(vec![al(z), de(qz)]).add(&w(vec![be(z), ga(qz)])),
            bracket.clone(),
        ),
        rel(
            "res",
            with_right(&b, vec![ga(qz), be(z)]).sub(&with_right(&a, vec![de(qz), al(z)])),
            w(vec![Letter::Left(a.clone())]).mul(&w(vec![ga(z), be(qz)]).sub(&w(vec![al(z), de(qz)]))),
        ),
    ]
}

/// Moving α(q^{2k}z) through β(q^{2(l−1)}z)⋯β(z), for 1 ≤ l ≤ k.
pub fn alpha_beta_reverse(k: usize, l: usize, z: C64, ctx: &ThetaContext) -> Relation {
    assert!(1 <= l && l <= k);
    let qz = |i: usize| ctx.qpow_r(2.0 * i as f64) * z;
    let (kf, lf) = (k as f64, l as f64);
    let mut lhs = vec![Letter::alpha(qz(k))];
    lhs.extend((0..l).rev().map(|i| Letter::beta(qz(i))));
    let den = CoefFn::theta_q(0.0, 2.0 * (kf + 1.0)).mul(&CoefFn::theta_q(2.0, 2.0));
    let c1 = CoefFn::theta_q(0.0, 2.0 * (kf - lf + 1.0))
        .mul(&CoefFn::theta_q(2.0, 2.0 * (lf + 1.0)))
        .div(&den);
    let c2 = CoefFn::theta_q(0.0, 2.0)
        .mul(&CoefFn::theta_q(2.0, 2.0 * (kf + 1.0)))
        .div(&den);
    let betas: Vec<Letter> = (0..l).map(|i| Letter::beta(qz(i))).collect();
    let mut first = betas.clone();
    first.push(Letter::alpha(qz(k)));
    let mut rhs = with_right(&c1, first);
    for i in 0..l {
        let mut v = betas.clone();
        v[i] = Letter::alpha(qz(i));
        v.push(Letter::beta(qz(k)));
        rhs = rhs.add(&with_right(&c2, v));
    }
    Relation::new(format!("alphabeta-reverse-{k}-{l}"), w(lhs), rhs)
}

/// Σ_k S(t_ik) t_kj = δ_ij and Σ_k t_ik S(t_kj) = δ_ij for t = [[α, β], [γ, δ]].
pub fn antipode_relations(z: C64, ctx: &ThetaContext) -> Vec<Relation> {
    let t = [
        [Element::letter(Letter::alpha(z)), Element::letter(Letter::beta(z))],
        [Element::letter(Letter::gamma(z)), Element::letter(Letter::delta(z))],
    ];
    let s = t.clone().map(|row| row.map(|x| x.antipode(ctx)));
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { Element::one() } else { Element::zero() };
            let left = s[i][0].mul(&t[0][j]).add(&s[i][1].mul(&t[1][j]));
            let right = t[i][0].mul(&s[0][j]).add(&t[i][1].mul(&s[1][j]));
            out.push(Relation::new(format!("S(t)t-{i}{j}"), left, id.clone()));
            out.push(Relation::new(format!("tS(t)-{i}{j}"), right, id));
        }
    }
    out
}

/// The four expressions for det(z), each paired with nothing: callers compare the action
/// with the det scalar.
pub fn det_forms(z: C64, ctx: &ThetaContext) -> Vec<(String, Element)> {
    let q2 = ctx.qpow_r(2.0);
    let qz = q2 * z;
    let (al, be, ga, de) = (Letter::alpha, Letter::beta, Letter::gamma, Letter::delta);
    let pair = |r: CoefFn, l: CoefFn, x: Letter, y: Letter| {
        w(vec![Letter::Right(r), Letter::Left(l), x, y])
    };
    let f = CoefFn::f_fn();
    let fi = f.inv();
    let qx = CoefFn::pow_q(1.0, 0.0);
    let qmx = CoefFn::pow_q(-1.0, 0.0);
    let t0 = CoefFn::theta_q(-2.0, 0.0);
    let t2 = CoefFn::theta_q(-2.0, -4.0);
    let d2 = pair(f.clone(), fi.clone(), de(z), al(qz)).sub(&pair(f.clone(), fi.clone(), be(z), ga(qz)));
    let d3 = pair(qx.mul(&t2), qmx.div(&t2), de(qz), al(z)).sub(&pair(
        qx.mul(&t0),
        qmx.div(&t2).scaled(q2.inv()),
        ga(qz),
        be(z),
    ));
    let d4 = pair(qx.mul(&t0), qmx.div(&t0), al(qz), de(z)).sub(&pair(
        qx.mul(&t2).scaled(q2),
        qmx.div(&t0),
        be(qz),
        ga(z),
    ));
    vec![
        ("det1".into(), det_element(z, ctx)),
        ("det2".into(), d2),
        ("det3".into(), d3),
        ("det4".into(), d4),
    ]
}

/// Max relative deviation of each det form from the det scalar on e_m, m in `ms`.
pub fn det_residual(rc: &RepContext, z: C64, ms: impl IntoIterator<Item = usize> + Clone) -> Result<f64> {
    let scalar = rc.det_scalar(z)?;
    let mut r: f64 = 0.0;
    for (_, d) in det_forms(z, &rc.ctx) {
        for m in ms.clone() {
            let (v, scale) = rc.apply_scaled(&d, m)?;
            let mut expect = std::collections::BTreeMap::new();
            expect.insert(m, scalar);
            r = r.max(scaled_residual(&v, &expect, scale));
        }
    }
    Ok(r)
}

/// A fixed family of generic test functions f(λ) = q^{aλ}θ(w q^{2λ+c}).
pub fn test_function(shift: C64, w: C64) -> CoefFn {
    CoefFn::theta(2.0, 2.0 * shift, w).mul(&CoefFn::pow_q(0.5, 0.0))
}

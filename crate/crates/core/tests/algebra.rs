use ellqg::algebra::{bigrade, counit_word, DiffOp, Element, Gen, Letter, Word};
use ellqg::coef::CoefFn;
use ellqg::rep::{scaled_residual, RepContext};
use ellqg::{ThetaContext, C64};
use proptest::prelude::*;

fn ctx() -> ThetaContext {
    ThetaContext::new(0.15, 0.7).unwrap()
}

fn rc() -> RepContext {
    RepContext::new(ctx(), C64::new(0.31, 0.17), C64::new(0.43, 0.26))
}

fn spectral() -> impl Strategy<Value = C64> {
    (0.6f64..1.6, 0.1f64..6.0).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn gen_letter() -> impl Strategy<Value = Letter> {
    (0usize..4, spectral()).prop_map(|(g, z)| {
        let g = [Gen::Alpha, Gen::Beta, Gen::Gamma, Gen::Delta][g];
        Letter::Gen(g, z)
    })
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![
        4 => gen_letter(),
        1 => spectral().prop_map(Letter::DetInv),
    ]
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max)
}

fn gen_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(gen_letter(), 0..=max)
}

fn close(a: &Letter, b: &Letter) -> bool {
    let near = |x: C64, y: C64| (x - y).norm() <= 1e-13 * x.norm().max(1.0);
    match (a, b) {
        (Letter::Gen(g, x), Letter::Gen(h, y)) => g == h && near(*x, *y),
        (Letter::DetInv(x), Letter::DetInv(y)) => near(*x, *y),
        _ => a == b,
    }
}

fn same_element(a: &Element, b: &Element) -> bool {
    a.terms.len() == b.terms.len()
        && a.terms.iter().zip(&b.terms).all(|((c1, w1), (c2, w2))| {
            (c1 - c2).norm() <= 1e-13 * c1.norm().max(1.0)
                && w1.len() == w2.len()
                && w1.iter().zip(w2).all(|(x, y)| close(x, y))
        })
}

/// Compare two elements by their action on e_0..e_3.
fn same_action(rc: &RepContext, a: &Element, b: &Element) -> f64 {
    (0..4)
        .map(|m| {
            let (x, sx) = rc.apply_scaled(a, m).unwrap();
            let (y, sy) = rc.apply_scaled(b, m).unwrap();
            scaled_residual(&x, &y, sx.max(sy))
        })
        .fold(0.0, f64::max)
}

#[test]
fn empty_word_is_identity() {
    let v = rc().apply_word(&[], 3).unwrap().unwrap();
    assert_eq!((v.index, v.coeff), (3, C64::new(1.0, 0.0)));
}

#[test]
fn gamma_annihilates_lowest_vector() {
    let z = C64::new(0.9, 0.2);
    assert!(rc().apply_word(&[Letter::gamma(z)], 0).unwrap().is_none());
    assert_eq!(rc().apply_word(&[Letter::beta(z)], 0).unwrap().unwrap().index, 1);
}

#[test]
fn moment_maps_act_diagonally() {
    let rc = rc();
    let f = CoefFn::theta_q(1.0, 0.4);
    for m in 0..4 {
        let l = rc.apply_word(&[Letter::Left(f.clone())], m).unwrap().unwrap();
        let want = f.eval(rc.lambda0 - rc.omega + 2.0 * m as f64, &rc.ctx).unwrap();
        assert_eq!((l.index, l.coeff), (m, want));
        let r = rc.apply_word(&[Letter::Right(f.clone())], m).unwrap().unwrap();
        assert_eq!(r.coeff, f.eval(rc.lambda0, &rc.ctx).unwrap());
    }
}

#[test]
fn star_of_generators() {
    let ctx = ctx();
    let z = C64::new(0.8, -0.3);
    let zt = 1.0 / z.conj();
    let s = Element::letter(Letter::beta(z)).star(&ctx);
    assert_eq!(s.terms.len(), 1);
    assert_eq!(s.terms[0].0, C64::new(-1.0, 0.0));
    assert!(close(&s.terms[0].1[0], &Letter::gamma(zt)));
    let s = Element::letter(Letter::alpha(z)).star(&ctx);
    assert!(close(&s.terms[0].1[0], &Letter::delta(zt)));
}

#[test]
fn counit_of_off_diagonal_generators_vanishes() {
    let z = C64::new(0.8, 0.3);
    assert!(Element::letter(Letter::beta(z)).counit().is_empty());
    assert!(Element::letter(Letter::gamma(z)).counit().is_empty());
    let e = Element::word(vec![Letter::alpha(z), Letter::delta(z)]).counit();
    assert_eq!(e.len(), 1);
    assert_eq!(e[0].1.shift, 0);
}

#[test]
fn det_is_grouplike_under_coproduct() {
    let l = Letter::DetInv(C64::new(0.7, 0.1));
    let t = Element::letter(l.clone()).coproduct();
    assert_eq!(t.terms, vec![(C64::new(1.0, 0.0), vec![l.clone()], vec![l])]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn bigrade_is_additive(a in word(5), b in word(5)) {
        let (x, y) = (bigrade(&a), bigrade(&b));
        let ab: Word = a.iter().chain(&b).cloned().collect();
        prop_assert_eq!(bigrade(&ab), (x.0 + y.0, x.1 + y.1));
    }

    #[test]
    fn output_index_follows_bigrade(w in word(6), m in 0usize..5) {
        let g = bigrade(&w);
        let moved = (g.0 - g.1) / 2;
        let rc = rc();
        match rc.apply_word(&w, m) {
            Ok(Some(v)) => prop_assert_eq!(v.index as i64, m as i64 + moved as i64),
            Ok(None) => {
                // Some suffix must push the index below zero.
                let mut k = m as i64;
                let mut dipped = false;
                for l in w.iter().rev() {
                    k += match l { Letter::Gen(Gen::Beta, _) => 1, Letter::Gen(Gen::Gamma, _) => -1, _ => 0 };
                    dipped |= k < 0;
                }
                prop_assert!(dipped);
            }
            Err(e) => prop_assert!(e.is_pole(), "{e}"),
        }
    }

    #[test]
    fn star_is_involutive(w in word(5), c in spectral()) {
        let x = Element::word(w).scaled(c);
        let ctx = ctx();
        prop_assert!(same_element(&x.star(&ctx).star(&ctx), &x));
    }

    #[test]
    fn star_reverses_products(a in word(4), b in word(4)) {
        let ctx = ctx();
        let (x, y) = (Element::word(a), Element::word(b));
        prop_assert!(same_element(&x.mul(&y).star(&ctx), &y.star(&ctx).mul(&x.star(&ctx))));
    }

    #[test]
    fn antipode_reverses_products(a in gen_word(2), b in gen_word(2)) {
        let ctx = ctx();
        let (x, y) = (Element::word(a), Element::word(b));
        let lhs = x.mul(&y).antipode(&ctx);
        let rhs = y.antipode(&ctx).mul(&x.antipode(&ctx));
        prop_assert!(same_action(&rc(), &lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn coproduct_is_multiplicative(a in gen_word(3), b in gen_word(3)) {
        let (x, y) = (Element::word(a), Element::word(b));
        prop_assert_eq!(x.mul(&y).coproduct(), x.coproduct().mul(&y.coproduct()));
    }

    #[test]
    fn counit_shift_tracks_bigrade(w in gen_word(6)) {
        let g = bigrade(&w);
        match counit_word(&w) {
            Some(op) => {
                prop_assert!(w.iter().all(|l| matches!(l, Letter::Gen(Gen::Alpha | Gen::Delta, _))));
                prop_assert_eq!(op.shift, -g.1 as i64);
            }
            None => prop_assert!(w.iter().any(|l| matches!(l, Letter::Gen(Gen::Beta | Gen::Gamma, _)))),
        }
    }

    #[test]
    fn diffop_composition(s1 in -3i64..=3, s2 in -3i64..=3, s3 in -3i64..=3,
                          c1 in 0.1f64..0.9, c2 in 0.1f64..0.9, c3 in 0.1f64..0.9,
                          lr in -1.0f64..1.0, li in -0.5f64..0.5) {
        let ctx = ctx();
        let op = |c: f64, s: i64| DiffOp { f: CoefFn::theta_q(1.0, c), shift: s };
        let (a, b, c) = (op(c1, s1), op(c2, s2), op(c3, s3));
        let l = C64::new(lr, li);
        // (f T_a)(g T_b) has coefficient f(λ) g(λ + a).
        let ab = a.compose(&b);
        prop_assert_eq!(ab.shift, s1 + s2);
        let want = a.f.eval(l, &ctx).unwrap() * b.f.eval(l + s1 as f64, &ctx).unwrap();
        prop_assert!((ab.f.eval(l, &ctx).unwrap() - want).norm() <= 1e-13 * want.norm());
        let left = ab.compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert_eq!(left.shift, right.shift);
        let (x, y) = (left.f.eval(l, &ctx).unwrap(), right.f.eval(l, &ctx).unwrap());
        prop_assert!((x - y).norm() <= 1e-13 * x.norm());
        let id = DiffOp::identity().compose(&a);
        prop_assert!((id.f.eval(l, &ctx).unwrap() - a.f.eval(l, &ctx).unwrap()).norm() <= 1e-15);
    }
}

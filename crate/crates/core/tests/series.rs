use ellqg::series::{check_bailey, eval_omega, SeriesSpec};
use ellqg::tracked::TrackedArg;
use ellqg::{ThetaContext, C64};
use proptest::prelude::*;

fn theta(z: C64, p: f64) -> C64 {
    let one = C64::new(1.0, 0.0);
    (0..400).fold(one, |acc, j| {
        let pj = p.powi(j);
        acc * (one - z * pj) * (one - pj * p / z)
    })
}

/// Direct summation, every term rebuilt from scratch with the long-product theta.
fn brute(ctx: &ThetaContext, a1: C64, upper: &[C64], n: usize) -> C64 {
    let p = ctx.p;
    let q2 = C64::new(ctx.q * ctx.q, 0.0);
    let mut total = C64::new(0.0, 0.0);
    for k in 0..=n as i32 {
        let mut t = theta(a1 * q2.powi(2 * k), p) / theta(a1, p) * q2.powi(k);
        for i in 0..k {
            let s = q2.powi(i);
            t *= theta(a1 * s, p) / theta(q2 * s, p);
            for &a in upper {
                t *= theta(a * s, p) / theta(a1 * q2 / a * s, p);
            }
        }
        total += t;
    }
    total
}

fn polar() -> impl Strategy<Value = C64> {
    (0.5f64..2.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn balanced(ctx: &ThetaContext, a: C64, b: [C64; 5], n: usize) -> Vec<C64> {
    let g = a * a * a * ctx.qpow_r(2.0 * (n as f64 + 2.0)) / b.iter().product::<C64>();
    let mut v = b.to_vec();
    v.push(g);
    v.push(ctx.qpow_r(-2.0 * n as f64));
    v
}

fn spec(a1: C64, upper: &[C64], n: usize) -> SeriesSpec {
    let slot = upper.len() - 1;
    let mut t: Vec<TrackedArg> = upper.iter().map(|&u| TrackedArg::raw(u)).collect();
    t[slot] = TrackedArg::qpow(-2 * n as i64);
    SeriesSpec::new(TrackedArg::raw(a1), t, slot).unwrap()
}

#[test]
fn zero_length_series_is_one() {
    let ctx = ThetaContext::new(0.2, 0.7).unwrap();
    let u = [C64::new(0.5, 0.1), C64::new(1.2, -0.4), C64::new(0.8, 0.8), C64::new(1.0, 0.0)];
    let v = eval_omega(&ctx, &spec(C64::new(0.3, 0.4), &u, 0)).unwrap();
    assert_eq!(v.value, C64::new(1.0, 0.0));
    assert_eq!(v.terms, 1);
}

#[test]
fn termination_slot_must_be_q_power() {
    let raw = |re| TrackedArg::raw(C64::new(re, 0.1));
    assert!(SeriesSpec::new(raw(0.3), vec![raw(0.5), raw(0.7), raw(0.9)], 1).is_err());
    assert!(SeriesSpec::new(raw(0.3), vec![raw(0.5), raw(0.7), TrackedArg::qpow(-4)], 5).is_err());
}

#[test]
fn matches_brute_force_n4() {
    let ctx = ThetaContext::new(0.1, 0.7).unwrap();
    let a = C64::new(0.9, 0.4);
    let b = [C64::new(0.6, 0.5), C64::new(-0.7, 0.3), C64::new(0.5, -0.9), C64::new(1.1, 0.2), C64::new(-0.4, -0.8)];
    let u = balanced(&ctx, a, b, 4);
    let v = eval_omega(&ctx, &spec(a, &u, 4)).unwrap();
    let o = brute(&ctx, a, &u, 4);
    assert!((v.value - o).norm() <= 1e-11 * o.norm().max(v.max_term_magnitude));
    assert!(v.warning.is_none());
}

#[test]
fn unbalanced_series_warns() {
    let ctx = ThetaContext::new(0.1, 0.7).unwrap();
    let mut u = balanced(&ctx, C64::new(0.9, 0.4), [C64::new(0.6, 0.5); 5], 3);
    u[0] *= 1.3;
    assert!(eval_omega(&ctx, &spec(C64::new(0.9, 0.4), &u, 3)).unwrap().warning.is_some());
}

#[test]
fn bailey_trivial_and_small() {
    let ctx = ThetaContext::new(0.1, 0.7).unwrap();
    let z = |r: f64, t: f64| C64::from_polar(r, t);
    let (a, b, c, d, e, f) = (z(0.9, 0.3), z(0.8, 1.1), z(1.1, -0.7), z(0.9, 2.3), z(0.95, -2.0), z(1.05, 0.6));
    assert_eq!(check_bailey(&ctx, a, b, c, d, e, f, 0).unwrap().residual, 0.0);
    assert!(check_bailey(&ctx, a, b, c, d, e, f, 1).unwrap().residual <= 1e-9);
    assert!(check_bailey(&ctx, a, b, c, d, e, f, 5).unwrap().residual <= 1e-7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn term_ratio_matches_brute_force(
        a in polar(), b0 in polar(), b1 in polar(), b2 in polar(), b3 in polar(), b4 in polar(),
        p in 0.05f64..0.3, q in 0.55f64..0.9, n in 0usize..=10,
    ) {
        let ctx = ThetaContext::new(p, q).unwrap();
        let u = balanced(&ctx, a, [b0, b1, b2, b3, b4], n);
        let v = eval_omega(&ctx, &spec(a, &u, n)).unwrap();
        let o = brute(&ctx, a, &u, n);
        let scale = v.value.norm().max(v.max_term_magnitude);
        prop_assert!((v.value - o).norm() <= 1e-11 * scale, "{} {}", v.value, o);
        prop_assert_eq!(v.terms, n + 1);
    }

    #[test]
    fn upper_parameters_permute(
        a in polar(), b0 in polar(), b1 in polar(), b2 in polar(), b3 in polar(), b4 in polar(),
        shift in 1usize..7, n in 0usize..=8,
    ) {
        let ctx = ThetaContext::new(0.15, 0.7).unwrap();
        let u = balanced(&ctx, a, [b0, b1, b2, b3, b4], n);
        let s1 = spec(a, &u, n);
        let mut up = s1.upper.clone();
        up.rotate_right(shift);
        let s2 = SeriesSpec::new(s1.a1.clone(), up, (s1.term_slot + shift) % 7).unwrap();
        let (v1, v2) = (eval_omega(&ctx, &s1).unwrap(), eval_omega(&ctx, &s2).unwrap());
        prop_assert!((v1.value - v2.value).norm() <= 1e-12 * v1.value.norm().max(v1.max_term_magnitude));
    }
}

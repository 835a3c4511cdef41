//! Property tests for the symbolic and numeric layers.
use std::collections::BTreeMap;

use parazeta_core::period::build_period;
use parazeta_core::q::{q, qf, to_f64};
use parazeta_core::residue::{residue, Hyperplane};
use parazeta_core::rootsys::{build_root_system, weyl_group, Family, RootSystem};
use parazeta_core::symexpr::{parse_expr, parse_linform, LinForm};
use parazeta_core::xinum::{eval_expr, laurent_constants, xi, Ctx, C};
use parazeta_core::{Error, Var, Q};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn systems() -> Vec<RootSystem> {
    let mut out = Vec::new();
    for (f, r) in [
        (Family::A, 1),
        (Family::A, 2),
        (Family::A, 3),
        (Family::A, 4),
        (Family::B, 2),
        (Family::B, 3),
        (Family::C, 2),
        (Family::C, 3),
        (Family::D, 4),
        (Family::G, 2),
    ] {
        out.push(build_root_system(f, r).unwrap());
    }
    out
}

#[test]
fn weyl_group_permutes_roots() {
    for rs in systems() {
        let w = weyl_group(&rs, 100_000).unwrap();
        for e in &w {
            for a in &rs.positive {
                assert!(rs.is_root(&e.act(a)), "{}: w·α not a root", rs.name());
            }
        }
    }
}

#[test]
fn lengths_are_subadditive() {
    for rs in systems().into_iter().filter(|r| r.rank <= 3) {
        let w = weyl_group(&rs, 100_000).unwrap();
        for a in &w {
            for b in &w {
                assert!(a.compose(b).length() <= a.length() + b.length());
            }
        }
    }
}

#[test]
fn positive_roots_sum_to_two_rho() {
    for rs in systems() {
        let mut sum = vec![Q::from_integer(0.into()); rs.dim];
        for a in &rs.positive {
            for (s, x) in sum.iter_mut().zip(a) {
                *s += x;
            }
        }
        let two_rho: Vec<Q> = rs.rho.iter().map(|x| x * q(2)).collect();
        assert_eq!(sum, two_rho, "{}", rs.name());
    }
}

#[test]
fn period_has_one_term_per_weyl_element() {
    for rs in systems().into_iter().filter(|r| r.rank <= 3) {
        let n = weyl_group(&rs, 100_000).unwrap().len();
        assert_eq!(build_period(&rs).unwrap().len(), n, "{}", rs.name());
    }
}

#[test]
fn period_value_ignores_term_order() {
    let ctx = Ctx::with_digits(20);
    let rs = build_root_system(Family::A, 2).unwrap();
    let e = build_period(&rs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        // Deep in the positive chamber: z1 − z2 and z2 − z3 large.
        let pt: BTreeMap<Var, C> = rs
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), C::from_f64(12.0 - 5.0 * i as f64 + rng.gen::<f64>(), rng.gen::<f64>(), &ctx)))
            .collect();
        let a = eval_expr(&e, &pt, &ctx).unwrap().value;
        let mut rev = e.clone();
        rev.terms.reverse();
        let b = eval_expr(&rev, &pt, &ctx).unwrap().value;
        assert!(a.sub(&b, &ctx).abs_f64() <= 1e-15 * a.abs_f64());
    }
}

/// A small random expression in u and y with only simple linear poles.
fn arb_expr() -> impl Strategy<Value = String> {
    let lin = (1..4i64, -2..3i64, -3..4i64).prop_map(|(a, b, c)| format!("({a}*u{b:+}*y{c:+})"));
    let term = (-5..6i64, 1..4i64, proptest::option::of(lin.clone()), proptest::option::of(lin), 0..2u8).prop_map(
        |(n, d, x, l, pow)| {
            let mut s = format!("{n}/{d}");
            if let Some(x) = x {
                s += &format!("*xi{x}");
                if pow == 1 {
                    s += "^2";
                }
            }
            if let Some(l) = l {
                s += &format!("/{l}");
            }
            s
        },
    );
    proptest::collection::vec(term, 1..4).prop_map(|v| v.join(" + "))
}

fn plane() -> Hyperplane {
    Hyperplane::from_form(parse_linform("u").unwrap(), None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simplify_is_idempotent(s in arb_expr()) {
        let e = parse_expr(&s).unwrap().simplify();
        prop_assert_eq!(e.simplify(), e);
    }

    #[test]
    fn residue_is_linear(a in arb_expr(), b in arb_expr()) {
        let (ea, eb) = (parse_expr(&a).unwrap(), parse_expr(&b).unwrap());
        let h = plane();
        let sum = residue(&ea.add(&eb), &h).unwrap().simplify();
        let parts = residue(&ea, &h).unwrap().add(&residue(&eb, &h).unwrap()).simplify();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn substitutions_compose(s in arb_expr(), a in 1..4i64, b in -3..4i64, c in -2..3i64, d in -3..4i64) {
        let e = parse_expr(&s).unwrap();
        let (u, y) = (Var::new("u"), Var::new("y"));
        // f: u ↦ a·u + b·y, y ↦ y + 1; g: y ↦ c·u + d.
        let f = BTreeMap::from([
            (u.clone(), LinForm::from_parts([(u.clone(), q(a)), (y.clone(), q(b))], q(0))),
            (y.clone(), LinForm::var(y.clone()).add_const(&q(1))),
        ]);
        let g = BTreeMap::from([(y.clone(), LinForm::from_parts([(u.clone(), q(c))], q(d)))]);
        let gf: BTreeMap<Var, LinForm> = f.iter().map(|(v, l)| (v.clone(), l.substitute(&g))).collect();
        let two = e.substitute(&f).and_then(|x| x.substitute(&g));
        let one = e.substitute(&gf);
        match (two, one) {
            (Ok(x), Ok(z)) => prop_assert_eq!(x.simplify(), z.simplify()),
            (Err(Error::Singular(_)), Err(Error::Singular(_))) => {}
            (x, z) => prop_assert!(false, "{:?} vs {:?}", x.err(), z.err()),
        }
    }

    #[test]
    fn regular_terms_have_zero_residue(n in -5..6i64, a in 1..4i64, c in 1..4i64) {
        // No factor vanishes on u = 0.
        let e = parse_expr(&format!("{n}*xi({a}*u+y+2)/({a}*u+{c})")).unwrap();
        prop_assert!(residue(&e, &plane()).unwrap().is_identically_zero());
    }
}

fn strip_points(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (rng.gen_range(-0.5..1.5), rng.gen_range(-30.0..30.0))).collect()
}

#[test]
fn xi_functional_equation_and_conjugation() {
    let ctx = Ctx::with_digits(30);
    let one = C::one(&ctx);
    for (x, y) in strip_points(500, 11) {
        let s = C::from_f64(x, y, &ctx);
        let a = xi(&s, &ctx).unwrap();
        let b = xi(&one.sub(&s, &ctx), &ctx).unwrap();
        let c = xi(&s.conj(), &ctx).unwrap();
        let scale = a.abs_f64();
        assert!(a.sub(&b, &ctx).abs_f64() <= 1e-25 * scale, "FE at {x}+{y}i");
        assert!(c.sub(&a.conj(), &ctx).abs_f64() <= 1e-25 * scale, "conjugation at {x}+{y}i");
    }
}

/// No real zeros: ξ < 0 on (0, 1) (ζ is negative there) and ξ > 0 beyond 1.
#[test]
fn xi_has_fixed_sign_on_the_real_line() {
    let ctx = Ctx::with_digits(20);
    let left = (1..100).map(|k| (k as f64 / 100.0, -1.0));
    let right = (101..=3000).step_by(7).map(|k| (k as f64 / 100.0, 1.0));
    for (x, sign) in left.chain(right) {
        let (re, im) = xi(&C::from_f64(x, 0.0, &ctx), &ctx).unwrap().to_f64();
        assert!(re * sign > 0.0 && im == 0.0, "xi({x}) = {re}{im:+}i");
    }
}

#[test]
fn laurent_constants_give_fourth_order_error() {
    let ctx = Ctx::with_digits(30);
    let a = laurent_constants(&ctx).unwrap();
    let err = |eps: f64| {
        let e = C::from_f64(eps, 0.0, &ctx);
        let mut approx = e.recip(&ctx);
        let mut p = C::one(&ctx);
        for ak in &a[..4] {
            approx = approx.add(&ak.mul(&p, &ctx), &ctx);
            p = p.mul(&e, &ctx);
        }
        let exact = xi(&C::one(&ctx).add(&e, &ctx), &ctx).unwrap();
        exact.sub(&approx, &ctx).abs_f64()
    };
    let (e1, e2, e3) = (err(1e-1), err(1e-2), err(1e-3));
    // Fourth-order decay: each decade divides the error by about 10⁴.
    for (big, small) in [(e1, e2), (e2, e3)] {
        let rate = (big / small).log10();
        assert!((rate - 4.0).abs() < 0.2, "decay rate {rate}");
    }
}

#[test]
fn evaluation_is_bitwise_deterministic() {
    let e = parse_expr("xi(2*s)/(s-1) - xi(2*s-1)/s + 1/3*xi(3*s-1)*xi(2)").unwrap();
    let pt = |c: &Ctx| BTreeMap::from([(Var::new("s"), C::from_f64(0.3, 7.5, c))]);
    let (c1, c2) = (Ctx::with_digits(30), Ctx::with_digits(30));
    let a = eval_expr(&e, &pt(&c1), &c1).unwrap().value;
    let b = eval_expr(&e, &pt(&c2), &c2).unwrap().value;
    assert_eq!(a.to_f64(), b.to_f64());
    assert_eq!(a.re, b.re);
    assert_eq!(a.im, b.im);
}

#[test]
fn rational_helpers_agree() {
    assert_eq!(to_f64(&qf(-3, 4)), -0.75);
}

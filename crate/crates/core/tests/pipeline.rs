//! End-to-end runs of the core pipeline and the zero finder.
use std::collections::BTreeSet;

use parazeta_core::normalize::{fe_residual, random_point, sole_var};
use parazeta_core::pipeline::{run, run_t, PipelineRun, RunOptions, TMode};
use parazeta_core::period::at_t_zero;
use parazeta_core::pipeline::t_vars;
use parazeta_core::q::{q, to_f64};
use parazeta_core::residue::MAX_POLE_ORDER;
use parazeta_core::xinum::{eval_expr, Ctx, C};
use parazeta_core::zerofind::{real_restriction, scan_zeros};
use parazeta_core::Q;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SMALL: &[(&str, &str)] =
    &[("SL2", "B"), ("SL3", "P21"), ("Sp4", "Pe1-e2"), ("Sp4", "P2e2"), ("G2", "Plong"), ("G2", "Pshort")];

fn runs(ctx: &Ctx) -> Vec<PipelineRun> {
    SMALL.iter().map(|(g, p)| run(g, p, ctx, &RunOptions { fe_points: 20, seed: 3 }).unwrap()).collect()
}

#[test]
fn cleared_forms_have_no_xi_denominators() {
    let ctx = Ctx::with_digits(20);
    for r in runs(&ctx) {
        for t in &r.xi_o.terms {
            assert!(t.xi_denominators().is_empty(), "{}/{}", r.group.name, r.parabolic.name);
        }
    }
}

#[test]
fn centered_zetas_commute_with_conjugation() {
    let ctx = Ctx::with_digits(30);
    for r in runs(&ctx) {
        let z = r.zeta();
        let v = sole_var(z).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let (x, y) = random_point(&mut rng, 10.0);
            let at = |im: f64| eval_expr(z, &[(v.clone(), C::from_f64(x, im, &ctx))].into(), &ctx).unwrap().value;
            let (a, b) = (at(y), at(-y));
            assert!(a.conj().sub(&b, &ctx).abs_f64() <= 1e-10 * a.abs_f64().max(1e-300), "{}", r.group.name);
        }
    }
}

#[test]
fn pole_sets_are_symmetric_under_the_fe() {
    let ctx = Ctx::with_digits(20);
    for r in runs(&ctx) {
        assert_eq!(r.record.c_constant, Some(q(1)));
        let set: BTreeSet<Q> = r.poles.locations().into_iter().collect();
        let mirrored: BTreeSet<Q> = set.iter().map(|p| q(1) - p).collect();
        assert_eq!(set, mirrored, "{}/{}", r.group.name, r.parabolic.name);
        assert!(r.poles.poles.iter().all(|p| p.order as i32 <= MAX_POLE_ORDER));
    }
}

#[test]
fn runs_are_deterministic() {
    let ctx = Ctx::with_digits(20);
    let o = RunOptions { fe_points: 10, seed: 8 };
    let a = run("G2", "Pshort", &ctx, &o).unwrap();
    let b = run("G2", "Pshort", &Ctx::with_digits(20), &o).unwrap();
    assert_eq!(a.period, b.period);
    assert_eq!(a.residue, b.residue);
    assert_eq!(a.zeta(), b.zeta());
    assert_eq!(a.poles, b.poles);
    assert_eq!(a.record.c_constant, b.record.c_constant);
}

#[test]
fn unsupported_pairs_are_errors() {
    let ctx = Ctx::with_digits(20);
    let o = RunOptions::default();
    assert!(run("SL3", "P33", &ctx, &o).is_err());
    assert!(run("E6", "P1", &ctx, &o).is_err());
}

#[test]
fn halving_the_scan_step_keeps_the_zeros() {
    let ctx = Ctx::with_digits(30);
    for (g, p) in [("SL2", "B"), ("G2", "Plong")] {
        let r = run(g, p, &ctx, &RunOptions { fe_points: 10, seed: 1 }).unwrap();
        let rr = real_restriction(r.zeta(), &ctx, 10, 1).unwrap();
        let a = scan_zeros(&rr, 0.0, 25.0, 0.05, 1e-10, &ctx).unwrap();
        let b = scan_zeros(&rr, 0.0, 25.0, 0.025, 1e-10, &ctx).unwrap();
        assert_eq!(a.zeros.len(), b.zeros.len(), "{g}/{p}");
        for (x, y) in a.zeros.iter().zip(&b.zeros) {
            assert!((x.t - y.t).abs() < 1e-8, "{g}/{p}: {} vs {}", x.t, y.t);
        }
    }
}

#[test]
fn simple_zeros_change_sign() {
    let ctx = Ctx::with_digits(30);
    let r = run("Sp4", "Pe1-e2", &ctx, &RunOptions { fe_points: 10, seed: 1 }).unwrap();
    let rr = real_restriction(r.zeta(), &ctx, 10, 1).unwrap();
    let zl = scan_zeros(&rr, 0.0, 20.0, 0.05, 1e-10, &ctx).unwrap();
    assert!(!zl.zeros.is_empty());
    for z in zl.zeros.iter().filter(|z| !z.multiple && z.t > 0.0) {
        let d = 10.0 * zl.tol;
        let (a, b) = (rr.at(z.t - d, &ctx).unwrap().unwrap(), rr.at(z.t + d, &ctx).unwrap().unwrap());
        assert!(a * b < 0.0, "no sign change at {}", z.t);
    }
}

#[test]
fn golden_zetas_satisfy_the_fe_on_a_wider_disc() {
    let ctx = Ctx::with_digits(30);
    for r in runs(&ctx) {
        let res = fe_residual(r.zeta(), &q(1), 30, &ctx, 21).unwrap();
        assert!(res <= 1e-9, "{}: {res:e}", r.group.name);
    }
}

#[test]
fn truncated_runs_reduce_to_the_untruncated_zeta() {
    // At T = 0 the truncated residue is the ordinary one, in the ρ-line
    // slice variable.
    let ctx = Ctx::with_digits(20);
    let full = run("SL3", "P21", &ctx, &RunOptions { fe_points: 10, seed: 1 }).unwrap();
    for p in ["P21", "P12"] {
        let t = run_t(p, TMode::RhoLine).unwrap();
        let (x, y) = t_vars();
        let at0 = at_t_zero(&t.result, &[x, y]).unwrap().simplify();
        assert!(at0.proportional_to(&full.xi_o).is_some(), "{p}: {}", at0.to_plain());
        assert!(to_f64(&at0.proportional_to(&full.xi_o).unwrap()) != 0.0);
    }
}

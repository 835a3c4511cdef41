//! Numeric evaluation of symbolic expressions.
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::special::{laurent_constants, xi, xi_deriv, xi_value};
use super::{Ctx, C};
use crate::error::{Error, Result};
use crate::q::Q;
use crate::symexpr::{LinForm, Poly, SymExpr, XiAtom};
use crate::var::Var;

#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: C,
    /// Some factor was within `delta` of a singular locus.
    pub near_singular: bool,
    /// Names of the offending factors.
    pub offending: Vec<String>,
}

fn lin_at(l: &LinForm, pt: &BTreeMap<Var, C>, c: &Ctx) -> Result<C> {
    let mut acc = C::real(c.q(l.const_term()), c);
    for (v, k) in l.coeffs() {
        let x = pt.get(v).ok_or_else(|| Error::Unsupported(alloc::format!("no value for {v}")))?;
        acc = acc.add(&x.scale(&c.q(k), c), c);
    }
    Ok(acc)
}

fn poly_at(p: &Poly, pt: &BTreeMap<Var, C>, c: &Ctx) -> Result<C> {
    let mut acc = C::zero(c);
    for (mono, k) in p.terms() {
        let mut t = C::real(c.q(k), c);
        for (v, e) in mono {
            let x = pt.get(v).ok_or_else(|| Error::Unsupported(alloc::format!("no value for {v}")))?;
            t = t.mul(&x.powi(*e as i32, c), c);
        }
        acc = acc.add(&t, c);
    }
    Ok(acc)
}

/// Distance of z from the point x on the real line, in f64.
fn dist(z: &C, x: f64) -> f64 {
    let (a, b) = z.to_f64();
    libm::hypot(a - x, b)
}

struct Walk<'a> {
    c: &'a Ctx,
    pt: &'a BTreeMap<Var, C>,
    near: bool,
    offending: Vec<String>,
    atoms: BTreeMap<XiAtom, C>,
}

impl Walk<'_> {
    fn flag(&mut self, name: String) {
        self.near = true;
        if !self.offending.contains(&name) {
            self.offending.push(name);
        }
    }

    fn xi_arg(&mut self, l: &LinForm, name: &str) -> Result<C> {
        let z = lin_at(l, self.pt, self.c)?;
        let d = dist(&z, 0.0).min(dist(&z, 1.0));
        if z.im.is_zero() && (z.is_zero() || z.re.cmp(&self.c.int(1)) == Some(0)) {
            return Err(Error::Pole(name.into()));
        }
        if d < self.c.cfg.delta {
            self.flag(name.into());
        }
        Ok(z)
    }

    fn atom(&mut self, a: &XiAtom) -> Result<C> {
        if let Some(v) = self.atoms.get(a) {
            return Ok(v.clone());
        }
        let name = a.to_plain();
        let v = match a {
            XiAtom::Of(l) => {
                let z = self.xi_arg(l, &name)?;
                xi(&z, self.c)?
            }
            XiAtom::Value(q) => xi_value(q, self.c)?,
            XiAtom::Laurent(k) => {
                let v = laurent_constants(self.c)?;
                v.get(*k as usize).cloned().ok_or_else(|| Error::Unsupported(alloc::format!("Laurent constant a{k}")))?
            }
            XiAtom::Deriv(l, k) => {
                let z = self.xi_arg(l, &name)?;
                xi_deriv(&z, *k as usize, self.c)?
            }
        };
        self.atoms.insert(a.clone(), v.clone());
        Ok(v)
    }
}

/// Evaluates `e` at a complex point. Exact hits on a pole of some factor
/// are errors; near misses are flagged.
pub fn eval_expr(e: &SymExpr, pt: &BTreeMap<Var, C>, c: &Ctx) -> Result<EvalResult> {
    let mut w = Walk { c, pt, near: false, offending: Vec::new(), atoms: BTreeMap::new() };
    let mut total = C::zero(c);
    for t in &e.terms {
        let mut v = C::real(c.q(&t.scalar), c);
        for (l, k) in &t.lin {
            let z = lin_at(l, pt, c)?;
            if z.is_zero() && *k < 0 {
                return Err(Error::Pole(l.to_plain()));
            }
            if *k < 0 && z.abs_f64() < c.cfg.delta {
                w.flag(l.to_plain());
            }
            v = v.mul(&z.powi(*k, c), c);
        }
        for (a, k) in &t.xi {
            let z = w.atom(a)?;
            if z.is_zero() && *k < 0 {
                return Err(Error::Pole(a.to_plain()));
            }
            v = v.mul(&z.powi(*k, c), c);
        }
        if let Some(p) = &t.exp {
            v = v.mul(&poly_at(p, pt, c)?.exp(c), c);
        }
        total = total.add(&v, c);
    }
    Ok(EvalResult { value: total, near_singular: w.near, offending: w.offending })
}

/// Evaluates a function of (at most) one variable at `s`.
pub fn eval_at(e: &SymExpr, s: &C, c: &Ctx) -> Result<EvalResult> {
    let fv = e.free_vars();
    if fv.len() > 1 {
        return Err(Error::Unsupported(alloc::format!("{} free variables", fv.len())));
    }
    let pt = fv.into_iter().map(|v| (v, s.clone())).collect();
    eval_expr(e, &pt, c)
}

/// Outcome of comparing two expressions up to a rational scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarMatch {
    /// a = q·b exactly.
    Exact(Q),
    /// The ratio a/b was constant to `agree` relative accuracy at all
    /// sample points; `ratio` is its value, `rational` a reconstruction.
    Numeric { ratio: (f64, f64), agree: f64, rational: Option<Q> },
    Mismatch,
}

impl ScalarMatch {
    pub fn is_match(&self) -> bool {
        !matches!(self, ScalarMatch::Mismatch)
    }
}

/// Relative agreement demanded of the numeric ratio test.
pub const MATCH_TOL: f64 = 1e-9;

/// Structural proportionality first, then a 20-point numeric check.
pub fn equals_up_to_scalar(a: &SymExpr, b: &SymExpr, c: &Ctx, seed: u64) -> Result<ScalarMatch> {
    if let Some(k) = a.proportional_to(b) {
        if !num_traits::Zero::is_zero(&k) || a.is_identically_zero() {
            return Ok(ScalarMatch::Exact(k));
        }
    }
    let mut vars = a.free_vars();
    vars.extend(b.free_vars());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios: Vec<C> = Vec::new();
    let mut tries = 0;
    while ratios.len() < 20 {
        tries += 1;
        if tries > 200 {
            return Err(Error::NoConvergence("no usable sample points".into()));
        }
        let pt: BTreeMap<Var, C> = vars
            .iter()
            .map(|v| (v.clone(), C::from_f64(rng.gen_range(-1.5..2.5), rng.gen_range(0.3..4.0), c)))
            .collect();
        let (x, y) = match (eval_expr(a, &pt, c), eval_expr(b, &pt, c)) {
            (Ok(x), Ok(y)) if !x.near_singular && !y.near_singular => (x.value, y.value),
            _ => continue,
        };
        if y.abs_f64() < 1e-30 {
            if x.abs_f64() < 1e-30 {
                continue;
            }
            return Ok(ScalarMatch::Mismatch);
        }
        let r = x.div(&y, c);
        if let Some(r0) = ratios.first() {
            if r.sub(r0, c).abs_f64() > MATCH_TOL * r0.abs_f64().max(1e-300) {
                return Ok(ScalarMatch::Mismatch);
            }
        }
        ratios.push(r);
    }
    let r0 = ratios[0].clone();
    let scale = r0.abs_f64().max(1e-300);
    let mut worst: f64 = 0.0;
    for r in &ratios[1..] {
        worst = worst.max(r.sub(&r0, c).abs_f64() / scale);
    }
    if worst < MATCH_TOL {
        let (re, im) = r0.to_f64();
        let rational = if libm::fabs(im) <= MATCH_TOL * libm::fabs(re) { crate::q::reconstruct(re, 10_000) } else { None };
        Ok(ScalarMatch::Numeric { ratio: (re, im), agree: worst, rational })
    } else {
        Ok(ScalarMatch::Mismatch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse_expr;

    #[test]
    fn evaluates_simple_expression() {
        let c = Ctx::with_digits(30);
        let e = parse_expr("xi(2)/(s-1) + 3*exp(2*s)").unwrap();
        let r = eval_at(&e, &C::from_f64(3.0, 0.0, &c), &c).unwrap();
        let want = core::f64::consts::PI / 12.0 + 3.0 * libm::exp(6.0);
        assert!((r.value.to_f64().0 - want).abs() < 1e-10);
        assert!(!r.near_singular);
    }

    #[test]
    fn pole_hit_is_error_and_near_miss_flags() {
        let c = Ctx::with_digits(20);
        let e = parse_expr("xi(2*s)/(s-1)").unwrap();
        assert!(matches!(eval_at(&e, &C::from_f64(1.0, 0.0, &c), &c), Err(Error::Pole(_))));
        assert!(matches!(eval_at(&e, &C::from_f64(0.5, 0.0, &c), &c), Err(Error::Pole(_))));
        let r = eval_at(&e, &C::from_f64(1.0 + 1e-8, 0.0, &c), &c).unwrap();
        assert!(r.near_singular);
    }

    #[test]
    fn numeric_match_sees_functional_equation() {
        let c = Ctx::with_digits(20);
        let a = parse_expr("xi(2*s)/(s-1)").unwrap();
        let b = parse_expr("2*xi(2*s)/(2*s-2)").unwrap();
        assert_eq!(equals_up_to_scalar(&a, &b, &c, 1).unwrap(), ScalarMatch::Exact(crate::q::q(1)));
        let d = parse_expr("xi(s)/(s-1)").unwrap();
        assert_eq!(equals_up_to_scalar(&a, &d, &c, 1).unwrap(), ScalarMatch::Mismatch);
    }
}

//! Multi-precision numerics: complex Γ, ζ, ξ and its derivatives, the
//! Laurent constants of ξ at 1, and evaluation of [`SymExpr`]s.
//!
//! [`SymExpr`]: crate::symexpr::SymExpr
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::Sign as BigSign;
use num_traits::ToPrimitive;

use crate::q::Q;

mod cplx;
mod eval;
mod special;

pub use cplx::C;
pub use eval::{equals_up_to_scalar, eval_at, eval_expr, EvalResult, ScalarMatch, MATCH_TOL};
pub use special::{
    bernoulli_even, cauchy_coeffs, contour_integral, gamma, laurent_constants, laurent_constants_direct, ln_gamma, xi,
    xi_deriv, xi_derivs, xi_value, zeta,
};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Numeric evaluation settings.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalConfig {
    /// Working precision in decimal digits.
    pub digits: u32,
    /// Distance to a singular locus below which a value is flagged.
    pub delta: f64,
    /// Height beyond which accuracy is not promised.
    pub max_im: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { digits: 30, delta: 1e-6, max_im: 200.0 }
    }
}

impl EvalConfig {
    pub fn with_digits(digits: u32) -> Self {
        EvalConfig { digits, ..Self::default() }
    }
}

#[derive(Default)]
struct Cache {
    pi: Option<BigFloat>,
    ln_pi: Option<BigFloat>,
    ln_2pi: Option<BigFloat>,
    /// B₂, B₄, … as floats.
    bern: Vec<BigFloat>,
    /// ln n for n = 0.. (index 0, 1 unused).
    ln_n: Vec<BigFloat>,
    xi_const: BTreeMap<Q, C>,
    laurent: Option<Vec<C>>,
}

/// Evaluation context: precision, constants and caches. Not `Sync`;
/// build one per thread.
pub struct Ctx {
    pub cfg: EvalConfig,
    /// Working precision in bits.
    pub p: usize,
    cc: RefCell<Consts>,
    cache: RefCell<Cache>,
}

impl Ctx {
    pub fn new(cfg: EvalConfig) -> Self {
        assert!(cfg.digits >= 15, "precision below 15 digits");
        assert!(cfg.delta > 0.0);
        let p = (cfg.digits as f64 * 3.3219281).ceil() as usize + 32;
        let cc = Consts::new().expect("astro-float constants cache");
        Ctx { cfg, p, cc: RefCell::new(cc), cache: RefCell::new(Cache::default()) }
    }

    pub fn with_digits(d: u32) -> Self {
        Self::new(EvalConfig::with_digits(d))
    }

    /// 2^{-p+8}: the relative accuracy we aim for.
    pub fn eps(&self) -> BigFloat {
        let one = self.int(1);
        let e = one.as_raw_parts().map(|r| r.3).unwrap_or(1);
        let mut x = one;
        x.set_exponent(e - self.p as i32 + 8);
        x
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.p)
    }

    pub fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    pub fn q(&self, x: &Q) -> BigFloat {
        let n = bigint_to_float(x.numer(), self.p);
        let d = bigint_to_float(x.denom(), self.p);
        n.div(&d, self.p, RM)
    }

    pub fn pi(&self) -> BigFloat {
        if let Some(v) = &self.cache.borrow().pi {
            return v.clone();
        }
        let v = self.cc.borrow_mut().pi(self.p, RM);
        self.cache.borrow_mut().pi = Some(v.clone());
        v
    }

    pub(crate) fn ln_pi(&self) -> BigFloat {
        if let Some(v) = &self.cache.borrow().ln_pi {
            return v.clone();
        }
        let v = self.ln(&self.pi());
        self.cache.borrow_mut().ln_pi = Some(v.clone());
        v
    }

    pub(crate) fn ln_2pi(&self) -> BigFloat {
        if let Some(v) = &self.cache.borrow().ln_2pi {
            return v.clone();
        }
        let v = self.ln(&self.pi().mul(&self.int(2), self.p, RM));
        self.cache.borrow_mut().ln_2pi = Some(v.clone());
        v
    }

    /// ln n, cached, built from logarithms of primes.
    pub(crate) fn ln_int(&self, n: usize) -> BigFloat {
        loop {
            let m = self.cache.borrow().ln_n.len();
            if n < m {
                return self.cache.borrow().ln_n[n].clone();
            }
            let v = match smallest_factor(m) {
                _ if m < 2 => self.int(0),
                f if f == m => self.ln(&self.int(m as i64)),
                f => {
                    let c = self.cache.borrow();
                    c.ln_n[f].add(&c.ln_n[m / f], self.p, RM)
                }
            };
            self.cache.borrow_mut().ln_n.push(v);
        }
    }

    pub(crate) fn bernoulli(&self, k: usize) -> BigFloat {
        {
            let c = self.cache.borrow();
            if k < c.bern.len() {
                return c.bern[k].clone();
            }
        }
        let want = (k + 1).max(64);
        let qs = special::bernoulli_even(want);
        let v: Vec<BigFloat> = qs.iter().map(|b| self.q(b)).collect();
        let mut c = self.cache.borrow_mut();
        c.bern = v;
        c.bern[k].clone()
    }

    pub(crate) fn ln(&self, x: &BigFloat) -> BigFloat {
        x.ln(self.p, RM, &mut self.cc.borrow_mut())
    }

    pub(crate) fn exp(&self, x: &BigFloat) -> BigFloat {
        x.exp(self.p, RM, &mut self.cc.borrow_mut())
    }

    pub(crate) fn sin(&self, x: &BigFloat) -> BigFloat {
        x.sin(self.p, RM, &mut self.cc.borrow_mut())
    }

    pub(crate) fn cos(&self, x: &BigFloat) -> BigFloat {
        x.cos(self.p, RM, &mut self.cc.borrow_mut())
    }

    pub(crate) fn sinh(&self, x: &BigFloat) -> BigFloat {
        x.sinh(self.p, RM, &mut self.cc.borrow_mut())
    }

    pub(crate) fn cosh(&self, x: &BigFloat) -> BigFloat {
        x.cosh(self.p, RM, &mut self.cc.borrow_mut())
    }

    pub(crate) fn atan(&self, x: &BigFloat) -> BigFloat {
        x.atan(self.p, RM, &mut self.cc.borrow_mut())
    }

    pub(crate) fn sqrt(&self, x: &BigFloat) -> BigFloat {
        x.sqrt(self.p, RM)
    }

    /// Decimal rendering with `n` significant digits.
    pub fn fmt(&self, x: &BigFloat, n: usize) -> alloc::string::String {
        let f = to_f64(x);
        if n <= 17 || !f.is_finite() {
            return alloc::format!("{:.*e}", n.saturating_sub(1), f);
        }
        x.format(astro_float::Radix::Dec, RM, &mut self.cc.borrow_mut()).unwrap_or_else(|_| alloc::format!("{f:e}"))
    }
}

pub(crate) fn smallest_factor(n: usize) -> usize {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

fn bigint_to_float(n: &num_bigint::BigInt, p: usize) -> BigFloat {
    if let Some(v) = n.to_i64() {
        return BigFloat::from_i64(v, p);
    }
    let (sign, digits) = n.to_u64_digits();
    let base = BigFloat::from_u64(u64::MAX, p).add(&BigFloat::from_u64(1, p), p, RM);
    let mut acc = BigFloat::from_u64(0, p);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
    }
    if sign == BigSign::Minus {
        acc.neg()
    } else {
        acc
    }
}

/// Nearest f64 (saturating to ±inf or 0 outside the f64 range).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((m, _, s, e, _)) = x.as_raw_parts() else { return f64::NAN };
    if x.is_zero() || m.is_empty() {
        return 0.0;
    }
    // Value is 0.m × 2^e with the top word most significant.
    let top = *m.last().unwrap() as f64;
    let next = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
    let frac = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
    let v = frac * libm::pow(2.0, e as f64);
    if s == astro_float::Sign::Neg {
        -v
    } else {
        v
    }
}

/// |x| as f64 via exponent, robust against f64 underflow: returns
/// (mantissa in [0.5,1), binary exponent).
pub fn frexp(x: &BigFloat) -> (f64, i64) {
    match x.as_raw_parts() {
        Some((m, _, s, e, _)) if !x.is_zero() && !m.is_empty() => {
            let top = *m.last().unwrap() as f64;
            let next = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
            let frac = (top + next / 18446744073709551616.0) / 18446744073709551616.0;
            (if s == astro_float::Sign::Neg { -frac } else { frac }, e as i64)
        }
        _ => (0.0, 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::qf;

    #[test]
    fn f64_roundtrip() {
        let c = Ctx::with_digits(30);
        for x in [1.5, -0.375, 1e-40, 3.0e50, 0.1] {
            let b = c.real(x);
            assert_eq!(to_f64(&b), x);
        }
        assert_eq!(to_f64(&c.int(0)), 0.0);
    }

    #[test]
    fn rationals_convert() {
        let c = Ctx::with_digits(30);
        assert!((to_f64(&c.q(&qf(-7, 3))) + 7.0 / 3.0).abs() < 1e-15);
        let big = crate::q::pow_i(&qf(10, 1), 30);
        assert!((to_f64(&c.q(&big)) / 1e30 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_table_is_additive() {
        let c = Ctx::with_digits(30);
        let l12 = to_f64(&c.ln_int(12));
        assert!((l12 - libm::log(12.0)).abs() < 1e-14);
        assert!((to_f64(&c.ln_int(97)) - libm::log(97.0)).abs() < 1e-14);
    }
}

//! Γ, ζ and ξ over the complex numbers.
use alloc::vec::Vec;

use super::{smallest_factor, to_f64, Ctx, C, RM};
use crate::error::{Error, Result};
use crate::q::Q;

/// [B₀, B₂, …, B_{2(n−1)}] by the Akiyama–Tanigawa recurrence.
pub fn bernoulli_even(n: usize) -> Vec<Q> {
    let top = 2 * n.saturating_sub(1);
    let mut a: Vec<Q> = Vec::with_capacity(top + 1);
    let mut out = Vec::with_capacity(n);
    for m in 0..=top {
        a.push(Q::new(1.into(), ((m + 1) as i64).into()));
        for j in (1..=m).rev() {
            let d = &a[j - 1] - &a[j];
            a[j - 1] = d * Q::from_integer((j as i64).into());
        }
        if m % 2 == 0 {
            out.push(a[0].clone());
        }
    }
    out
}

/// log₂|z|, roughly (from binary exponents).
fn log2_abs(z: &C) -> f64 {
    let (a, ea) = super::frexp(&z.re);
    let (b, eb) = super::frexp(&z.im);
    let la = if a == 0.0 { f64::NEG_INFINITY } else { libm::log2(libm::fabs(a)) + ea as f64 };
    let lb = if b == 0.0 { f64::NEG_INFINITY } else { libm::log2(libm::fabs(b)) + eb as f64 };
    la.max(lb)
}

/// |t| below the working accuracy relative to a quantity of size 2^scale.
fn small(t: &C, scale: f64, c: &Ctx) -> bool {
    log2_abs(t) < scale - c.p as f64 + 6.0
}

/// Exact pole test for ξ and ζ arguments.
fn is_int(z: &C, k: i64, c: &Ctx) -> bool {
    z.im.is_zero() && z.re.cmp(&c.int(k)) == Some(0)
}

/// log Γ(z) for Re z > 0 (any branch; only exp of it is used).
pub fn ln_gamma(z: &C, c: &Ctx) -> C {
    let r = (c.p as f64 * 0.125).ceil() + 2.0;
    let re = to_f64(&z.re);
    let m = if re < r { (r - re).ceil() as i64 } else { 0 };
    let mut w = z.clone();
    let mut prod = C::one(c);
    for _ in 0..m {
        prod = prod.mul(&w, c);
        w = w.add(&C::real(c.int(1), c), c);
    }
    let half = C::real(c.real(0.5), c);
    let lnw = w.ln(c);
    let mut s = w.sub(&half, c).mul(&lnw, c).sub(&w, c).add(&C::real(c.ln_2pi().mul(&c.real(0.5), c.p, RM), c), c);
    let inv = w.recip(c);
    let inv2 = inv.mul(&inv, c);
    let mut pw = inv.clone();
    let scale = log2_abs(&s).max(0.0);
    for k in 1..(4 * r as usize + 8) {
        let b = c.bernoulli(k);
        let den = c.int((2 * k * (2 * k - 1)) as i64);
        let t = pw.scale(&b.div(&den, c.p, RM), c);
        s = s.add(&t, c);
        if small(&t, scale, c) {
            break;
        }
        pw = pw.mul(&inv2, c);
    }
    if m > 0 {
        s = s.sub(&prod.ln(c), c);
    }
    s
}

pub fn gamma(z: &C, c: &Ctx) -> Result<C> {
    if z.im.is_zero() && z.re.is_int() && !z.re.is_positive() {
        return Err(Error::Pole(alloc::format!("gamma at {}", to_f64(&z.re))));
    }
    if to_f64(&z.re) < 0.5 {
        // Γ(z) = π / (sin(πz) Γ(1−z))
        let pi = c.pi();
        let one = C::one(c);
        let g = ln_gamma(&one.sub(z, c), c).exp(c);
        let sn = z.scale(&pi, c).sin(c);
        return Ok(C::real(pi, c).div(&sn.mul(&g, c), c));
    }
    Ok(ln_gamma(z, c).exp(c))
}

/// n^{−s} for n = 1..=n_max, using complete multiplicativity.
fn inverse_powers(s: &C, n_max: usize, c: &Ctx) -> Vec<C> {
    let mut v: Vec<C> = Vec::with_capacity(n_max + 1);
    v.push(C::zero(c));
    v.push(C::one(c));
    for n in 2..=n_max {
        let f = smallest_factor(n);
        let x = if f == n { C::exp_neg_real_mul(s, &c.ln_int(n), c) } else { v[f].mul(&v[n / f], c) };
        v.push(x);
    }
    v
}

/// Euler–Maclaurin summation, valid for Re s > −1 away from s = 1.
fn zeta_em(s: &C, c: &Ctx) -> C {
    let kmax = c.p + 8;
    let (sr, si) = s.to_f64();
    let mag = libm::hypot(sr, si);
    // Smallest cutoff whose Euler–Maclaurin remainder reaches 2^{-p-8}.
    let n = (0.12 * c.p as f64 + 0.4 * mag + 4.0).ceil() as usize;
    let pw = inverse_powers(s, n, c);
    let mut sum = C::zero(c);
    for x in &pw[1..n] {
        sum = sum.add(x, c);
    }
    let nn = c.int(n as i64);
    let ns = &pw[n];
    let one = C::one(c);
    // N^{1−s}/(s−1) + N^{−s}/2
    sum = sum.add(&ns.scale(&nn, c).div(&s.sub(&one, c), c), c);
    sum = sum.add(&ns.scale(&c.real(0.5), c), c);
    let scale = log2_abs(&sum);
    let inv_n = c.int(1).div(&nn, c.p, RM);
    let inv_n2 = inv_n.mul(&inv_n, c.p, RM);
    // P_k = (s)_{2k−1} N^{−s−2k+1}
    let mut pk = s.mul(ns, c).scale(&inv_n, c);
    let mut fact = c.int(2);
    for k in 1..kmax {
        let t = pk.scale(&c.bernoulli(k).div(&fact, c.p, RM), c);
        sum = sum.add(&t, c);
        if small(&t, scale, c) {
            break;
        }
        let a = s.add(&C::real(c.int(2 * k as i64 - 1), c), c);
        let b = s.add(&C::real(c.int(2 * k as i64), c), c);
        pk = pk.mul(&a, c).mul(&b, c).scale(&inv_n2, c);
        fact = fact.mul(&c.int(((2 * k + 1) * (2 * k + 2)) as i64), c.p, RM);
    }
    sum
}

pub fn zeta(s: &C, c: &Ctx) -> Result<C> {
    if is_int(s, 1, c) {
        return Err(Error::Pole("zeta at 1".into()));
    }
    if to_f64(&s.re) < -1.0 {
        // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
        let one = C::one(c);
        let t = one.sub(s, c);
        let pi = c.pi();
        let ln2 = c.ln_int(2);
        let e = s.scale(&ln2, c).add(&s.sub(&one, c).scale(&c.ln_pi(), c), c).exp(c);
        let sn = s.scale(&pi.mul(&c.real(0.5), c.p, RM), c).sin(c);
        let g = gamma(&t, c)?;
        return Ok(e.mul(&sn, c).mul(&g, c).mul(&zeta_em(&t, c), c));
    }
    Ok(zeta_em(s, c))
}

/// ξ(s) = π^{−s/2} Γ(s/2) ζ(s), evaluated on Re s ≥ 1/2 via ξ(s) = ξ(1−s).
pub fn xi(s: &C, c: &Ctx) -> Result<C> {
    if is_int(s, 0, c) || is_int(s, 1, c) {
        return Err(Error::Pole(alloc::format!("xi at {}", to_f64(&s.re))));
    }
    let s = if to_f64(&s.re) < 0.5 { C::one(c).sub(s, c) } else { s.clone() };
    let h = s.scale(&c.real(0.5), c);
    let pre = ln_gamma(&h, c).sub(&h.scale(&c.ln_pi(), c), c).exp(c);
    Ok(pre.mul(&zeta_em(&s, c), c))
}

/// ξ at a rational point, cached.
pub fn xi_value(q: &Q, c: &Ctx) -> Result<C> {
    if let Some(v) = c.cache.borrow().xi_const.get(q) {
        return Ok(v.clone());
    }
    let v = xi(&C::real(c.q(q), c), c)?;
    c.cache.borrow_mut().xi_const.insert(q.clone(), v.clone());
    Ok(v)
}

/// Taylor coefficients c₀..c_kmax of f about `center` by the trapezoid
/// rule on a circle of radius r.
pub fn cauchy_coeffs<F>(center: &C, r: f64, kmax: usize, c: &Ctx, mut f: F) -> Result<Vec<C>>
where
    F: FnMut(&C) -> Result<C>,
{
    let m = c.p / 2 + 16;
    let two_pi = c.pi().mul(&c.int(2), c.p, RM);
    let theta0 = c.real(0.1234);
    let rr = c.real(r);
    let mut acc: Vec<C> = (0..=kmax).map(|_| C::zero(c)).collect();
    for j in 0..m {
        let th = two_pi.mul(&c.int(j as i64), c.p, RM).div(&c.int(m as i64), c.p, RM).add(&theta0, c.p, RM);
        let unit = C::new(c.cos(&th), c.sin(&th));
        let z = center.add(&unit.scale(&rr, c), c);
        let v = f(&z)?;
        // e^{−ikθ} = conj(unit)^k
        let cu = unit.conj();
        let mut w = v;
        for a in acc.iter_mut() {
            *a = a.add(&w, c);
            w = w.mul(&cu, c);
        }
    }
    let inv_m = c.int(1).div(&c.int(m as i64), c.p, RM);
    let mut rk = c.int(1);
    let inv_r = c.int(1).div(&rr, c.p, RM);
    for a in acc.iter_mut() {
        *a = a.scale(&inv_m.mul(&rk, c.p, RM), c);
        rk = rk.mul(&inv_r, c.p, RM);
    }
    Ok(acc)
}

/// ξ(s) − 1/(s−1) + 1/s, an entire function.
fn xi_regular(s: &C, c: &Ctx) -> Result<C> {
    let one = C::one(c);
    Ok(xi(s, c)?.sub(&s.sub(&one, c).recip(c), c).add(&s.recip(c), c))
}

fn pick_radius(s0: &C) -> f64 {
    let (a, b) = s0.to_f64();
    let d0 = libm::hypot(a, b);
    let d1 = libm::hypot(a - 1.0, b);
    let mut best = (f64::MIN, 0.5);
    for r in [0.5, 0.75, 0.3, 1.0] {
        let m = libm::fabs(d0 - r).min(libm::fabs(d1 - r));
        if m > best.0 + 1e-9 {
            best = (m, r);
        }
    }
    best.1
}

/// ξ^{(k)}(s₀) for k ≤ `kmax`, from Cauchy integrals of the regular part.
pub fn xi_derivs(s0: &C, kmax: usize, c: &Ctx) -> Result<Vec<C>> {
    if is_int(s0, 0, c) || is_int(s0, 1, c) {
        return Err(Error::Pole(alloc::format!("xi derivative at {}", to_f64(&s0.re))));
    }
    let co = cauchy_coeffs(s0, pick_radius(s0), kmax, c, |z| xi_regular(z, c))?;
    let one = C::one(c);
    let a = s0.sub(&one, c).recip(c);
    let b = s0.recip(c);
    let mut out = Vec::with_capacity(kmax + 1);
    let mut fact = c.int(1);
    for (k, ck) in co.iter().enumerate() {
        if k > 0 {
            fact = fact.mul(&c.int(k as i64), c.p, RM);
        }
        // d^k[1/(s−1) − 1/s] = (−1)^k k! [(s−1)^{−k−1} − s^{−k−1}]
        let mut pole = a.powi(k as i32 + 1, c).sub(&b.powi(k as i32 + 1, c), c).scale(&fact, c);
        if k % 2 == 1 {
            pole = pole.neg();
        }
        out.push(ck.scale(&fact, c).add(&pole, c));
    }
    if kmax == 0 || to_f64(&s0.re).is_finite() {
        // The k = 0 slot is more accurate from a direct evaluation.
        out[0] = xi(s0, c)?;
    }
    Ok(out)
}

pub fn xi_deriv(s0: &C, k: usize, c: &Ctx) -> Result<C> {
    if k == 0 {
        return xi(s0, c);
    }
    Ok(xi_derivs(s0, k, c)?.pop().unwrap())
}

/// a₀..a₃ with ξ(1+ε) = 1/ε + Σ a_k ε^k (regular-part route).
pub fn laurent_constants(c: &Ctx) -> Result<Vec<C>> {
    if let Some(v) = &c.cache.borrow().laurent {
        return Ok(v.clone());
    }
    let one = C::one(c);
    let co = cauchy_coeffs(&one, 0.5, 3, c, |z| xi_regular(z, c))?;
    let v: Vec<C> = co
        .iter()
        .enumerate()
        .map(|(k, ck)| {
            // 1/(1+ε) = Σ (−ε)^k
            let sign = if k % 2 == 0 { c.int(1) } else { c.int(-1) };
            ck.sub(&C::real(sign, c), c)
        })
        .collect();
    c.cache.borrow_mut().laurent = Some(v.clone());
    Ok(v)
}

/// The same constants from ξ(1+z) − 1/z directly on a smaller circle.
pub fn laurent_constants_direct(c: &Ctx) -> Result<Vec<C>> {
    let zero = C::zero(c);
    let one = C::one(c);
    cauchy_coeffs(&zero, 0.25, 3, c, |z| Ok(xi(&one.add(z, c), c)?.sub(&z.recip(c), c)))
}

/// (1/2πi)∮ f dz over a circle, trapezoid rule with `m` nodes.
pub fn contour_integral<F>(center: &C, r: f64, m: usize, c: &Ctx, mut f: F) -> Result<C>
where
    F: FnMut(&C) -> Result<C>,
{
    let two_pi = c.pi().mul(&c.int(2), c.p, RM);
    let rr = c.real(r);
    let mut acc = C::zero(c);
    for j in 0..m {
        let th = two_pi.mul(&c.int(j as i64), c.p, RM).div(&c.int(m as i64), c.p, RM).add(&c.real(0.05), c.p, RM);
        let dz = C::new(c.cos(&th), c.sin(&th)).scale(&rr, c);
        let v = f(&center.add(&dz, c))?;
        acc = acc.add(&v.mul(&dz, c), c);
    }
    Ok(acc.scale(&c.int(1).div(&c.int(m as i64), c.p, RM), c))
}

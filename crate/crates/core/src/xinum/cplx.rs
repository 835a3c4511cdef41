use astro_float::BigFloat;

use super::{to_f64, Ctx, RM};

/// A complex number over [`BigFloat`].
#[derive(Clone, Debug)]
pub struct C {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl C {
    pub fn new(re: BigFloat, im: BigFloat) -> C {
        C { re, im }
    }

    pub fn real(re: BigFloat, x: &Ctx) -> C {
        C { re, im: x.int(0) }
    }

    pub fn from_f64(re: f64, im: f64, x: &Ctx) -> C {
        C { re: x.real(re), im: x.real(im) }
    }

    pub fn zero(x: &Ctx) -> C {
        C { re: x.int(0), im: x.int(0) }
    }

    pub fn one(x: &Ctx) -> C {
        C { re: x.int(1), im: x.int(0) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    /// Components scaled by a common power of two so that the larger has
    /// magnitude in [0.5, 1). Preserves the argument when f64 would
    /// underflow.
    pub fn to_f64_scaled(&self) -> (f64, f64) {
        let (a, ea) = super::frexp(&self.re);
        let (b, eb) = super::frexp(&self.im);
        let e = if a == 0.0 { eb } else if b == 0.0 { ea } else { ea.max(eb) };
        let sc = |m: f64, ex: i64| if m == 0.0 { 0.0 } else { m * libm::pow(2.0, (ex - e) as f64) };
        (sc(a, ea), sc(b, eb))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &C, x: &Ctx) -> C {
        C { re: self.re.add(&o.re, x.p, RM), im: self.im.add(&o.im, x.p, RM) }
    }

    pub fn sub(&self, o: &C, x: &Ctx) -> C {
        C { re: self.re.sub(&o.re, x.p, RM), im: self.im.sub(&o.im, x.p, RM) }
    }

    pub fn neg(&self) -> C {
        C { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> C {
        C { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &C, x: &Ctx) -> C {
        let p = x.p;
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        C { re, im }
    }

    pub fn scale(&self, k: &BigFloat, x: &Ctx) -> C {
        C { re: self.re.mul(k, x.p, RM), im: self.im.mul(k, x.p, RM) }
    }

    pub fn norm_sqr(&self, x: &Ctx) -> BigFloat {
        self.re.mul(&self.re, x.p, RM).add(&self.im.mul(&self.im, x.p, RM), x.p, RM)
    }

    pub fn abs(&self, x: &Ctx) -> BigFloat {
        x.sqrt(&self.norm_sqr(x))
    }

    pub fn abs_f64(&self) -> f64 {
        let (a, b) = self.to_f64();
        libm::hypot(a, b)
    }

    pub fn recip(&self, x: &Ctx) -> C {
        let n = self.norm_sqr(x);
        C { re: self.re.div(&n, x.p, RM), im: self.im.neg().div(&n, x.p, RM) }
    }

    pub fn div(&self, o: &C, x: &Ctx) -> C {
        self.mul(&o.recip(x), x)
    }

    pub fn powi(&self, n: i32, x: &Ctx) -> C {
        let mut base = if n < 0 { self.recip(x) } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = C::one(x);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, x);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, x);
            }
        }
        acc
    }

    /// Principal argument in (−π, π].
    pub fn arg(&self, x: &Ctx) -> BigFloat {
        let pi = x.pi();
        if self.re.is_zero() {
            let h = pi.div(&x.int(2), x.p, RM);
            return if self.im.is_negative() { h.neg() } else if self.im.is_zero() { x.int(0) } else { h };
        }
        let a = x.atan(&self.im.div(&self.re, x.p, RM));
        if self.re.is_positive() {
            a
        } else if self.im.is_negative() {
            a.sub(&pi, x.p, RM)
        } else {
            a.add(&pi, x.p, RM)
        }
    }

    pub fn ln(&self, x: &Ctx) -> C {
        let half = x.real(0.5);
        let m = x.ln(&self.norm_sqr(x)).mul(&half, x.p, RM);
        C { re: m, im: self.arg(x) }
    }

    pub fn exp(&self, x: &Ctx) -> C {
        let r = x.exp(&self.re);
        C { re: r.mul(&x.cos(&self.im), x.p, RM), im: r.mul(&x.sin(&self.im), x.p, RM) }
    }

    pub fn sin(&self, x: &Ctx) -> C {
        C {
            re: x.sin(&self.re).mul(&x.cosh(&self.im), x.p, RM),
            im: x.cos(&self.re).mul(&x.sinh(&self.im), x.p, RM),
        }
    }

    /// exp(−s·ℓ) for a real ℓ (used for n^{−s}).
    pub fn exp_neg_real_mul(s: &C, l: &BigFloat, x: &Ctx) -> C {
        let r = x.exp(&s.re.mul(l, x.p, RM).neg());
        let th = s.im.mul(l, x.p, RM);
        C { re: r.mul(&x.cos(&th), x.p, RM), im: r.mul(&x.sin(&th), x.p, RM).neg() }
    }
}

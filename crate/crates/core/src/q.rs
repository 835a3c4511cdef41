//! Exact rational helpers.
use alloc::string::{String, ToString};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        Some(Q::from_integer(s.parse().ok()?))
    }
}

/// `p/q`, or `p` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// q^e for integer e (q must be nonzero when e < 0).
pub fn pow_i(x: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Generalized binomial coefficient C(e, n) for integer e.
pub fn binom(e: i32, n: u32) -> Q {
    let mut r = Q::one();
    for i in 0..n as i64 {
        r *= qf(e as i64 - i, i + 1);
    }
    r
}

pub fn factorial(n: u32) -> Q {
    let mut r = Q::one();
    for i in 2..=n as i64 {
        r *= q(i);
    }
    r
}

/// Best rational approximation with denominator at most `max_den`
/// via continued fractions; `None` if x is not finite.
pub fn reconstruct(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = libm::floor(y);
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    Some(Q::new(BigInt::from(p1), BigInt::from(q1)))
}

/// gcd of numerators and lcm of denominators: the positive rational m with
/// all x_i / m integral and coprime.
pub fn content<'a>(xs: impl Iterator<Item = &'a Q>) -> Q {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for x in xs {
        if x.is_zero() {
            continue;
        }
        g = g.gcd(x.numer());
        l = l.lcm(x.denom());
    }
    if g.is_zero() {
        Q::one()
    } else {
        Q::new(g.abs(), l)
    }
}

//! Sparse multivariate polynomials over Q. Used for exact cancellation tests
//! and for exponents e^{P} of the truncated period.
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::q::{fmt_q, Q};
use crate::symexpr::linform::LinForm;
use crate::var::Var;

/// Exponent vector, sorted by variable, no zero entries.
pub type Mono = Vec<(Var, u32)>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Q>,
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut m: BTreeMap<Var, u32> = a.iter().cloned().collect();
    for (v, e) in b {
        *m.entry(v.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_mono(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn from_linform(f: &LinForm) -> Self {
        let mut p = Self::constant(f.const_term().clone());
        for (v, c) in f.coeffs() {
            p.add_mono(alloc::vec![(v.clone(), 1)], c.clone());
        }
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Q)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            let m: BTreeMap<Var, u32> = m.into_iter().filter(|(_, e)| *e > 0).collect();
            p.add_mono(m.into_iter().collect(), c);
        }
        p
    }

    fn add_mono(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let n = self.terms.remove(&m).unwrap_or_else(Q::zero) + c;
        if !n.is_zero() {
            self.terms.insert(m, n);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().map(|(_, e)| e).sum()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> alloc::collections::BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v.clone())).collect()
    }

    /// The affine form, if the degree is at most one.
    pub fn to_linform(&self) -> Option<LinForm> {
        let mut f = LinForm::zero();
        for (m, c) in &self.terms {
            match m.as_slice() {
                [] => f = f.add_const(c),
                [(v, 1)] => f.add_term(v.clone(), c.clone()),
                _ => return None,
            }
        }
        Some(f)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_mono(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, k: &Q) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_mono(mono_mul(ma, mb), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Replaces variables by affine forms.
    pub fn substitute(&self, sub: &BTreeMap<Var, LinForm>) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (v, e) in m {
                let base = match sub.get(v) {
                    Some(f) => Poly::from_linform(f),
                    None => Poly::from_terms([(alloc::vec![(v.clone(), 1)], Q::one())]),
                };
                t = t.mul(&base.pow(*e));
            }
            r = r.add(&t);
        }
        r
    }

    /// Coefficients of powers of `v`: self = Σ_k out[k] · v^k.
    pub fn split_by(&self, v: &Var) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let k = m.iter().find(|(w, _)| w == v).map(|(_, e)| *e).unwrap_or(0) as usize;
            let rest: Mono = m.iter().filter(|(w, _)| w != v).cloned().collect();
            while out.len() <= k {
                out.push(Poly::zero());
            }
            out[k].add_mono(rest, c.clone());
        }
        out
    }

    pub fn eval_q(&self, pt: &BTreeMap<Var, Q>) -> Option<Q> {
        let mut r = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m {
                t *= num_traits::pow(pt.get(v)?.clone(), *e as usize);
            }
            r += t;
        }
        Some(r)
    }

    pub fn to_plain(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Higher-degree monomials first reads more naturally.
        let mut items: Vec<(&Mono, &Q)> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            let da: u32 = a.0.iter().map(|x| x.1).sum();
            let db: u32 = b.0.iter().map(|x| x.1).sum();
            db.cmp(&da).then(a.0.cmp(b.0))
        });
        for (i, (m, c)) in items.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            if m.is_empty() {
                f.write_str(&fmt_q(&a))?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{}*", fmt_q(&a))?;
            }
            for (j, (v, e)) in m.iter().enumerate() {
                if j > 0 {
                    f.write_str("*")?;
                }
                if *e == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

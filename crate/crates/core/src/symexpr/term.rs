use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::q::{pow_i, Q};
use crate::symexpr::atom::XiAtom;
use crate::symexpr::linform::LinForm;
use crate::symexpr::poly::Poly;
use crate::var::Var;

/// scalar · Π Lᵉ · Π ξ-atomᵉ · e^{exp}.
///
/// Linear factors are kept primitive (see [`LinForm::primitive`]), so two
/// proportional forms always share a key.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub scalar: Q,
    pub lin: BTreeMap<LinForm, i32>,
    pub xi: BTreeMap<XiAtom, i32>,
    pub exp: Option<Poly>,
}

fn bump<K: Ord>(m: &mut BTreeMap<K, i32>, k: K, e: i32) {
    if e == 0 {
        return;
    }
    let n = m.remove(&k).unwrap_or(0) + e;
    if n != 0 {
        m.insert(k, n);
    }
}

impl Term {
    pub fn scalar(c: Q) -> Term {
        Term { scalar: c, lin: BTreeMap::new(), xi: BTreeMap::new(), exp: None }
    }

    pub fn one() -> Term {
        Self::scalar(Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Multiplies by Lᵉ, folding constants and the primitive multiplier
    /// into the scalar.
    pub fn push_lin(&mut self, l: &LinForm, e: i32) -> Result<()> {
        if e == 0 {
            return Ok(());
        }
        let (m, p) = l.primitive();
        if m.is_zero() {
            if e < 0 {
                return Err(Error::Singular(alloc::format!("1/({l})")));
            }
            self.scalar = Q::zero();
            return Ok(());
        }
        self.scalar *= pow_i(&m, e);
        if !p.is_constant() {
            bump(&mut self.lin, p, e);
        }
        Ok(())
    }

    /// Multiplies by ξ(L)ᵉ.
    pub fn push_xi_of(&mut self, l: LinForm, e: i32) -> Result<()> {
        let a = XiAtom::of(l)?;
        self.push_atom(a, e);
        Ok(())
    }

    /// Multiplies by (ξ⁽ᵏ⁾(L))ᵉ.
    pub fn push_deriv(&mut self, l: LinForm, k: u32, e: i32) -> Result<()> {
        let (sign, a) = XiAtom::deriv(l, k)?;
        if sign < 0 && e % 2 != 0 {
            self.scalar = -self.scalar.clone();
        }
        self.push_atom(a, e);
        Ok(())
    }

    /// Multiplies by a canonical atom.
    pub fn push_atom(&mut self, a: XiAtom, e: i32) {
        bump(&mut self.xi, a, e);
    }

    pub fn push_exp(&mut self, p: &Poly) {
        let n = match &self.exp {
            Some(q) => q.add(p),
            None => p.clone(),
        };
        self.exp = if n.is_zero() { None } else { Some(n) };
    }

    pub fn mul(&self, o: &Term) -> Term {
        let mut r = self.clone();
        r.scalar *= &o.scalar;
        for (l, e) in &o.lin {
            bump(&mut r.lin, l.clone(), *e);
        }
        for (a, e) in &o.xi {
            bump(&mut r.xi, a.clone(), *e);
        }
        if let Some(p) = &o.exp {
            r.push_exp(p);
        }
        r
    }

    pub fn scale(&self, k: &Q) -> Term {
        let mut r = self.clone();
        r.scalar *= k;
        r
    }

    /// Multiplicative inverse (scalar must be nonzero).
    pub fn inverse(&self) -> Term {
        Term {
            scalar: self.scalar.recip(),
            lin: self.lin.iter().map(|(l, e)| (l.clone(), -e)).collect(),
            xi: self.xi.iter().map(|(a, e)| (a.clone(), -e)).collect(),
            exp: self.exp.as_ref().map(|p| p.neg()),
        }
    }

    pub fn pow(&self, n: i32) -> Term {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut r = Term::one();
        for _ in 0..n.unsigned_abs() {
            r = r.mul(&base);
        }
        r
    }

    /// Rebuilds the term with every form composed with `sub`.
    pub fn substitute(&self, sub: &BTreeMap<Var, LinForm>) -> Result<Term> {
        let mut r = Term::scalar(self.scalar.clone());
        for (l, e) in &self.lin {
            r.push_lin(&l.substitute(sub), *e)?;
        }
        for (a, e) in &self.xi {
            match a {
                XiAtom::Of(l) => r.push_xi_of(l.substitute(sub), *e)?,
                XiAtom::Deriv(l, k) => r.push_deriv(l.substitute(sub), *k, *e)?,
                _ => r.push_atom(a.clone(), *e),
            }
        }
        if let Some(p) = &self.exp {
            r.push_exp(&p.substitute(sub));
        }
        Ok(r)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for l in self.lin.keys() {
            s.extend(l.vars().cloned());
        }
        for a in self.xi.keys() {
            if let Some(l) = a.arg() {
                s.extend(l.vars().cloned());
            }
        }
        if let Some(p) = &self.exp {
            s.extend(p.vars());
        }
        s
    }

    /// The non-scalar part, used as a merge key.
    pub fn key(&self) -> (&BTreeMap<XiAtom, i32>, &Option<Poly>, &BTreeMap<LinForm, i32>) {
        (&self.xi, &self.exp, &self.lin)
    }

    /// The transcendental part: ξ-atoms and exponential.
    pub fn signature(&self) -> (BTreeMap<XiAtom, i32>, Option<Poly>) {
        (self.xi.clone(), self.exp.clone())
    }

    pub fn has_auxiliary(&self) -> bool {
        self.xi.keys().any(|a| a.is_auxiliary())
    }

    /// Denominator ξ-atoms.
    pub fn xi_denominators(&self) -> Vec<(XiAtom, i32)> {
        self.xi.iter().filter(|(_, e)| **e < 0).map(|(a, e)| (a.clone(), -e)).collect()
    }

    pub fn to_plain(&self) -> String {
        crate::symexpr::display::term_plain(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;

    #[test]
    fn proportional_factors_share_a_key() {
        let s = LinForm::var("s");
        let mut t = Term::one();
        t.push_lin(&s.scale(&q(3)).add_const(&q(-3)), -1).unwrap();
        t.push_lin(&s.add_const(&q(-1)), 1).unwrap();
        assert!(t.lin.is_empty());
        assert_eq!(t.scalar, crate::q::qf(1, 3));
    }

    #[test]
    fn matching_atoms_cancel() {
        let mut t = Term::one();
        t.push_xi_of(LinForm::var("z"), 1).unwrap();
        t.push_xi_of(LinForm::var("z").neg().add_const(&q(1)), -1).unwrap();
        assert!(t.xi.is_empty());
    }

    #[test]
    fn constant_zero_denominator_is_singular() {
        let mut t = Term::one();
        assert!(t.push_lin(&LinForm::zero(), -1).is_err());
    }
}

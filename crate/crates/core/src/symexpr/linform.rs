//! Affine-linear forms with exact rational coefficients.
use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::q::{content, fmt_q, Q};
use crate::var::Var;

/// Σ c_v·v + constant. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LinForm {
    coeffs: BTreeMap<Var, Q>,
    constant: Q,
}

impl LinForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        LinForm { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn var(v: impl Into<Var>) -> Self {
        Self::term(v, Q::one())
    }

    pub fn term(v: impl Into<Var>, c: Q) -> Self {
        let mut f = Self::zero();
        f.add_term(v.into(), c);
        f
    }

    pub fn from_parts(coeffs: impl IntoIterator<Item = (Var, Q)>, constant: Q) -> Self {
        let mut f = Self::constant(constant);
        for (v, c) in coeffs {
            f.add_term(v, c);
        }
        f
    }

    pub fn add_term(&mut self, v: Var, c: Q) {
        if c.is_zero() {
            return;
        }
        let n = self.coeffs.remove(&v).unwrap_or_else(Q::zero) + c;
        if !n.is_zero() {
            self.coeffs.insert(v, n);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, Q> {
        &self.coeffs
    }

    pub fn const_term(&self) -> &Q {
        &self.constant
    }

    pub fn coeff(&self, v: &Var) -> Q {
        self.coeffs.get(v).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    /// The constant value, if the form has no variables.
    pub fn as_constant(&self) -> Option<&Q> {
        if self.is_constant() {
            Some(&self.constant)
        } else {
            None
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coeffs.keys()
    }

    /// Coefficient of the first variable in variable order.
    pub fn leading(&self) -> Option<(&Var, &Q)> {
        self.coeffs.iter().next()
    }

    pub fn add(&self, o: &LinForm) -> LinForm {
        let mut r = self.clone();
        for (v, c) in &o.coeffs {
            r.add_term(v.clone(), c.clone());
        }
        r.constant += &o.constant;
        r
    }

    pub fn sub(&self, o: &LinForm) -> LinForm {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn neg(&self) -> LinForm {
        self.scale(&-Q::one())
    }

    pub fn add_const(&self, c: &Q) -> LinForm {
        let mut r = self.clone();
        r.constant += c;
        r
    }

    pub fn scale(&self, k: &Q) -> LinForm {
        if k.is_zero() {
            return Self::zero();
        }
        LinForm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    /// Replaces each variable present in `sub` by its form.
    pub fn substitute(&self, sub: &BTreeMap<Var, LinForm>) -> LinForm {
        let mut r = LinForm::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            match sub.get(v) {
                Some(f) => r = r.add(&f.scale(c)),
                None => r.add_term(v.clone(), c.clone()),
            }
        }
        r
    }

    /// Drops the variable `v` (i.e. evaluates it at 0).
    pub fn without(&self, v: &Var) -> LinForm {
        let mut r = self.clone();
        r.coeffs.remove(v);
        r
    }

    /// Exact value at a rational point; `None` if a variable is unassigned.
    pub fn eval_q(&self, pt: &BTreeMap<Var, Q>) -> Option<Q> {
        let mut r = self.constant.clone();
        for (v, c) in &self.coeffs {
            r += c * pt.get(v)?;
        }
        Some(r)
    }

    /// Splits `self = m · p` with `p` having coprime integer coefficients
    /// (constant included) and positive leading variable coefficient.
    pub fn primitive(&self) -> (Q, LinForm) {
        if self.is_constant() {
            return (self.constant.clone(), LinForm::constant(Q::one()));
        }
        let mut m = content(self.coeffs.values().chain(core::iter::once(&self.constant)));
        if self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            m = -m;
        }
        (m.clone(), self.scale(&m.recip()))
    }

    /// Whether `self` is a rational multiple of `o`.
    pub fn proportional(&self, o: &LinForm) -> bool {
        self.primitive().1 == o.primitive().1
    }

    pub fn to_plain(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            if a.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{}*{v}", fmt_q(&a))?;
            }
            first = false;
        }
        if first {
            return f.write_str(&fmt_q(&self.constant));
        }
        if !self.constant.is_zero() {
            let neg = self.constant.is_negative();
            write!(f, "{}{}", if neg { "-" } else { "+" }, fmt_q(&self.constant.abs()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinForm({self})")
    }
}

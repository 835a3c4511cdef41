use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Result;
use crate::q::Q;
use crate::symexpr::atom::XiAtom;
use crate::symexpr::linform::LinForm;
use crate::symexpr::poly::Poly;
use crate::symexpr::term::Term;
use crate::var::Var;

/// A finite sum of [`Term`]s over a declared variable universe.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymExpr {
    pub terms: Vec<Term>,
    pub vars: BTreeSet<Var>,
    pub label: Option<String>,
}

type Signature = (BTreeMap<XiAtom, i32>, Option<Poly>);

impl SymExpr {
    pub fn zero(vars: BTreeSet<Var>) -> Self {
        SymExpr { terms: Vec::new(), vars, label: None }
    }

    /// Builds an expression whose universe is the union of `vars` and
    /// every variable used by the terms.
    pub fn from_terms(terms: Vec<Term>, vars: impl IntoIterator<Item = Var>) -> Self {
        let mut v: BTreeSet<Var> = vars.into_iter().collect();
        for t in &terms {
            v.extend(t.vars());
        }
        SymExpr { terms: terms.into_iter().filter(|t| !t.is_zero()).collect(), vars: v, label: None }
    }

    pub fn from_term(t: Term) -> Self {
        Self::from_terms(alloc::vec![t], [])
    }

    pub fn with_label(mut self, l: impl Into<String>) -> Self {
        self.label = Some(l.into());
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Variables that actually occur.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|t| t.vars()).collect()
    }

    pub fn add(&self, o: &SymExpr) -> SymExpr {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        let vars = self.vars.union(&o.vars).cloned().collect::<BTreeSet<_>>();
        SymExpr { terms, vars, label: self.label.clone() }
    }

    pub fn scale(&self, k: &Q) -> SymExpr {
        if k.is_zero() {
            return SymExpr::zero(self.vars.clone());
        }
        SymExpr {
            terms: self.terms.iter().map(|t| t.scale(k)).collect(),
            vars: self.vars.clone(),
            label: self.label.clone(),
        }
    }

    pub fn neg(&self) -> SymExpr {
        self.scale(&-<Q as num_traits::One>::one())
    }

    pub fn sub(&self, o: &SymExpr) -> SymExpr {
        self.add(&o.neg())
    }

    pub fn mul_term(&self, t: &Term) -> SymExpr {
        let terms = self.terms.iter().map(|x| x.mul(t)).filter(|x| !x.is_zero()).collect();
        let mut vars = self.vars.clone();
        vars.extend(t.vars());
        SymExpr { terms, vars, label: self.label.clone() }
    }

    pub fn mul(&self, o: &SymExpr) -> SymExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                terms.push(a.mul(b));
            }
        }
        let vars = self.vars.union(&o.vars).cloned().collect();
        SymExpr { terms, vars, label: self.label.clone() }
    }

    /// Composes every form with `sub`. Variables mapped away leave the
    /// universe; variables introduced by the images join it.
    pub fn substitute(&self, sub: &BTreeMap<Var, LinForm>) -> Result<SymExpr> {
        let terms = self.terms.iter().map(|t| t.substitute(sub)).collect::<Result<Vec<_>>>()?;
        let mut vars: BTreeSet<Var> = self.vars.iter().filter(|v| !sub.contains_key(*v)).cloned().collect();
        for f in sub.values() {
            vars.extend(f.vars().cloned());
        }
        let mut r = SymExpr::from_terms(terms, vars);
        r.label = self.label.clone();
        Ok(r)
    }

    /// Merges like terms, drops ξ/exp-signature groups whose rational
    /// coefficients cancel identically, and sorts canonically.
    pub fn simplify(&self) -> SymExpr {
        let mut merged: BTreeMap<(Signature, BTreeMap<LinForm, i32>), Q> = BTreeMap::new();
        for t in &self.terms {
            if t.is_zero() {
                continue;
            }
            let k = (t.signature(), t.lin.clone());
            let e = merged.entry(k).or_insert_with(Q::zero);
            *e += &t.scalar;
        }
        let mut groups: BTreeMap<Signature, Vec<(BTreeMap<LinForm, i32>, Q)>> = BTreeMap::new();
        for ((sig, lin), c) in merged {
            if !c.is_zero() {
                groups.entry(sig).or_default().push((lin, c));
            }
        }
        let mut terms = Vec::new();
        for ((xi, exp), items) in groups {
            if items.len() > 1 && rational_sum_is_zero(&items) {
                continue;
            }
            for (lin, scalar) in items {
                terms.push(Term { scalar, lin, xi: xi.clone(), exp: exp.clone() });
            }
        }
        SymExpr { terms, vars: self.vars.clone(), label: self.label.clone() }
    }

    /// Exact test for the zero function (modulo algebraic independence of
    /// distinct ξ/exp signatures).
    pub fn is_identically_zero(&self) -> bool {
        self.simplify().is_empty()
    }

    pub fn has_auxiliary(&self) -> bool {
        self.terms.iter().any(|t| t.has_auxiliary())
    }

    /// Terms carrying Laurent constants or derivative atoms.
    pub fn auxiliary_terms(&self) -> Vec<&Term> {
        self.terms.iter().filter(|t| t.has_auxiliary()).collect()
    }

    /// Some q with `self == q·o` exactly, if one exists. Candidates come
    /// from scalar ratios of terms sharing a full key.
    pub fn proportional_to(&self, o: &SymExpr) -> Option<Q> {
        let a = self.simplify();
        let b = o.simplify();
        if a.is_empty() || b.is_empty() {
            return if a.is_empty() && b.is_empty() { Some(Q::zero()) } else { None };
        }
        let mut cands: Vec<Q> = Vec::new();
        for x in &b.terms {
            for y in a.terms.iter().filter(|y| y.key() == x.key()) {
                let c = &y.scalar / &x.scalar;
                if !cands.contains(&c) {
                    cands.push(c);
                }
            }
        }
        // Fall back to pairing same-signature terms when no key matches.
        if cands.is_empty() {
            for x in &b.terms {
                for y in a.terms.iter().filter(|y| y.signature() == x.signature()) {
                    let c = &y.scalar / &x.scalar;
                    if !cands.contains(&c) {
                        cands.push(c);
                    }
                }
            }
        }
        cands.into_iter().find(|c| a.sub(&b.scale(c)).is_identically_zero())
    }

    pub fn to_plain(&self) -> String {
        crate::symexpr::display::plain(self)
    }

    pub fn to_latex(&self) -> String {
        crate::symexpr::display::latex(self)
    }
}

/// Σ cᵢ Π Lᵉ ≡ 0 as a rational function, via a common denominator.
pub(crate) fn rational_sum_is_zero(items: &[(BTreeMap<LinForm, i32>, Q)]) -> bool {
    let mut den: BTreeMap<&LinForm, i32> = BTreeMap::new();
    for (lin, _) in items {
        for (l, e) in lin {
            if *e < 0 {
                let d = den.entry(l).or_insert(0);
                *d = (*d).max(-e);
            }
        }
    }
    let mut num = Poly::zero();
    for (lin, c) in items {
        let mut p = Poly::constant(c.clone());
        let mut exps: BTreeMap<&LinForm, i32> = den.clone();
        for (l, e) in lin {
            *exps.entry(l).or_insert(0) += e;
        }
        for (l, e) in exps {
            if e > 0 {
                p = p.mul(&Poly::from_linform(l).pow(e as u32));
            }
        }
        num = num.add(&p);
    }
    num.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;

    fn frac(c: i64, dens: &[LinForm]) -> Term {
        let mut t = Term::scalar(q(c));
        for d in dens {
            t.push_lin(d, -1).unwrap();
        }
        t
    }

    #[test]
    fn like_terms_merge() {
        let z1 = LinForm::var("z").add_const(&q(-1));
        let e = SymExpr::from_terms(alloc::vec![frac(2, &[z1.clone()]), frac(3, &[z1.clone()])], []);
        let s = e.simplify();
        assert_eq!(s.len(), 1);
        assert_eq!(s.terms[0].scalar, q(5));
    }

    #[test]
    fn partial_fraction_identity_cancels() {
        // 1/(s(s-1)) - 1/(s-1) + 1/s = 0
        let s = LinForm::var("s");
        let s1 = s.add_const(&q(-1));
        let e = SymExpr::from_terms(
            alloc::vec![frac(1, &[s.clone(), s1.clone()]), frac(-1, &[s1]), frac(1, &[s])],
            [],
        );
        assert!(e.is_identically_zero());
    }

    #[test]
    fn simplify_is_idempotent() {
        let s = LinForm::var("s");
        let mut t = frac(1, &[s.clone()]);
        t.push_xi_of(s.scale(&q(2)), 1).unwrap();
        let e = SymExpr::from_terms(alloc::vec![t.clone(), frac(-2, &[s.add_const(&q(1))]), t], []);
        let a = e.simplify();
        assert_eq!(a.simplify(), a);
    }
}

//! Iterated one-variable residues along ⟨λ−ρ,β∨⟩ = 0.
//!
//! For a hyperplane ℓ = 0 with pivot p (coefficient c), we set u = ℓ and
//! substitute p = (u − (ℓ − c·p))/c. Every factor of a term then has the
//! shape F(L₀ + k·u); we expand each to the depth the total pole order
//! demands and read off the u⁻¹ coefficient.
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::q::{binom, factorial, pow_i, Q};
use crate::rootsys::{ParabolicDescriptor, RootSystem};
use crate::symexpr::{LinForm, Poly, SymExpr, Term, XiAtom};
use crate::var::Var;

/// Largest pole order the expansion supports.
pub const MAX_POLE_ORDER: i32 = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    /// ⟨λ−ρ,β∨⟩ in the original variables.
    pub form: LinForm,
    /// Index of β among the simple roots.
    pub root: usize,
    /// `form` after the substitutions of earlier hyperplanes.
    pub restricted: LinForm,
    pub pivot: Var,
    /// Value of the pivot on the hyperplane, in the remaining variables.
    pub solved: LinForm,
}

impl Hyperplane {
    /// A hyperplane given directly by a form, pivoting on `pivot` (or the
    /// default pivot if `None`).
    pub fn from_form(form: LinForm, pivot: Option<Var>) -> Result<Hyperplane> {
        if form.is_constant() {
            return Err(Error::Internal(alloc::format!("constant hyperplane form {form}")));
        }
        let pivot = match pivot {
            Some(p) if !form.coeff(&p).is_zero() => p,
            Some(p) => return Err(Error::Internal(alloc::format!("pivot {p} absent from {form}"))),
            None => default_pivot(&form),
        };
        let c = form.coeff(&pivot);
        let solved = form.without(&pivot).scale(&(-c.recip()));
        Ok(Hyperplane { form: form.clone(), root: usize::MAX, restricted: form, pivot, solved })
    }

    /// pivot ↦ (u − rest)/c.
    fn shift_map(&self, u: &Var) -> BTreeMap<Var, LinForm> {
        let c = self.restricted.coeff(&self.pivot);
        let img = LinForm::term(u.clone(), c.recip()).add(&self.solved);
        BTreeMap::from([(self.pivot.clone(), img)])
    }
}

/// Largest |coefficient|, ties broken by variable order.
fn default_pivot(f: &LinForm) -> Var {
    let mut best: Option<(&Var, Q)> = None;
    for (v, c) in f.coeffs() {
        let a = c.abs();
        if best.as_ref().map(|(_, b)| a > *b).unwrap_or(true) {
            best = Some((v, a));
        }
    }
    best.map(|(v, _)| v.clone()).expect("non-constant form")
}

/// One hyperplane per retained simple root, β₁ first, each restricted to
/// the slice cut out by its predecessors.
pub fn hyperplanes_for(rs: &RootSystem, p: &ParabolicDescriptor) -> Result<Vec<Hyperplane>> {
    let mut sub: BTreeMap<Var, LinForm> = BTreeMap::new();
    let mut out = Vec::new();
    for &i in &p.retained {
        let form = rs.pairing(&rs.lambda, &rs.simple[i]).add_const(&-Q::one());
        let restricted = form.substitute(&sub);
        let mut h = Hyperplane::from_form(restricted, None)?;
        h.form = form;
        h.root = i;
        let step = BTreeMap::from([(h.pivot.clone(), h.solved.clone())]);
        for v in sub.values_mut() {
            *v = v.substitute(&step);
        }
        sub.insert(h.pivot.clone(), h.solved.clone());
        out.push(h);
    }
    Ok(out)
}

/// Truncated Laurent series in u; `coeffs[i]` multiplies u^{min+i}.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    pub var: Var,
    pub min: i32,
    pub coeffs: Vec<Vec<Term>>,
}

impl LaurentSeries {
    /// Exclusive upper bound of known orders.
    pub fn trunc(&self) -> i32 {
        self.min + self.coeffs.len() as i32
    }

    pub fn coeff(&self, order: i32) -> Option<&Vec<Term>> {
        if order < self.min {
            return None;
        }
        self.coeffs.get((order - self.min) as usize)
    }
}

fn merge(terms: Vec<Term>) -> Vec<Term> {
    type Key = (BTreeMap<XiAtom, i32>, Option<Poly>, BTreeMap<LinForm, i32>);
    let mut m: BTreeMap<Key, Q> = BTreeMap::new();
    for t in terms {
        if t.is_zero() {
            continue;
        }
        let (xi, exp) = t.signature();
        *m.entry((xi, exp, t.lin)).or_insert_with(Q::zero) += t.scalar;
    }
    m.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((xi, exp, lin), scalar)| Term { scalar, lin, xi, exp })
        .collect()
}

fn mul_sums(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.mul(y));
        }
    }
    merge(out)
}

/// Product truncated to `n` coefficients; both inputs need at least `n`.
fn series_mul(a: &[Vec<Term>], b: &[Vec<Term>], n: usize) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = alloc::vec![Vec::new(); n];
    for i in 0..n.min(a.len()) {
        for j in 0..(n - i).min(b.len()) {
            if a[i].is_empty() || b[j].is_empty() {
                continue;
            }
            let p = mul_sums(&a[i], &b[j]);
            out[i + j].extend(p);
        }
    }
    out.into_iter().map(merge).collect()
}

/// g^e for g = c₀(1 + X), with `g` given by n coefficients and c₀ a
/// single term.
fn series_pow(g: &[Vec<Term>], e: i32) -> Result<Vec<Vec<Term>>> {
    if e == 1 {
        return Ok(g.to_vec());
    }
    let n = g.len();
    let c0 = match g.first().map(|c| c.as_slice()) {
        Some([t]) => t.clone(),
        _ => return Err(Error::Internal("leading Laurent coefficient is not a monomial".into())),
    };
    let inv = c0.inverse();
    let mut x: Vec<Vec<Term>> = alloc::vec![Vec::new(); n];
    for j in 1..n {
        x[j] = g[j].iter().map(|t| t.mul(&inv)).collect();
    }
    let mut acc: Vec<Vec<Term>> = alloc::vec![Vec::new(); n];
    acc[0] = alloc::vec![Term::one()];
    let mut xp = acc.clone();
    for i in 1..n {
        xp = series_mul(&xp, &x, n);
        let b = binom(e, i as u32);
        for (k, c) in xp.iter().enumerate() {
            acc[k].extend(c.iter().map(|t| t.scale(&b)));
        }
    }
    let lead = c0.pow(e);
    Ok(acc.into_iter().map(|c| merge(c.iter().map(|t| t.mul(&lead)).collect())).collect())
}

/// A factor F(L₀ + k·u)^e after the change of variables.
enum Factor {
    Lin { l0: LinForm, k: Q, e: i32 },
    /// ξ⁽ᵐ⁾(a₀ + k·u)^e, m = 0 for ξ itself.
    Xi { a0: LinForm, k: Q, m: u32, e: i32 },
    /// exp(Σ_{i≥1} Eᵢ uⁱ).
    Exp { parts: Vec<Poly> },
}

fn is_const(l: &LinForm, v: i64) -> bool {
    l.as_constant().map(|c| *c == Q::from_integer(v.into())).unwrap_or(false)
}

impl Factor {
    fn base_min(&self) -> i32 {
        match self {
            Factor::Lin { l0, .. } if l0.is_zero() => 1,
            Factor::Xi { a0, m, .. } if is_const(a0, 0) || is_const(a0, 1) => -(*m as i32) - 1,
            _ => 0,
        }
    }

    fn min_order(&self) -> i32 {
        match self {
            Factor::Lin { e, .. } | Factor::Xi { e, .. } => self.base_min() * e,
            Factor::Exp { .. } => 0,
        }
    }

    /// n coefficients starting at `min_order()`.
    fn series(&self, n: usize) -> Result<Vec<Vec<Term>>> {
        match self {
            Factor::Lin { l0, k, e } => {
                if l0.is_zero() {
                    let mut c = alloc::vec![Vec::new(); n];
                    c[0] = alloc::vec![Term::scalar(pow_i(k, *e))];
                    return Ok(c);
                }
                (0..n)
                    .map(|j| {
                        let mut t = Term::scalar(binom(*e, j as u32) * pow_i(k, j as i32));
                        t.push_lin(l0, *e - j as i32)?;
                        Ok(alloc::vec![t].into_iter().filter(|t| !t.is_zero()).collect())
                    })
                    .collect()
            }
            Factor::Xi { a0, k, m, e } => {
                let base = xi_series(a0, k, *m, n)?;
                series_pow(&base, *e)
            }
            Factor::Exp { parts } => {
                let mut x: Vec<Vec<Term>> = alloc::vec![Vec::new(); n];
                for (i, p) in parts.iter().enumerate() {
                    let ord = i + 1;
                    if ord >= n || p.is_zero() {
                        continue;
                    }
                    let l = p.to_linform().ok_or_else(|| {
                        Error::Unsupported(alloc::format!("non-affine exponent coefficient {p}"))
                    })?;
                    let mut t = Term::one();
                    t.push_lin(&l, 1)?;
                    x[ord] = alloc::vec![t];
                }
                let mut acc: Vec<Vec<Term>> = alloc::vec![Vec::new(); n];
                acc[0] = alloc::vec![Term::one()];
                let mut xp = acc.clone();
                for i in 1..n {
                    xp = series_mul(&xp, &x, n);
                    let f = factorial(i as u32).recip();
                    for (k, c) in xp.iter().enumerate() {
                        acc[k].extend(c.iter().map(|t| t.scale(&f)));
                    }
                }
                Ok(acc.into_iter().map(merge).collect())
            }
        }
    }
}

/// ξ⁽ᵐ⁾(a₀ + k·u) to n coefficients from its minimal order.
fn xi_series(a0: &LinForm, k: &Q, m: u32, n: usize) -> Result<Vec<Vec<Term>>> {
    let at_one = is_const(a0, 1);
    if at_one || is_const(a0, 0) {
        // ξ⁽ᵐ⁾(1+ε) = (−1)ᵐ m! ε^{−m−1} + Σ_{j≥m} a_j j!/(j−m)! ε^{j−m};
        // at 0 use ξ⁽ᵐ⁾(x) = (−1)ᵐ ξ⁽ᵐ⁾(1−x), i.e. ε = −k·u.
        let (kk, outer) = if at_one { (k.clone(), Q::one()) } else { (-k.clone(), pow_i(&-Q::one(), m as i32)) };
        let sign_m = pow_i(&-Q::one(), m as i32);
        let mut c: Vec<Vec<Term>> = alloc::vec![Vec::new(); n];
        let lead = m as i32 + 1;
        c[0] = alloc::vec![Term::scalar(&outer * sign_m * factorial(m) * pow_i(&kk, -lead))];
        for (idx, slot) in c.iter_mut().enumerate().skip(lead as usize) {
            let i = idx as i32 - lead; // order of u
            let j = i as u32 + m;
            let mut t = Term::scalar(&outer * factorial(j) / factorial(i as u32) * pow_i(&kk, i));
            t.push_atom(XiAtom::Laurent(j), 1);
            *slot = alloc::vec![t];
        }
        return Ok(c);
    }
    (0..n)
        .map(|i| {
            let mut t = Term::scalar(pow_i(k, i as i32) / factorial(i as u32));
            if t.is_zero() {
                return Ok(Vec::new());
            }
            t.push_deriv(a0.clone(), m + i as u32, 1)?;
            Ok(alloc::vec![t])
        })
        .collect()
}

/// Splits a term into a u-free part and u-dependent factors.
fn decompose(term: &Term, h: &Hyperplane, u: &Var) -> Result<(Term, Vec<Factor>)> {
    let sub = h.shift_map(u);
    let mut konst = Term::scalar(term.scalar.clone());
    let mut fs = Vec::new();
    let split = |l: &LinForm| {
        let s = l.substitute(&sub);
        (s.without(u), s.coeff(u))
    };
    for (l, e) in &term.lin {
        let (l0, k) = split(l);
        if k.is_zero() {
            konst.push_lin(&l0, *e)?;
        } else {
            fs.push(Factor::Lin { l0, k, e: *e });
        }
    }
    for (a, e) in &term.xi {
        let (arg, m) = match a {
            XiAtom::Of(l) => (l, 0),
            XiAtom::Deriv(l, m) => (l, *m),
            _ => {
                konst.push_atom(a.clone(), *e);
                continue;
            }
        };
        let (a0, k) = split(arg);
        if k.is_zero() {
            if m == 0 {
                konst.push_xi_of(a0, *e)?;
            } else {
                konst.push_deriv(a0, m, *e)?;
            }
        } else {
            fs.push(Factor::Xi { a0, k, m, e: *e });
        }
    }
    if let Some(p) = &term.exp {
        let parts = p.substitute(&sub).split_by(u);
        if let Some(p0) = parts.first() {
            konst.push_exp(p0);
        }
        if parts.len() > 1 {
            fs.push(Factor::Exp { parts: parts[1..].to_vec() });
        }
    }
    Ok((konst, fs))
}

fn u_var() -> Var {
    Var::new("u_")
}

fn hyper_name(h: &Hyperplane) -> String {
    alloc::format!("{}=0", h.restricted)
}

/// Laurent expansion of one term in u = ℓ through order `max_order`.
pub fn laurent_term(term: &Term, h: &Hyperplane, max_order: i32) -> Result<LaurentSeries> {
    let u = u_var();
    let (konst, fs) = decompose(term, h, &u)?;
    let min: i32 = fs.iter().map(|f| f.min_order()).sum();
    if -min > MAX_POLE_ORDER {
        return Err(Error::DepthExceeded { order: -min, max: MAX_POLE_ORDER, hyperplane: hyper_name(h) });
    }
    if max_order < min {
        return Ok(LaurentSeries { var: u, min, coeffs: Vec::new() });
    }
    let n = (max_order - min + 1) as usize;
    let mut acc: Vec<Vec<Term>> = alloc::vec![Vec::new(); n];
    acc[0] = alloc::vec![konst];
    for f in &fs {
        let s = f.series(n)?;
        acc = series_mul(&acc, &s, n);
    }
    Ok(LaurentSeries { var: u, min, coeffs: acc })
}

/// Res_{ℓ=0} of a single term (the u⁻¹ coefficient).
pub fn residue_term(term: &Term, h: &Hyperplane) -> Result<Vec<Term>> {
    let s = laurent_term(term, h, -1)?;
    Ok(s.coeff(-1).cloned().unwrap_or_default())
}

/// Res_{ℓ=0} of an expression, re-expressed in the remaining variables.
pub fn residue(expr: &SymExpr, h: &Hyperplane) -> Result<SymExpr> {
    let mut terms = Vec::new();
    for t in &expr.terms {
        terms.extend(residue_term(t, h)?);
    }
    let vars = expr.vars.iter().filter(|v| **v != h.pivot).cloned();
    let mut r = SymExpr::from_terms(terms, vars);
    r.vars.remove(&h.pivot);
    r.label = expr.label.clone();
    Ok(r.simplify())
}

/// Residues along every hyperplane of `P`, in order. Returns the result
/// and the surviving λ-variable.
pub fn iterated_residue(expr: &SymExpr, rs: &RootSystem, p: &ParabolicDescriptor) -> Result<(SymExpr, Var)> {
    let hs = hyperplanes_for(rs, p)?;
    let mut e = expr.clone();
    let mut left: Vec<Var> = rs.vars.clone();
    for h in &hs {
        e = residue(&e, h)?;
        left.retain(|v| *v != h.pivot);
        if e.is_empty() {
            return Err(Error::ZeroResidue);
        }
    }
    match left.as_slice() {
        [v] => Ok((e, v.clone())),
        _ => Err(Error::Internal(alloc::format!("{} variables survive", left.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;
    use crate::rootsys::{build_root_system, Family};
    use crate::symexpr::parse_expr;

    fn h(form: &str) -> Hyperplane {
        Hyperplane::from_form(crate::symexpr::parse_linform(form).unwrap(), None).unwrap()
    }

    fn res(e: &str, form: &str) -> SymExpr {
        residue(&parse_expr(e).unwrap(), &h(form)).unwrap()
    }

    fn same(a: &SymExpr, b: &str) -> bool {
        a.sub(&parse_expr(b).unwrap()).is_identically_zero()
    }

    #[test]
    fn simple_pole_gives_value() {
        // g/u with g = xi(s+2)/(s+3)
        assert!(same(&res("xi(u+2)/(u+3)/u", "u"), "xi(2)/3"));
    }

    #[test]
    fn xi_at_one_has_residue_one() {
        assert!(same(&res("xi(u+1)*xi(u+3)", "u"), "xi(3)"));
        assert!(same(&res("xi(u)*xi(u+3)", "u"), "-xi(3)"));
    }

    #[test]
    fn double_pole_brings_derivatives() {
        // Res_{u=0} xi(u+2)/u^2 = xi'(2)
        assert!(same(&res("xi(u+2)/u^2", "u"), "xid(1,2)"));
        // Res xi(1+u)/u = a0
        assert!(same(&res("xi(u+1)/u", "u"), "a(0)"));
    }

    #[test]
    fn regular_terms_vanish() {
        assert!(res("xi(u+2)/(u+1)", "u").is_empty());
    }

    #[test]
    fn residue_in_two_variables() {
        // 1/((x-y-1)(x+y)) along x-y-1=0 with pivot x -> 1/(2y+1)
        assert!(same(&res("1/(x-y-1)/(x+y)", "x-y-1"), "1/(2*y+1)"));
    }

    #[test]
    fn exponential_factor_expands() {
        // Res exp(u*x)/u^2 = x
        assert!(same(&res("exp(u*x)/u^2", "u"), "x"));
    }

    #[test]
    fn sl3_hyperplanes() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let p = rs.parabolic(1, "P21").unwrap();
        let hs = hyperplanes_for(&rs, &p).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].form.to_plain(), "z1-z2-1");
        assert_eq!(hs[0].pivot, Var::new("z1"));
    }

    #[test]
    fn sl_n_hyperplanes_chain() {
        let rs = build_root_system(Family::A, 4).unwrap();
        let p = rs.parabolic(3, "P41").unwrap();
        let hs = hyperplanes_for(&rs, &p).unwrap();
        let forms: Vec<String> = hs.iter().map(|h| h.form.to_plain()).collect();
        assert_eq!(forms, ["z1-z2-1", "z2-z3-1", "z3-z4-1"]);
    }

    #[test]
    fn depth_limit_is_explicit() {
        let e = parse_expr("1/u^5").unwrap();
        assert!(matches!(residue(&e, &h("u")), Err(Error::DepthExceeded { .. })));
    }

    #[test]
    fn sl3_residue_has_six_terms() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let per = crate::period::build_period(&rs).unwrap();
        let p = rs.parabolic(1, "P21").unwrap();
        let (r, v) = iterated_residue(&per, &rs, &p).unwrap();
        assert_eq!(v, Var::new("z2"));
        assert_eq!(r.len(), 5);
        assert!(!r.has_auxiliary());
        let _ = q(0);
    }
}

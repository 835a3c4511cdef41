//! The period ω^G(λ): a sum over the Weyl group of
//! 1/Π_{α∈Δ₀}⟨wλ−ρ,α∨⟩ · Π_{α>0, wα<0} ξ(⟨λ,α∨⟩)/ξ(⟨λ,α∨⟩+1),
//! optionally with the truncation factor e^{⟨·,T⟩}.
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::One;

use crate::error::Result;
use crate::q::Q;
use crate::rootsys::{inversion_set, weyl_group, RootSystem, WeylElement, WEYL_CAP};
use crate::symexpr::{LinForm, Poly, SymExpr, Term, XiAtom};
use crate::var::Var;

/// Which vector is paired with T in the exponential factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpConvention {
    /// e^{⟨wλ−ρ, T⟩}.
    Standard,
    /// e^{⟨w⁻¹λ+ρ, T⟩}; the pattern of the displayed SL(3) truncated formulas.
    InverseShifted,
}

/// Π_{α>0, wα<0} ξ(⟨λ,α∨⟩)/ξ(⟨λ,α∨⟩+1) as an atom multiset.
pub fn intertwining_factor(rs: &RootSystem, w: &WeylElement) -> Result<BTreeMap<XiAtom, i32>> {
    let mut t = Term::one();
    for i in inversion_set(rs, w) {
        let p = rs.pairing(&rs.lambda, &rs.positive[i]);
        t.push_xi_of(p.add_const(&Q::one()), -1)?;
        t.push_xi_of(p, 1)?;
    }
    Ok(t.xi)
}

fn weyl_term(rs: &RootSystem, w: &WeylElement) -> Result<Term> {
    let wl = w.act_forms(&rs.lambda);
    let mut t = Term::one();
    for a in &rs.simple {
        t.push_lin(&rs.pairing(&wl, a).add_const(&-Q::one()), -1)?;
    }
    for (a, e) in intertwining_factor(rs, w)? {
        t.push_atom(a, e);
    }
    Ok(t)
}

/// ω^G(λ) with exactly |W| terms (not merged).
pub fn build_period(rs: &RootSystem) -> Result<SymExpr> {
    let ws = weyl_group(rs, WEYL_CAP)?;
    let terms = ws.iter().map(|w| weyl_term(rs, w)).collect::<Result<Vec<_>>>()?;
    Ok(SymExpr::from_terms(terms, rs.vars.iter().cloned()).with_label(alloc::format!("period {}", rs.name())))
}

/// The truncated period; `t` is T in ambient coordinates (forms in fresh
/// variables).
pub fn build_period_t(rs: &RootSystem, t: &[LinForm], conv: ExpConvention) -> Result<SymExpr> {
    let ws = weyl_group(rs, WEYL_CAP)?;
    let rho: Vec<LinForm> = rs.rho.iter().map(|c| LinForm::constant(c.clone())).collect();
    let mut terms = Vec::with_capacity(ws.len());
    let mut tvars: Vec<Var> = Vec::new();
    for f in t {
        tvars.extend(f.vars().cloned());
    }
    for w in &ws {
        let mut term = weyl_term(rs, w)?;
        let v: Vec<LinForm> = match conv {
            ExpConvention::Standard => w.act_forms(&rs.lambda).iter().zip(&rho).map(|(a, b)| a.sub(b)).collect(),
            ExpConvention::InverseShifted => {
                w.inverse().act_forms(&rs.lambda).iter().zip(&rho).map(|(a, b)| a.add(b)).collect()
            }
        };
        let mut e = Poly::zero();
        for (x, y) in v.iter().zip(t) {
            e = e.add(&Poly::from_linform(x).mul(&Poly::from_linform(y)));
        }
        term.push_exp(&e);
        terms.push(term);
    }
    let vars = rs.vars.iter().cloned().chain(tvars);
    Ok(SymExpr::from_terms(terms, vars).with_label(alloc::format!("truncated period {}", rs.name())))
}

/// Replaces T by 0, dropping exponential factors.
pub fn at_t_zero(e: &SymExpr, tvars: &[Var]) -> Result<SymExpr> {
    let sub: BTreeMap<Var, LinForm> = tvars.iter().map(|v| (v.clone(), LinForm::zero())).collect();
    e.substitute(&sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;
    use crate::rootsys::{build_root_system, Family};

    #[test]
    fn a1_period_shape() {
        let rs = build_root_system(Family::A, 1).unwrap();
        let p = build_period(&rs).unwrap();
        assert_eq!(p.len(), 2);
        // 1/(2z1-1) - xi(2z1)/(xi(2z1+1)(2z1+1))
        let z = LinForm::var("z1").scale(&q(2));
        let want = crate::symexpr::parse_expr("1/(2*z1-1) - xi(2*z1)/xi(2*z1+1)/(2*z1+1)").unwrap();
        assert!(p.sub(&want).is_identically_zero());
        assert_eq!(p.terms[1].xi.get(&XiAtom::Of(z)), Some(&1));
    }

    #[test]
    fn identity_term_has_no_xi() {
        let rs = build_root_system(Family::G, 2).unwrap();
        let p = build_period(&rs).unwrap();
        assert_eq!(p.len(), 12);
        assert!(p.terms[0].xi.is_empty());
        let ws = weyl_group(&rs, WEYL_CAP).unwrap();
        let longest = ws.iter().max_by_key(|w| w.length()).unwrap();
        let f = intertwining_factor(&rs, longest).unwrap();
        assert_eq!(f.values().filter(|e| **e == 1).count(), 6);
        assert_eq!(f.values().filter(|e| **e == -1).count(), 6);
    }

    #[test]
    fn t_zero_recovers_period() {
        let rs = build_root_system(Family::A, 2).unwrap();
        let tv = [Var::new("x"), Var::new("y")];
        let t = crate::rootsys::generic_vector(&rs, &tv);
        for conv in [ExpConvention::Standard, ExpConvention::InverseShifted] {
            let pt = build_period_t(&rs, &t, conv).unwrap();
            let z = at_t_zero(&pt, &tv).unwrap();
            assert_eq!(z.terms, build_period(&rs).unwrap().terms);
        }
    }
}

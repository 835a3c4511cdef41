//! Plain (parseable) and LaTeX renderings.
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_traits::{One, Signed};

use crate::q::{fmt_q, Q};
use crate::symexpr::atom::XiAtom;
use crate::symexpr::expr::SymExpr;
use crate::symexpr::linform::LinForm;
use crate::symexpr::poly::Poly;
use crate::symexpr::term::Term;

fn pow_suffix(e: i32) -> String {
    if e == 1 {
        String::new()
    } else {
        alloc::format!("^{e}")
    }
}

/// Plain rendering of the term without its sign.
fn term_body_plain(t: &Term, abs: &Q) -> String {
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    for (a, e) in &t.xi {
        let s = a.to_plain();
        if *e > 0 {
            num.push(alloc::format!("{s}{}", pow_suffix(*e)));
        } else {
            den.push(alloc::format!("{s}{}", pow_suffix(-*e)));
        }
    }
    for (l, e) in &t.lin {
        let s = alloc::format!("({l})");
        if *e > 0 {
            num.push(alloc::format!("{s}{}", pow_suffix(*e)));
        } else {
            den.push(alloc::format!("{s}{}", pow_suffix(-*e)));
        }
    }
    if let Some(p) = &t.exp {
        num.push(alloc::format!("exp({p})"));
    }
    let mut out = String::new();
    if !abs.is_one() || num.is_empty() {
        out.push_str(&fmt_q(abs));
        if !num.is_empty() {
            out.push('*');
        }
    }
    out.push_str(&num.join("*"));
    for d in den {
        out.push('/');
        out.push_str(&d);
    }
    out
}

pub fn term_plain(t: &Term) -> String {
    let body = term_body_plain(t, &t.scalar.abs());
    if t.scalar.is_negative() {
        alloc::format!("-{body}")
    } else {
        body
    }
}

/// Parseable plain text, e.g. `xi(2)*xi(3*s)/(s-1) - xi(2)*xi(3*s-2)/(s)`.
pub fn plain(e: &SymExpr) -> String {
    if e.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in e.terms.iter().enumerate() {
        let body = term_body_plain(t, &t.scalar.abs());
        match (i, t.scalar.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn lin_latex(l: &LinForm) -> String {
    l.to_plain().replace('*', "")
}

fn poly_latex(p: &Poly) -> String {
    p.to_plain().replace('*', "")
}

fn atom_latex(a: &XiAtom) -> String {
    match a {
        XiAtom::Of(l) => alloc::format!("\\xi({})", lin_latex(l)),
        XiAtom::Value(q) => alloc::format!("\\xi({})", fmt_q(q)),
        XiAtom::Laurent(k) => alloc::format!("a_{{{k}}}"),
        XiAtom::Deriv(l, k) => alloc::format!("\\xi^{{({k})}}({})", lin_latex(l)),
    }
}

fn latex_pow(base: String, e: i32) -> String {
    if e == 1 {
        base
    } else {
        alloc::format!("{base}^{{{e}}}")
    }
}

/// LaTeX in the style `ξ(2)·\frac{1}{3s-3}·ξ(3s)`: rational prefactor,
/// then the linear fraction, then the ξ-factors.
pub fn latex(e: &SymExpr) -> String {
    if e.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in e.terms.iter().enumerate() {
        let neg = t.scalar.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { "\n - " } else { "\n + " });
        }
        let a = t.scalar.abs();
        let mut parts: Vec<String> = Vec::new();
        if !a.is_one() {
            if a.is_integer() {
                parts.push(alloc::format!("{}", a.numer()));
            } else {
                parts.push(alloc::format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom()));
            }
        }
        let num: Vec<String> =
            t.lin.iter().filter(|(_, e)| **e > 0).map(|(l, e)| latex_pow(alloc::format!("({})", lin_latex(l)), *e)).collect();
        let den: Vec<String> = t
            .lin
            .iter()
            .filter(|(_, e)| **e < 0)
            .map(|(l, e)| {
                let b = if t.lin.iter().filter(|(_, e)| **e < 0).count() == 1 && -*e == 1 {
                    lin_latex(l)
                } else {
                    alloc::format!("({})", lin_latex(l))
                };
                latex_pow(b, -*e)
            })
            .collect();
        let xnum: Vec<String> = t.xi.iter().filter(|(_, e)| **e > 0).map(|(x, e)| latex_pow(atom_latex(x), *e)).collect();
        let xden: Vec<String> = t.xi.iter().filter(|(_, e)| **e < 0).map(|(x, e)| latex_pow(atom_latex(x), -*e)).collect();
        if !den.is_empty() || !xden.is_empty() {
            let mut d = den.join("\\,");
            if !xden.is_empty() {
                if !d.is_empty() {
                    d.push_str("\\,");
                }
                d.push_str(&xden.join("\\,"));
            }
            parts.push(alloc::format!("\\frac{{1}}{{{d}}}"));
        }
        parts.extend(num);
        parts.extend(xnum);
        if let Some(p) = &t.exp {
            parts.push(alloc::format!("e^{{{}}}", poly_latex(p)));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        let _ = write!(out, "{}", parts.join("\\cdot "));
    }
    out
}

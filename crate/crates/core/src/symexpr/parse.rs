//! Parser for the plain notation produced by [`SymExpr::to_plain`].
//!
//! Grammar (integers only; rationals arise through `/`):
//! `sum := ['+'|'-'] prod (('+'|'-') prod)*`,
//! `prod := unary (('*'|'/') unary)*`, `unary := '-' unary | pow`,
//! `pow := atom ['^' ['-'] int]`, and atoms are numbers, variables,
//! parenthesised sums, `xi(L)`, `xid(k, L)`, `a(k)` and `exp(P)`.
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::q::Q;
use crate::symexpr::atom::XiAtom;
use crate::symexpr::expr::SymExpr;
use crate::symexpr::linform::LinForm;
use crate::symexpr::poly::Poly;
use crate::symexpr::term::Term;
use crate::var::Var;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| Error::Parse(t.clone()))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(alloc::format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Val {
    Lin(LinForm),
    Expr(SymExpr),
}

fn to_expr(v: Val) -> Result<SymExpr> {
    match v {
        Val::Expr(e) => Ok(e),
        Val::Lin(l) => {
            let mut t = Term::one();
            t.push_lin(&l, 1)?;
            Ok(SymExpr::from_terms(alloc::vec![t], l.vars().cloned().collect::<Vec<_>>()))
        }
    }
}

fn single(e: &SymExpr) -> Option<&Term> {
    if e.terms.len() == 1 {
        e.terms.first()
    } else {
        None
    }
}

fn add(a: Val, b: Val) -> Result<Val> {
    Ok(match (a, b) {
        (Val::Lin(x), Val::Lin(y)) => Val::Lin(x.add(&y)),
        (a, b) => Val::Expr(to_expr(a)?.add(&to_expr(b)?)),
    })
}

fn neg(a: Val) -> Val {
    match a {
        Val::Lin(x) => Val::Lin(x.neg()),
        Val::Expr(e) => Val::Expr(e.neg()),
    }
}

fn mul(a: Val, b: Val) -> Result<Val> {
    Ok(match (a, b) {
        (Val::Lin(x), Val::Lin(y)) if x.is_constant() => Val::Lin(y.scale(x.const_term())),
        (Val::Lin(x), Val::Lin(y)) if y.is_constant() => Val::Lin(x.scale(y.const_term())),
        (a, b) => Val::Expr(to_expr(a)?.mul(&to_expr(b)?)),
    })
}

fn div(a: Val, b: Val) -> Result<Val> {
    match b {
        Val::Lin(y) if y.is_constant() => {
            if y.is_zero() {
                return Err(Error::Parse("division by zero".into()));
            }
            let k = y.const_term().recip();
            Ok(match a {
                Val::Lin(x) => Val::Lin(x.scale(&k)),
                Val::Expr(e) => Val::Expr(e.scale(&k)),
            })
        }
        b => {
            let be = to_expr(b)?;
            let t = single(&be).ok_or_else(|| Error::Parse("division by a sum".into()))?;
            let inv = t.inverse();
            let mut e = to_expr(a)?.mul_term(&inv);
            e.vars.extend(be.vars.iter().cloned());
            Ok(Val::Expr(e))
        }
    }
}

fn pow(a: Val, n: i32) -> Result<Val> {
    match a {
        Val::Lin(x) if x.is_constant() => Ok(Val::Lin(LinForm::constant(crate::q::pow_i(x.const_term(), n)))),
        a => {
            let e = to_expr(a)?;
            if let Some(t) = single(&e) {
                let mut r = SymExpr::from_term(t.pow(n));
                r.vars = e.vars.clone();
                return Ok(Val::Expr(r));
            }
            if n < 0 {
                return Err(Error::Parse("negative power of a sum".into()));
            }
            let mut r = to_expr(Val::Lin(LinForm::constant(Q::one())))?;
            for _ in 0..n {
                r = r.mul(&e);
            }
            Ok(Val::Expr(r))
        }
    }
}

fn to_poly(v: Val) -> Result<Poly> {
    match v {
        Val::Lin(l) => Ok(Poly::from_linform(&l)),
        Val::Expr(e) => {
            let mut p = Poly::zero();
            for t in &e.terms {
                if !t.xi.is_empty() || t.exp.is_some() || t.lin.values().any(|x| *x < 0) {
                    return Err(Error::Parse("exp() argument must be a polynomial".into()));
                }
                let mut m = Poly::constant(t.scalar.clone());
                for (l, k) in &t.lin {
                    m = m.mul(&Poly::from_linform(l).pow(*k as u32));
                }
                p = p.add(&m);
            }
            Ok(p)
        }
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(alloc::format!("expected {c:?} at token {}", self.pos)))
        }
    }

    fn sum(&mut self) -> Result<Val> {
        let mut v = if self.eat('-') {
            neg(self.prod()?)
        } else {
            self.eat('+');
            self.prod()?
        };
        loop {
            if self.eat('+') {
                v = add(v, self.prod()?)?;
            } else if self.eat('-') {
                v = add(v, neg(self.prod()?))?;
            } else {
                return Ok(v);
            }
        }
    }

    fn prod(&mut self) -> Result<Val> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v = mul(v, self.unary()?)?;
            } else if self.eat('/') {
                v = div(v, self.unary()?)?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Val> {
        if self.eat('-') {
            return Ok(neg(self.unary()?));
        }
        let a = self.atom()?;
        if self.eat('^') {
            let sign = if self.eat('-') { -1 } else { 1 };
            let n = self.int()?;
            return pow(a, sign * n);
        }
        Ok(a)
    }

    fn int(&mut self) -> Result<i32> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                n.to_i32().ok_or_else(|| Error::Parse("exponent too large".into()))
            }
            _ => Err(Error::Parse("expected integer".into())),
        }
    }

    fn linear(&mut self) -> Result<LinForm> {
        match self.sum()? {
            Val::Lin(l) => Ok(l),
            Val::Expr(_) => Err(Error::Parse("expected an affine argument".into())),
        }
    }

    fn atom(&mut self) -> Result<Val> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| Error::Parse("unexpected end".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Val::Lin(LinForm::constant(Q::from_integer(n)))),
            Tok::Op('(') => {
                let v = self.sum()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Ident(name) if self.peek() == Some(&Tok::Op('(')) => {
                self.pos += 1;
                let mut t = Term::one();
                let mut vars: Vec<Var> = Vec::new();
                match name.as_str() {
                    "xi" => {
                        let l = self.linear()?;
                        vars.extend(l.vars().cloned());
                        t.push_xi_of(l, 1)?;
                    }
                    "xid" => {
                        let k = self.int()?;
                        self.expect(',')?;
                        let l = self.linear()?;
                        vars.extend(l.vars().cloned());
                        t.push_deriv(l, k as u32, 1)?;
                    }
                    "a" => {
                        let k = self.int()?;
                        t.push_atom(XiAtom::Laurent(k as u32), 1);
                    }
                    "exp" => {
                        let p = to_poly(self.sum()?)?;
                        vars.extend(p.vars());
                        t.push_exp(&p);
                    }
                    other => return Err(Error::Parse(alloc::format!("unknown function {other}"))),
                }
                self.expect(')')?;
                Ok(Val::Expr(SymExpr::from_terms(alloc::vec![t], vars)))
            }
            Tok::Ident(name) => Ok(Val::Lin(LinForm::var(Var::new(name)))),
            Tok::Op(c) => Err(Error::Parse(alloc::format!("unexpected {c:?}"))),
        }
    }
}

/// Parses plain notation into a simplified-but-unmerged expression.
pub fn parse_expr(s: &str) -> Result<SymExpr> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let v = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(alloc::format!("trailing input at token {}", p.pos)));
    }
    let e = to_expr(v)?;
    Ok(SymExpr::from_terms(e.terms.into_iter().filter(|t| !t.scalar.is_zero()).collect(), e.vars))
}

/// Parses an affine form such as `3*s-2`.
pub fn parse_linform(s: &str) -> Result<LinForm> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let l = p.linear()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(s.to_string()));
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sl2_shape() {
        let e = parse_expr("xi(2*s)/(s-1) - xi(2*s-1)/s").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(parse_expr(&e.to_plain()).unwrap().simplify(), e.simplify());
    }

    #[test]
    fn parses_derivatives_and_exponentials() {
        let e = parse_expr("-1/2*xid(1,3*s)*a(0)*exp((3*s+1)*x)/(3*s-1)^2").unwrap();
        assert_eq!(e.len(), 1);
        let back = parse_expr(&e.to_plain()).unwrap();
        assert_eq!(back.simplify(), e.simplify());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_expr("xi(").is_err());
        assert!(parse_expr("1/(s+1+xi(s))").is_err());
        assert!(parse_expr("s ? 2").is_err());
    }
}

//! Opaque ξ-atoms. Arguments are stored in a canonical representative of
//! the pair {L, 1−L}: ξ(L)=ξ(1−L) and ξ⁽ᵏ⁾(L)=(−1)ᵏξ⁽ᵏ⁾(1−L).
use alloc::string::String;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::q::{fmt_q, qf, Q};
use crate::symexpr::linform::LinForm;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum XiAtom {
    /// ξ(a·s+b) with a non-constant argument.
    Of(LinForm),
    /// ξ(q) at a rational point other than 0, 1.
    Value(Q),
    /// Laurent constant a_k in ξ(1+ε) = 1/ε + a₀ + a₁ε + …
    Laurent(u32),
    /// k-th derivative ξ⁽ᵏ⁾(L), k ≥ 1; L may be constant.
    Deriv(LinForm, u32),
}

/// Whether the representative `L` should be flipped to `1−L`.
fn flips(l: &LinForm) -> bool {
    match l.leading() {
        Some((_, c)) => c.is_negative(),
        None => l.const_term() < &qf(1, 2),
    }
}

fn reflect(l: &LinForm) -> LinForm {
    l.neg().add_const(&Q::one())
}

fn is_pole(l: &LinForm) -> bool {
    matches!(l.as_constant(), Some(c) if c.is_zero() || c.is_one())
}

impl XiAtom {
    /// ξ(L), canonicalized. Fails if L is the constant 0 or 1.
    pub fn of(l: LinForm) -> Result<XiAtom> {
        if is_pole(&l) {
            return Err(Error::Singular(alloc::format!("xi({l}) is a pole")));
        }
        let l = if flips(&l) { reflect(&l) } else { l };
        Ok(match l.as_constant() {
            Some(c) => XiAtom::Value(c.clone()),
            None => XiAtom::Of(l),
        })
    }

    pub fn value(c: Q) -> Result<XiAtom> {
        Self::of(LinForm::constant(c))
    }

    /// ξ⁽ᵏ⁾(L) as (sign, atom).
    pub fn deriv(l: LinForm, k: u32) -> Result<(i32, XiAtom)> {
        if k == 0 {
            return Ok((1, Self::of(l)?));
        }
        if is_pole(&l) {
            return Err(Error::Singular(alloc::format!("xi^({k})({l}) is a pole")));
        }
        if flips(&l) {
            let sign = if k % 2 == 1 { -1 } else { 1 };
            Ok((sign, XiAtom::Deriv(reflect(&l), k)))
        } else {
            Ok((1, XiAtom::Deriv(l, k)))
        }
    }

    /// The argument form, for atoms that have one.
    pub fn arg(&self) -> Option<LinForm> {
        match self {
            XiAtom::Of(l) | XiAtom::Deriv(l, _) => Some(l.clone()),
            XiAtom::Value(q) => Some(LinForm::constant(q.clone())),
            XiAtom::Laurent(_) => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            XiAtom::Of(_) => false,
            XiAtom::Deriv(l, _) => l.is_constant(),
            _ => true,
        }
    }

    /// Laurent constants and derivative atoms should not survive in a
    /// finished zeta.
    pub fn is_auxiliary(&self) -> bool {
        matches!(self, XiAtom::Laurent(_) | XiAtom::Deriv(..))
    }

    pub fn to_plain(&self) -> String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for XiAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XiAtom::Of(l) => write!(f, "xi({l})"),
            XiAtom::Value(q) => write!(f, "xi({})", fmt_q(q)),
            XiAtom::Laurent(k) => write!(f, "a({k})"),
            XiAtom::Deriv(l, k) => write!(f, "xid({k},{l})"),
        }
    }
}

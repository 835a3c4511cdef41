//! Exact symbolic expressions: sums of rational-function × ξ-atom terms.
pub mod atom;
pub mod display;
pub mod expr;
pub mod linform;
pub mod parse;
pub mod poly;
pub mod term;

pub use atom::XiAtom;
pub use expr::SymExpr;
pub use linform::LinForm;
pub use parse::{parse_expr, parse_linform};
pub use poly::Poly;
pub use term::Term;

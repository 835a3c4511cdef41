#![no_std]
extern crate alloc;

pub mod error;
pub mod normalize;
pub mod oracle;
pub mod period;
pub mod pipeline;
pub mod q;
pub mod residue;
pub mod rootsys;
pub mod symexpr;
pub mod var;
pub mod xinum;
pub mod zerofind;

pub use error::{Error, Result};
pub use q::Q;
pub use var::Var;

//! Exact computations with quadratic functors, presquare groups and square groups
//! over finitely generated abelian groups.

pub mod abelian;
pub mod error;
pub mod nil2;
pub mod psg;
pub mod quadfun;
pub mod sg;

pub use error::{Error, Result};

//! Finitely generated abelian groups, homomorphisms and the bifunctors Hom, Ext, ⊗.

mod binop;
mod group;
mod hom;
mod matrix;
mod quotient;
mod snf;

pub use binop::{direct_sum, ext, hom_group, sum_of_homs, tensor, DirectSum, ExtGroup, HomGroup, Tensor};
pub use group::{Elem, FgAbGroup, Presented};
pub use hom::{homology, is_exact_at, AbHom, HomAnalysis, Solver, Subgroup};
pub use matrix::{ext_gcd, gcd, lcm, reduce_mod, Matrix};
pub use quotient::{QuotientMap, SparseQuotient};
pub use snf::{snf, snf_exact, snf_mod_left, snf_with, BigSnf, EchelonBasis, Snf};

pub(crate) use matrix::checked_mul;


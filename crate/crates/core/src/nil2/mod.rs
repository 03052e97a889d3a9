//! Groups of nilpotency class two as central extensions, and `H²` of abelian groups.

mod cohomology;
mod group;
mod torsor;

pub use cohomology::{bilinear_representative, class_to_cocycle, h2_split, solve_coboundary, H2Class};
pub use group::{Cocycle, CocycleForm, Nil2Elem, Nil2Group};
pub use torsor::{canonical_ta, difference_class, twist_ta, CentralExtension};

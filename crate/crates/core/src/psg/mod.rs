//! Presquare groups: validation, homotopy invariants, products and coproducts,
//! pushforwards, the `ω` constructions and realization of `k`-invariants.

mod bcg;
mod group;
mod invariants;
mod omega;
mod ops;

pub use bcg::{lambda, upsilon_lambda, Bcg, BcgCheck, UpsilonLambda};
pub use group::{Axiom, PreSquareGroup};
pub use invariants::{gamma_n, KTriple, MooreComplex, PsgInvariants, StableInvariants};
pub use omega::{omega, realize_psg, OmegaVariant, Realization, RealizeMode};
pub use ops::{coproduct, odot_eval, product, pushforward, Combined, Pushforward};

pub(crate) use group::form_at;

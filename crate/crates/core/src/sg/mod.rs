//! Square groups: validation, `℘`, twists, the lifting obstruction, realizers,
//! `Δ`, the stable reflection and the realization pipelines.

mod builtins;
mod group;
mod lift;
mod ops;
mod pointmap;
mod realize;

pub use builtins::{
    builtin_realizer, half_invertible, primary_decomposition, stable_universal, two_power_cyclic, znil, Builtin,
};
pub use group::{Identity, Nil2Map, QuadraticMap, SgCheck, SquareGroup, DEFAULT_SAMPLE};
pub use lift::{
    lift, lift_map_h, lift_omega, lift_via, obstruction, CoboundaryRoute, LiftOutcome, Obstruction, OmegaLift,
    DEFAULT_TABLE_BOUND,
};
pub use ops::{coproduct, coproduct_all, product, product_all, pushforward, underline, SgCombined, SgPushforward};
pub use pointmap::{PointMap, Rule};
pub use realize::{realize_sg_delta, realize_sg_flat, realize_sg_flat_with, realize_sg_stable, SgRealization, SgRealizeOutcome};

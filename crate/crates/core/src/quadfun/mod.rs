mod exact;
mod natural;
mod oracle;
mod theta;
mod value;

pub use exact::{exact_sequences, two_torsion_inclusion, SequenceCheck};
pub use natural::{
    cross_effect_check, induced_map, mod_two, mod_two_projection, nat_map, CrossEffectCheck, NatMap,
};
pub use oracle::{oracle_value, OracleValue};
pub use theta::{theta, theta_from_extension, ExtClass};
pub use value::{quad_value, Functor, FunctorValue};

pub(crate) use natural::map_out_of;
pub(crate) use value::RawGen;

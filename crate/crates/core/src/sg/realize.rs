use super::builtins::{half_invertible, primary_decomposition, stable_universal, two_power_cyclic, znil};
use super::group::SquareGroup;
use super::lift::{lift_omega, OmegaLift};
use super::ops::{coproduct_all, product_all, pushforward};
use crate::abelian::{direct_sum, AbHom, FgAbGroup};
use crate::error::{Error, Result};
use crate::psg::KTriple;
use crate::quadfun::{induced_map, mod_two, ExtClass, Functor};

/// A square group with isomorphisms from the target data to its invariants.
#[derive(Clone, Debug)]
pub struct SgRealization {
    pub sg: SquareGroup,
    /// `πₙ → π₀` (or `A → π₀` in delta mode).
    pub phi0: AbHom,
    /// `πₙ₊₁ → π₁`, `πₙ₊₁ → π̄₁` (stable) or `B → π₁` (delta).
    pub phi1: AbHom,
}

#[derive(Clone, Debug)]
pub enum SgRealizeOutcome {
    Realized(SgRealization),
    /// A summand of `π₂` with `θ ≠ 0` for which no realizer is known.
    UnsupportedPi2 { summand: FgAbGroup, theta: ExtClass },
}

/// The realizer of a summand of a flat `π₂`.
fn flat_realizer(g: &FgAbGroup) -> Result<std::result::Result<SquareGroup, ExtClass>> {
    let f = g.factors();
    if f == [0] {
        return Ok(Ok(znil()));
    }
    if f.len() == 1 && f[0].count_ones() == 1 {
        return Ok(Ok(two_power_cyclic(f[0].trailing_zeros())?));
    }
    Ok(match lift_omega(g)? {
        OmegaLift::Lifted { sg, .. } => Ok(sg),
        OmegaLift::ThetaNonzero(t) => Err(t),
    })
}

/// The flat `Π*(2,3)` target realized through the primary decomposition of `π₂`.
pub fn realize_sg_flat(target: &KTriple) -> Result<SgRealizeOutcome> {
    let (pieces, _, _) = primary_decomposition(&target.pi_n);
    realize_sg_flat_with(target, &pieces)
}

/// The flat target realized through the given summands, which must add up to `π₂`
/// in its canonical form: `Z` and `Z/2ᵏ` by built-in realizers, the others by
/// lifting `ω(N)`.
pub fn realize_sg_flat_with(target: &KTriple, summands: &[FgAbGroup]) -> Result<SgRealizeOutcome> {
    if target.n != 2 {
        return Err(Error::Invalid("flat realization needs a triple with n = 2".into()));
    }
    let a = &target.pi_n;
    let ds = direct_sum(summands);
    if &ds.group != a {
        return Err(Error::Invalid(format!("the summands do not add up to {a}")));
    }
    if !target.is_flat() {
        return Err(Error::Domain("target is not flat: k∘ι ≠ 0 or k does not land in pi_3^-".into()));
    }
    if target.involution_or_minus() != AbHom::identity(&target.pi_n1).neg() {
        return Err(Error::Domain("square groups realize only the involution -Id on pi_3".into()));
    }
    let mut parts = Vec::new();
    for g in summands {
        match flat_realizer(g)? {
            Ok(q) => parts.push(q),
            Err(theta) => return Ok(SgRealizeOutcome::UnsupportedPi2 { summand: g.clone(), theta }),
        }
    }
    let (sum, injections) = coproduct_all(&parts)?;
    let phi0 = sum_through(&injections, &ds.projections, a, sum.pi0());
    let inv = sum.wp().invariants();
    let k_via = inv.k.compose(&induced_map(Functor::Gamma, &phi0));
    let f = target
        .k
        .descend_along(&k_via)
        .ok_or_else(|| Error::Domain("k does not factor through the realizer (internal)".into()))?;
    let pushed = pushforward(&sum, &f)?;
    let pi1 = pushed.sg.pi1();
    let phi1 = pushed.from_target.lift_through(&pi1.inclusion).expect("A lands in ker P");
    let r = SgRealization { sg: pushed.sg, phi0, phi1 };
    let got = r.sg.wp().invariants().triple();
    if !target.is_iso_via(&got, &r.phi0, &r.phi1) {
        return Err(Error::Domain("realization does not reproduce the target (internal)".into()));
    }
    Ok(SgRealizeOutcome::Realized(r))
}

fn sum_through(injections: &[AbHom], projections: &[AbHom], a: &FgAbGroup, to: &FgAbGroup) -> AbHom {
    injections
        .iter()
        .zip(projections)
        .fold(AbHom::zero(a, to), |acc, (i, p)| acc.add(&i.compose(p)))
}

/// The stable target `(πₙ, πₙ₊₁, k)` as a pushforward of the stable universal realizer.
pub fn realize_sg_stable(target: &KTriple) -> Result<SgRealization> {
    if target.n < 3 {
        return Err(Error::Invalid("stable realization needs a triple with n >= 3".into()));
    }
    let b = &target.pi_n1;
    if !AbHom::identity(b).scale(2).is_zero() {
        return Err(Error::Domain(format!("pi_(n+1) = {b} is not an elementary 2-group")));
    }
    let a = &target.pi_n;
    let (u, phi0) = stable_universal(a)?;
    let st = u.wp().stable_invariants();
    let (ma, mq) = (mod_two(a), mod_two(u.pi0()));
    let phi0_mod2 = ma.map(&mq, &AbHom::identity(&FgAbGroup::cyclic(2)), &phi0);
    let back = phi0_mod2.inverse().expect("phi0 is an isomorphism");
    let kbar_inv = st.k_bar.inverse().ok_or_else(|| Error::Domain("k̄ of the universal realizer is not invertible (internal)".into()))?;
    let f = target.k.compose(&back).compose(&kbar_inv).compose(&st.epsilon);
    let pushed = pushforward(&u, &f)?;
    let sst = pushed.sg.wp().stable_invariants();
    let phi1 = sst
        .quotient
        .compose(&pushed.from_target)
        .lift_through(&sst.pi1_bar.inclusion)
        .expect("B lands in ker P̄");
    let r = SgRealization { sg: pushed.sg, phi0, phi1 };
    let got = sst.triple(r.sg.pi0());
    if !target.is_iso_via(&got, &r.phi0, &r.phi1) {
        return Err(Error::Domain("realization does not reproduce the target (internal)".into()));
    }
    Ok(r)
}

/// A square group with `Δ = f` under `A ≅ π₀` and `B ≅ π₁`, for `A` finitely generated.
pub fn realize_sg_delta(f: &AbHom) -> Result<SgRealization> {
    let a = f.source();
    let (pieces, ds, iso) = primary_decomposition(a);
    let mut parts = Vec::new();
    for g in &pieces {
        let d = g.factors()[0];
        parts.push(if d == 0 {
            znil()
        } else if d % 2 == 1 {
            half_invertible(g)?
        } else {
            two_power_cyclic(d.trailing_zeros())?
        });
    }
    let (prod, injections) = product_all(&parts)?;
    let phi0 = sum_through(&injections, &ds.projections, &ds.group, prod.pi0()).compose(&iso);
    let delta = prod.delta()?;
    let delta_inv = delta.inverse().ok_or_else(|| Error::Domain("Delta of the realizer is not invertible (internal)".into()))?;
    let phi0_inv = phi0.inverse().expect("phi0 is an isomorphism");
    let g = f.compose(&phi0_inv).compose(&delta_inv);
    let pushed = pushforward(&prod, &g)?;
    let pi1 = pushed.sg.pi1();
    let phi1 = pushed.from_target.lift_through(&pi1.inclusion).expect("B lands in ker P");
    let r = SgRealization { sg: pushed.sg, phi0, phi1 };
    if r.sg.delta()?.compose(&r.phi0) != r.phi1.compose(f) || !r.phi1.is_iso() {
        return Err(Error::Domain("realization does not reproduce f (internal)".into()));
    }
    Ok(r)
}

use super::group::PreSquareGroup;
use super::invariants::KTriple;
use super::ops::pushforward;
use crate::abelian::{AbHom, Elem, FgAbGroup};
use crate::error::{Error, Result};
use crate::nil2::{canonical_ta, h2_split, CentralExtension};
use crate::quadfun::{map_out_of, quad_value, Functor, RawGen};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaVariant {
    /// `Mee = A⊗A`, `σ(a⊗b) = −b⊗a`.
    Plain,
    /// `Mee = Λ̃²A`, `σ = Id`.
    Bar,
}

/// `ω(N)` or `ω̄(N)` for `N` an extension of `A` by `Λ²A` with identity pairing.
pub fn omega(n: &CentralExtension, variant: OmegaVariant) -> Result<PreSquareGroup> {
    let a = n.base();
    let lambda = quad_value(Functor::Lambda2, a);
    if n.kernel() != lambda.group() || !n.kernel_inclusion.is_iso() {
        return Err(Error::Invalid(format!("N must be an extension of {a} by Lambda^2")));
    }
    let pairing = h2_split(&n.total).pairing;
    if pairing != n.kernel_inclusion {
        return Err(Error::Domain("the commutator pairing of N is not the identity".into()));
    }
    let mu = |i: usize, j: usize| n.kernel_inclusion.apply(&lambda.product(&a.gen(i), &a.gen(j)));
    let c = n.total.center();
    let k = a.ngens();
    let (mee, sigma, p, bracket): (FgAbGroup, AbHom, AbHom, Vec<Vec<Elem>>) = match variant {
        OmegaVariant::Plain => {
            let t = quad_value(Functor::Tensor2, a);
            let g = t.group().clone();
            let sigma = map_out_of(&t, &g, |r| match r {
                RawGen::Product(i, j) => g.neg(&t.product(&a.gen(j), &a.gen(i))),
                _ => unreachable!(),
            });
            let p = map_out_of(&t, c, |r| match r {
                RawGen::Product(i, j) => mu(i, j),
                _ => unreachable!(),
            });
            let b = (0..k).map(|i| (0..k).map(|j| t.product(&a.gen(i), &a.gen(j))).collect()).collect();
            (g, sigma, p, b)
        }
        OmegaVariant::Bar => {
            let t = quad_value(Functor::LambdaTilde2, a);
            let g = t.group().clone();
            let p = map_out_of(&t, c, |r| match r {
                RawGen::Product(i, j) => mu(i, j),
                _ => unreachable!(),
            });
            let b = (0..k).map(|i| (0..k).map(|j| t.product(&a.gen(i), &a.gen(j))).collect()).collect();
            (g.clone(), AbHom::identity(&g), p, b)
        }
    };
    PreSquareGroup::new(n.total.clone(), mee, sigma, p, bracket)
}

/// A presquare group together with isomorphisms from the target triple to its invariants.
#[derive(Clone, Debug)]
pub struct Realization {
    pub psg: PreSquareGroup,
    /// `πₙ → π₀`.
    pub phi0: AbHom,
    /// `πₙ₊₁ → π₁` (flat) or `πₙ₊₁ → π̄₁` (stable).
    pub phi1: AbHom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealizeMode {
    Flat23,
    Stable,
}

/// A presquare group with the given invariants: `k'_*(ω(N))` for flat `Π*(2,3)`
/// targets and `k'_*(ω̄(N))` for stable ones, `N` the canonical element of `T_A`.
pub fn realize_psg(target: &KTriple, mode: RealizeMode) -> Result<Realization> {
    let a = &target.pi_n;
    let n = canonical_ta(a);
    match mode {
        RealizeMode::Flat23 => {
            if target.n != 2 {
                return Err(Error::Invalid("flat realization needs a triple with n = 2".into()));
            }
            if !target.is_flat() {
                return Err(Error::Domain(
                    "target is not flat: k∘ι ≠ 0 or k does not land in pi_3^-".into(),
                ));
            }
            let m = omega(&n, OmegaVariant::Plain)?;
            let inv = m.invariants();
            let f = target
                .k
                .descend_along(&inv.k)
                .ok_or_else(|| Error::Domain("k does not factor through tau' (internal)".into()))?;
            let pushed = pushforward(&m, &f, &target.involution_or_minus())?;
            let out = pushed.psg;
            let pi1 = out.p().kernel();
            let phi1 = pushed.from_target.lift_through(&pi1.inclusion).expect("A lands in ker P");
            let r = Realization { phi0: AbHom::identity(a), phi1, psg: out };
            let got = r.psg.invariants().triple();
            if !target.is_iso_via(&got, &r.phi0, &r.phi1) {
                return Err(Error::Domain("realization does not reproduce the target (internal)".into()));
            }
            Ok(r)
        }
        RealizeMode::Stable => {
            if target.n < 3 {
                return Err(Error::Invalid("stable realization needs a triple with n >= 3".into()));
            }
            let m = omega(&n, OmegaVariant::Bar)?;
            let st = m.stable_invariants();
            let inv_kbar = st.k_bar.inverse().expect("k̄ of ω̄(N) is an isomorphism");
            let f = target.k.compose(&inv_kbar).compose(&st.epsilon);
            let pushed = pushforward(&m, &f, &AbHom::identity(&target.pi_n1))?;
            let out = pushed.psg;
            let sst = out.stable_invariants();
            let phi1 = sst
                .quotient
                .compose(&pushed.from_target)
                .lift_through(&sst.pi1_bar.inclusion)
                .expect("A lands in ker P̄");
            let r = Realization { phi0: AbHom::identity(a), phi1, psg: out };
            if !target.is_iso_via(&sst.triple(a), &r.phi0, &r.phi1) {
                return Err(Error::Domain("realization does not reproduce the target (internal)".into()));
            }
            Ok(r)
        }
    }
}

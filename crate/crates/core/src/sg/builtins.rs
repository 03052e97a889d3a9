use super::group::{QuadraticMap, SquareGroup};
use super::lift::{lift, LiftOutcome};
use super::ops::{coproduct_all, underline};
use super::pointmap::PointMap;
use crate::abelian::{AbHom, FgAbGroup};
use crate::error::{Error, Result};
use crate::nil2::{canonical_ta, Cocycle, CocycleForm, Nil2Group};
use crate::psg::{omega, OmegaVariant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Znil,
    TwoPowerCyclic(u32),
    HalfInvertible(FgAbGroup),
    StableUniversal(FgAbGroup),
}

pub fn builtin_realizer(kind: &Builtin) -> Result<SquareGroup> {
    match kind {
        Builtin::Znil => Ok(znil()),
        Builtin::TwoPowerCyclic(n) => two_power_cyclic(*n),
        Builtin::HalfInvertible(a) => half_invertible(a),
        Builtin::StableUniversal(a) => Ok(stable_universal(a)?.0),
    }
}

/// `Qe = Qee = Z`, `P = 0`, `H(a) = (a² − a)/2`.
pub fn znil() -> SquareGroup {
    let z = FgAbGroup::free(1);
    let zero = FgAbGroup::zero();
    let form = CocycleForm { bilinear: vec![vec![vec![1]]], carries: vec![vec![0]] };
    let binomial = Nil2Group::new(z.clone(), z.clone(), Cocycle::Form(form)).expect("xy is a cocycle");
    let g = PointMap::section(&binomial, vec![vec![0]]).expect("Z is free");
    SquareGroup::new(
        Nil2Group::abelian(z.clone(), zero.clone()),
        z.clone(),
        QuadraticMap::Structured { h: AbHom::zero(&zero, &z), g, cross: vec![vec![vec![1]]] },
        AbHom::zero(&z, &zero),
    )
    .expect("Z_nil is a square group")
}

/// `Qe = Qee = Z/2ⁿ⁺¹`, `P = ×2ⁿ`, `H(x) = x² − x`; `Qe` is stored as the extension
/// of `Z/2ⁿ` by `Z/2` with carry `1`.
pub fn two_power_cyclic(n: u32) -> Result<SquareGroup> {
    if n == 0 || n > 12 {
        return Err(Error::Invalid(format!("TwoPowerCyclic needs 1 <= n <= 12, got {n}")));
    }
    let d = 1i128 << n;
    let (q, c) = (FgAbGroup::cyclic(d), FgAbGroup::cyclic(2));
    let qee = FgAbGroup::cyclic(2 * d);
    let form = CocycleForm { bilinear: vec![vec![vec![0]]], carries: vec![vec![1]] };
    let qe = Nil2Group::new(q, c.clone(), Cocycle::Form(form))?;
    let values = qe
        .elements()
        .expect("finite")
        .iter()
        .map(|x| {
            let v = x.q[0] + d * x.c[0];
            vec![(v * v - v).rem_euclid(2 * d)]
        })
        .collect();
    let p = AbHom::from_images(qee.clone(), c, &[vec![1]])?;
    SquareGroup::new(qe, qee, QuadraticMap::Table(values), p)
}

/// `Qe = Qee = A`, `P = 0`, `H(a) = −a/2`, for `A` on which `2` is invertible.
pub fn half_invertible(a: &FgAbGroup) -> Result<SquareGroup> {
    let half = AbHom::identity(a)
        .scale(2)
        .inverse()
        .ok_or_else(|| Error::Invalid(format!("2 is not invertible on {a}")))?;
    let zero = FgAbGroup::zero();
    SquareGroup::new(
        Nil2Group::abelian(a.clone(), zero.clone()),
        a.clone(),
        QuadraticMap::Structured {
            h: AbHom::zero(&zero, a),
            g: PointMap::hom(half.neg()),
            cross: vec![vec![a.zero_elem(); a.ngens()]; a.ngens()],
        },
        AbHom::zero(a, &zero),
    )
}

/// Splits a cyclic order into prime powers; `0` stays `0`.
pub(crate) fn prime_powers(d: i128) -> Vec<i128> {
    if d == 0 {
        return vec![0];
    }
    let (mut d, mut p, mut out) = (d, 2i128, Vec::new());
    while p * p <= d {
        let mut q = 1;
        while d % p == 0 {
            d /= p;
            q *= p;
        }
        if q > 1 {
            out.push(q);
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

/// The primary cyclic summands of `a`, and `a → ⊕ summands`, an isomorphism.
pub fn primary_decomposition(a: &FgAbGroup) -> (Vec<FgAbGroup>, crate::abelian::DirectSum, AbHom) {
    let mut pieces = Vec::new();
    let mut owner = Vec::new();
    for (i, &d) in a.factors().iter().enumerate() {
        for p in prime_powers(d) {
            pieces.push(if p == 0 { FgAbGroup::free(1) } else { FgAbGroup::cyclic(p) });
            owner.push(i);
        }
    }
    let ds = crate::abelian::direct_sum(&pieces);
    let imgs: Vec<_> = (0..a.ngens())
        .map(|i| {
            let parts: Vec<_> = pieces
                .iter()
                .zip(&owner)
                .map(|(g, &o)| if o == i { g.gen(0) } else { g.zero_elem() })
                .collect();
            ds.combine(&parts)
        })
        .collect();
    let iso = AbHom::from_images(a.clone(), ds.group.clone(), &imgs).expect("CRT");
    (pieces, ds, iso)
}

/// A square group in `SG_s` realizing `(A, A/2A, Z/2⊗A ≅ A/2A)`, with `A → π₀`.
///
/// Built as the reflection into `SG_s` of the coproduct of per-summand realizers:
/// `Z_nil` for `Z`, `TwoPowerCyclic(1)` for `Z/2`, a lift of `ω̄(N)` for `Z/2ᵏ`,
/// `k ≥ 2`, and `HalfInvertible` for odd summands.
pub fn stable_universal(a: &FgAbGroup) -> Result<(SquareGroup, AbHom)> {
    let (pieces, ds, iso) = primary_decomposition(a);
    let mut parts = Vec::new();
    for g in &pieces {
        let d = g.factors()[0];
        let q = if d == 0 {
            znil()
        } else if d % 2 == 1 {
            half_invertible(g)?
        } else if d == 2 {
            two_power_cyclic(1)?
        } else {
            match lift(&omega(&canonical_ta(g), OmegaVariant::Bar)?)? {
                LiftOutcome::Lifted(q) => q,
                _ => return Err(Error::Domain(format!("omega-bar of {g} does not lift (internal)"))),
            }
        };
        parts.push(q);
    }
    let (sum, injections) = coproduct_all(&parts)?;
    let to_pi0 = injections
        .iter()
        .zip(&ds.projections)
        .map(|(inj, pr)| inj.compose(pr))
        .reduce(|x, y| x.add(&y))
        .unwrap_or_else(|| AbHom::zero(&ds.group, sum.pi0()));
    Ok((underline(&sum), to_pi0.compose(&iso)))
}

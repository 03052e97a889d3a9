use std::fmt;
use std::str::FromStr;

use super::value::{quad_value, Functor, FunctorValue, RawGen};
use crate::abelian::{tensor, AbHom, Elem, FgAbGroup, Tensor};
use crate::error::{Error, Result};

/// Natural transformations between the functors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NatMap {
    /// `Sym²A → P(A)`, `ab ↦ (a|b)_p`.
    J,
    /// `P(A) → A`, `p(a) ↦ a`.
    Q,
    /// `Γ(A) → A⊗A`, `γ(a) ↦ a⊗a`.
    Tau,
    /// `Γ(A) → Ψ(A)`, the corestriction of `Tau`.
    TauPrime,
    /// `Φ(A) → Γ(A)`, `a ↦ 2^n γ(a)` on `Φ_n`.
    Iota,
    /// `P(A) → Γ(A)`, `p(a) ↦ γ(a)`.
    Nu,
    /// `A → P(A)`, `a ↦ p(a) − p(−a)`.
    FPm,
    /// `Γ(A) → Z/2⊗A`, `γ(a) ↦ a mod 2`.
    GammaMod2,
    /// `Ψ(A) → Z/2⊗A`, the factorization of `GammaMod2` through `TauPrime`.
    PsiMod2,
    /// `Ψ(A) → A⊗A`.
    PsiIncl,
    /// `A⊗A → Λ²A`.
    Wedge,
    /// `A⊗A → Λ̃²A`.
    TildeProj,
    /// `Λ̃²A → Λ²A`.
    TildeWedge,
}

impl NatMap {
    pub const ALL: [NatMap; 13] = [
        NatMap::J,
        NatMap::Q,
        NatMap::Tau,
        NatMap::TauPrime,
        NatMap::Iota,
        NatMap::Nu,
        NatMap::FPm,
        NatMap::GammaMod2,
        NatMap::PsiMod2,
        NatMap::PsiIncl,
        NatMap::Wedge,
        NatMap::TildeProj,
        NatMap::TildeWedge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NatMap::J => "j",
            NatMap::Q => "q",
            NatMap::Tau => "tau",
            NatMap::TauPrime => "tau_prime",
            NatMap::Iota => "iota",
            NatMap::Nu => "nu",
            NatMap::FPm => "f_pm",
            NatMap::GammaMod2 => "gamma_mod2",
            NatMap::PsiMod2 => "psi_mod2",
            NatMap::PsiIncl => "psi_incl",
            NatMap::Wedge => "wedge",
            NatMap::TildeProj => "tilde_proj",
            NatMap::TildeWedge => "tilde_wedge",
        }
    }

    /// Names of source and target.
    pub fn ends(self) -> (&'static str, &'static str) {
        match self {
            NatMap::J => ("Sym2", "P"),
            NatMap::Q => ("P", "Id"),
            NatMap::Tau => ("Gamma", "Tensor2"),
            NatMap::TauPrime => ("Gamma", "Psi"),
            NatMap::Iota => ("Phi", "Gamma"),
            NatMap::Nu => ("P", "Gamma"),
            NatMap::FPm => ("Id", "P"),
            NatMap::GammaMod2 => ("Gamma", "Z/2 (x) Id"),
            NatMap::PsiMod2 => ("Psi", "Z/2 (x) Id"),
            NatMap::PsiIncl => ("Psi", "Tensor2"),
            NatMap::Wedge => ("Tensor2", "Lambda2"),
            NatMap::TildeProj => ("Tensor2", "LambdaTilde2"),
            NatMap::TildeWedge => ("LambdaTilde2", "Lambda2"),
        }
    }
}

impl fmt::Display for NatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NatMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NatMap::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown natural map `{s}`")))
    }
}

/// `Z/2 ⊗ A` with the pairing `(1, a) ↦ a mod 2`.
pub fn mod_two(a: &FgAbGroup) -> Tensor {
    tensor(&FgAbGroup::cyclic(2), a)
}

/// The reduction `A → Z/2 ⊗ A`.
pub fn mod_two_projection(a: &FgAbGroup) -> AbHom {
    let t = mod_two(a);
    let cols: Vec<Elem> = (0..a.ngens()).map(|i| t.pair(&[1], &a.gen(i))).collect();
    AbHom::from_images(a.clone(), t.group().clone(), &cols).expect("reduction mod 2")
}

/// The homomorphism out of `v` determined by images of its raw generators.
pub(crate) fn map_out_of(
    v: &FunctorValue,
    target: &FgAbGroup,
    image: impl Fn(RawGen) -> Elem,
) -> AbHom {
    let images: Vec<Elem> = v.raw_images().into_iter().map(image).collect();
    v.hom_from_raw(target, &images)
        .unwrap_or_else(|e| panic!("{} map is not well defined: {e}", v.functor()))
}

/// The natural map `name` at `A`.
pub fn nat_map(name: NatMap, a: &FgAbGroup) -> AbHom {
    let e = |i: usize| a.gen(i);
    let value = |f: Functor| quad_value(f, a);
    match name {
        NatMap::J => {
            let (s, p) = (value(Functor::Sym2), value(Functor::P));
            map_out_of(&s, p.group(), |g| match g {
                RawGen::Product(i, j) => p.cross(&e(i), &e(j)),
                _ => unreachable!(),
            })
        }
        NatMap::Q => {
            let p = value(Functor::P);
            map_out_of(&p, a, |g| match g {
                RawGen::Quad(i) => e(i),
                _ => a.zero_elem(),
            })
        }
        NatMap::Tau | NatMap::TauPrime => {
            let gamma = value(Functor::Gamma);
            let t = value(if name == NatMap::Tau { Functor::Tensor2 } else { Functor::Psi });
            map_out_of(&gamma, t.group(), |g| match g {
                RawGen::Quad(i) => t.quad(&e(i)),
                RawGen::Pair(i, j) => t.cross(&e(i), &e(j)),
                _ => unreachable!(),
            })
        }
        NatMap::Iota => {
            let (phi, gamma) = (value(Functor::Phi), value(Functor::Gamma));
            map_out_of(&phi, gamma.group(), |g| match g {
                RawGen::Phi(k) => {
                    let n = phi.phi_generators()[k].1;
                    gamma.group().scale(1 << n, &gamma.quad(&phi.phi_representative(k)))
                }
                _ => unreachable!(),
            })
        }
        NatMap::Nu => {
            let (p, gamma) = (value(Functor::P), value(Functor::Gamma));
            map_out_of(&p, gamma.group(), |g| match g {
                RawGen::Quad(i) => gamma.quad(&e(i)),
                RawGen::Pair(i, j) => gamma.cross(&e(i), &e(j)),
                _ => unreachable!(),
            })
        }
        NatMap::FPm => {
            let p = value(Functor::P);
            let cols: Vec<Elem> = (0..a.ngens())
                .map(|i| p.group().sub(&p.quad(&e(i)), &p.quad(&a.neg(&e(i)))))
                .collect();
            AbHom::from_images(a.clone(), p.group().clone(), &cols).expect("f_pm")
        }
        NatMap::GammaMod2 => {
            let gamma = value(Functor::Gamma);
            let t = mod_two(a);
            let red = |x: &[i128]| t.pair(&[1], x);
            map_out_of(&gamma, t.group(), |g| match g {
                RawGen::Quad(i) => red(&e(i)),
                RawGen::Pair(i, j) => {
                    let s = a.add(&e(i), &e(j));
                    t.group().sub(&t.group().sub(&red(&s), &red(&e(i))), &red(&e(j)))
                }
                _ => unreachable!(),
            })
        }
        NatMap::PsiMod2 => nat_map(NatMap::GammaMod2, a)
            .descend_along(&nat_map(NatMap::TauPrime, a))
            .expect("gamma_mod2 kills the kernel of tau_prime"),
        NatMap::PsiIncl => {
            let (psi, t) = (value(Functor::Psi), value(Functor::Tensor2));
            map_out_of(&psi, t.group(), |g| match g {
                RawGen::Quad(i) => t.quad(&e(i)),
                RawGen::Pair(i, j) => t.cross(&e(i), &e(j)),
                _ => unreachable!(),
            })
        }
        NatMap::Wedge | NatMap::TildeProj | NatMap::TildeWedge => {
            let (src, dst) = match name {
                NatMap::Wedge => (Functor::Tensor2, Functor::Lambda2),
                NatMap::TildeProj => (Functor::Tensor2, Functor::LambdaTilde2),
                _ => (Functor::LambdaTilde2, Functor::Lambda2),
            };
            let (s, t) = (value(src), value(dst));
            map_out_of(&s, t.group(), |g| match g {
                RawGen::Product(i, j) => t.product(&e(i), &e(j)),
                _ => unreachable!(),
            })
        }
    }
}

/// `F(h)` computed on generators, e.g. `Γ(h)(γ(a)) = γ(h(a))`.
pub fn induced_map(functor: Functor, h: &AbHom) -> AbHom {
    let src = quad_value(functor, h.source());
    let dst = quad_value(functor, h.target());
    let he = |i: usize| h.image_of_gen(i);
    map_out_of(&src, dst.group(), |g| match g {
        RawGen::Quad(i) => dst.quad(&he(i)),
        RawGen::Pair(i, j) => dst.cross(&he(i), &he(j)),
        RawGen::Product(i, j) => dst.product(&he(i), &he(j)),
        RawGen::Phi(k) => {
            let n = src.phi_generators()[k].1;
            dst.phi_class(n, &h.apply(&src.phi_representative(k)))
        }
    })
}

/// Outcome of comparing `F(A⊕B)` with `F(A) ⊕ F(B) ⊕ A⊗B`.
#[derive(Clone, Debug)]
pub struct CrossEffectCheck {
    pub holds: bool,
    /// `F(A) ⊕ F(B) ⊕ A⊗B → F(A⊕B)` built from `F(inclusions)` and the cross effect.
    pub witness: AbHom,
    /// Description of the failure when `holds` is false.
    pub counterexample: Option<String>,
}

/// Checks the cross-effect decomposition for `P`, `Gamma` or `Psi`.
pub fn cross_effect_check(functor: Functor, a: &FgAbGroup, b: &FgAbGroup) -> Result<CrossEffectCheck> {
    if !matches!(functor, Functor::P | Functor::Gamma | Functor::Psi) {
        return Err(Error::Invalid(format!("no cross-effect decomposition check for {functor}")));
    }
    let sum = crate::abelian::direct_sum(&[a.clone(), b.clone()]);
    let fs = quad_value(functor, &sum.group);
    let fa = induced_map(functor, &sum.injections[0]);
    let fb = induced_map(functor, &sum.injections[1]);
    let t = tensor(a, b);
    let cols: Vec<Elem> = (0..t.group().ngens())
        .map(|k| {
            let raw = t.pres.raw(&t.group().gen(k));
            let mut acc = fs.group().zero_elem();
            for (idx, &c) in raw.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let (i, j) = (idx / b.ngens(), idx % b.ngens());
                let x = sum.injections[0].image_of_gen(i);
                let y = sum.injections[1].image_of_gen(j);
                acc = fs.group().add(&acc, &fs.group().scale(c, &fs.cross(&x, &y)));
            }
            acc
        })
        .collect();
    let cross = AbHom::from_images(t.group().clone(), fs.group().clone(), &cols)?;
    let parts = crate::abelian::direct_sum(&[
        fa.source().clone(),
        fb.source().clone(),
        t.group().clone(),
    ]);
    let witness = parts.copair(fs.group(), &[fa, fb, cross]);
    let analysis = witness.analyze();
    let counterexample = if !analysis.kernel.group.is_trivial() {
        Some(format!("kernel {} of the comparison map", analysis.kernel.group))
    } else if !analysis.cokernel.is_trivial() {
        Some(format!("cokernel {} of the comparison map", analysis.cokernel))
    } else {
        None
    };
    Ok(CrossEffectCheck { holds: counterexample.is_none(), witness, counterexample })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn tau_prime_iso_on_z() {
        assert!(nat_map(NatMap::TauPrime, &g("Z")).is_iso());
        assert!(nat_map(NatMap::TauPrime, &g("Z/9")).is_iso());
        assert!(!nat_map(NatMap::TauPrime, &g("Z/4")).is_iso());
    }

    #[test]
    fn q_after_j_is_zero() {
        let a = g("Z/2 + Z/4 + Z");
        assert!(nat_map(NatMap::Q, &a).compose(&nat_map(NatMap::J, &a)).is_zero());
    }

    #[test]
    fn iota_on_z2() {
        let i = nat_map(NatMap::Iota, &g("Z/2"));
        assert_eq!(i.target(), &g("Z/4"));
        assert!(i.is_injective());
        assert_eq!(i.apply(&[1]), vec![2]);
    }

    #[test]
    fn induced_examples() {
        let two = AbHom::from_images(g("Z"), g("Z"), &[vec![2]]).unwrap();
        assert_eq!(induced_map(Functor::Gamma, &two).apply(&[1]), vec![4]);
        let inc = AbHom::from_images(g("Z/2"), g("Z/4"), &[vec![2]]).unwrap();
        assert!(induced_map(Functor::Psi, &inc).is_zero());
        let a = g("Z/2 + Z/6 + Z");
        for f in [Functor::P, Functor::Gamma, Functor::Psi, Functor::Sym2, Functor::Lambda2, Functor::Phi] {
            let id = induced_map(f, &AbHom::identity(&a));
            assert_eq!(id, AbHom::identity(id.source()), "{f}");
        }
    }

    #[test]
    fn gamma_mod2_factors() {
        let a = g("Z/2 + Z/4 + Z");
        let lhs = nat_map(NatMap::GammaMod2, &a);
        let rhs = nat_map(NatMap::PsiMod2, &a).compose(&nat_map(NatMap::TauPrime, &a));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cross_effects() {
        let c = cross_effect_check(Functor::Gamma, &g("Z"), &g("Z")).unwrap();
        assert!(c.holds);
        assert_eq!(c.witness.target(), &FgAbGroup::free(3));
        let c = cross_effect_check(Functor::P, &g("Z/2"), &g("Z/2")).unwrap();
        assert!(c.holds);
        assert_eq!(c.witness.target(), &g("Z/4 + Z/4 + Z/2"));
        assert!(cross_effect_check(Functor::Psi, &g("Z/6"), &FgAbGroup::zero()).unwrap().holds);
    }
}

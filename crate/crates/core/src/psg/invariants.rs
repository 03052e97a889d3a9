use super::group::PreSquareGroup;
use crate::abelian::{homology, AbHom, Elem, FgAbGroup, Subgroup};
use crate::error::{Error, Result};
use crate::quadfun::{map_out_of, mod_two_projection, nat_map, quad_value, Functor, NatMap, RawGen};

/// `(πₙ, πₙ₊₁, k: Γₙ(πₙ) → πₙ₊₁)` with `Γ₂ = Γ` and `Γₙ = Z/2 ⊗ −` for `n ≥ 3`;
/// the involution on `πₙ₊₁` is present for `Π*(2,3)` objects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTriple {
    pub n: u32,
    pub pi_n: FgAbGroup,
    pub pi_n1: FgAbGroup,
    pub involution: Option<AbHom>,
    pub k: AbHom,
}

/// `Γₙ(A)`.
pub fn gamma_n(n: u32, a: &FgAbGroup) -> FgAbGroup {
    if n == 2 {
        quad_value(Functor::Gamma, a).group().clone()
    } else {
        crate::quadfun::mod_two(a).group().clone()
    }
}

impl KTriple {
    /// `(π₂, π₃, k: Γ(π₂) → π₃)`.
    pub fn whitehead(pi2: FgAbGroup, k: AbHom, involution: Option<AbHom>) -> Result<Self> {
        let t = KTriple { n: 2, pi_n1: k.target().clone(), pi_n: pi2, involution, k };
        t.check()?;
        Ok(t)
    }

    /// `(πₙ, πₙ₊₁, k: Z/2 ⊗ πₙ → πₙ₊₁)` for `n ≥ 3`.
    pub fn stable(pi_n: FgAbGroup, k: AbHom) -> Result<Self> {
        let t = KTriple { n: 3, pi_n1: k.target().clone(), pi_n, involution: None, k };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        if self.k.source() != &gamma_n(self.n, &self.pi_n) || self.k.target() != &self.pi_n1 {
            return Err(Error::Invalid(format!(
                "k must map Gamma_{}({}) to {}",
                self.n, self.pi_n, self.pi_n1
            )));
        }
        if let Some(s) = &self.involution {
            if s.source() != &self.pi_n1
                || s.target() != &self.pi_n1
                || s.compose(s) != AbHom::identity(&self.pi_n1)
            {
                return Err(Error::Invalid("the involution must be an involution of pi_n1".into()));
            }
        }
        Ok(())
    }

    /// The involution, `−Id` when absent.
    pub fn involution_or_minus(&self) -> AbHom {
        self.involution.clone().unwrap_or_else(|| AbHom::identity(&self.pi_n1).neg())
    }

    /// `k∘ι = 0` and, in `Π*(2,3)`, `σk = −k`.
    pub fn is_flat(&self) -> bool {
        self.n == 2
            && self.k.compose(&nat_map(NatMap::Iota, &self.pi_n)).is_zero()
            && self.involution_or_minus().compose(&self.k) == self.k.neg()
    }

    /// Whether `(φ₀, φ₁)` is an isomorphism of triples from `self` to `other`:
    /// both isomorphisms, commuting with `k` and with the involutions.
    pub fn is_iso_via(&self, other: &KTriple, phi0: &AbHom, phi1: &AbHom) -> bool {
        if self.n.min(3) != other.n.min(3) || !phi0.is_iso() || !phi1.is_iso() {
            return false;
        }
        let g = match self.n {
            2 => crate::quadfun::induced_map(Functor::Gamma, phi0),
            _ => crate::quadfun::mod_two(&self.pi_n)
                .map(&crate::quadfun::mod_two(&other.pi_n), &AbHom::identity(&FgAbGroup::cyclic(2)), phi0),
        };
        if phi1.compose(&self.k) != other.k.compose(&g) {
            return false;
        }
        match (&self.involution, &other.involution) {
            (None, None) => true,
            _ => phi1.compose(&self.involution_or_minus())
                == other.involution_or_minus().compose(phi1),
        }
    }
}

/// The homotopy invariants of a presquare group.
#[derive(Clone, Debug)]
pub struct PsgInvariants {
    pub pi0: FgAbGroup,
    /// `ker P ⊆ Mee`.
    pub pi1: Subgroup,
    /// `σ` restricted to `π₁`.
    pub sigma1: AbHom,
    /// `{a ∈ π₁ : σa = −a}`.
    pub pi1_minus: Subgroup,
    /// `k: Γ(π₀) → π₁`, `γ(x̄) ↦ {x, x}`.
    pub k: AbHom,
    pub is_psg0: bool,
    pub is_psgs: bool,
    pub is_flat: bool,
}

impl PsgInvariants {
    pub fn triple(&self) -> KTriple {
        KTriple {
            n: 2,
            pi_n: self.pi0.clone(),
            pi_n1: self.pi1.group.clone(),
            involution: Some(self.sigma1.clone()),
            k: self.k.clone(),
        }
    }
}

/// `k` as a map into `Mee`: `γ(e_i) ↦ B_ii` and `(e_i|e_j)_γ ↦ B_ij + B_ji`.
fn k_into_mee(m: &PreSquareGroup) -> AbHom {
    let gamma = quad_value(Functor::Gamma, m.pi0());
    let b = m.bracket();
    map_out_of(&gamma, m.mee(), |g| match g {
        RawGen::Quad(i) => b[i][i].clone(),
        RawGen::Pair(i, j) => m.mee().add(&b[i][j], &b[j][i]),
        _ => unreachable!(),
    })
}

impl PreSquareGroup {
    pub fn invariants(&self) -> PsgInvariants {
        let pi0 = self.pi0().clone();
        let pi1 = self.p().kernel();
        let sigma1 =
            self.sigma().compose(&pi1.inclusion).lift_through(&pi1.inclusion).expect("Pσ = P");
        let id1 = AbHom::identity(&pi1.group);
        let plus = id1.add(&sigma1);
        let pi1_minus = plus.kernel();
        let k = k_into_mee(self).lift_through(&pi1.inclusion).expect("P{x,x} = 0");
        let is_psg0 = plus.is_zero();
        let is_psgs = sigma1 == id1;
        let is_flat = k.compose(&nat_map(NatMap::Iota, &pi0)).is_zero();
        PsgInvariants { pi0, pi1, sigma1, pi1_minus, k, is_psg0, is_psgs, is_flat }
    }

    pub fn is_psg0(&self) -> bool {
        let pi1 = self.p().kernel();
        self.sigma().add(&AbHom::identity(self.mee())).compose(&pi1.inclusion).is_zero()
    }

    pub fn is_psgs(&self) -> bool {
        self.sigma() == &AbHom::identity(self.mee())
    }
}

/// The stable invariants, read off the complex `Mee --(Id−σ)--> Mee --P--> Me`.
#[derive(Clone, Debug)]
pub struct StableInvariants {
    /// `Mee/(Id − σ) → Me̅e`.
    pub quotient: AbHom,
    /// `π̄₁ = ker(Mee/(Id − σ) → Me)`.
    pub pi1_bar: Subgroup,
    /// `k̄: Z/2 ⊗ π₀ → π̄₁`, `x̄ ↦ {x, x}`.
    pub k_bar: AbHom,
    /// The reflection into `PSG_s`.
    pub underline: PreSquareGroup,
    /// `ε: π₁ → π̄₁`.
    pub epsilon: AbHom,
}

impl StableInvariants {
    pub fn triple(&self, pi0: &FgAbGroup) -> KTriple {
        KTriple {
            n: 3,
            pi_n: pi0.clone(),
            pi_n1: self.pi1_bar.group.clone(),
            involution: None,
            k: self.k_bar.clone(),
        }
    }
}

impl PreSquareGroup {
    pub fn stable_invariants(&self) -> StableInvariants {
        let mee = self.mee();
        let id = AbHom::identity(mee);
        let (mbar, proj) = id.sub(self.sigma()).cokernel();
        let pbar = self.p().descend_along(&proj).expect("Pσ = P");
        let pi1_bar = pbar.kernel();
        let q = self.pi0();
        let b = self.bracket();
        let diag: Vec<Elem> = (0..q.ngens()).map(|i| proj.apply(&b[i][i])).collect();
        let quad = AbHom::from_images(q.clone(), mbar.clone(), &diag)
            .expect("x ↦ {x,x} is additive modulo Id − σ");
        let k_bar = quad
            .descend_along(&mod_two_projection(q))
            .expect("2{x,x} lies in the image of Id − σ")
            .lift_through(&pi1_bar.inclusion)
            .expect("P{x,x} = 0");
        let pi1 = self.p().kernel();
        let epsilon =
            proj.compose(&pi1.inclusion).lift_through(&pi1_bar.inclusion).expect("P = P̄∘proj");
        let bracket = b.iter().map(|r| r.iter().map(|x| proj.apply(x)).collect()).collect();
        let underline = PreSquareGroup::from_parts(
            self.me().clone(),
            mbar.clone(),
            AbHom::identity(&mbar),
            pbar,
            bracket,
        )
        .expect("shapes");
        StableInvariants { quotient: proj, pi1_bar, k_bar, underline, epsilon }
    }

    /// `H_n` of `… → Mee --(Id+σ)--> Mee --(Id−σ)--> Mee --(Id+σ)--> …` above `π̄₁`:
    /// returns `(ker(Id−σ)/im(Id+σ), ker(Id+σ)/im(Id−σ))`.
    pub fn higher_homology(&self) -> (FgAbGroup, FgAbGroup) {
        let id = AbHom::identity(self.mee());
        let plus = id.add(self.sigma());
        let minus = id.sub(self.sigma());
        (homology(&plus, &minus), homology(&minus, &plus))
    }

    /// The Moore complex `Mee --P--> Me` of the simplicial group `F(S¹)⊙M`, with its
    /// homology `(π₀, π₁)`.
    pub fn moore_s1(&self) -> MooreComplex {
        let pi1 = self.p().kernel().group;
        MooreComplex {
            mee: self.mee().clone(),
            me: self.me().clone(),
            boundary: self.p().clone(),
            h0: self.pi0().clone(),
            h1: pi1,
        }
    }
}

/// A two-term complex `Mee → Me` with the centre part of `Me` as the target of `P`.
#[derive(Clone, Debug)]
pub struct MooreComplex {
    pub mee: FgAbGroup,
    pub me: crate::nil2::Nil2Group,
    pub boundary: AbHom,
    pub h0: FgAbGroup,
    pub h1: FgAbGroup,
}

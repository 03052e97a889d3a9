use std::fmt;

use crate::abelian::{checked_mul, AbHom, Elem, FgAbGroup};
use crate::error::{Error, Result};
use crate::nil2::{Nil2Elem, Nil2Group};

/// `Σ x_i y_j B_ij` on canonical representatives.
pub(crate) fn form_at(target: &FgAbGroup, form: &[Vec<Elem>], x: &[i128], y: &[i128]) -> Elem {
    let mut acc = target.zero_elem();
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            if yj != 0 {
                acc = target.add(&acc, &target.scale(checked_mul(xi, yj), &form[i][j]));
            }
        }
    }
    acc
}

/// The form `(i, j) ↦ push(B(along e_i, along e_j))` on the source of `along`.
pub(crate) fn pull_form(
    form: &[Vec<Elem>],
    inner: &FgAbGroup,
    along: &AbHom,
    push: &AbHom,
) -> Vec<Vec<Elem>> {
    let q = along.source();
    let imgs: Vec<Elem> = (0..q.ngens()).map(|i| inner.reduce(&along.image_of_gen(i))).collect();
    imgs.iter()
        .map(|x| imgs.iter().map(|y| push.apply(&form_at(push.source(), form, x, y))).collect())
        .collect()
}

pub(crate) fn add_forms(c: &FgAbGroup, forms: &[Vec<Vec<Elem>>]) -> Vec<Vec<Elem>> {
    let mut out = forms[0].clone();
    for f in &forms[1..] {
        for (row, frow) in out.iter_mut().zip(f) {
            for (x, y) in row.iter_mut().zip(frow) {
                *x = c.add(x, y);
            }
        }
    }
    out
}

/// A presquare group `Mee --P--> Me` with involution `σ` on `Mee` and bracket
/// `{−,−}: Me × Me → Mee`.
///
/// `Me` is stored as a central extension of `π₀ = coker P` by `im P`, so `P` is
/// onto the centre coordinates. The bracket only depends on `π₀` and is kept as
/// the matrix `B_ij = {e_i, e_j}` on the generators of `π₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreSquareGroup {
    me: Nil2Group,
    mee: FgAbGroup,
    sigma: AbHom,
    p: AbHom,
    bracket: Vec<Vec<Elem>>,
}

/// The first failing condition of a presquare group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// `σ² = Id`.
    Involution,
    /// `Pσ = P`.
    SigmaP,
    /// `σ{x,y} + {y,x} = 0`.
    Antisymmetry,
    /// `P{x,y} = x + y − x − y`.
    Commutator,
    /// `{x, Pa} = 0`.
    CentralBracket,
    /// `{x+y, z} = {x,z} + {y,z}` and its mirror.
    Bilinearity,
    /// `P` maps onto the centre coordinates of `Me`.
    CenterIsImage,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Involution => "sigma^2 = Id",
            Axiom::SigmaP => "(a) P sigma = P",
            Axiom::Antisymmetry => "(b) sigma{x,y} + {y,x} = 0",
            Axiom::Commutator => "(c) P{x,y} = x+y-x-y",
            Axiom::CentralBracket => "(d) {x,Pa} = 0",
            Axiom::Bilinearity => "bracket bilinear",
            Axiom::CenterIsImage => "P onto the centre part of Me",
        };
        f.write_str(s)
    }
}

impl PreSquareGroup {
    /// Checks the shapes of the data; the axioms are checked by [`validate`](Self::validate).
    pub fn from_parts(
        me: Nil2Group,
        mee: FgAbGroup,
        sigma: AbHom,
        p: AbHom,
        bracket: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        let n = me.quotient().ngens();
        if sigma.source() != &mee || sigma.target() != &mee {
            return Err(Error::Invalid("sigma must be an endomorphism of Mee".into()));
        }
        if p.source() != &mee || p.target() != me.center() {
            return Err(Error::Invalid("P must map Mee to the centre part of Me".into()));
        }
        if bracket.len() != n || bracket.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("bracket must be a {n}x{n} matrix")));
        }
        let bracket = bracket.iter().map(|r| r.iter().map(|x| mee.reduce(x)).collect()).collect();
        Ok(PreSquareGroup { me, mee, sigma, p, bracket })
    }

    /// [`from_parts`](Self::from_parts) followed by [`validate`](Self::validate).
    pub fn new(
        me: Nil2Group,
        mee: FgAbGroup,
        sigma: AbHom,
        p: AbHom,
        bracket: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        let m = Self::from_parts(me, mee, sigma, p, bracket)?;
        m.validate().map_err(|a| Error::Invalid(format!("not a presquare group: {a}")))?;
        Ok(m)
    }

    pub fn me(&self) -> &Nil2Group {
        &self.me
    }

    pub fn mee(&self) -> &FgAbGroup {
        &self.mee
    }

    pub fn sigma(&self) -> &AbHom {
        &self.sigma
    }

    pub fn p(&self) -> &AbHom {
        &self.p
    }

    pub fn bracket(&self) -> &[Vec<Elem>] {
        &self.bracket
    }

    /// `π₀ = coker P`, the quotient part of `Me`.
    pub fn pi0(&self) -> &FgAbGroup {
        self.me.quotient()
    }

    /// `{x, y}` for `x, y` given by their images in `π₀`.
    pub fn bracket_at(&self, x: &[i128], y: &[i128]) -> Elem {
        let q = self.pi0();
        form_at(&self.mee, &self.bracket, &q.reduce(x), &q.reduce(y))
    }

    pub fn bracket_of(&self, x: &Nil2Elem, y: &Nil2Elem) -> Elem {
        self.bracket_at(&x.q, &y.q)
    }

    /// Checks the axioms on generators, which decides them since all the maps
    /// involved are biadditive.
    pub fn validate(&self) -> std::result::Result<(), Axiom> {
        let id = AbHom::identity(&self.mee);
        if self.sigma.compose(&self.sigma) != id {
            return Err(Axiom::Involution);
        }
        if self.p.compose(&self.sigma) != self.p {
            return Err(Axiom::SigmaP);
        }
        let q = self.pi0();
        let n = q.ngens();
        for (i, &d) in q.factors().iter().enumerate() {
            if d == 0 {
                continue;
            }
            for j in 0..n {
                if !self.mee.is_zero(&self.mee.scale(d, &self.bracket[i][j]))
                    || !self.mee.is_zero(&self.mee.scale(d, &self.bracket[j][i]))
                {
                    return Err(Axiom::Bilinearity);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let s = self.sigma.apply(&self.bracket[i][j]);
                if !self.mee.is_zero(&self.mee.add(&s, &self.bracket[j][i])) {
                    return Err(Axiom::Antisymmetry);
                }
            }
        }
        let c = self.me.center();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (self.me.lift(&q.gen(i)), self.me.lift(&q.gen(j)));
                let comm = self.me.commutator(&x, &y);
                if !q.is_zero(&comm.q) || !c.eq_elem(&comm.c, &self.p.apply(&self.bracket[i][j])) {
                    return Err(Axiom::Commutator);
                }
            }
        }
        if !self.p.is_surjective() {
            return Err(Axiom::CenterIsImage);
        }
        Ok(())
    }

    /// Checks every axiom elementwise on all of `Me` and `Mee`, for `|Me|` and
    /// `|Mee|` at most `max_order`.
    pub fn validate_exhaustive(&self, max_order: i128) -> Result<std::result::Result<(), Axiom>> {
        let (me, mee) = (&self.me, &self.mee);
        let bound = |o: Option<i128>, what: &str| match o {
            Some(n) if n <= max_order => Ok(()),
            _ => Err(Error::Bound(format!("|{what}| exceeds the bound {max_order}"))),
        };
        bound(me.order_of_group(), "Me")?;
        bound(mee.order(), "Mee")?;
        let xs = me.elements().expect("finite");
        let ys = mee.elements().expect("finite");
        let br = |x: &Nil2Elem, y: &Nil2Elem| self.bracket_of(x, y);
        for a in &ys {
            if !mee.eq_elem(&self.sigma.apply(&self.sigma.apply(a)), a) {
                return Ok(Err(Axiom::Involution));
            }
        }
        for a in &ys {
            if self.p.apply(&self.sigma.apply(a)) != self.p.apply(a) {
                return Ok(Err(Axiom::SigmaP));
            }
        }
        for x in &xs {
            for y in &xs {
                if !mee.is_zero(&mee.add(&self.sigma.apply(&br(x, y)), &br(y, x))) {
                    return Ok(Err(Axiom::Antisymmetry));
                }
            }
        }
        for x in &xs {
            for y in &xs {
                if me.central(&self.p.apply(&br(x, y))) != me.commutator(x, y) {
                    return Ok(Err(Axiom::Commutator));
                }
            }
        }
        for x in &xs {
            for a in &ys {
                let pa = me.central(&self.p.apply(a));
                if !mee.is_zero(&br(x, &pa)) || !mee.is_zero(&br(&pa, x)) {
                    return Ok(Err(Axiom::CentralBracket));
                }
            }
        }
        for x in &xs {
            for y in &xs {
                let s = me.add(x, y);
                for z in &xs {
                    let l = mee.sub(&br(&s, z), &mee.add(&br(x, z), &br(y, z)));
                    let r = mee.sub(&br(z, &s), &mee.add(&br(z, x), &br(z, y)));
                    if !mee.is_zero(&l) || !mee.is_zero(&r) {
                        return Ok(Err(Axiom::Bilinearity));
                    }
                }
            }
        }
        let image: std::collections::BTreeSet<Elem> = ys.iter().map(|a| self.p.apply(a)).collect();
        if image.len() as i128 != me.center().order().expect("finite") {
            return Ok(Err(Axiom::CenterIsImage));
        }
        Ok(Ok(()))
    }

    /// The presquare group with `Me = 0`, `Mee = a`, `P = 0` and the given involution.
    pub fn from_involution(sigma: AbHom) -> Result<Self> {
        let z = FgAbGroup::zero();
        let mee = sigma.source().clone();
        PreSquareGroup::from_parts(
            Nil2Group::abelian(z.clone(), z.clone()),
            mee.clone(),
            sigma,
            AbHom::zero(&mee, &z),
            Vec::new(),
        )
    }
}

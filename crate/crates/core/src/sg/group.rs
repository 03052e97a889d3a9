use std::fmt;

use super::pointmap::PointMap;
use crate::abelian::{AbHom, Elem, FgAbGroup, Subgroup};
use crate::error::{Error, Result};
use crate::nil2::{Nil2Elem, Nil2Group};
use crate::psg::{form_at, PreSquareGroup};

/// Checks are exhaustive on groups with at most this many elements.
pub const DEFAULT_SAMPLE: usize = 128;

/// Number of sample points on larger groups.
const WINDOW: usize = 32;

/// The quadratic map `H: Qe → Qee`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadraticMap {
    /// Values over the enumeration of a finite `Qe` (by `q`, then `c`).
    Table(Vec<Elem>),
    /// `H(q, c) = h(c) + g(q)`, with `cross` the cross effect as a form on `π₀`.
    Structured { h: AbHom, g: PointMap, cross: Vec<Vec<Elem>> },
}

impl QuadraticMap {
    /// `f∘H`.
    pub fn push(&self, f: &AbHom) -> QuadraticMap {
        match self {
            QuadraticMap::Table(t) => QuadraticMap::Table(t.iter().map(|v| f.apply(v)).collect()),
            QuadraticMap::Structured { h, g, cross } => QuadraticMap::Structured {
                h: f.compose(h),
                g: g.push(f),
                cross: cross.iter().map(|r| r.iter().map(|v| f.apply(v)).collect()).collect(),
            },
        }
    }
}

/// A square group `Qee --P--> Qe` with quadratic map `H: Qe → Qee`.
///
/// As for presquare groups, `Qe` is stored as a central extension of `π₀` by `im P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareGroup {
    qe: Nil2Group,
    qee: FgAbGroup,
    h: QuadraticMap,
    p: AbHom,
}

/// The first failing identity of a square group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Identity {
    /// `P` is onto the centre part of `Qe`.
    CenterIsImage,
    /// `(x|y)_H` is bilinear and agrees with the stored cross form.
    CrossBilinear,
    /// `(Pa|x)_H = 0`.
    ImageCross,
    /// `P(x|y)_H = x + y − x − y`.
    Commutator,
    /// `PHP(a) = P(a) + P(a)`.
    Php,
    /// `(x|Pa)_H = 0`.
    CrossImage,
    /// `H(x + y − x − y) = −(y|x)_H + (x|y)_H`.
    CommutatorValue,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Identity::CenterIsImage => "P onto the centre",
            Identity::CrossBilinear => "(x|y)_H bilinear",
            Identity::ImageCross => "(Pa|x)_H = 0",
            Identity::Commutator => "P(x|y)_H = x+y-x-y",
            Identity::Php => "PHP(a) = P(a)+P(a)",
            Identity::CrossImage => "(x|Pa)_H = 0",
            Identity::CommutatorValue => "H(x+y-x-y) = -(y|x)_H + (x|y)_H",
        };
        f.write_str(s)
    }
}

/// Result of [`SquareGroup::validate_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SgCheck {
    pub result: std::result::Result<(), Identity>,
    pub exhaustive: bool,
}

/// Elements of `g`: all of them when `|g| <= cap`, otherwise a sample.
pub(crate) fn sample_nil2(g: &Nil2Group, cap: usize) -> (Vec<Nil2Elem>, bool) {
    if let Some(o) = g.order_of_group() {
        if o <= cap as i128 {
            return (g.elements().expect("finite"), true);
        }
    }
    let (qs, _) = g.quotient().sample(cap.min(WINDOW));
    let (cs, _) = g.center().sample(cap.min(16));
    let xs = qs.iter().enumerate().map(|(i, q)| Nil2Elem::new(q.clone(), cs[(i * 7) % cs.len()].clone())).collect();
    (xs, false)
}

impl SquareGroup {
    /// Shape checks only.
    pub fn from_parts(qe: Nil2Group, qee: FgAbGroup, h: QuadraticMap, p: AbHom) -> Result<Self> {
        if p.source() != &qee || p.target() != qe.center() {
            return Err(Error::Invalid(format!("P must map {qee} to {}", qe.center())));
        }
        let q = qe.quotient();
        match &h {
            QuadraticMap::Table(t) => {
                let n = qe.order_of_group().ok_or_else(|| Error::Invalid("table mode needs a finite Qe".into()))?;
                if t.len() as i128 != n || t.iter().any(|v| v.len() != qee.ngens()) {
                    return Err(Error::Invalid(format!("H needs {n} values in {qee}")));
                }
            }
            QuadraticMap::Structured { h, g, cross } => {
                if h.source() != qe.center() || h.target() != &qee {
                    return Err(Error::Invalid("h must map the centre of Qe to Qee".into()));
                }
                if g.domain() != q || g.codomain() != &qee {
                    return Err(Error::Invalid("g must map pi_0 to Qee".into()));
                }
                let n = q.ngens();
                if cross.len() != n || cross.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != qee.ngens())) {
                    return Err(Error::Invalid(format!("cross must be a {n}x{n} form with values in {qee}")));
                }
            }
        }
        let h = match h {
            QuadraticMap::Table(t) => QuadraticMap::Table(t.iter().map(|v| qee.reduce(v)).collect()),
            QuadraticMap::Structured { h, g, cross } => QuadraticMap::Structured {
                h,
                g,
                cross: cross.iter().map(|r| r.iter().map(|v| qee.reduce(v)).collect()).collect(),
            },
        };
        Ok(SquareGroup { qe, qee, h, p })
    }

    /// Shape checks and [`validate`](Self::validate).
    pub fn new(qe: Nil2Group, qee: FgAbGroup, h: QuadraticMap, p: AbHom) -> Result<Self> {
        let q = SquareGroup::from_parts(qe, qee, h, p)?;
        q.validate().map_err(|i| Error::Invalid(format!("not a square group: {i} fails")))?;
        Ok(q)
    }

    pub fn qe(&self) -> &Nil2Group {
        &self.qe
    }

    pub fn qee(&self) -> &FgAbGroup {
        &self.qee
    }

    pub fn quadratic(&self) -> &QuadraticMap {
        &self.h
    }

    pub fn p(&self) -> &AbHom {
        &self.p
    }

    pub fn pi0(&self) -> &FgAbGroup {
        self.qe.quotient()
    }

    pub fn pi1(&self) -> Subgroup {
        self.p.kernel()
    }

    /// `H(x)`.
    pub fn eval(&self, x: &Nil2Elem) -> Elem {
        match &self.h {
            QuadraticMap::Table(t) => {
                let x = self.qe.reduce(x);
                let nc = self.qe.center().order().expect("finite") as usize;
                t[self.pi0().elem_index(&x.q) * nc + self.qe.center().elem_index(&x.c)].clone()
            }
            QuadraticMap::Structured { h, g, .. } => self.qee.add(&h.apply(&x.c), &g.eval(&x.q)),
        }
    }

    /// `(x|y)_H = H(x + y) − H(x) − H(y)`.
    pub fn cross_at(&self, x: &Nil2Elem, y: &Nil2Elem) -> Elem {
        let e = &self.qee;
        e.sub(&e.sub(&self.eval(&self.qe.add(x, y)), &self.eval(x)), &self.eval(y))
    }

    /// The cross effect on generator lifts, `B_ij = (e_i|e_j)_H`.
    pub fn cross_form(&self) -> Vec<Vec<Elem>> {
        match &self.h {
            QuadraticMap::Structured { cross, .. } => cross.clone(),
            QuadraticMap::Table(_) => {
                let q = self.pi0();
                let lifts: Vec<Nil2Elem> = (0..q.ngens()).map(|i| self.qe.lift(&q.gen(i))).collect();
                lifts.iter().map(|x| lifts.iter().map(|y| self.cross_at(x, y)).collect()).collect()
            }
        }
    }

    /// `a ↦ H(Pa)`.
    pub fn hp(&self) -> AbHom {
        let imgs: Vec<Elem> =
            (0..self.qee.ngens()).map(|i| self.eval(&self.qe.central(&self.p.apply(&self.qee.gen(i))))).collect();
        AbHom::from_images(self.qee.clone(), self.qee.clone(), &imgs).expect("a ↦ H(Pa) is additive")
    }

    pub fn validate(&self) -> std::result::Result<(), Identity> {
        self.validate_with(DEFAULT_SAMPLE).result
    }

    /// Checks the identities on all of `Qe` and `Qee` when they have at most `cap`
    /// elements, otherwise on a sample.
    pub fn validate_with(&self, cap: usize) -> SgCheck {
        let (xs, xe) = sample_nil2(&self.qe, cap);
        let (ys, ye) = match self.qee.sample(cap) {
            (all, true) => (all, true),
            _ => (self.qee.sample(cap.min(WINDOW)).0, false),
        };
        let form = self.cross_form();
        let result = match xe {
            true => {
                let t = self.to_table(cap as i128).expect("small");
                let t = SquareGroup { qe: t.qe.tabulated(cap as i128).expect("small"), ..t };
                t.check_identities(&xs, &ys, &form)
            }
            false => self.check_identities(&xs, &ys, &form),
        };
        SgCheck { result, exhaustive: xe && ye }
    }

    /// The same square group with `H` as a table, for `|Qe| <= max_order`.
    pub fn to_table(&self, max_order: i128) -> Result<SquareGroup> {
        match self.qe.order_of_group() {
            Some(n) if n <= max_order => {}
            _ => return Err(Error::Bound(format!("|Qe| exceeds the bound {max_order}"))),
        }
        if let QuadraticMap::Table(_) = self.h {
            return Ok(self.clone());
        }
        let values = self.qe.elements().expect("finite").iter().map(|x| self.eval(x)).collect();
        Ok(SquareGroup { h: QuadraticMap::Table(values), ..self.clone() })
    }

    fn check_identities(&self, xs: &[Nil2Elem], ys: &[Elem], form: &[Vec<Elem>]) -> std::result::Result<(), Identity> {
        let (qe, e) = (&self.qe, &self.qee);
        if !self.p.is_surjective() {
            return Err(Identity::CenterIsImage);
        }
        let q = self.pi0();
        for (i, &d) in q.factors().iter().enumerate() {
            if d != 0 && (0..q.ngens()).any(|j| !e.is_zero(&e.scale(d, &form[i][j])) || !e.is_zero(&e.scale(d, &form[j][i]))) {
                return Err(Identity::CrossBilinear);
            }
        }
        let hx: Vec<Elem> = xs.iter().map(|x| self.eval(x)).collect();
        let n = xs.len();
        let mut crosses = Vec::with_capacity(n * n);
        for (x, hx1) in xs.iter().zip(&hx) {
            for (y, hy) in xs.iter().zip(&hx) {
                crosses.push(e.sub(&e.sub(&self.eval(&qe.add(x, y)), hx1), hy));
            }
        }
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in xs.iter().enumerate() {
                let (a, b) = (q.reduce(&x.q), q.reduce(&y.q));
                if !e.eq_elem(&crosses[i * n + j], &form_at(e, form, &a, &b)) {
                    return Err(Identity::CrossBilinear);
                }
            }
        }
        let cross = |x: &Nil2Elem, y: &Nil2Elem| self.cross_at(x, y);
        let images: Vec<Nil2Elem> = ys.iter().map(|a| qe.central(&self.p.apply(a))).collect();
        for pa in &images {
            for x in xs {
                if !e.is_zero(&cross(pa, x)) {
                    return Err(Identity::ImageCross);
                }
            }
        }
        let comms: Vec<Nil2Elem> =
            xs.iter().flat_map(|x| xs.iter().map(move |y| qe.reduce(&qe.commutator(x, y)))).collect();
        for (k, c) in comms.iter().enumerate() {
            if &qe.central(&self.p.apply(&crosses[k])) != c {
                return Err(Identity::Commutator);
            }
        }
        for (a, pa) in ys.iter().zip(&images) {
            let php = self.p.apply(&self.eval(pa));
            if !qe.center().eq_elem(&php, &self.p.apply(&e.scale(2, a))) {
                return Err(Identity::Php);
            }
        }
        for pa in &images {
            for x in xs {
                if !e.is_zero(&cross(x, pa)) {
                    return Err(Identity::CrossImage);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.eval(&comms[i * n + j]);
                if !e.eq_elem(&lhs, &e.sub(&crosses[i * n + j], &crosses[j * n + i])) {
                    return Err(Identity::CommutatorValue);
                }
            }
        }
        Ok(())
    }

    /// `℘(Q) = (Qe, Qee, σ = HP − Id, P, (−|−)_H)`.
    pub fn wp(&self) -> PreSquareGroup {
        let sigma = self.hp().sub(&AbHom::identity(&self.qee));
        PreSquareGroup::from_parts(self.qe.clone(), self.qee.clone(), sigma, self.p.clone(), self.cross_form())
            .expect("shapes agree")
    }

    /// The same square group with `H = h(c) + g(q)`.
    pub fn structured(&self) -> SquareGroup {
        if let QuadraticMap::Structured { .. } = self.h {
            return self.clone();
        }
        let c = self.qe.center();
        let h_imgs: Vec<Elem> = (0..c.ngens()).map(|i| self.eval(&self.qe.central(&c.gen(i)))).collect();
        let h = AbHom::from_images(c.clone(), self.qee.clone(), &h_imgs).expect("H is additive on im P");
        let q = self.pi0();
        let values = q.elements().expect("finite").iter().map(|x| self.eval(&self.qe.lift(x))).collect();
        let g = PointMap::table(q, &self.qee, values).expect("shapes");
        SquareGroup { h: QuadraticMap::Structured { h, g, cross: self.cross_form() }, ..self.clone() }
    }

    /// `(h, g)` with `H(q, c) = h(c) + g(q)`.
    pub fn split_parts(&self) -> (AbHom, PointMap) {
        match self.structured().h {
            QuadraticMap::Structured { h, g, .. } => (h, g),
            QuadraticMap::Table(_) => unreachable!(),
        }
    }

    /// `Q^α` with `H^α(x) = H(x) + α(x̄)`.
    pub fn twist(&self, alpha: &AbHom) -> Result<SquareGroup> {
        if alpha.source() != self.pi0() || alpha.target() != &self.qee {
            return Err(Error::Invalid(format!("alpha must map {} to {}", self.pi0(), self.qee)));
        }
        let h = match &self.h {
            QuadraticMap::Table(t) => {
                let nc = self.qe.center().order().expect("finite") as usize;
                let qs = self.pi0().elements().expect("finite");
                QuadraticMap::Table(
                    t.iter().enumerate().map(|(k, v)| self.qee.add(v, &alpha.apply(&qs[k / nc]))).collect(),
                )
            }
            QuadraticMap::Structured { h, g, cross } => QuadraticMap::Structured {
                h: h.clone(),
                g: PointMap::sum(vec![g.clone(), PointMap::hom(alpha.clone())]),
                cross: cross.clone(),
            },
        };
        Ok(SquareGroup { h, ..self.clone() })
    }

    /// `Δ: π₀ → π₁`, `x̄ ↦ HPH(x) + H(2x) − 4H(x)`.
    pub fn delta(&self) -> Result<AbHom> {
        let (qe, e) = (&self.qe, &self.qee);
        let q = self.pi0();
        let imgs: Vec<Elem> = (0..q.ngens())
            .map(|i| {
                let x = qe.lift(&q.gen(i));
                let hx = self.eval(&x);
                let hph = self.eval(&qe.central(&self.p.apply(&hx)));
                e.sub(&e.add(&hph, &self.eval(&qe.scale(2, &x))), &e.scale(4, &hx))
            })
            .collect();
        let d = AbHom::from_images(q.clone(), e.clone(), &imgs)
            .map_err(|_| Error::Invalid("Delta is not well defined on pi_0".into()))?;
        let pi1 = self.pi1();
        d.lift_through(&pi1.inclusion).ok_or_else(|| Error::Invalid("P∘Delta is not zero".into()))
    }

    /// The unique `α` with `H'(f_e x) = f_ee(H x) + α(x̄)` for a presquare group
    /// morphism `(f_e, f_ee): ℘(self) → ℘(other)`.
    pub fn alpha_defect(&self, other: &SquareGroup, f_e: &Nil2Map, f_ee: &AbHom) -> Result<AbHom> {
        if f_e.quotient.source() != self.pi0()
            || f_e.quotient.target() != other.pi0()
            || f_ee.source() != &self.qee
            || f_ee.target() != &other.qee
        {
            return Err(Error::Invalid("the morphism does not match the square groups".into()));
        }
        let e = &other.qee;
        let defect = |x: &Nil2Elem| e.sub(&other.eval(&f_e.apply(x)), &f_ee.apply(&self.eval(x)));
        let q = self.pi0();
        let imgs: Vec<Elem> = (0..q.ngens()).map(|i| defect(&self.qe.lift(&q.gen(i)))).collect();
        let alpha = AbHom::from_images(q.clone(), e.clone(), &imgs)
            .map_err(|_| Error::Domain("not a presquare group morphism".into()))?;
        let (xs, _) = sample_nil2(&self.qe, DEFAULT_SAMPLE);
        for x in &xs {
            if !e.eq_elem(&defect(x), &alpha.apply(&x.q)) {
                return Err(Error::Domain("not a presquare group morphism".into()));
            }
        }
        Ok(alpha)
    }
}

/// A homomorphism of central extensions `(q, c) ↦ (φq, ψc + t(q))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nil2Map {
    pub source: Nil2Group,
    pub target: Nil2Group,
    pub quotient: AbHom,
    pub center: AbHom,
    pub correction: PointMap,
}

impl Nil2Map {
    pub fn identity(g: &Nil2Group) -> Nil2Map {
        Nil2Map {
            source: g.clone(),
            target: g.clone(),
            quotient: AbHom::identity(g.quotient()),
            center: AbHom::identity(g.center()),
            correction: PointMap::zero(g.quotient(), g.center()),
        }
    }

    pub fn apply(&self, x: &Nil2Elem) -> Nil2Elem {
        let c = self.target.center().add(&self.center.apply(&x.c), &self.correction.eval(&x.q));
        self.target.reduce(&Nil2Elem::new(self.quotient.apply(&x.q), c))
    }

    /// Checks additivity on a sample.
    pub fn is_homomorphism(&self, cap: usize) -> bool {
        let (xs, _) = sample_nil2(&self.source, cap);
        xs.iter().all(|x| {
            xs.iter().all(|y| {
                self.apply(&self.source.add(x, y)) == self.target.reduce(&self.target.add(&self.apply(x), &self.apply(y)))
            })
        })
    }
}

use std::fmt;

use crate::abelian::{checked_mul, AbHom, Elem, FgAbGroup};
use crate::error::{Error, Result};

/// A normalized 2-cocycle `Q × Q → C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cocycle {
    /// Values `f(a, b)` at index `index(a)·|Q| + index(b)` in the lexicographic
    /// enumeration of a finite `Q`.
    Table(Vec<Elem>),
    Form(CocycleForm),
    /// `f(a, b) = push(g(along a, along b))` for the cocycle `g` of `inner`.
    Pullback { inner: Box<Nil2Group>, along: AbHom, push: AbHom },
    Sum(Vec<Cocycle>),
}

/// `f(a, b) = Σ a_i b_j B_ij + Σ_i [a_i + b_i ≥ d_i]·c_i` on canonical coordinates,
/// where `B` is biadditive on `Q` and `c_i` is the carry of the `i`-th cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleForm {
    pub bilinear: Vec<Vec<Elem>>,
    pub carries: Vec<Elem>,
}

impl CocycleForm {
    pub fn zero(q: &FgAbGroup, c: &FgAbGroup) -> Self {
        let n = q.ngens();
        CocycleForm { bilinear: vec![vec![c.zero_elem(); n]; n], carries: vec![c.zero_elem(); n] }
    }
}

/// A group of nilpotency class two given as a central extension of `Q` by `C`.
///
/// Elements are pairs `(q, c)` with `(q, c) + (q', c') = (q + q', c + c' + f(q, q'))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nil2Group {
    quotient: FgAbGroup,
    center: FgAbGroup,
    cocycle: Cocycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nil2Elem {
    pub q: Elem,
    pub c: Elem,
}

impl Nil2Elem {
    pub fn new(q: Elem, c: Elem) -> Self {
        Nil2Elem { q, c }
    }
}

impl fmt::Display for Nil2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}; {:?})", self.q, self.c)
    }
}

impl Nil2Group {
    /// Validates normalization and the cocycle condition (exhaustively for tables).
    pub fn new(quotient: FgAbGroup, center: FgAbGroup, cocycle: Cocycle) -> Result<Self> {
        let g = Nil2Group { quotient, center, cocycle };
        g.validate()?;
        Ok(g)
    }

    /// The split extension `Q × C`.
    pub fn abelian(quotient: FgAbGroup, center: FgAbGroup) -> Self {
        let cocycle = Cocycle::Form(CocycleForm::zero(&quotient, &center));
        Nil2Group { quotient, center, cocycle }
    }

    pub fn quotient(&self) -> &FgAbGroup {
        &self.quotient
    }

    pub fn center(&self) -> &FgAbGroup {
        &self.center
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    fn validate(&self) -> Result<()> {
        self.validate_cocycle(&self.cocycle)
    }

    fn validate_cocycle(&self, cocycle: &Cocycle) -> Result<()> {
        let (q, c) = (&self.quotient, &self.center);
        match cocycle {
            Cocycle::Pullback { inner, along, push } => {
                if along.source() != q || along.target() != inner.quotient() {
                    return Err(Error::Invalid("pullback map has the wrong ends".into()));
                }
                if push.source() != inner.center() || push.target() != c {
                    return Err(Error::Invalid("pushforward map has the wrong ends".into()));
                }
                Ok(())
            }
            Cocycle::Sum(parts) => parts.iter().try_for_each(|p| self.validate_cocycle(p)),
            Cocycle::Form(form) => {
                let n = q.ngens();
                if form.bilinear.len() != n
                    || form.bilinear.iter().any(|r| r.len() != n)
                    || form.carries.len() != n
                {
                    return Err(Error::Invalid(format!("cocycle form must be {n} x {n} with {n} carries")));
                }
                for row in &form.bilinear {
                    for x in row {
                        check_elem(c, x)?;
                    }
                }
                for x in &form.carries {
                    check_elem(c, x)?;
                }
                let d = q.factors();
                for i in 0..n {
                    for j in 0..n {
                        let b = &form.bilinear[i][j];
                        for k in [i, j] {
                            if d[k] != 0 && !c.is_zero(&c.scale(d[k], b)) {
                                return Err(Error::Invalid(format!(
                                    "bilinear entry ({i}, {j}) is not killed by {}",
                                    d[k]
                                )));
                            }
                        }
                    }
                    if d[i] == 0 && !c.is_zero(&form.carries[i]) {
                        return Err(Error::Invalid(format!("carry on infinite factor {i}")));
                    }
                }
                Ok(())
            }
            Cocycle::Table(t) => {
                let elems = q
                    .elements()
                    .ok_or_else(|| Error::Invalid("cocycle tables need a finite quotient".into()))?;
                let n = elems.len();
                if t.len() != n * n {
                    return Err(Error::Invalid(format!("cocycle table needs {} entries, got {}", n * n, t.len())));
                }
                for x in t {
                    check_elem(c, x)?;
                }
                for (k, x) in t.iter().enumerate() {
                    if (k < n || k % n == 0) && !c.is_zero(x) {
                        return Err(Error::Invalid("cocycle is not normalized".into()));
                    }
                }
                let sum: Vec<Vec<usize>> = elems
                    .iter()
                    .map(|a| elems.iter().map(|b| q.elem_index(&q.add(a, b))).collect())
                    .collect();
                for a in 0..n {
                    for b in 0..n {
                        let ab = sum[a][b];
                        for cc in 0..n {
                            let lhs = c.add(&t[a * n + b], &t[ab * n + cc]);
                            let rhs = c.add(&t[b * n + cc], &t[a * n + sum[b][cc]]);
                            if lhs != rhs {
                                return Err(Error::Invalid(format!(
                                    "cocycle condition fails at ({:?}, {:?}, {:?})",
                                    elems[a], elems[b], elems[cc]
                                )));
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// `f(a, b)`.
    pub fn cocycle_at(&self, a: &[i128], b: &[i128]) -> Elem {
        self.eval(&self.cocycle, a, b)
    }

    fn eval(&self, cocycle: &Cocycle, a: &[i128], b: &[i128]) -> Elem {
        let (q, c) = (&self.quotient, &self.center);
        let (a, b) = (q.reduce(a), q.reduce(b));
        match cocycle {
            Cocycle::Pullback { inner, along, push } => {
                push.apply(&inner.cocycle_at(&along.apply(&a), &along.apply(&b)))
            }
            Cocycle::Sum(parts) => {
                parts.iter().fold(c.zero_elem(), |acc, p| c.add(&acc, &self.eval(p, &a, &b)))
            }
            Cocycle::Table(t) => {
                let n = self.quotient_order();
                t[q.elem_index(&a) * n + q.elem_index(&b)].clone()
            }
            Cocycle::Form(form) => {
                let mut acc = c.zero_elem();
                let d = q.factors();
                for i in 0..a.len() {
                    if a[i] == 0 {
                        continue;
                    }
                    for j in 0..b.len() {
                        if b[j] != 0 {
                            acc = c.add(&acc, &c.scale(checked_mul(a[i], b[j]), &form.bilinear[i][j]));
                        }
                    }
                }
                for i in 0..a.len() {
                    if d[i] != 0 && a[i] + b[i] >= d[i] {
                        acc = c.add(&acc, &form.carries[i]);
                    }
                }
                acc
            }
        }
    }

    fn quotient_order(&self) -> usize {
        self.quotient.order().expect("finite quotient") as usize
    }

    /// The same extension data with cocycle `f + g`.
    pub fn add_cocycle(&self, other: &Cocycle) -> Result<Nil2Group> {
        let twisted = Nil2Group { cocycle: other.clone(), ..self.clone() };
        twisted.validate()?;
        let c = &self.center;
        let infinite = self.quotient.order().is_none();
        let cocycle = match (&self.cocycle, other) {
            (Cocycle::Form(x), Cocycle::Form(y)) => Cocycle::Form(CocycleForm {
                bilinear: x
                    .bilinear
                    .iter()
                    .zip(&y.bilinear)
                    .map(|(r, s)| r.iter().zip(s).map(|(u, v)| c.add(u, v)).collect())
                    .collect(),
                carries: x.carries.iter().zip(&y.carries).map(|(u, v)| c.add(u, v)).collect(),
            }),
            (x, y) if infinite || !matches!((x, y), (Cocycle::Table(_), _) | (_, Cocycle::Table(_))) => {
                Cocycle::Sum(vec![x.clone(), y.clone()])
            }
            _ => {
                let elems = self.quotient.elements().expect("finite quotient");
                let mut t = Vec::with_capacity(elems.len() * elems.len());
                for a in &elems {
                    for b in &elems {
                        t.push(c.add(&self.cocycle_at(a, b), &twisted.cocycle_at(a, b)));
                    }
                }
                Cocycle::Table(t)
            }
        };
        Ok(Nil2Group { cocycle, ..self.clone() })
    }

    /// The cocycle as a table, for finite `Q` with `|Q| <= max_order`.
    pub fn to_table(&self, max_order: i128) -> Result<Vec<Elem>> {
        let elems = self.bounded_elements(max_order)?;
        Ok(elems.iter().flat_map(|a| elems.iter().map(|b| self.cocycle_at(a, b))).collect())
    }

    /// The same group with its cocycle stored as a table, for `|Q| <= max_order`.
    pub fn tabulated(&self, max_order: i128) -> Result<Nil2Group> {
        if let Cocycle::Table(_) = self.cocycle {
            return Ok(self.clone());
        }
        Ok(Nil2Group { cocycle: Cocycle::Table(self.to_table(max_order)?), ..self.clone() })
    }

    /// `Σ q_i·(e_i, 0)`, summed in the order of the generators.
    pub fn word(&self, q: &[i128]) -> Nil2Elem {
        let q = self.quotient.reduce(q);
        q.iter().enumerate().fold(self.zero_elem(), |acc, (i, &k)| {
            if k == 0 {
                acc
            } else {
                self.add(&acc, &self.scale(k, &self.lift(&self.quotient.gen(i))))
            }
        })
    }

    /// The cocycle of the section [`word`](Self::word) as a form: commutators of the
    /// generator lifts below the diagonal and `d_i·(e_i, 0)` as carries. The map
    /// `(q, c) ↦ (q, c − word(q).c)` is an isomorphism onto the group with this form.
    pub fn word_form(&self) -> CocycleForm {
        let (q, c) = (&self.quotient, &self.center);
        let n = q.ngens();
        let lifts: Vec<Nil2Elem> = (0..n).map(|i| self.lift(&q.gen(i))).collect();
        let bilinear = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i > j { self.commutator(&lifts[i], &lifts[j]).c } else { c.zero_elem() })
                    .collect()
            })
            .collect();
        let carries = q
            .factors()
            .iter()
            .zip(&lifts)
            .map(|(&d, s)| if d == 0 { c.zero_elem() } else { self.scale(d, s).c })
            .collect();
        CocycleForm { bilinear, carries }
    }

    /// `Q' ×_φ C'` with cocycle `ψ∘f∘(φ × φ)`, for `φ: Q' → Q` and `ψ: C → C'`.
    pub fn pullback(&self, along: &AbHom, push: &AbHom) -> Nil2Group {
        assert_eq!(along.target(), &self.quotient);
        assert_eq!(push.source(), &self.center);
        Nil2Group {
            quotient: along.source().clone(),
            center: push.target().clone(),
            cocycle: Cocycle::Pullback {
                inner: Box::new(self.clone()),
                along: along.clone(),
                push: push.clone(),
            },
        }
    }

    /// The same quotient and cocycle with the centre pushed along `push`.
    pub fn push_center(&self, push: &AbHom) -> Nil2Group {
        self.pullback(&AbHom::identity(&self.quotient), push)
    }

    pub(crate) fn bounded_elements(&self, max_order: i128) -> Result<Vec<Elem>> {
        match self.quotient.order() {
            Some(n) if n <= max_order => Ok(self.quotient.elements().expect("finite")),
            Some(n) => Err(Error::Bound(format!("|{}| = {n} exceeds the bound {max_order}", self.quotient))),
            None => Err(Error::Bound(format!("{} is infinite", self.quotient))),
        }
    }

    pub fn zero_elem(&self) -> Nil2Elem {
        Nil2Elem::new(self.quotient.zero_elem(), self.center.zero_elem())
    }

    /// `(q, 0)`.
    pub fn lift(&self, q: &[i128]) -> Nil2Elem {
        Nil2Elem::new(self.quotient.reduce(q), self.center.zero_elem())
    }

    /// `(0, c)`.
    pub fn central(&self, c: &[i128]) -> Nil2Elem {
        Nil2Elem::new(self.quotient.zero_elem(), self.center.reduce(c))
    }

    pub fn contains(&self, x: &Nil2Elem) -> bool {
        x.q.len() == self.quotient.ngens() && x.c.len() == self.center.ngens()
    }

    pub fn check(&self, x: &Nil2Elem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{x} is not an element of this group")))
        }
    }

    pub fn reduce(&self, x: &Nil2Elem) -> Nil2Elem {
        Nil2Elem::new(self.quotient.reduce(&x.q), self.center.reduce(&x.c))
    }

    pub fn add(&self, x: &Nil2Elem, y: &Nil2Elem) -> Nil2Elem {
        let (q, c) = (&self.quotient, &self.center);
        let carry = self.cocycle_at(&x.q, &y.q);
        Nil2Elem::new(q.add(&x.q, &y.q), c.add(&c.add(&x.c, &y.c), &carry))
    }

    /// `(−q, −c − f(q, −q))`.
    pub fn neg(&self, x: &Nil2Elem) -> Nil2Elem {
        let (q, c) = (&self.quotient, &self.center);
        let mq = q.neg(&x.q);
        let carry = self.cocycle_at(&x.q, &mq);
        Nil2Elem::new(mq, c.neg(&c.add(&x.c, &carry)))
    }

    pub fn sub(&self, x: &Nil2Elem, y: &Nil2Elem) -> Nil2Elem {
        self.add(x, &self.neg(y))
    }

    /// `k·x`, by doubling.
    pub fn scale(&self, k: i128, x: &Nil2Elem) -> Nil2Elem {
        let mut base = if k < 0 { self.neg(x) } else { self.reduce(x) };
        let mut k = k.unsigned_abs();
        let mut acc = self.zero_elem();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// `x + y − x − y`.
    pub fn commutator(&self, x: &Nil2Elem, y: &Nil2Elem) -> Nil2Elem {
        let s = self.add(x, y);
        self.add(&self.add(&s, &self.neg(x)), &self.neg(y))
    }

    /// Order of `x`, `None` when infinite.
    pub fn order(&self, x: &Nil2Elem) -> Option<i128> {
        let n = self.quotient.elem_order(&x.q);
        if n == 0 {
            return None;
        }
        let y = self.scale(n, x);
        match self.center.elem_order(&y.c) {
            0 => None,
            m => Some(checked_mul(n, m)),
        }
    }

    /// Whether `x` commutes with every element (checked on the generators of `Q`).
    pub fn is_central(&self, x: &Nil2Elem) -> bool {
        (0..self.quotient.ngens()).all(|i| {
            let e = self.lift(&self.quotient.gen(i));
            self.commutator(x, &e) == self.zero_elem()
        })
    }

    pub fn is_zero(&self, x: &Nil2Elem) -> bool {
        self.reduce(x) == self.zero_elem()
    }

    /// All elements `(q, c)`, ordered by `q` then `c`, for finite groups.
    pub fn elements(&self) -> Option<Vec<Nil2Elem>> {
        let qs = self.quotient.elements()?;
        let cs = self.center.elements()?;
        Some(
            qs.iter()
                .flat_map(|q| cs.iter().map(move |c| Nil2Elem::new(q.clone(), c.clone())))
                .collect(),
        )
    }

    pub fn order_of_group(&self) -> Option<i128> {
        Some(checked_mul(self.quotient.order()?, self.center.order()?))
    }
}

fn check_elem(g: &FgAbGroup, x: &Elem) -> Result<()> {
    if x.len() == g.ngens() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{x:?} is not an element of {g}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i128) -> FgAbGroup {
        FgAbGroup::cyclic(n)
    }

    fn carry_table(d: i128) -> Vec<Elem> {
        let mut t = Vec::new();
        for a in 0..d {
            for b in 0..d {
                t.push(vec![i128::from(a + b >= d)]);
            }
        }
        t
    }

    #[test]
    fn carry_cocycle_gives_z4() {
        let g = Nil2Group::new(z(2), z(2), Cocycle::Table(carry_table(2))).unwrap();
        let u = g.lift(&[1]);
        assert_eq!(g.order(&u), Some(4));
        assert_eq!(g.scale(2, &u), g.central(&[1]));
        assert_eq!(g.order_of_group(), Some(4));
    }

    #[test]
    fn word_form_is_an_isomorphic_normal_form() {
        let q = FgAbGroup::new(&[2, 4, 0]);
        let c = FgAbGroup::new(&[2, 4]);
        let form = CocycleForm {
            bilinear: vec![
                vec![vec![1, 0], vec![1, 2], vec![0, 2]],
                vec![vec![0, 2], vec![1, 3], vec![1, 1]],
                vec![vec![1, 2], vec![0, 3], vec![1, 1]],
            ],
            carries: vec![vec![1, 0], vec![1, 1], vec![0, 0]],
        };
        let g = Nil2Group::new(q.clone(), c.clone(), Cocycle::Form(form)).unwrap();
        let swap = AbHom::from_images(q.clone(), q.clone(), &[vec![1, 2, 0], vec![0, 1, 0], vec![1, 0, 1]]).unwrap();
        let twisted = g.pullback(&swap, &AbHom::identity(&c));
        let normal = Nil2Group::new(q.clone(), c.clone(), Cocycle::Form(twisted.word_form())).unwrap();
        let to_normal = |x: &Nil2Elem| Nil2Elem::new(x.q.clone(), c.sub(&x.c, &twisted.word(&x.q).c));
        let (qs, _) = q.sample(24);
        let xs: Vec<Nil2Elem> = qs.iter().enumerate().map(|(i, x)| Nil2Elem::new(x.clone(), c.gen(i % 2))).collect();
        for x in &xs {
            for y in &xs {
                let lhs = to_normal(&twisted.add(x, y));
                let rhs = normal.add(&to_normal(x), &to_normal(y));
                assert_eq!(normal.reduce(&lhs), normal.reduce(&rhs));
            }
            assert_eq!(normal.word(&x.q), normal.lift(&x.q));
        }
    }

    #[test]
    fn rejects_bad_tables() {
        let mut t = carry_table(2);
        t[0] = vec![1];
        assert!(Nil2Group::new(z(2), z(2), Cocycle::Table(t)).is_err());
        // f(1,1) = 1, f(1,2) = 0, everything else 0 fails the cocycle condition on Z/3.
        let mut t = vec![vec![0]; 9];
        t[4] = vec![1];
        assert!(Nil2Group::new(z(3), z(2), Cocycle::Table(t)).is_err());
    }

    #[test]
    fn form_and_table_agree() {
        let q = FgAbGroup::new(&[2, 4]);
        let c = FgAbGroup::new(&[2]);
        let form = CocycleForm { bilinear: vec![vec![vec![0], vec![0]], vec![vec![1], vec![0]]], carries: vec![vec![1], vec![0]] };
        let g = Nil2Group::new(q.clone(), c.clone(), Cocycle::Form(form)).unwrap();
        let t = g.to_table(64).unwrap();
        let h = Nil2Group::new(q, c, Cocycle::Table(t)).unwrap();
        for x in g.elements().unwrap() {
            for y in g.elements().unwrap() {
                assert_eq!(g.add(&x, &y), h.add(&x, &y));
            }
        }
    }

    #[test]
    fn form_well_definedness() {
        let form = CocycleForm { bilinear: vec![vec![vec![1]]], carries: vec![vec![0]] };
        // 2·1 ≠ 0 in Z/4, so (a, b) ↦ ab is not biadditive on Z/2 with values in Z/4.
        assert!(Nil2Group::new(z(2), z(4), Cocycle::Form(form.clone())).is_err());
        assert!(Nil2Group::new(z(2), z(2), Cocycle::Form(form)).is_ok());
    }

    #[test]
    fn group_laws() {
        let q = FgAbGroup::new(&[2, 2]);
        let c = z(2);
        let form = CocycleForm { bilinear: vec![vec![vec![0], vec![0]], vec![vec![1], vec![0]]], carries: vec![vec![0], vec![1]] };
        let g = Nil2Group::new(q, c, Cocycle::Form(form)).unwrap();
        let all = g.elements().unwrap();
        assert_eq!(all.len(), 8);
        for x in &all {
            assert!(g.is_zero(&g.add(x, &g.neg(x))));
            assert!(g.is_zero(&g.add(&g.neg(x), x)));
            for y in &all {
                let comm = g.commutator(x, y);
                let expect = g.center().sub(&g.cocycle_at(&x.q, &y.q), &g.cocycle_at(&y.q, &x.q));
                assert_eq!(comm, g.central(&expect));
                for z in &all {
                    assert_eq!(g.add(&g.add(x, y), z), g.add(x, &g.add(y, z)));
                }
            }
        }
        // A nonabelian group of order 8 has a centre of order 2.
        let central = all.iter().filter(|x| g.is_central(x)).count();
        assert_eq!(central, 2);
    }

    #[test]
    fn heisenberg_over_z() {
        let q = FgAbGroup::free(2);
        let c = FgAbGroup::free(1);
        let form = CocycleForm { bilinear: vec![vec![vec![0], vec![0]], vec![vec![1], vec![0]]], carries: vec![vec![0], vec![0]] };
        let g = Nil2Group::new(q, c, Cocycle::Form(form)).unwrap();
        let (x, y) = (g.lift(&[1, 0]), g.lift(&[0, 1]));
        assert_eq!(g.commutator(&x, &y), g.central(&[-1]));
        assert_eq!(g.commutator(&y, &x), g.central(&[1]));
        assert_eq!(g.order(&x), None);
        assert!(g.is_central(&g.central(&[5])));
        assert!(!g.is_central(&x));
    }
}

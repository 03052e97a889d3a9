use std::fmt;

use super::group::{Elem, FgAbGroup, Presented};
use super::matrix::{checked_add, checked_mul, reduce_mod, Matrix};
use super::snf::snf_with;
use crate::error::{Error, Result};

/// Homomorphism of canonical groups; column `i` is the image of source generator `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: Matrix,
}

impl fmt::Debug for AbHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbHom({} -> {}, {:?})", self.source, self.target, self.matrix)
    }
}

fn reduce_rows(target: &FgAbGroup, m: &mut Matrix) {
    for i in 0..m.rows() {
        let d = target.factors()[i];
        for j in 0..m.cols() {
            m[(i, j)] = reduce_mod(m[(i, j)], d);
        }
    }
}

impl AbHom {
    /// Checks dimensions and that each finite-order generator is sent to an element
    /// annihilated by its order.
    pub fn new(source: FgAbGroup, target: FgAbGroup, mut matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::Invalid(format!(
                "matrix is {}x{}, expected {}x{} for {} -> {}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens(),
                source,
                target
            )));
        }
        reduce_rows(&target, &mut matrix);
        for (j, &d) in source.factors().iter().enumerate() {
            if d == 0 {
                continue;
            }
            let col = matrix.column(j);
            if !target.is_zero(&target.scale(d, &col)) {
                return Err(Error::Invalid(format!(
                    "generator {j} of order {d} is sent to {col:?}, not killed by {d} in {target}"
                )));
            }
        }
        Ok(AbHom { source, target, matrix })
    }

    pub fn from_images(source: FgAbGroup, target: FgAbGroup, images: &[Elem]) -> Result<Self> {
        if images.len() != source.ngens() {
            return Err(Error::Invalid("wrong number of generator images".into()));
        }
        let m = Matrix::from_columns(target.ngens(), images);
        AbHom::new(source, target, m)
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        AbHom { source: g.clone(), target: g.clone(), matrix: Matrix::identity(g.ngens()) }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        AbHom {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(target.ngens(), source.ngens()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn image_of_gen(&self, i: usize) -> Elem {
        self.matrix.column(i)
    }

    pub fn apply(&self, x: &[i128]) -> Elem {
        let x = self.source.reduce(x);
        self.target.reduce(&self.matrix.mul_vec(&x))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AbHom) -> AbHom {
        assert_eq!(inner.target, self.source, "composition of incompatible homomorphisms");
        let mut m = &self.matrix * &inner.matrix;
        reduce_rows(&self.target, &mut m);
        AbHom { source: inner.source.clone(), target: self.target.clone(), matrix: m }
    }

    pub fn add(&self, other: &AbHom) -> AbHom {
        assert!(self.source == other.source && self.target == other.target);
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                m[(i, j)] = checked_add(m[(i, j)], other.matrix[(i, j)]);
            }
        }
        reduce_rows(&self.target, &mut m);
        AbHom { source: self.source.clone(), target: self.target.clone(), matrix: m }
    }

    pub fn scale(&self, k: i128) -> AbHom {
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                m[(i, j)] = checked_mul(k, m[(i, j)]);
            }
        }
        reduce_rows(&self.target, &mut m);
        AbHom { source: self.source.clone(), target: self.target.clone(), matrix: m }
    }

    pub fn neg(&self) -> AbHom {
        self.scale(-1)
    }

    pub fn sub(&self, other: &AbHom) -> AbHom {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `[H | D]` where `D` is the diagonal of target orders.
    fn relation_matrix(&self) -> Matrix {
        let t = &self.target;
        self.matrix.hstack(&Matrix::diagonal(t.ngens(), t.ngens(), t.factors()))
    }

    pub fn kernel(&self) -> Subgroup {
        let m = self.relation_matrix();
        let f = snf_with(&m, false, true);
        let v = f.v.expect("right transform");
        let n = self.source.ngens();
        let gens: Vec<Elem> = (f.rank..m.cols())
            .map(|j| self.source.reduce(&v.column(j)[..n]))
            .collect();
        Subgroup::generated(&self.source, &gens)
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::generated(&self.target, &self.matrix.columns())
    }

    /// Cokernel with its projection from the target.
    pub fn cokernel(&self) -> (FgAbGroup, AbHom) {
        let p = Presented::new(&self.relation_matrix());
        let proj = AbHom::new(self.target.clone(), p.group.clone(), p.to_canon)
            .expect("cokernel projection is well defined");
        (p.group, proj)
    }

    pub fn analyze(&self) -> HomAnalysis {
        let (cokernel, projection) = self.cokernel();
        HomAnalysis { kernel: self.kernel(), image: self.image(), cokernel, projection }
    }

    pub fn solver(&self) -> Solver {
        let m = self.relation_matrix();
        let f = snf_with(&m, true, true);
        Solver {
            source: self.source.clone(),
            target: self.target.clone(),
            u: f.u.expect("left transform"),
            v: f.v.expect("right transform"),
            diag: f.diag,
            rank: f.rank,
        }
    }

    /// Some `x` with `self(x) = b`, or `None` when `b` is not in the image.
    pub fn solve(&self, b: &[i128]) -> Option<Elem> {
        self.solver().solve(b)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group.is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn inverse(&self) -> Option<AbHom> {
        if !self.is_iso() {
            return None;
        }
        let s = self.solver();
        let cols: Vec<Elem> = (0..self.target.ngens())
            .map(|j| s.solve(&self.target.gen(j)).expect("surjective"))
            .collect();
        AbHom::from_images(self.target.clone(), self.source.clone(), &cols).ok()
    }

    /// Factors `self` through an injective `incl` whose image contains the image of `self`.
    pub fn lift_through(&self, incl: &AbHom) -> Option<AbHom> {
        assert_eq!(incl.target, self.target);
        let s = incl.solver();
        let cols: Option<Vec<Elem>> =
            (0..self.source.ngens()).map(|j| s.solve(&self.image_of_gen(j))).collect();
        AbHom::from_images(self.source.clone(), incl.source.clone(), &cols?).ok()
    }

    /// Factors `self` through a surjective `proj` whose kernel `self` kills.
    pub fn descend_along(&self, proj: &AbHom) -> Option<AbHom> {
        assert_eq!(proj.source, self.source);
        let k = proj.kernel();
        if !self.compose(&k.inclusion).is_zero() {
            return None;
        }
        let s = proj.solver();
        let cols: Option<Vec<Elem>> = (0..proj.target.ngens())
            .map(|j| s.solve(&proj.target.gen(j)).map(|x| self.apply(&x)))
            .collect();
        AbHom::from_images(proj.target.clone(), self.target.clone(), &cols?).ok()
    }
}

/// Whether `A --f--> B --g--> C` is exact at `B`: `g∘f = 0` and `ker g ⊆ im f`.
pub fn is_exact_at(f: &AbHom, g: &AbHom) -> bool {
    assert_eq!(f.target, g.source);
    if !g.compose(f).is_zero() {
        return false;
    }
    let k = g.kernel();
    f.lift_through(&k.inclusion).is_some_and(|l| l.is_surjective())
}

/// `ker g / im f` for `A --f--> B --g--> C` with `g∘f = 0`.
pub fn homology(f: &AbHom, g: &AbHom) -> FgAbGroup {
    let k = g.kernel();
    let into = f.lift_through(&k.inclusion).expect("g∘f = 0");
    into.cokernel().0
}

/// Preimage solver for a fixed homomorphism.
#[derive(Clone, Debug)]
pub struct Solver {
    source: FgAbGroup,
    target: FgAbGroup,
    u: Matrix,
    v: Matrix,
    diag: Vec<i128>,
    rank: usize,
}

impl Solver {
    pub fn solve(&self, b: &[i128]) -> Option<Elem> {
        let b = self.target.reduce(b);
        let c = self.u.mul_vec(&b);
        let mut y = vec![0i128; self.v.rows()];
        for (i, &ci) in c.iter().enumerate() {
            if i < self.rank {
                if ci % self.diag[i] != 0 {
                    return None;
                }
                y[i] = ci / self.diag[i];
            } else if ci != 0 {
                return None;
            }
        }
        let x = self.v.mul_vec(&y);
        Some(self.source.reduce(&x[..self.source.ngens()]))
    }
}

/// A subgroup as a canonical group with its inclusion.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FgAbGroup,
    pub inclusion: AbHom,
}

impl Subgroup {
    pub fn generated(ambient: &FgAbGroup, gens: &[Elem]) -> Subgroup {
        let m = gens.len();
        let gmat = Matrix::from_columns(ambient.ngens(), gens);
        let rel = gmat.hstack(&Matrix::diagonal(ambient.ngens(), ambient.ngens(), ambient.factors()));
        let f = snf_with(&rel, false, true);
        let v = f.v.expect("right transform");
        let relations: Vec<Vec<i128>> =
            (f.rank..rel.cols()).map(|j| v.column(j)[..m].to_vec()).collect();
        let rmat = Matrix::from_columns(m, &relations);
        let p = Presented::new(&rmat);
        let incl = &gmat * &p.from_canon;
        let inclusion =
            AbHom::new(p.group.clone(), ambient.clone(), incl).expect("inclusion is well defined");
        Subgroup { group: p.group, inclusion }
    }
}

/// Kernel, image and cokernel of a homomorphism.
#[derive(Clone, Debug)]
pub struct HomAnalysis {
    pub kernel: Subgroup,
    pub image: Subgroup,
    pub cokernel: FgAbGroup,
    pub projection: AbHom,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: i128) -> FgAbGroup {
        FgAbGroup::cyclic(n)
    }

    #[test]
    fn times_two_on_z4() {
        let h = AbHom::from_images(z(4), z(4), &[vec![2]]).unwrap();
        let a = h.analyze();
        assert_eq!(a.kernel.group, z(2));
        assert_eq!(a.cokernel, z(2));
        assert_eq!(a.image.group, z(2));
        assert_eq!(h.solve(&[1]), None);
        let x = h.solve(&[2]).unwrap();
        assert_eq!(h.apply(&x), vec![2]);
    }

    #[test]
    fn zero_on_integers() {
        let h = AbHom::zero(&FgAbGroup::free(1), &FgAbGroup::free(1));
        let a = h.analyze();
        assert_eq!(a.kernel.group, FgAbGroup::free(1));
        assert_eq!(a.cokernel, FgAbGroup::free(1));
    }

    #[test]
    fn ill_defined_rejected() {
        assert!(AbHom::from_images(z(2), z(4), &[vec![1]]).is_err());
        assert!(AbHom::from_images(z(4), FgAbGroup::free(1), &[vec![1]]).is_err());
    }

    #[test]
    fn inverse_of_automorphism() {
        let g = FgAbGroup::new(&[2, 4]);
        let h = AbHom::from_images(g.clone(), g.clone(), &[vec![1, 2], vec![1, 1]]).unwrap();
        let inv = h.inverse().unwrap();
        assert_eq!(inv.compose(&h), AbHom::identity(&g));
    }

    fn finite_group() -> impl Strategy<Value = FgAbGroup> {
        proptest::collection::vec(2i128..=6, 0..=3).prop_map(|v| FgAbGroup::new(&v))
    }

    proptest! {
        #[test]
        fn kernel_image_orders(src in finite_group(), tgt in finite_group(), seed in proptest::collection::vec(0i128..100, 9)) {
            let (n, k) = (src.ngens(), tgt.ngens());
            // Random well-defined map: scale entries so that d_j * col_j = 0.
            let mut m = Matrix::zeros(k, n);
            for i in 0..k {
                for j in 0..n {
                    let t = tgt.factors()[i];
                    let g = crate::abelian::gcd(src.factors()[j], t);
                    m[(i, j)] = (seed[i * 3 + j] % g) * (t / g);
                }
            }
            let h = AbHom::new(src.clone(), tgt.clone(), m).unwrap();
            let a = h.analyze();
            prop_assert_eq!(
                a.kernel.group.order().unwrap() * a.image.group.order().unwrap(),
                src.order().unwrap()
            );
            prop_assert_eq!(
                a.image.group.order().unwrap() * a.cokernel.order().unwrap(),
                tgt.order().unwrap()
            );
            prop_assert!(h.compose(&a.kernel.inclusion).is_zero());
            prop_assert!(a.projection.compose(&a.image.inclusion).is_zero());
            for x in src.elements().unwrap() {
                let y = h.apply(&x);
                let s = h.solve(&y).unwrap();
                prop_assert_eq!(h.apply(&s), y);
            }
        }
    }
}

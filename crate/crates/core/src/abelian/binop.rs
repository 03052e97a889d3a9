use super::group::{Elem, FgAbGroup, Presented};
use super::hom::AbHom;
use super::matrix::{gcd, Matrix};

/// `G = A1 + ... + An` with injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FgAbGroup,
    pub injections: Vec<AbHom>,
    pub projections: Vec<AbHom>,
}

pub fn direct_sum(parts: &[FgAbGroup]) -> DirectSum {
    let orders: Vec<i128> = parts.iter().flat_map(|g| g.factors().iter().copied()).collect();
    let p = Presented::from_orders(&orders);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut off = 0;
    for g in parts {
        let n = g.ngens();
        let inj = p.to_canon.col_block(off, off + n);
        injections.push(AbHom::new(g.clone(), p.group.clone(), inj).expect("injection"));
        let proj = p.from_canon.row_block(off, off + n);
        projections.push(AbHom::new(p.group.clone(), g.clone(), proj).expect("projection"));
        off += n;
    }
    DirectSum { group: p.group, injections, projections }
}

impl DirectSum {
    /// Element with the given components.
    pub fn combine(&self, parts: &[Elem]) -> Elem {
        let mut acc = self.group.zero_elem();
        for (inj, x) in self.injections.iter().zip(parts) {
            acc = self.group.add(&acc, &inj.apply(x));
        }
        acc
    }

    pub fn split(&self, x: &[i128]) -> Vec<Elem> {
        self.projections.iter().map(|p| p.apply(x)).collect()
    }

    /// The map `G -> T` restricting to `maps[i]` on the `i`-th summand.
    pub fn copair(&self, target: &FgAbGroup, maps: &[AbHom]) -> AbHom {
        let mut acc = AbHom::zero(&self.group, target);
        for (m, p) in maps.iter().zip(&self.projections) {
            acc = acc.add(&m.compose(p));
        }
        acc
    }

    /// The map `S -> G` with components `maps[i]`.
    pub fn pair(&self, source: &FgAbGroup, maps: &[AbHom]) -> AbHom {
        let mut acc = AbHom::zero(source, &self.group);
        for (m, i) in maps.iter().zip(&self.injections) {
            acc = acc.add(&i.compose(m));
        }
        acc
    }
}

/// Block-diagonal sum of homomorphisms between direct sums.
pub fn sum_of_homs(src: &DirectSum, tgt: &DirectSum, maps: &[AbHom]) -> AbHom {
    let parts: Vec<AbHom> =
        maps.iter().zip(&tgt.injections).map(|(m, i)| i.compose(m)).collect();
    src.copair(&tgt.group, &parts)
}

/// `A ⊗ B` with the coordinate pairing.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub left: FgAbGroup,
    pub right: FgAbGroup,
    pub pres: Presented,
}

pub fn tensor(a: &FgAbGroup, b: &FgAbGroup) -> Tensor {
    let orders: Vec<i128> = a
        .factors()
        .iter()
        .flat_map(|&x| b.factors().iter().map(move |&y| gcd(x, y)))
        .collect();
    Tensor { left: a.clone(), right: b.clone(), pres: Presented::from_orders(&orders) }
}

impl Tensor {
    pub fn group(&self) -> &FgAbGroup {
        &self.pres.group
    }

    /// `x ⊗ y`.
    pub fn pair(&self, x: &[i128], y: &[i128]) -> Elem {
        let m = self.right.ngens();
        let mut raw = vec![0i128; self.left.ngens() * m];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                raw[i * m + j] = super::checked_mul(xi, yj);
            }
        }
        self.pres.canon(&raw)
    }

    /// `f ⊗ g` between tensor products.
    pub fn map(&self, target: &Tensor, f: &AbHom, g: &AbHom) -> AbHom {
        self.map_pairs(target.group(), |i, j| {
            target.pair(&f.image_of_gen(i), &g.image_of_gen(j))
        })
        .expect("f ⊗ g")
    }

    /// `x ⊗ y ↦ y ⊗ x` into `B ⊗ A`.
    pub fn swap(&self, target: &Tensor) -> AbHom {
        assert!(target.left == self.right && target.right == self.left);
        self.map_pairs(target.group(), |i, j| target.pair(&self.right.gen(j), &self.left.gen(i)))
            .expect("swap")
    }

    /// The map sending `e_i ⊗ e_j` to `image(i, j)`, if well defined.
    pub fn map_pairs(
        &self,
        target: &FgAbGroup,
        image: impl Fn(usize, usize) -> Elem,
    ) -> crate::error::Result<AbHom> {
        let m = self.right.ngens();
        let cols: Vec<Elem> = (0..self.group().ngens())
            .map(|k| {
                let raw = self.pres.raw(&self.group().gen(k));
                let mut acc = target.zero_elem();
                for (idx, &c) in raw.iter().enumerate() {
                    if c != 0 {
                        acc = target.add(&acc, &target.scale(c, &image(idx / m, idx % m)));
                    }
                }
                acc
            })
            .collect();
        let map = AbHom::from_images(self.group().clone(), target.clone(), &cols)?;
        for i in 0..self.left.ngens() {
            for j in 0..m {
                let x = self.pair(&self.left.gen(i), &self.right.gen(j));
                if map.apply(&x) != target.reduce(&image(i, j)) {
                    return Err(crate::error::Error::Invalid("pairing is not biadditive".into()));
                }
            }
        }
        Ok(map)
    }
}

/// `Hom(A, B)` with conversion to and from homomorphisms.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    pub pres: Presented,
    /// Image of the generator of `A_i` under the raw generator `(i, j)`, as a multiple of `b_j`.
    unit: Vec<i128>,
}

pub fn hom_group(a: &FgAbGroup, b: &FgAbGroup) -> HomGroup {
    let mut orders = Vec::new();
    let mut unit = Vec::new();
    for &x in a.factors() {
        for &y in b.factors() {
            let (o, u) = match (x, y) {
                (0, y) => (y, 1),
                (_, 0) => (1, 0),
                (x, y) => {
                    let g = gcd(x, y);
                    (g, y / g)
                }
            };
            orders.push(o);
            unit.push(u);
        }
    }
    HomGroup { source: a.clone(), target: b.clone(), pres: Presented::from_orders(&orders), unit }
}

impl HomGroup {
    pub fn group(&self) -> &FgAbGroup {
        &self.pres.group
    }

    pub fn to_hom(&self, x: &[i128]) -> AbHom {
        let raw = self.pres.raw(x);
        let (n, m) = (self.source.ngens(), self.target.ngens());
        let mut mat = Matrix::zeros(m, n);
        for i in 0..n {
            for j in 0..m {
                mat[(j, i)] = super::checked_mul(raw[i * m + j], self.unit[i * m + j]);
            }
        }
        AbHom::new(self.source.clone(), self.target.clone(), mat).expect("Hom element")
    }

    /// A random homomorphism, free coordinates in `[−r, r]`.
    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R, r: i128) -> AbHom {
        self.to_hom(&self.group().random_elem(rng, r))
    }

    pub fn from_hom(&self, h: &AbHom) -> Elem {
        let (n, m) = (self.source.ngens(), self.target.ngens());
        let mut raw = vec![0i128; n * m];
        for i in 0..n {
            for j in 0..m {
                let u = self.unit[i * m + j];
                let v = h.matrix()[(j, i)];
                raw[i * m + j] = if u == 0 { 0 } else { v / u };
            }
        }
        self.pres.canon(&raw)
    }
}

/// `Ext(A, B) = ⊕_i B / a_i B` over the finite factors `a_i` of `A`.
///
/// An element is described by carries `c_i ∈ B`: the extension in which a lift
/// `s_i` of the `i`-th generator satisfies `a_i·s_i = c_i`.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    pub source: FgAbGroup,
    pub coeff: FgAbGroup,
    pub pres: Presented,
}

pub fn ext(a: &FgAbGroup, b: &FgAbGroup) -> ExtGroup {
    let mut orders = Vec::new();
    for &x in a.factors() {
        for &y in b.factors() {
            orders.push(if x == 0 { 1 } else { gcd(x, y) });
        }
    }
    ExtGroup { source: a.clone(), coeff: b.clone(), pres: Presented::from_orders(&orders) }
}

impl ExtGroup {
    pub fn group(&self) -> &FgAbGroup {
        &self.pres.group
    }

    /// Class of the carries, one element of `B` per generator of `A`
    /// (entries for infinite generators are ignored).
    pub fn from_carries(&self, carries: &[Elem]) -> Elem {
        assert_eq!(carries.len(), self.source.ngens());
        let raw: Vec<i128> = carries.iter().flat_map(|c| c.iter().copied()).collect();
        self.pres.canon(&raw)
    }

    pub fn to_carries(&self, x: &[i128]) -> Vec<Elem> {
        let raw = self.pres.raw(x);
        let m = self.coeff.ngens();
        (0..self.source.ngens())
            .map(|i| {
                if self.source.factors()[i] == 0 {
                    self.coeff.zero_elem()
                } else {
                    self.coeff.reduce(&raw[i * m..(i + 1) * m])
                }
            })
            .collect()
    }

    /// Class of the extension `0 -> B --incl--> E --proj--> A -> 0`, read off from
    /// `d_i·s_i` for lifts `s_i` of the generators of `A`.
    ///
    /// Returns `None` if the sequence is not exact.
    pub fn class_of_extension(&self, incl: &AbHom, proj: &AbHom) -> Option<Elem> {
        assert_eq!(incl.source(), &self.coeff);
        assert_eq!(proj.target(), &self.source);
        assert_eq!(incl.target(), proj.source());
        let (lift, back) = (proj.solver(), incl.solver());
        let e = proj.source();
        let mut carries = Vec::new();
        for (i, &d) in self.source.factors().iter().enumerate() {
            if d == 0 {
                carries.push(self.coeff.zero_elem());
                continue;
            }
            let s = lift.solve(&self.source.gen(i))?;
            carries.push(back.solve(&e.scale(d, &s))?);
        }
        Some(self.from_carries(&carries))
    }

    /// `Ext(A, f)` for `f: B -> B'`.
    pub fn pushforward(&self, target: &ExtGroup, f: &AbHom) -> AbHom {
        assert_eq!(target.source, self.source);
        let cols: Vec<Elem> = (0..self.group().ngens())
            .map(|k| {
                let c = self.to_carries(&self.group().gen(k));
                let pushed: Vec<Elem> = c.iter().map(|x| f.apply(x)).collect();
                target.from_carries(&pushed)
            })
            .collect();
        AbHom::from_images(self.group().clone(), target.group().clone(), &cols)
            .expect("Ext pushforward")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(v: &[i128]) -> FgAbGroup {
        FgAbGroup::new(v)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(tensor(&g(&[2]), &g(&[4])).group(), &g(&[2]));
        assert!(ext(&FgAbGroup::free(1), &g(&[4])).group().is_trivial());
        assert_eq!(hom_group(&g(&[6]), &g(&[4])).group(), &g(&[2]));
    }

    /// Hom(Z/6, Z/4) by enumerating all images of the generator.
    #[test]
    fn hom_by_enumeration() {
        let (a, b) = (g(&[6]), g(&[4]));
        let h = hom_group(&a, &b);
        let valid: Vec<i128> = (0..4).filter(|&v| (6 * v) % 4 == 0).collect();
        assert_eq!(valid.len() as i128, h.group().order().unwrap());
        for x in h.group().elements().unwrap() {
            let m = h.to_hom(&x);
            assert_eq!(h.from_hom(&m), x);
        }
    }

    #[test]
    fn direct_sum_keeps_canonical_coordinates() {
        let s = direct_sum(&[g(&[2]), g(&[4])]);
        assert_eq!(s.injections[0].matrix(), &Matrix::from_rows(2, 1, &[vec![1], vec![0]]));
        let t = direct_sum(&[g(&[4]), g(&[2])]);
        assert_eq!(t.group, g(&[2, 4]));
        for (i, p) in t.projections.iter().enumerate() {
            assert_eq!(p.compose(&t.injections[i]), AbHom::identity(&[g(&[4]), g(&[2])][i]));
        }
    }

    #[test]
    fn ext_carries_round_trip() {
        let e = ext(&g(&[2, 4]), &g(&[2, 8]));
        for x in e.group().elements().unwrap() {
            assert_eq!(e.from_carries(&e.to_carries(&x)), x);
        }
        assert_eq!(e.group().order(), Some(2 * 2 * 2 * 4));
    }

    fn small_group() -> impl Strategy<Value = FgAbGroup> {
        proptest::collection::vec(prop_oneof![Just(0i128), 2i128..=12], 0..=3)
            .prop_map(|v| FgAbGroup::new(&v))
    }

    proptest! {
        #[test]
        fn tensor_symmetric_and_unit(a in small_group(), b in small_group()) {
            let (ab, ba) = (tensor(&a, &b), tensor(&b, &a));
            prop_assert_eq!(ab.group(), ba.group());
            let az = tensor(&a, &FgAbGroup::free(1));
            prop_assert_eq!(az.group(), &a);
        }

        #[test]
        fn ext_vanishes_on_free(r in 0usize..3, b in small_group()) {
            prop_assert!(ext(&FgAbGroup::free(r), &b).group().is_trivial());
        }
    }
}

use std::collections::{BTreeSet, VecDeque};

use super::group::{Cocycle, CocycleForm, Nil2Group};
use crate::abelian::{direct_sum, ext, AbHom, Elem, FgAbGroup};
use crate::error::{Error, Result};
use crate::quadfun::{quad_value, ExtClass, Functor};

/// A class in `H²(Q, C)` through `0 → Ext(Q, C) → H²(Q, C) → Hom(Λ²Q, C) → 0`.
#[derive(Clone, Debug)]
pub struct H2Class {
    pub ext: ExtClass,
    /// The commutator pairing `Λ²Q → C`.
    pub pairing: AbHom,
}

impl H2Class {
    pub fn is_zero(&self) -> bool {
        self.ext.is_zero() && self.pairing.is_zero()
    }

    pub fn quotient(&self) -> &FgAbGroup {
        &self.ext.ambient.source
    }

    pub fn center(&self) -> &FgAbGroup {
        &self.ext.ambient.coeff
    }
}

impl PartialEq for H2Class {
    fn eq(&self, other: &Self) -> bool {
        self.quotient() == other.quotient()
            && self.center() == other.center()
            && self.ext.coords == other.ext.coords
            && self.pairing == other.pairing
    }
}

/// The lower-triangular form `β(e_i, e_j) = π(e_i ∧ e_j)` for `i > j`, whose
/// commutator pairing is `π: Λ²Q → C`.
pub fn bilinear_representative(q: &FgAbGroup, pairing: &AbHom) -> Vec<Vec<Elem>> {
    let lambda = quad_value(Functor::Lambda2, q);
    assert_eq!(lambda.group(), pairing.source());
    let c = pairing.target();
    let n = q.ngens();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i > j {
                        pairing.apply(&lambda.product(&q.gen(i), &q.gen(j)))
                    } else {
                        c.zero_elem()
                    }
                })
                .collect()
        })
        .collect()
}

/// Splits the class of the extension into its Ext and commutator components.
///
/// The pairing is read off commutators of generator lifts. Subtracting the
/// lower-triangular bilinear cocycle with that pairing leaves an abelian
/// extension, classified by `d_i·s(e_i)` for the cyclic generators.
pub fn h2_split(g: &Nil2Group) -> H2Class {
    let (q, c) = (g.quotient(), g.center());
    let n = q.ngens();
    let comm = |a: &[i128], b: &[i128]| c.sub(&g.cocycle_at(a, b), &g.cocycle_at(b, a));
    let images: Vec<Elem> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i < j)
        .map(|(i, j)| comm(&q.gen(i), &q.gen(j)))
        .collect();
    let pairing = pairing_from_pairs(q, c, &images);
    let beta = Nil2Group::new(
        q.clone(),
        c.clone(),
        Cocycle::Form(CocycleForm { bilinear: bilinear_representative(q, &pairing), carries: vec![c.zero_elem(); n] }),
    )
    .expect("lower-triangular form of a pairing is a cocycle");
    let reduced = |a: &[i128], b: &[i128]| c.sub(&g.cocycle_at(a, b), &beta.cocycle_at(a, b));
    let carries: Vec<Elem> = q
        .factors()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let e = q.gen(i);
            let mut acc = c.zero_elem();
            let mut k = q.zero_elem();
            for _ in 0..d {
                acc = c.add(&acc, &reduced(&k, &e));
                k = q.add(&k, &e);
            }
            acc
        })
        .collect();
    let amb = ext(q, c);
    H2Class { ext: ExtClass { coords: amb.from_carries(&carries), ambient: amb }, pairing }
}

/// The pairing `Λ²Q → C` with `e_i ∧ e_j ↦ images[k]` for the `k`-th pair `i < j`.
fn pairing_from_pairs(q: &FgAbGroup, c: &FgAbGroup, images: &[Elem]) -> AbHom {
    let lambda = quad_value(Functor::Lambda2, q);
    let n = q.ngens();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((lambda.product(&q.gen(i), &q.gen(j)), images[pairs.len()].clone()));
        }
    }
    // Λ²Q is generated by the e_i ∧ e_j; solve for the images of its canonical generators.
    let src = direct_sum(&vec![FgAbGroup::free(1); pairs.len()]);
    let cols: Vec<Elem> = pairs.iter().map(|(w, _)| w.clone()).collect();
    let onto = AbHom::from_images(src.group.clone(), lambda.group().clone(), &cols).expect("wedges");
    let vals: Vec<Elem> = pairs.iter().map(|(_, v)| v.clone()).collect();
    let out = AbHom::from_images(src.group.clone(), c.clone(), &vals).expect("free source");
    out.descend_along(&onto).expect("commutator pairing of a cocycle is well defined")
}

/// A Form cocycle representing the class.
pub fn class_to_cocycle(class: &H2Class) -> CocycleForm {
    CocycleForm {
        bilinear: bilinear_representative(class.quotient(), &class.pairing),
        carries: class.ext.carries(),
    }
}

/// A normalized 1-cochain `g` with `g(a) + g(b) − g(a + b) = f(a, b)`, listed over
/// the lexicographic enumeration of `Q`, or `None` if `f` is not a coboundary.
///
/// Propagates `g` along generators from `g(0) = 0` with the values `t_i = g(e_i)` as
/// unknowns; closing loops gives linear conditions on the `t_i` over `C`.
pub fn solve_coboundary(g: &Nil2Group, max_order: i128) -> Result<Option<Vec<Elem>>> {
    let elems = g.bounded_elements(max_order)?;
    let (q, c) = (g.quotient(), g.center());
    let n = q.ngens();
    let size = elems.len();
    // g(x) = Σ coeff_i t_i + constant.
    let mut affine: Vec<Option<(Vec<i128>, Elem)>> = vec![None; size];
    affine[0] = Some((vec![0; n], c.zero_elem()));
    let mut conditions: BTreeSet<(Vec<i128>, Elem)> = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let (coeff, konst) = affine[x].clone().expect("visited");
        for i in 0..n {
            let e = q.gen(i);
            let y = q.elem_index(&q.add(&elems[x], &e));
            // g(x + e) = g(x) + t_i − f(x, e)
            let mut nc = coeff.clone();
            nc[i] += 1;
            let nk = c.sub(&konst, &g.cocycle_at(&elems[x], &e));
            match &affine[y] {
                None => {
                    affine[y] = Some((nc, nk));
                    queue.push_back(y);
                }
                Some((oc, ok)) => {
                    let diff: Vec<i128> = nc.iter().zip(oc).map(|(a, b)| a - b).collect();
                    let rhs = c.sub(ok, &nk);
                    if diff.iter().any(|&v| v != 0) || !c.is_zero(&rhs) {
                        conditions.insert((diff, rhs));
                    }
                }
            }
        }
    }
    let conditions: Vec<(Vec<i128>, Elem)> = conditions.into_iter().collect();
    let Some(t) = solve_over(c, n, &conditions) else { return Ok(None) };
    let values: Vec<Elem> = affine
        .into_iter()
        .map(|a| {
            let (coeff, konst) = a.expect("generators reach every element");
            coeff.iter().zip(&t).fold(konst, |acc, (&k, ti)| c.add(&acc, &c.scale(k, ti)))
        })
        .collect();
    for (ia, a) in elems.iter().enumerate() {
        for (ib, b) in elems.iter().enumerate() {
            let s = q.elem_index(&q.add(a, b));
            let lhs = c.sub(&c.add(&values[ia], &values[ib]), &values[s]);
            if lhs != g.cocycle_at(a, b) {
                return Err(Error::Invalid("input is not a cocycle".into()));
            }
        }
    }
    Ok(Some(values))
}

/// Solves `Σ_i a_i t_i = b` for `t ∈ C^n`, one equation per condition.
fn solve_over(c: &FgAbGroup, n: usize, conditions: &[(Vec<i128>, Elem)]) -> Option<Vec<Elem>> {
    if conditions.is_empty() {
        return Some(vec![c.zero_elem(); n]);
    }
    let src = direct_sum(&vec![c.clone(); n]);
    let tgt = direct_sum(&vec![c.clone(); conditions.len()]);
    let rows: Vec<AbHom> = conditions
        .iter()
        .map(|(a, _)| {
            a.iter()
                .zip(&src.projections)
                .fold(AbHom::zero(&src.group, c), |acc, (&k, p)| acc.add(&p.scale(k)))
        })
        .collect();
    let map = tgt.pair(&src.group, &rows);
    let rhs: Vec<Elem> = conditions.iter().map(|(_, b)| b.clone()).collect();
    let t = map.solve(&tgt.combine(&rhs))?;
    Some(src.split(&t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i128) -> FgAbGroup {
        FgAbGroup::cyclic(n)
    }

    fn table(q: &FgAbGroup, c: &FgAbGroup, f: impl Fn(&[i128], &[i128]) -> Elem) -> Nil2Group {
        let elems = q.elements().unwrap();
        let t = elems.iter().flat_map(|a| elems.iter().map(|b| f(a, b)).collect::<Vec<_>>()).collect();
        Nil2Group::new(q.clone(), c.clone(), Cocycle::Table(t)).unwrap()
    }

    #[test]
    fn symmetric_cocycle_on_z2() {
        // f^s(a, b) = ab with values in Sym²(Z/2) = Z/2.
        let g = table(&z(2), &z(2), |a, b| vec![a[0] * b[0]]);
        let h = h2_split(&g);
        assert!(!h.ext.is_zero());
        assert!(h.pairing.is_zero());
        assert_eq!(g.order(&g.lift(&[1])), Some(4));
        assert_eq!(solve_coboundary(&g, 64).unwrap(), None);
    }

    #[test]
    fn free_base_has_no_ext() {
        let q = FgAbGroup::free(1);
        let c = z(5);
        let form = CocycleForm { bilinear: vec![vec![vec![2]]], carries: vec![vec![0]] };
        let g = Nil2Group::new(q, c, Cocycle::Form(form)).unwrap();
        let h = h2_split(&g);
        assert!(h.ext.group().is_trivial());
        assert!(h.is_zero());
    }

    #[test]
    fn coboundary_is_found() {
        let q = FgAbGroup::new(&[2, 4]);
        let c = z(4);
        let u = |x: &[i128]| vec![3 * x[0] + x[1] * x[1]];
        let g = table(&q, &c, |a, b| {
            let s = q.add(a, b);
            c.sub(&c.add(&u(a), &u(b)), &u(&s))
        });
        let h = h2_split(&g);
        assert!(h.is_zero());
        let sol = solve_coboundary(&g, 64).unwrap().expect("coboundary");
        assert_eq!(sol[0], c.zero_elem());
    }

    #[test]
    fn class_round_trip_on_klein_group() {
        let q = FgAbGroup::new(&[2, 2]);
        let c = z(2);
        let g = table(&q, &c, |a, b| vec![(a[1] * b[0] + a[0] * b[0]) % 2]);
        let h = h2_split(&g);
        assert!(!h.pairing.is_zero());
        let back = Nil2Group::new(q, c, Cocycle::Form(class_to_cocycle(&h))).unwrap();
        assert_eq!(h2_split(&back), h);
    }
}

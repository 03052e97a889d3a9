use std::collections::BTreeMap;

use super::group::{Elem, FgAbGroup, Presented};
use super::matrix::{ext_gcd, gcd, Matrix};
use super::snf::snf_mod_left;

type Sparse = BTreeMap<usize, i128>;

/// Quotient of `Z^n` by a lattice containing `modulus·Z^n`, given by sparse relations.
///
/// Relations whose leading coefficient is a unit modulo `modulus` are used to
/// eliminate their leading coordinate; the rest are kept for a final Smith form
/// on the surviving coordinates.
pub struct SparseQuotient {
    n: usize,
    modulus: i128,
    /// Monic rows indexed by leading coordinate; other entries lie to the right.
    pivots: Vec<Option<Vec<(usize, i128)>>>,
    hard: Vec<Sparse>,
}

/// The finished quotient with its coordinate map.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    n: usize,
    modulus: i128,
    pivots: Vec<Option<Vec<(usize, i128)>>>,
    /// Coordinates without a pivot, with their position in the Smith step.
    survivors: Vec<Option<usize>>,
    /// Smith transform rows kept for the group, `k × |survivors|`.
    to_smith: Matrix,
    pres: Presented,
}

impl SparseQuotient {
    pub fn new(n: usize, modulus: i128) -> Self {
        assert!(modulus > 0);
        SparseQuotient { n, modulus, pivots: vec![None; n], hard: Vec::new() }
    }

    /// Adds the relation `Σ c·e_i = 0` for the given `(i, c)` terms.
    pub fn relate(&mut self, terms: &[(usize, i128)]) {
        let mut v = Sparse::new();
        for &(i, c) in terms {
            assert!(i < self.n);
            add_term(&mut v, i, c, self.modulus);
        }
        let v = reduce(&self.pivots, v, self.modulus);
        let Some((&lead, &c)) = v.iter().next() else { return };
        if gcd(c, self.modulus) == 1 {
            let (_, inv, _) = ext_gcd(c, self.modulus);
            let row: Vec<(usize, i128)> =
                v.iter().map(|(&i, &x)| (i, (x * inv).rem_euclid(self.modulus))).collect();
            self.pivots[lead] = Some(row);
        } else {
            self.hard.push(v);
        }
    }

    pub fn finish(self) -> QuotientMap {
        let m = self.modulus;
        let mut survivors = vec![None; self.n];
        let mut k = 0;
        for (i, p) in self.pivots.iter().enumerate() {
            if p.is_none() {
                survivors[i] = Some(k);
                k += 1;
            }
        }
        let rows: Vec<Vec<i128>> = self
            .hard
            .into_iter()
            .map(|v| {
                let v = reduce(&self.pivots, v, m);
                let mut dense = vec![0i128; k];
                for (i, x) in v {
                    dense[survivors[i].expect("reduced vectors live on survivors")] = x;
                }
                dense
            })
            .collect();
        let mat = Matrix::from_columns(k, &rows);
        let (diag, u, _) = snf_mod_left(&mat, m);
        let kept: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
        let orders: Vec<i128> = kept.iter().map(|&i| diag[i]).collect();
        let mut to_smith = Matrix::zeros(kept.len(), k);
        for (a, &i) in kept.iter().enumerate() {
            for j in 0..k {
                to_smith[(a, j)] = u[(i, j)];
            }
        }
        QuotientMap {
            n: self.n,
            modulus: m,
            pivots: self.pivots,
            survivors,
            to_smith,
            pres: Presented::from_orders(&orders),
        }
    }
}

fn add_term(v: &mut Sparse, i: usize, c: i128, m: i128) {
    let e = v.entry(i).or_insert(0);
    *e = (*e + c).rem_euclid(m);
    if *e == 0 {
        v.remove(&i);
    }
}

fn reduce(pivots: &[Option<Vec<(usize, i128)>>], mut v: Sparse, m: i128) -> Sparse {
    let mut cursor = 0;
    loop {
        let next = v.range(cursor..).find(|(i, _)| pivots[**i].is_some()).map(|(&i, &c)| (i, c));
        let Some((i, c)) = next else { return v };
        for &(j, x) in pivots[i].as_ref().expect("pivot") {
            add_term(&mut v, j, -(c * x), m);
        }
        cursor = i + 1;
    }
}

impl QuotientMap {
    pub fn group(&self) -> &FgAbGroup {
        &self.pres.group
    }

    /// Class of `Σ c·e_i`.
    pub fn class(&self, terms: &[(usize, i128)]) -> Elem {
        let mut v = Sparse::new();
        for &(i, c) in terms {
            assert!(i < self.n);
            add_term(&mut v, i, c, self.modulus);
        }
        let v = reduce(&self.pivots, v, self.modulus);
        let mut dense = vec![0i128; self.to_smith.cols()];
        for (i, x) in v {
            dense[self.survivors[i].expect("survivor")] = x;
        }
        let y: Vec<i128> = self
            .to_smith
            .mul_vec(&dense)
            .into_iter()
            .map(|x| x.rem_euclid(self.modulus))
            .collect();
        self.pres.canon(&y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_chain() {
        // x_k = k·x_1 for k < 6 and 6·x_1 = 0: the quotient is Z/6.
        let mut q = SparseQuotient::new(5, 36);
        for k in 1..5 {
            q.relate(&[(k, 1), (k - 1, -1), (0, -1)]);
        }
        q.relate(&[(4, 1), (0, 1)]);
        let f = q.finish();
        assert_eq!(f.group(), &FgAbGroup::cyclic(6));
        assert_eq!(f.group().elem_order(&f.class(&[(0, 1)])), 6);
        assert_eq!(f.class(&[(2, 1)]), f.group().scale(3, &f.class(&[(0, 1)])));
    }

    #[test]
    fn matches_integer_presentation() {
        let rels = [vec![(0, 2), (1, 4)], vec![(0, 6), (1, 8)], vec![(2, 3)]];
        let mut q = SparseQuotient::new(3, 24);
        for r in &rels {
            q.relate(r);
        }
        let f = q.finish();
        let mut m = Matrix::zeros(3, 3);
        for (j, r) in rels.iter().enumerate() {
            for &(i, c) in r {
                m[(i, j)] = c;
            }
        }
        assert_eq!(f.group(), &Presented::new(&m).group);
    }
}

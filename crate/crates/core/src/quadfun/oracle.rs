use super::natural::map_out_of;
use super::value::{quad_value, Functor, RawGen};
use crate::abelian::{AbHom, Elem, FgAbGroup, QuotientMap, SparseQuotient};
use crate::error::{Error, Result};

/// A functor value computed by brute force from a presentation over the elements of `A`.
///
/// - `P`: `I(A)/I(A)³` in the integral group ring, with `p(a) = a − 1`;
/// - `Gamma`: symbols `[a]` with `[−a] = [a]` and a vanishing third cross effect;
/// - `Sym2`, `Lambda2`: symbols `[a, b]`, biadditive, symmetric or alternating.
pub struct OracleValue {
    functor: Functor,
    input: FgAbGroup,
    elements: Vec<Elem>,
    map: QuotientMap,
}

struct Table {
    elements: Vec<Elem>,
    add: Vec<Vec<usize>>,
    neg: Vec<usize>,
    gens: Vec<usize>,
}

impl Table {
    fn new(a: &FgAbGroup) -> Table {
        let elements = a.elements().expect("finite group");
        let add = elements
            .iter()
            .map(|x| elements.iter().map(|y| a.elem_index(&a.add(x, y))).collect())
            .collect();
        let neg = elements.iter().map(|x| a.elem_index(&a.neg(x))).collect();
        let gens = (0..a.ngens()).map(|i| a.elem_index(&a.gen(i))).collect();
        Table { elements, add, neg, gens }
    }

    fn len(&self) -> usize {
        self.elements.len()
    }
}

/// Presentation-based value of `P`, `Gamma`, `Sym2` or `Lambda2` on a finite `A`
/// with `|A| <= max_order`.
pub fn oracle_value(functor: Functor, a: &FgAbGroup, max_order: i128) -> Result<OracleValue> {
    match a.order() {
        Some(n) if n <= max_order => {}
        Some(n) => return Err(Error::Bound(format!("|{a}| = {n} exceeds the bound {max_order}"))),
        None => return Err(Error::Bound(format!("{a} is infinite"))),
    }
    let t = Table::new(a);
    let n = t.len();
    let e = a.torsion_exponent();
    let map = match functor {
        Functor::P | Functor::Gamma => {
            // Symbols indexed by nonzero elements.
            let sym = |x: usize| x.checked_sub(1);
            let mut q = SparseQuotient::new(n - 1, e * e);
            let mut relate = |terms: &[(usize, i128)]| {
                let t: Vec<(usize, i128)> =
                    terms.iter().filter_map(|&(x, c)| sym(x).map(|s| (s, c))).collect();
                q.relate(&t);
            };
            if functor == Functor::P {
                // g·(x−1)(y−1)(z−1) for g in A and generators x, y, z.
                for g in 0..n {
                    for (i, &x) in t.gens.iter().enumerate() {
                        for (j, &y) in t.gens.iter().enumerate().skip(i) {
                            for &z in t.gens.iter().skip(j) {
                                let mut terms = Vec::with_capacity(8);
                                for mask in 0..8u32 {
                                    let mut h = g;
                                    for (bit, &f) in [x, y, z].iter().enumerate() {
                                        if mask & (1 << bit) != 0 {
                                            h = t.add[h][f];
                                        }
                                    }
                                    let sign = if (3 - mask.count_ones()) % 2 == 0 { 1 } else { -1 };
                                    terms.push((h, sign));
                                }
                                relate(&terms);
                            }
                        }
                    }
                }
            } else {
                for x in 0..n {
                    relate(&[(t.neg[x], 1), (x, -1)]);
                }
                for x in 0..n {
                    for y in 0..n {
                        for &g in &t.gens {
                            let xy = t.add[x][y];
                            relate(&[
                                (t.add[xy][g], 1),
                                (xy, -1),
                                (t.add[x][g], -1),
                                (t.add[y][g], -1),
                                (x, 1),
                                (y, 1),
                                (g, 1),
                            ]);
                        }
                    }
                }
            }
            q.finish()
        }
        Functor::Sym2 | Functor::Lambda2 => {
            let m = n - 1;
            let sym = |x: usize, y: usize| (x > 0 && y > 0).then(|| (x - 1) * m + (y - 1));
            let mut q = SparseQuotient::new(m * m, e);
            let mut relate = |terms: &[(usize, usize, i128)]| {
                let t: Vec<(usize, i128)> =
                    terms.iter().filter_map(|&(x, y, c)| sym(x, y).map(|s| (s, c))).collect();
                q.relate(&t);
            };
            for x in 0..n {
                for y in 0..n {
                    for &g in &t.gens {
                        relate(&[(x, t.add[y][g], 1), (x, y, -1), (x, g, -1)]);
                        relate(&[(t.add[x][g], y, 1), (x, y, -1), (g, y, -1)]);
                    }
                    if functor == Functor::Sym2 {
                        relate(&[(x, y, 1), (y, x, -1)]);
                    }
                }
                if functor == Functor::Lambda2 {
                    relate(&[(x, x, 1)]);
                }
            }
            q.finish()
        }
        _ => return Err(Error::Invalid(format!("no oracle for {functor}"))),
    };
    Ok(OracleValue { functor, input: a.clone(), elements: t.elements, map })
}

impl OracleValue {
    pub fn group(&self) -> &FgAbGroup {
        self.map.group()
    }

    fn index(&self, x: &[i128]) -> usize {
        let x = self.input.reduce(x);
        self.input.elem_index(&x)
    }

    /// `p(a) = a − 1` for `P`, `[a]` for `Gamma`.
    pub fn quad(&self, x: &[i128]) -> Elem {
        assert!(matches!(self.functor, Functor::P | Functor::Gamma));
        match self.index(x) {
            0 => self.group().zero_elem(),
            i => self.map.class(&[(i - 1, 1)]),
        }
    }

    pub fn cross(&self, x: &[i128], y: &[i128]) -> Elem {
        let g = self.group();
        let s = self.input.add(x, y);
        g.sub(&g.sub(&self.quad(&s), &self.quad(x)), &self.quad(y))
    }

    /// `[a, b]` for `Sym2` and `Lambda2`.
    pub fn product(&self, x: &[i128], y: &[i128]) -> Elem {
        assert!(matches!(self.functor, Functor::Sym2 | Functor::Lambda2));
        let (i, j) = (self.index(x), self.index(y));
        if i == 0 || j == 0 {
            return self.group().zero_elem();
        }
        let m = self.elements.len() - 1;
        self.map.class(&[((i - 1) * m + (j - 1), 1)])
    }

    /// The map from the structural value sending each generator to its symbol.
    pub fn comparison(&self) -> AbHom {
        let v = quad_value(self.functor, &self.input);
        let e = |i: usize| self.input.gen(i);
        map_out_of(&v, self.group(), |g| match g {
            RawGen::Quad(i) => self.quad(&e(i)),
            RawGen::Pair(i, j) => self.cross(&e(i), &e(j)),
            RawGen::Product(i, j) => self.product(&e(i), &e(j)),
            RawGen::Phi(_) => unreachable!(),
        })
    }

    /// Same canonical group as the structural value, with the generator map an isomorphism.
    pub fn agrees(&self) -> bool {
        let v = quad_value(self.functor, &self.input);
        v.group() == self.group() && self.comparison().is_iso()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(oracle_value(Functor::P, &g("Z/2"), 64).unwrap().group(), &g("Z/4"));
        assert_eq!(oracle_value(Functor::Gamma, &g("Z/3"), 64).unwrap().group(), &g("Z/3"));
        assert_eq!(oracle_value(Functor::Sym2, &g("Z/2"), 64).unwrap().group(), &g("Z/2"));
    }

    #[test]
    fn bounds() {
        assert!(matches!(oracle_value(Functor::P, &g("Z"), 64), Err(Error::Bound(_))));
        assert!(matches!(oracle_value(Functor::P, &g("Z/128"), 64), Err(Error::Bound(_))));
        assert!(oracle_value(Functor::Psi, &g("Z/2"), 64).is_err());
    }

    #[test]
    fn small_groups_agree() {
        for s in ["0", "Z/2", "Z/4", "Z/6", "Z/8", "Z/9", "Z/2 + Z/2", "Z/2 + Z/4", "Z/3 + Z/3"] {
            for f in [Functor::P, Functor::Gamma, Functor::Sym2, Functor::Lambda2] {
                let o = oracle_value(f, &g(s), 64).unwrap();
                assert!(o.agrees(), "{f} on {s}: oracle {}", o.group());
            }
        }
    }
}

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::matrix::{checked_add, checked_mul, gcd, lcm, reduce_mod, Matrix};
use super::snf::snf_with;
use crate::error::{Error, Result};

/// Coordinates of an element with respect to the invariant-factor generators.
pub type Elem = Vec<i128>;

/// Finitely generated abelian group `Z/d1 + ... + Z/dk + Z^r` in invariant-factor form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FgAbGroup {
    factors: Vec<i128>,
}

impl FgAbGroup {
    /// Canonicalizes an arbitrary list of cyclic orders (0 for infinite cyclic).
    pub fn new(orders: &[i128]) -> Self {
        Presented::from_orders(orders).group
    }

    /// Wraps factors that are already canonical.
    pub fn from_canonical(factors: Vec<i128>) -> Result<Self> {
        let g = FgAbGroup { factors };
        if g.is_canonical() {
            Ok(g)
        } else {
            Err(Error::Invalid(format!("invariant factors {:?} are not canonical", g.factors)))
        }
    }

    fn is_canonical(&self) -> bool {
        let mut seen_zero = false;
        let mut prev = 1;
        for &d in &self.factors {
            if d < 0 || d == 1 {
                return false;
            }
            if d == 0 {
                seen_zero = true;
                continue;
            }
            if seen_zero || d % prev != 0 {
                return false;
            }
            prev = d;
        }
        true
    }

    pub fn zero() -> Self {
        FgAbGroup { factors: vec![] }
    }

    pub fn cyclic(n: i128) -> Self {
        Self::new(&[n])
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { factors: vec![0; rank] }
    }

    pub fn factors(&self) -> &[i128] {
        &self.factors
    }

    /// Number of invariant-factor generators.
    pub fn ngens(&self) -> usize {
        self.factors.len()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }

    pub fn torsion_factors(&self) -> Vec<i128> {
        self.factors.iter().copied().filter(|&d| d != 0).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<i128> {
        if !self.is_finite() {
            return None;
        }
        self.factors.iter().try_fold(1i128, |acc, &d| acc.checked_mul(d))
    }

    pub fn torsion_order(&self) -> i128 {
        self.torsion_factors().iter().product()
    }

    /// Exponent of the torsion subgroup (1 for torsion-free groups).
    pub fn torsion_exponent(&self) -> i128 {
        self.factors.iter().filter(|&&d| d != 0).fold(1, |a, &d| lcm(a, d))
    }

    pub fn zero_elem(&self) -> Elem {
        vec![0; self.ngens()]
    }

    pub fn gen(&self, i: usize) -> Elem {
        let mut e = self.zero_elem();
        e[i] = 1;
        e
    }

    fn check(&self, x: &[i128]) {
        assert_eq!(x.len(), self.ngens(), "element does not belong to {self}");
    }

    pub fn reduce(&self, x: &[i128]) -> Elem {
        self.check(x);
        x.iter().zip(&self.factors).map(|(&v, &d)| reduce_mod(v, d)).collect()
    }

    pub fn reduce_in_place(&self, x: &mut [i128]) {
        self.check(x);
        for (v, &d) in x.iter_mut().zip(&self.factors) {
            *v = reduce_mod(*v, d);
        }
    }

    pub fn add(&self, x: &[i128], y: &[i128]) -> Elem {
        self.check(x);
        self.check(y);
        let s: Vec<i128> = x.iter().zip(y).map(|(&a, &b)| checked_add(a, b)).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, x: &[i128], y: &[i128]) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn neg(&self, x: &[i128]) -> Elem {
        self.reduce(&x.iter().map(|v| -v).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: i128, x: &[i128]) -> Elem {
        self.reduce(&x.iter().map(|&v| checked_mul(k, v)).collect::<Vec<_>>())
    }

    pub fn is_zero(&self, x: &[i128]) -> bool {
        self.reduce(x).iter().all(|&v| v == 0)
    }

    pub fn eq_elem(&self, x: &[i128], y: &[i128]) -> bool {
        self.reduce(x) == self.reduce(y)
    }

    /// Order of an element, 0 when infinite.
    pub fn elem_order(&self, x: &[i128]) -> i128 {
        let x = self.reduce(x);
        let mut o = 1;
        for (&v, &d) in x.iter().zip(&self.factors) {
            if v == 0 {
                continue;
            }
            if d == 0 {
                return 0;
            }
            o = lcm(o, d / gcd(v, d));
        }
        o
    }

    /// All elements in lexicographic coordinate order; `None` for infinite groups.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        let n = usize::try_from(self.order()?).ok()?;
        let mut out = Vec::with_capacity(n);
        let mut cur = self.zero_elem();
        for _ in 0..n {
            out.push(cur.clone());
            for i in (0..cur.len()).rev() {
                cur[i] += 1;
                if cur[i] < self.factors[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
        Some(out)
    }

    /// Every element when `|G| <= cap`, flagged `true`; otherwise `cap` elements made of
    /// 0, the generators, their pairwise sums and seeded random combinations with free
    /// coordinates in `[−3, 3]`.
    pub fn sample(&self, cap: usize) -> (Vec<Elem>, bool) {
        if let Some(all) = self.order().filter(|&n| n as u128 <= cap as u128).and_then(|_| self.elements()) {
            return (all, true);
        }
        let n = self.ngens();
        let mut out = vec![self.zero_elem()];
        for i in 0..n {
            out.push(self.gen(i));
            out.push(self.neg(&self.gen(i)));
        }
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.add(&self.gen(i), &self.gen(j)));
            }
        }
        let mut rng = StdRng::seed_from_u64(0x5eed);
        while out.len() < cap {
            let x: Elem = self
                .factors
                .iter()
                .map(|&d| if d == 0 { rng.gen_range(-3..=3) } else { rng.gen_range(0..d) })
                .collect();
            out.push(x);
        }
        out.truncate(cap.max(1));
        (out, false)
    }

    /// A uniformly random element of the torsion part plus free coordinates in `[−r, r]`.
    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, r: i128) -> Elem {
        self.factors.iter().map(|&d| if d == 0 { rng.gen_range(-r..=r) } else { rng.gen_range(0..d) }).collect()
    }

    /// Position of `x` in the lexicographic enumeration of a finite group.
    pub fn elem_index(&self, x: &[i128]) -> usize {
        let x = self.reduce(x);
        let mut idx: usize = 0;
        for (&v, &d) in x.iter().zip(&self.factors) {
            idx = idx * d as usize + v as usize;
        }
        idx
    }

    /// All finite groups of order at most `max_order`, each plus `Z^free_rank`,
    /// ordered by order and then by invariant factors.
    pub fn enumerate(max_order: i128, free_rank: usize) -> Vec<FgAbGroup> {
        fn extend(prefix: &mut Vec<i128>, prod: i128, max: i128, out: &mut Vec<Vec<i128>>) {
            out.push(prefix.clone());
            let last = prefix.last().copied().unwrap_or(1);
            let mut d = if prefix.is_empty() { 2 } else { last };
            while prod * d <= max {
                if d % last == 0 {
                    prefix.push(d);
                    extend(prefix, prod * d, max, out);
                    prefix.pop();
                }
                d += if prefix.is_empty() { 1 } else { last };
            }
        }
        let mut seqs = Vec::new();
        extend(&mut Vec::new(), 1, max_order, &mut seqs);
        let mut groups: Vec<FgAbGroup> = seqs
            .into_iter()
            .map(|mut f| {
                f.extend(std::iter::repeat_n(0, free_rank));
                FgAbGroup { factors: f }
            })
            .collect();
        groups.sort_by(|a, b| {
            (a.torsion_order(), a.factors()).cmp(&(b.torsion_order(), b.factors()))
        });
        groups
    }

    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self == other
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> =
            self.torsion_factors().iter().map(|d| format!("Z/{d}Z")).collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for FgAbGroup {
    type Err = Error;

    /// Parses `0`, `Z`, `Z^k`, `Z/n`, `Z/nZ` and `+`-separated sums of these.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("group literal {s:?}: {msg}"));
        let mut orders = Vec::new();
        if s.trim().is_empty() {
            return Err(bad("empty"));
        }
        for term in s.split('+') {
            let t: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            if t == "0" {
                continue;
            }
            let rest = t.strip_prefix('Z').ok_or_else(|| bad("summand must start with Z"))?;
            if rest.is_empty() {
                orders.push(0);
            } else if let Some(k) = rest.strip_prefix('^') {
                let k: usize = k.parse().map_err(|_| bad("bad exponent"))?;
                orders.extend(std::iter::repeat_n(0, k));
            } else if let Some(n) = rest.strip_prefix('/') {
                let n = n.strip_suffix('Z').unwrap_or(n);
                let n: i128 = n.parse().map_err(|_| bad("bad modulus"))?;
                if n < 1 {
                    return Err(bad("modulus must be positive"));
                }
                orders.push(n);
            } else {
                return Err(bad("unrecognized summand"));
            }
        }
        Ok(FgAbGroup::new(&orders))
    }
}

/// Canonical form of `Z^n / (column span of relations)` with coordinate changes.
#[derive(Clone, Debug)]
pub struct Presented {
    pub group: FgAbGroup,
    /// Raw coordinates to canonical coordinates (`k × n`).
    pub to_canon: Matrix,
    /// Canonical generators as raw vectors (`n × k`).
    pub from_canon: Matrix,
}

impl Presented {
    /// `relations` is `n × m`; each column is a relation among the `n` raw generators.
    pub fn new(relations: &Matrix) -> Self {
        let n = relations.rows();
        let f = snf_with(relations, true, false);
        let u = f.u.expect("left transform");
        let u_inv = f.u_inv.expect("left inverse");
        let mut kept = Vec::new();
        let mut factors = Vec::new();
        for i in 0..n {
            let d = if i < f.rank { f.diag[i] } else { 0 };
            if d != 1 {
                kept.push(i);
                factors.push(d);
            }
        }
        let k = kept.len();
        let mut to_canon = Matrix::zeros(k, n);
        let mut from_canon = Matrix::zeros(n, k);
        for (a, &i) in kept.iter().enumerate() {
            let d = factors[a];
            for j in 0..n {
                to_canon[(a, j)] = reduce_mod(u[(i, j)], d);
                from_canon[(j, a)] = u_inv[(j, i)];
            }
        }
        Presented { group: FgAbGroup { factors }, to_canon, from_canon }
    }

    /// Presentation of `Z/o1 + ... + Z/on` on the given raw generators.
    pub fn from_orders(orders: &[i128]) -> Self {
        let n = orders.len();
        let cols: Vec<i128> = orders.iter().map(|d| d.abs()).collect();
        let canonical = FgAbGroup { factors: cols.clone() };
        if canonical.is_canonical() {
            return Presented {
                group: canonical,
                to_canon: Matrix::identity(n),
                from_canon: Matrix::identity(n),
            };
        }
        Presented::new(&Matrix::diagonal(n, n, &cols))
    }

    pub fn nraw(&self) -> usize {
        self.to_canon.cols()
    }

    /// Canonical coordinates of a raw vector.
    pub fn canon(&self, raw: &[i128]) -> Elem {
        self.group.reduce(&self.to_canon.mul_vec(raw))
    }

    /// A raw representative of a canonical element.
    pub fn raw(&self, x: &[i128]) -> Vec<i128> {
        self.from_canon.mul_vec(x)
    }

    /// Canonical image of raw generator `i`.
    pub fn raw_gen(&self, i: usize) -> Elem {
        self.group.reduce(&self.to_canon.column(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        // Abelian groups of order n: 1,1,1,2,1,1,1,3 for n = 1..8.
        let all = FgAbGroup::enumerate(8, 0);
        assert_eq!(all.len(), 11);
        assert_eq!(all.iter().filter(|g| g.order() == Some(8)).count(), 3);
        assert!(all.iter().all(|g| g.is_canonical()));
        assert_eq!(FgAbGroup::enumerate(64, 0).iter().filter(|g| g.order() == Some(64)).count(), 11);
        assert_eq!(FgAbGroup::enumerate(1, 2), vec![FgAbGroup::free(2)]);
    }

    #[test]
    fn canonicalization() {
        assert_eq!(FgAbGroup::new(&[2, 3]).factors(), &[6]);
        assert_eq!(FgAbGroup::new(&[4, 2, 0, 1]).factors(), &[2, 4, 0]);
        assert_eq!(FgAbGroup::new(&[1, 1]), FgAbGroup::zero());
        assert_eq!(FgAbGroup::new(&[6, 4]).factors(), &[2, 12]);
    }

    #[test]
    fn isomorphism_examples() {
        assert!(FgAbGroup::new(&[2, 3]).is_isomorphic(&FgAbGroup::cyclic(6)));
        assert!(!FgAbGroup::cyclic(4).is_isomorphic(&FgAbGroup::new(&[2, 2])));
        assert!(FgAbGroup::free(1).is_isomorphic(&FgAbGroup::free(1)));
    }

    #[test]
    fn literals() {
        let g: FgAbGroup = "Z^2 + Z/4 + Z/6".parse().unwrap();
        assert_eq!(g.factors(), &[2, 12, 0, 0]);
        assert_eq!(g.to_string(), "Z/2Z + Z/12Z + Z^2");
        assert_eq!("Z/4Z".parse::<FgAbGroup>().unwrap().to_string(), "Z/4Z");
        assert_eq!("0".parse::<FgAbGroup>().unwrap(), FgAbGroup::zero());
        assert_eq!("Z".parse::<FgAbGroup>().unwrap().to_string(), "Z");
        assert!("Q".parse::<FgAbGroup>().is_err());
        assert!("Z/0".parse::<FgAbGroup>().is_err());
    }

    #[test]
    fn presentation_maps_are_consistent() {
        let p = Presented::from_orders(&[4, 6]);
        assert_eq!(p.group.factors(), &[2, 12]);
        for i in 0..2 {
            let x = p.raw_gen(i);
            assert_eq!(p.canon(&p.raw(&x)), x);
        }
        // Orders of raw generators are preserved.
        assert_eq!(p.group.elem_order(&p.raw_gen(0)), 4);
        assert_eq!(p.group.elem_order(&p.raw_gen(1)), 6);
    }

    #[test]
    fn enumeration_order() {
        let g = FgAbGroup::new(&[2, 4]);
        let els = g.elements().unwrap();
        assert_eq!(els.len(), 8);
        for (i, e) in els.iter().enumerate() {
            assert_eq!(g.elem_index(e), i);
        }
        assert_eq!(els[1], vec![0, 1]);
    }
}

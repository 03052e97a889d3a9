use std::fmt;
use std::str::FromStr;

use crate::abelian::{gcd, AbHom, Elem, FgAbGroup, Matrix, Presented};
use crate::error::{Error, Result};

/// The quadratic (and related additive) functors on abelian groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    P,
    Gamma,
    Psi,
    Sym2,
    Lambda2,
    LambdaTilde2,
    Tensor2,
    PhiN(u32),
    Phi,
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functor::P => write!(f, "P"),
            Functor::Gamma => write!(f, "Gamma"),
            Functor::Psi => write!(f, "Psi"),
            Functor::Sym2 => write!(f, "Sym2"),
            Functor::Lambda2 => write!(f, "Lambda2"),
            Functor::LambdaTilde2 => write!(f, "LambdaTilde2"),
            Functor::Tensor2 => write!(f, "Tensor2"),
            Functor::PhiN(n) => write!(f, "Phi_{n}"),
            Functor::Phi => write!(f, "Phi"),
        }
    }
}

impl FromStr for Functor {
    type Err = Error;

    /// Accepts `P`, `Gamma`, `Psi`, `Sym2`, `Lambda2`, `LambdaTilde2`, `Tensor2`,
    /// `Phi` and `Phi_n` forms such as `Phi_3`, `Phi3` or `Phi_n(3)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let f = match t {
            "P" => Functor::P,
            "Gamma" => Functor::Gamma,
            "Psi" => Functor::Psi,
            "Sym2" => Functor::Sym2,
            "Lambda2" => Functor::Lambda2,
            "LambdaTilde2" => Functor::LambdaTilde2,
            "Tensor2" => Functor::Tensor2,
            "Phi" => Functor::Phi,
            _ => {
                let rest = t
                    .strip_prefix("Phi_n(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| t.strip_prefix("Phi_"))
                    .or_else(|| t.strip_prefix("Phi"))
                    .ok_or_else(|| Error::Parse(format!("unknown functor `{t}`")))?;
                let n: u32 = rest
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown functor `{t}`")))?;
                if n == 0 {
                    return Err(Error::Parse("Phi_n needs n >= 1".into()));
                }
                Functor::PhiN(n)
            }
        };
        Ok(f)
    }
}

/// Index of the pair `(i, j)`, `i < j`, among all pairs of `0..n` in lexicographic order.
pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn npairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// 2-adic valuation of a nonzero integer.
pub(crate) fn two_adic(d: i128) -> u32 {
    d.trailing_zeros()
}

fn choose2(k: i128) -> i128 {
    use crate::abelian::checked_mul;
    checked_mul(k, k - 1) / 2
}

/// Value of a functor on a group, described on raw generators built from the
/// invariant-factor generators `e_i` of the input.
///
/// Raw layouts, with pairs `i < j`:
/// - `P`: `p(e_i)`, then `(e_i|e_i)_p`, then `(e_i|e_j)_p`;
/// - `Gamma`: `γ(e_i)`, then `(e_i|e_j)_γ`;
/// - `Psi`: `e_i⊗e_i`, then `e_i⊗e_j + e_j⊗e_i`;
/// - `Sym2`: `e_i·e_i`, then `e_i·e_j`;
/// - `LambdaTilde2`: `e_i⊗̃e_i`, then `e_i⊗̃e_j`;
/// - `Lambda2`: `e_i∧e_j`;
/// - `Tensor2`: `e_i⊗e_j` at `i·n + j`;
/// - `Phi_n`, `Phi`: one generator per factor `d_i` with `2^n ‖ d_i`.
#[derive(Clone, Debug)]
pub struct FunctorValue {
    functor: Functor,
    input: FgAbGroup,
    pres: Presented,
    /// For `Phi_n`/`Phi`: `(factor index, n)` of each raw generator.
    phi_gens: Vec<(usize, u32)>,
}

/// Evaluates `functor` on `a` from the cyclic values and the cross-effect decomposition.
pub fn quad_value(functor: Functor, a: &FgAbGroup) -> FunctorValue {
    let d = a.factors();
    let n = d.len();
    let mut phi_gens = Vec::new();
    let pres = match functor {
        Functor::P => {
            let nraw = 2 * n + npairs(n);
            let mut rels: Vec<Vec<i128>> = Vec::new();
            for (i, &di) in d.iter().enumerate() {
                if di == 0 {
                    continue;
                }
                // p(d e) = d p(e) + C(d,2) (e|e)_p = 0 and d (e|e)_p = 0.
                let mut r = vec![0; nraw];
                r[i] = di;
                r[n + i] = choose2(di);
                rels.push(r);
                let mut r = vec![0; nraw];
                r[n + i] = di;
                rels.push(r);
            }
            for i in 0..n {
                for j in i + 1..n {
                    let g = gcd(d[i], d[j]);
                    if g != 0 {
                        let mut r = vec![0; nraw];
                        r[2 * n + pair_index(n, i, j)] = g;
                        rels.push(r);
                    }
                }
            }
            Presented::new(&Matrix::from_columns(nraw, &rels))
        }
        Functor::Gamma | Functor::Psi | Functor::Sym2 | Functor::LambdaTilde2 => {
            let mut orders: Vec<i128> = d
                .iter()
                .map(|&di| match functor {
                    Functor::Gamma if di % 2 == 0 => 2 * di,
                    Functor::LambdaTilde2 => gcd(2, di),
                    _ => di,
                })
                .collect();
            push_pair_orders(d, &mut orders);
            Presented::from_orders(&orders)
        }
        Functor::Lambda2 => {
            let mut orders = Vec::new();
            push_pair_orders(d, &mut orders);
            Presented::from_orders(&orders)
        }
        Functor::Tensor2 => {
            let orders: Vec<i128> =
                d.iter().flat_map(|&x| d.iter().map(move |&y| gcd(x, y))).collect();
            Presented::from_orders(&orders)
        }
        Functor::PhiN(_) | Functor::Phi => {
            for (i, &di) in d.iter().enumerate() {
                if di == 0 || di % 2 != 0 {
                    continue;
                }
                let v = two_adic(di);
                if functor == Functor::Phi || functor == Functor::PhiN(v) {
                    phi_gens.push((i, v));
                }
            }
            Presented::from_orders(&vec![2; phi_gens.len()])
        }
    };
    FunctorValue { functor, input: a.clone(), pres, phi_gens }
}

fn push_pair_orders(d: &[i128], orders: &mut Vec<i128>) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            orders.push(gcd(d[i], d[j]));
        }
    }
}

impl FunctorValue {
    pub fn functor(&self) -> Functor {
        self.functor
    }

    pub fn input(&self) -> &FgAbGroup {
        &self.input
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.pres.group
    }

    pub fn presentation(&self) -> &Presented {
        &self.pres
    }

    fn n(&self) -> usize {
        self.input.ngens()
    }

    fn check_input(&self, a: &[i128]) {
        assert_eq!(a.len(), self.n(), "element does not belong to {}", self.input);
    }

    /// Raw vector of `Σ_{i<j} w(i, j)·(pair generator ij)` plus diagonal terms.
    fn raw_from(&self, diag_off: Option<usize>, pair_off: usize, diag: impl Fn(usize) -> i128, pair: impl Fn(usize, usize) -> i128) -> Vec<i128> {
        let n = self.n();
        let mut raw = vec![0i128; self.pres.nraw()];
        if let Some(off) = diag_off {
            for i in 0..n {
                raw[off + i] = diag(i);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                raw[pair_off + pair_index(n, i, j)] = pair(i, j);
            }
        }
        raw
    }

    /// The universal quadratic map of the functor: `p(a)`, `γ(a)`, `a⊗a` (for `Psi`
    /// and `Tensor2`), `a·a`, `a⊗̃a`, or `a∧a = 0`.
    ///
    /// # Panics
    /// For `Phi_n`/`Phi`, which are not quadratic functors.
    pub fn quad(&self, a: &[i128]) -> Elem {
        use crate::abelian::checked_mul as mul;
        self.check_input(a);
        let n = self.n();
        let raw = match self.functor {
            Functor::P => {
                let mut raw = self.raw_from(None, 2 * n, |_| 0, |i, j| mul(a[i], a[j]));
                for i in 0..n {
                    raw[i] = a[i];
                    raw[n + i] = choose2(a[i]);
                }
                raw
            }
            Functor::Gamma | Functor::Psi | Functor::Sym2 | Functor::LambdaTilde2 => {
                let pair = |i: usize, j: usize| match self.functor {
                    Functor::Gamma | Functor::Psi => mul(a[i], a[j]),
                    Functor::Sym2 => 2 * mul(a[i], a[j]),
                    _ => 0,
                };
                self.raw_from(Some(0), n, |i| mul(a[i], a[i]), pair)
            }
            Functor::Lambda2 => vec![0; self.pres.nraw()],
            Functor::Tensor2 => return self.product(a, a),
            Functor::PhiN(_) | Functor::Phi => panic!("{} is not quadratic", self.functor),
        };
        self.pres.canon(&raw)
    }

    /// Cross effect `quad(a+b) − quad(a) − quad(b)`, bilinear in `a` and `b`.
    pub fn cross(&self, a: &[i128], b: &[i128]) -> Elem {
        use crate::abelian::checked_mul as mul;
        self.check_input(a);
        self.check_input(b);
        let n = self.n();
        let sym = |i: usize, j: usize| mul(a[i], b[j]) + mul(a[j], b[i]);
        let raw = match self.functor {
            Functor::P => {
                let mut raw = self.raw_from(None, 2 * n, |_| 0, sym);
                for i in 0..n {
                    raw[n + i] = mul(a[i], b[i]);
                }
                raw
            }
            Functor::Gamma | Functor::Sym2 => {
                self.raw_from(Some(0), n, |i| 2 * mul(a[i], b[i]), |i, j| {
                    let s = sym(i, j);
                    if self.functor == Functor::Sym2 {
                        2 * s
                    } else {
                        s
                    }
                })
            }
            Functor::Psi => self.raw_from(Some(0), n, |i| 2 * mul(a[i], b[i]), sym),
            Functor::LambdaTilde2 => self.raw_from(Some(0), n, |i| 2 * mul(a[i], b[i]), |_, _| 0),
            Functor::Lambda2 => vec![0; self.pres.nraw()],
            Functor::Tensor2 => {
                let x = self.product(a, b);
                let y = self.product(b, a);
                return self.group().add(&x, &y);
            }
            Functor::PhiN(_) | Functor::Phi => panic!("{} is not quadratic", self.functor),
        };
        self.pres.canon(&raw)
    }

    /// The bilinear generator map: `a·b`, `a∧b`, `a⊗̃b` or `a⊗b`.
    ///
    /// # Panics
    /// For functors that are not bilinear images of `A⊗A`.
    pub fn product(&self, a: &[i128], b: &[i128]) -> Elem {
        use crate::abelian::checked_mul as mul;
        self.check_input(a);
        self.check_input(b);
        let n = self.n();
        let raw = match self.functor {
            Functor::Sym2 => {
                self.raw_from(Some(0), n, |i| mul(a[i], b[i]), |i, j| mul(a[i], b[j]) + mul(a[j], b[i]))
            }
            Functor::LambdaTilde2 => {
                self.raw_from(Some(0), n, |i| mul(a[i], b[i]), |i, j| mul(a[i], b[j]) - mul(a[j], b[i]))
            }
            Functor::Lambda2 => self.raw_from(None, 0, |_| 0, |i, j| mul(a[i], b[j]) - mul(a[j], b[i])),
            Functor::Tensor2 => {
                let mut raw = vec![0i128; n * n];
                for i in 0..n {
                    for j in 0..n {
                        raw[i * n + j] = mul(a[i], b[j]);
                    }
                }
                raw
            }
            _ => panic!("{} has no bilinear generator map", self.functor),
        };
        self.pres.canon(&raw)
    }

    /// Class in `Phi_k(A)` of an element of `t_k(A) = {a : 2^k a = 0}`.
    ///
    /// # Panics
    /// If the value is not `Phi_k` or `Phi`, or `a` is not in `t_k(A)`.
    pub fn phi_class(&self, k: u32, a: &[i128]) -> Elem {
        self.check_input(a);
        match self.functor {
            Functor::Phi => {}
            Functor::PhiN(m) => assert_eq!(m, k, "class requested in the wrong Phi_n"),
            _ => panic!("{} is not Phi", self.functor),
        }
        let pow = 1i128.checked_shl(k).expect("Phi index too large");
        assert!(self.input.is_zero(&self.input.scale(pow, a)), "element is not in t_{k}");
        let d = self.input.factors();
        let raw: Vec<i128> = self
            .phi_gens
            .iter()
            .map(|&(i, v)| {
                if v != k {
                    return 0;
                }
                let step = d[i] >> v;
                debug_assert_eq!(a[i].rem_euclid(step), 0);
                a[i].div_euclid(step)
            })
            .collect();
        self.pres.canon(&raw)
    }

    /// `(factor index, n)` for the raw generators of `Phi_n`/`Phi`.
    pub fn phi_generators(&self) -> &[(usize, u32)] {
        &self.phi_gens
    }

    /// Canonical element of `t_n(A)` representing a `Phi` raw generator.
    pub fn phi_representative(&self, k: usize) -> Elem {
        let (i, v) = self.phi_gens[k];
        let mut x = self.input.zero_elem();
        x[i] = self.input.factors()[i] >> v;
        x
    }

    /// Image of every raw generator under a homomorphism out of this value.
    pub(crate) fn raw_images(&self) -> Vec<RawGen> {
        let n = self.n();
        let mut out = Vec::new();
        let pairs = |out: &mut Vec<RawGen>| {
            for i in 0..n {
                for j in i + 1..n {
                    out.push(RawGen::Pair(i, j));
                }
            }
        };
        match self.functor {
            Functor::P => {
                out.extend((0..n).map(RawGen::Quad));
                out.extend((0..n).map(|i| RawGen::Pair(i, i)));
                pairs(&mut out);
            }
            Functor::Gamma | Functor::Psi => {
                out.extend((0..n).map(RawGen::Quad));
                pairs(&mut out);
            }
            Functor::Sym2 | Functor::LambdaTilde2 => {
                out.extend((0..n).map(|i| RawGen::Product(i, i)));
                for i in 0..n {
                    for j in i + 1..n {
                        out.push(RawGen::Product(i, j));
                    }
                }
            }
            Functor::Lambda2 => {
                for i in 0..n {
                    for j in i + 1..n {
                        out.push(RawGen::Product(i, j));
                    }
                }
            }
            Functor::Tensor2 => {
                for i in 0..n {
                    for j in 0..n {
                        out.push(RawGen::Product(i, j));
                    }
                }
            }
            Functor::PhiN(_) | Functor::Phi => {
                out.extend((0..self.phi_gens.len()).map(RawGen::Phi));
            }
        }
        debug_assert_eq!(out.len(), self.pres.nraw());
        out
    }

    /// The homomorphism out of this value with the given images of raw generators.
    pub fn hom_from_raw(&self, target: &FgAbGroup, images: &[Elem]) -> Result<AbHom> {
        assert_eq!(images.len(), self.pres.nraw());
        let cols: Vec<Elem> = (0..self.group().ngens())
            .map(|k| {
                let raw = self.pres.raw(&self.group().gen(k));
                let mut acc = target.zero_elem();
                for (c, img) in raw.iter().zip(images) {
                    if *c != 0 {
                        acc = target.add(&acc, &target.scale(*c, img));
                    }
                }
                acc
            })
            .collect();
        AbHom::from_images(self.group().clone(), target.clone(), &cols)
    }
}

/// Meaning of a raw generator in terms of the input generators `e_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RawGen {
    /// `quad(e_i)`.
    Quad(usize),
    /// `cross(e_i, e_j)` (with `i <= j`).
    Pair(usize, usize),
    /// `product(e_i, e_j)`.
    Product(usize, usize),
    /// The `k`-th `Phi` generator.
    Phi(usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn value(f: &str, a: &str) -> FgAbGroup {
        quad_value(f.parse().unwrap(), &g(a)).group().clone()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(value("P", "Z/2"), g("Z/4"));
        assert_eq!(value("P", "Z/8"), g("Z/16 + Z/4"));
        assert_eq!(value("Gamma", "Z/4"), g("Z/8"));
        assert_eq!(value("Psi", "Z/5"), g("Z/5"));
        assert_eq!(value("Phi", "Z/2"), g("Z/2"));
        assert_eq!(value("P", "Z/2 + Z/2"), g("Z/4 + Z/4 + Z/2"));
    }

    #[test]
    fn names_round_trip() {
        for f in [
            Functor::P,
            Functor::Gamma,
            Functor::Psi,
            Functor::Sym2,
            Functor::Lambda2,
            Functor::LambdaTilde2,
            Functor::Tensor2,
            Functor::PhiN(3),
            Functor::Phi,
        ] {
            assert_eq!(f.to_string().parse::<Functor>().unwrap(), f);
        }
        assert_eq!("Phi_n(2)".parse::<Functor>().unwrap(), Functor::PhiN(2));
        assert!("Foo".parse::<Functor>().is_err());
        assert!("Phi_0".parse::<Functor>().is_err());
    }

    #[test]
    fn free_values() {
        assert_eq!(value("P", "Z"), FgAbGroup::free(2));
        assert_eq!(value("Gamma", "Z^2"), FgAbGroup::free(3));
        assert_eq!(value("LambdaTilde2", "Z"), g("Z/2"));
        assert_eq!(value("Lambda2", "Z^3"), FgAbGroup::free(3));
    }

    #[test]
    fn gamma_generator_orders() {
        let v = quad_value(Functor::Gamma, &g("Z/2 + Z/3"));
        // Z/2 + Z/3 = Z/6, γ of the generator has order 12.
        assert_eq!(v.group().elem_order(&v.quad(&[1])), 12);
    }

    #[test]
    fn quad_cross_consistency() {
        let a = g("Z/2 + Z/4 + Z");
        for f in [Functor::P, Functor::Gamma, Functor::Psi, Functor::Sym2, Functor::LambdaTilde2, Functor::Tensor2] {
            let v = quad_value(f, &a);
            let xs = [vec![1, 3, -2], vec![0, 1, 5], vec![1, 2, 0]];
            for x in &xs {
                for y in &xs {
                    let s = a.add(x, y);
                    let lhs = v.group().sub(&v.group().sub(&v.quad(&s), &v.quad(x)), &v.quad(y));
                    assert_eq!(lhs, v.cross(x, y), "{f} on {x:?}, {y:?}");
                }
            }
        }
    }

    #[test]
    fn phi_classes() {
        let v = quad_value(Functor::Phi, &g("Z/2 + Z/4 + Z/12"));
        assert_eq!(v.group(), &g("Z/2 + Z/2 + Z/2"));
        let w = quad_value(Functor::PhiN(2), &g("Z/2 + Z/4 + Z/12"));
        assert_eq!(w.group(), &g("Z/2 + Z/2"));
        assert!(quad_value(Functor::PhiN(3), &g("Z/4")).group().is_trivial());
    }
}

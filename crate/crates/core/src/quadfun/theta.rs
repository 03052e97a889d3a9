use super::natural::{induced_map, mod_two_projection, nat_map, NatMap};
use super::value::{quad_value, Functor};
use crate::abelian::{checked_mul, ext, Elem, ExtGroup, FgAbGroup};

/// An element of `Ext(A, B)` described by its carries.
#[derive(Clone, Debug)]
pub struct ExtClass {
    pub ambient: ExtGroup,
    pub coords: Elem,
}

impl ExtClass {
    pub fn group(&self) -> &FgAbGroup {
        self.ambient.group()
    }

    pub fn is_zero(&self) -> bool {
        self.group().is_zero(&self.coords)
    }

    pub fn carries(&self) -> Vec<Elem> {
        self.ambient.to_carries(&self.coords)
    }
}

/// `θ(A) ∈ Ext(A, Sym²A)`, the class of `0 → Sym²A → P(A) → A → 0`; with `reduced`,
/// its image in `Ext(A, Sym²(A/2A))`.
///
/// The lift `p(e)` of a generator of order `d` has `d·p(e) = −C(d,2)·e·e`, and
/// `d(d−1)·e·e = 0`, so the carry is `C(d,2)·e·e`.
pub fn theta(a: &FgAbGroup, reduced: bool) -> ExtClass {
    let sym = quad_value(Functor::Sym2, a);
    let amb = ext(a, sym.group());
    let carries: Vec<Elem> = a
        .factors()
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            if d == 0 {
                return sym.group().zero_elem();
            }
            let e = a.gen(i);
            sym.group().scale(checked_mul(d, d - 1) / 2, &sym.product(&e, &e))
        })
        .collect();
    let class = ExtClass { coords: amb.from_carries(&carries), ambient: amb };
    if !reduced {
        return class;
    }
    let to_mod2 = induced_map(Functor::Sym2, &mod_two_projection(a));
    let target = ext(a, to_mod2.target());
    let coords = class.ambient.pushforward(&target, &to_mod2).apply(&class.coords);
    ExtClass { ambient: target, coords }
}

/// `θ(A)` read off from the presentation of `P(A)` through `j` and `q`.
pub fn theta_from_extension(a: &FgAbGroup) -> ExtClass {
    let (j, q) = (nat_map(NatMap::J, a), nat_map(NatMap::Q, a));
    let amb = ext(a, j.source());
    let coords = amb.class_of_extension(&j, &q).expect("Sym² → P → A is exact");
    ExtClass { ambient: amb, coords }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn spec_examples() {
        assert!(!theta(&g("Z/2"), false).is_zero());
        assert_eq!(theta(&g("Z/2"), false).group(), &g("Z/2"));
        assert!(theta(&g("Z/3"), false).is_zero());
        assert!(theta(&g("Z"), false).is_zero());
    }

    #[test]
    fn two_routes_agree() {
        for s in ["Z/2", "Z/4", "Z/8", "Z/6", "Z/2 + Z/4", "Z/3 + Z/9", "Z/2 + Z", "Z/12 + Z/4"] {
            let a = g(s);
            let x = theta(&a, false);
            let y = theta_from_extension(&a);
            assert_eq!(x.coords, y.coords, "{s}");
        }
    }

    #[test]
    fn reduced_class() {
        assert!(!theta(&g("Z/2"), true).is_zero());
        // 6·e·e vanishes in Sym²(Z/2).
        assert!(!theta(&g("Z/4"), false).is_zero());
        assert!(theta(&g("Z/4"), true).is_zero());
        assert!(theta(&g("Z/5"), true).group().is_trivial());
    }
}

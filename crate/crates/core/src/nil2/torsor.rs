use super::cohomology::h2_split;
use super::group::{Cocycle, CocycleForm, Nil2Group};
use crate::abelian::{ext, AbHom, FgAbGroup};
use crate::error::{Error, Result};
use crate::quadfun::{quad_value, ExtClass, Functor};

/// `0 → K → total → base → 0` with `K` included into the centre coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralExtension {
    pub total: Nil2Group,
    pub kernel_inclusion: AbHom,
}

impl CentralExtension {
    pub fn base(&self) -> &FgAbGroup {
        self.total.quotient()
    }

    pub fn kernel(&self) -> &FgAbGroup {
        self.kernel_inclusion.source()
    }
}

/// The extension `0 → Λ²A → N_A → A → 0` with cocycle `β(e_i, e_j) = e_i ∧ e_j` for
/// `i > j`, whose commutator pairing is the identity of `Λ²A`.
pub fn canonical_ta(a: &FgAbGroup) -> CentralExtension {
    let lambda = quad_value(Functor::Lambda2, a);
    let l = lambda.group();
    let n = a.ngens();
    let bilinear = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i > j { lambda.product(&a.gen(i), &a.gen(j)) } else { l.zero_elem() })
                .collect()
        })
        .collect();
    let form = CocycleForm { bilinear, carries: vec![l.zero_elem(); n] };
    let total = Nil2Group::new(a.clone(), l.clone(), Cocycle::Form(form)).expect("β is biadditive");
    CentralExtension { total, kernel_inclusion: AbHom::identity(l) }
}

/// The action of `x ∈ Ext(A, Λ²A)`: adds the carry cocycle of `x`.
pub fn twist_ta(n: &CentralExtension, x: &ExtClass) -> Result<CentralExtension> {
    if &x.ambient.source != n.base() || &x.ambient.coeff != n.kernel() {
        return Err(Error::Invalid(format!(
            "twist must lie in Ext({}, {})",
            n.base(),
            n.kernel()
        )));
    }
    let c = n.total.center();
    let q = n.base();
    let carries = x.carries().iter().map(|k| n.kernel_inclusion.apply(k)).collect();
    let form = CocycleForm { carries, ..CocycleForm::zero(q, c) };
    Ok(CentralExtension {
        total: n.total.add_cocycle(&Cocycle::Form(form))?,
        kernel_inclusion: n.kernel_inclusion.clone(),
    })
}

/// The `x` with `twist_ta(n, x) = m` up to equivalence, when both have the same pairing.
pub fn difference_class(n: &CentralExtension, m: &CentralExtension) -> Result<ExtClass> {
    if n.base() != m.base() || n.total.center() != m.total.center() {
        return Err(Error::Invalid("extensions of different groups".into()));
    }
    let q = n.base();
    let negated = negate(&n.total)?;
    let diff = m.total.add_cocycle(negated.cocycle())?;
    let h = h2_split(&diff);
    if !h.pairing.is_zero() {
        return Err(Error::Domain("the extensions have different commutator pairings".into()));
    }
    let back = n.kernel_inclusion.solver();
    let carries = h
        .ext
        .carries()
        .iter()
        .map(|x| back.solve(x).ok_or_else(|| Error::Domain("difference leaves the kernel".into())))
        .collect::<Result<Vec<_>>>()?;
    let amb = ext(q, n.kernel());
    Ok(ExtClass { coords: amb.from_carries(&carries), ambient: amb })
}

fn negate(g: &Nil2Group) -> Result<Nil2Group> {
    let c = g.center();
    let cocycle = match g.cocycle() {
        Cocycle::Form(f) => Cocycle::Form(CocycleForm {
            bilinear: f.bilinear.iter().map(|r| r.iter().map(|x| c.neg(x)).collect()).collect(),
            carries: f.carries.iter().map(|x| c.neg(x)).collect(),
        }),
        Cocycle::Table(t) => Cocycle::Table(t.iter().map(|x| c.neg(x)).collect()),
        _ => return Ok(g.push_center(&AbHom::identity(c).neg())),
    };
    Nil2Group::new(g.quotient().clone(), c.clone(), cocycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn spec_examples() {
        let n = canonical_ta(&g("Z"));
        assert!(n.total.center().is_trivial());
        let n = canonical_ta(&g("Z/2"));
        assert!(n.total.center().is_trivial());
        assert!(ext(&g("Z/2"), n.kernel()).group().is_trivial());
        let n = canonical_ta(&g("Z + Z"));
        let t = &n.total;
        let (x, y) = (t.lift(&[1, 0]), t.lift(&[0, 1]));
        let lambda = quad_value(Functor::Lambda2, &g("Z + Z"));
        assert_eq!(t.commutator(&x, &y), t.central(&lambda.product(&[1, 0], &[0, 1])));
    }

    #[test]
    fn pairing_is_identity() {
        for s in ["Z/2 + Z/2", "Z/2 + Z/4 + Z/4", "Z + Z/6", "Z + Z + Z", "Z/3 + Z/3 + Z/9"] {
            let n = canonical_ta(&g(s));
            let h = h2_split(&n.total);
            assert!(h.pairing.is_iso() && h.pairing == AbHom::identity(n.kernel()), "{s}");
        }
    }

    #[test]
    fn twists_act_freely() {
        let a = g("Z/2 + Z/4");
        let n = canonical_ta(&a);
        let amb = ext(&a, n.kernel());
        for k in 0..amb.group().ngens() {
            let x = ExtClass { coords: amb.group().gen(k), ambient: amb.clone() };
            let m = twist_ta(&n, &x).unwrap();
            assert_eq!(h2_split(&m.total).pairing, AbHom::identity(n.kernel()));
            assert_eq!(difference_class(&n, &m).unwrap().coords, x.coords);
            let back = twist_ta(&m, &ExtClass { coords: amb.group().neg(&x.coords), ambient: amb.clone() }).unwrap();
            assert!(difference_class(&n, &back).unwrap().is_zero());
        }
    }
}

use super::group::{form_at, PreSquareGroup};
use crate::abelian::{AbHom, Elem, FgAbGroup};
use crate::error::{Error, Result};
use crate::nil2::{Nil2Elem, Nil2Group};

/// A braided categorical group `∂: Cee → Ce` with braiding `{−,−}: Ce × Ce → Cee`,
/// stored like a presquare group: `Cee` abelian, `∂` onto the centre part of `Ce`
/// and the braiding a form on `π₀` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bcg {
    pub cee: FgAbGroup,
    pub ce: Nil2Group,
    pub boundary: AbHom,
    pub brace: Vec<Vec<Elem>>,
}

/// Result of checking the braided (and symmetric) categorical group equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcgCheck {
    /// Names of the failing equations, empty when valid.
    pub failures: Vec<&'static str>,
    pub exhaustive: bool,
}

impl BcgCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Bcg {
    pub fn brace_of(&self, x: &Nil2Elem, y: &Nil2Elem) -> Elem {
        let q = self.ce.quotient();
        form_at(&self.cee, &self.brace, &q.reduce(&x.q), &q.reduce(&y.q))
    }

    fn boundary_of(&self, a: &[i128]) -> Nil2Elem {
        self.ce.central(&self.boundary.apply(a))
    }

    /// Checks the five equations, and the symmetry `{x,y}{y,x} = 1` when `symmetric`,
    /// on all elements when `|Ce|, |Cee| ≤ cap` and on a sample otherwise.
    pub fn check(&self, symmetric: bool, cap: usize) -> BcgCheck {
        let (ce, cee) = (&self.ce, &self.cee);
        let (qs, qx) = ce.quotient().sample(cap);
        let (cs, cx) = ce.center().sample(cap.min(16));
        let xs: Vec<Nil2Elem> = qs
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let c = if cx { &cs[i % cs.len()] } else { &cs[0] };
                Nil2Elem::new(q.clone(), c.clone())
            })
            .collect();
        let (ys, yx) = cee.sample(cap);
        let br = |x: &Nil2Elem, y: &Nil2Elem| self.brace_of(x, y);
        let mut failures = Vec::new();
        let mut fail = |name: &'static str| {
            if !failures.contains(&name) {
                failures.push(name)
            }
        };
        // ∂{x,y} = x⁻¹y⁻¹xy.
        for x in &xs {
            for y in &xs {
                let lhs = self.boundary_of(&br(x, y));
                let rhs = ce.add(&ce.add(&ce.neg(x), &ce.neg(y)), &ce.add(x, y));
                if ce.reduce(&lhs) != ce.reduce(&rhs) {
                    fail("d{x,y} = x^-1 y^-1 x y");
                }
            }
        }
        // {∂a, ∂b} = a⁻¹b⁻¹ab = 0 in the abelian Cee.
        for a in &ys {
            for b in &ys {
                if !cee.is_zero(&br(&self.boundary_of(a), &self.boundary_of(b))) {
                    fail("{da,db} = a^-1 b^-1 a b");
                }
            }
        }
        for a in &ys {
            for x in &xs {
                let da = self.boundary_of(a);
                if !cee.is_zero(&cee.add(&br(&da, x), &br(x, &da))) {
                    fail("{da,x}{x,da} = 1");
                }
            }
        }
        let conj = |y: &Nil2Elem, x: &Nil2Elem| ce.add(&ce.add(&ce.neg(y), x), y);
        for x in &xs {
            for y in &xs {
                for z in xs.iter().take(cap.min(24)) {
                    let comm = ce.add(&ce.add(&ce.neg(y), &ce.neg(x)), &ce.add(y, x));
                    let rhs = cee.add(&cee.add(&br(x, z), &br(x, y)), &br(&comm, z));
                    if !cee.eq_elem(&br(x, &ce.add(y, z)), &rhs) {
                        fail("{x,yz} = {x,z}{x,y}{y^-1x^-1yx,z}");
                    }
                    let rhs = cee.add(&br(&conj(y, x), &conj(y, z)), &br(y, z));
                    if !cee.eq_elem(&br(&ce.add(x, y), z), &rhs) {
                        fail("{xy,z} = {y^-1xy,y^-1zy}{y,z}");
                    }
                }
            }
        }
        if symmetric {
            for x in &xs {
                for y in &xs {
                    if !cee.is_zero(&cee.add(&br(x, y), &br(y, x))) {
                        fail("{x,y}{y,x} = 1");
                    }
                }
            }
        }
        BcgCheck { failures, exhaustive: qx && cx && yx }
    }
}

/// `Υ(M)`, the underlying braided categorical group, and `λΥ(M)` with
/// `C'ee = Cee/⟨{x,y} + {y,x}⟩`.
#[derive(Clone, Debug)]
pub struct UpsilonLambda {
    pub bcg: Bcg,
    pub scg: Bcg,
    pub bcg_check: BcgCheck,
    pub scg_check: BcgCheck,
}

impl UpsilonLambda {
    pub fn valid(&self) -> bool {
        self.bcg_check.holds() && self.scg_check.holds()
    }
}

pub fn upsilon_lambda(m: &PreSquareGroup, cap: usize) -> UpsilonLambda {
    let bcg = Bcg {
        cee: m.mee().clone(),
        ce: m.me().clone(),
        boundary: m.p().clone(),
        brace: m.bracket().to_vec(),
    };
    let scg = lambda(&bcg).expect("∂ kills {x,y} + {y,x}");
    let bcg_check = bcg.check(false, cap);
    let scg_check = scg.check(true, cap);
    UpsilonLambda { bcg, scg, bcg_check, scg_check }
}

/// The reflection `λ` into symmetric categorical groups.
pub fn lambda(c: &Bcg) -> Result<Bcg> {
    let n = c.ce.quotient().ngens();
    let rels: Vec<Elem> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| c.cee.add(&c.brace[i][j], &c.brace[j][i]))
        .collect();
    let sub = crate::abelian::Subgroup::generated(&c.cee, &rels);
    let (cee, proj) = sub.inclusion.cokernel();
    let boundary = c
        .boundary
        .descend_along(&proj)
        .ok_or_else(|| Error::Invalid("boundary does not kill {x,y}{y,x}".into()))?;
    let brace = c.brace.iter().map(|r| r.iter().map(|x| proj.apply(x)).collect()).collect();
    Ok(Bcg { cee, ce: c.ce.clone(), boundary, brace })
}

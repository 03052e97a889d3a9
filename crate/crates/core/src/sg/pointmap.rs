use crate::abelian::{checked_mul, AbHom, Elem, FgAbGroup};
use crate::error::{Error, Result};
use crate::nil2::{Cocycle, CocycleForm, Nil2Elem, Nil2Group};

/// A pointed map `Q → G` between abelian groups, not necessarily additive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointMap {
    domain: FgAbGroup,
    codomain: FgAbGroup,
    rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Values over the lexicographic enumeration of a finite domain.
    Table(Vec<Elem>),
    Hom(AbHom),
    /// `q ↦ B(q, q)` for a bilinear form `B` on the domain coordinates.
    Square(Vec<Vec<Elem>>),
    /// `q ↦` the centre part of `Σ q_i·(e_i, c_i)` in `group`, where the lifts
    /// `(e_i, c_i)` span a homomorphic section; its cross effect is the cocycle of `group`.
    Section { group: Nil2Group, lifts: Vec<Elem> },
    /// `q ↦ Σ_i (q_i·linear_i + C(q_i, 2)·form_ii) + Σ_{i<j} q_i q_j·form_ij` on canonical
    /// coordinates; entries below the diagonal are zero.
    Quadratic { linear: Vec<Elem>, form: Vec<Vec<Elem>> },
    /// `push ∘ inner ∘ along`.
    Pullback { inner: Box<PointMap>, along: AbHom, push: AbHom },
    Sum(Vec<PointMap>),
}

impl PointMap {
    pub fn domain(&self) -> &FgAbGroup {
        &self.domain
    }

    pub fn codomain(&self) -> &FgAbGroup {
        &self.codomain
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn zero(domain: &FgAbGroup, codomain: &FgAbGroup) -> PointMap {
        PointMap::hom(AbHom::zero(domain, codomain))
    }

    pub fn hom(h: AbHom) -> PointMap {
        PointMap { domain: h.source().clone(), codomain: h.target().clone(), rule: Rule::Hom(h) }
    }

    pub fn table(domain: &FgAbGroup, codomain: &FgAbGroup, values: Vec<Elem>) -> Result<PointMap> {
        let n = domain.order().ok_or_else(|| Error::Invalid("table maps need a finite domain".into()))?;
        if values.len() as i128 != n || values.iter().any(|v| v.len() != codomain.ngens()) {
            return Err(Error::Invalid(format!("expected {n} values in {codomain}")));
        }
        let values = values.iter().map(|v| codomain.reduce(v)).collect();
        Ok(PointMap { domain: domain.clone(), codomain: codomain.clone(), rule: Rule::Table(values) })
    }

    pub fn square(domain: &FgAbGroup, codomain: &FgAbGroup, form: Vec<Vec<Elem>>) -> Result<PointMap> {
        let n = domain.ngens();
        if form.len() != n || form.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("square needs a {n}x{n} form")));
        }
        for (i, &d) in domain.factors().iter().enumerate() {
            for j in 0..n {
                if d != 0 && (!codomain.is_zero(&codomain.scale(d, &form[i][j])) || !codomain.is_zero(&codomain.scale(d, &form[j][i]))) {
                    return Err(Error::Invalid("form is not well defined on the domain".into()));
                }
            }
        }
        Ok(PointMap { domain: domain.clone(), codomain: codomain.clone(), rule: Rule::Square(form) })
    }

    /// The map with `g(e_i) = linear_i` and cross effect `form_ij` on `(e_i, e_j)`, `i <= j`,
    /// evaluated along the ordered word `Σ q_i e_i`.
    pub fn quadratic(domain: &FgAbGroup, codomain: &FgAbGroup, linear: Vec<Elem>, form: Vec<Vec<Elem>>) -> Result<PointMap> {
        let n = domain.ngens();
        if linear.len() != n || form.len() != n || form.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid(format!("quadratic map needs {n} values and a {n}x{n} form")));
        }
        let d = domain.factors();
        let mut upper = vec![vec![codomain.zero_elem(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = codomain.reduce(&form[i][j]);
                for k in [d[i], d[j]] {
                    if k != 0 && !codomain.is_zero(&codomain.scale(k, &v)) {
                        return Err(Error::Invalid(format!("form entry ({i}, {j}) is not killed by {k}")));
                    }
                }
                upper[i][j] = v;
            }
        }
        let linear = linear.iter().map(|v| codomain.reduce(v)).collect();
        Ok(PointMap { domain: domain.clone(), codomain: codomain.clone(), rule: Rule::Quadratic { linear, form: upper } })
    }

    /// Requires `d_i·(e_i, c_i) = 0` and commuting lifts.
    pub fn section(group: &Nil2Group, lifts: Vec<Elem>) -> Result<PointMap> {
        let q = group.quotient();
        if lifts.len() != q.ngens() {
            return Err(Error::Invalid("one lift per generator".into()));
        }
        let elems: Vec<Nil2Elem> =
            lifts.iter().enumerate().map(|(i, c)| Nil2Elem::new(q.gen(i), group.center().reduce(c))).collect();
        for (i, &d) in q.factors().iter().enumerate() {
            if d != 0 && !group.is_zero(&group.scale(d, &elems[i])) {
                return Err(Error::Invalid(format!("lift {i} does not have order dividing {d}")));
            }
        }
        for x in &elems {
            for y in &elems {
                if !group.is_zero(&group.commutator(x, y)) {
                    return Err(Error::Invalid("lifts do not commute".into()));
                }
            }
        }
        Ok(PointMap {
            domain: q.clone(),
            codomain: group.center().clone(),
            rule: Rule::Section { group: group.clone(), lifts },
        })
    }

    pub fn pullback(inner: &PointMap, along: &AbHom, push: &AbHom) -> PointMap {
        assert_eq!(along.target(), &inner.domain);
        assert_eq!(push.source(), &inner.codomain);
        PointMap {
            domain: along.source().clone(),
            codomain: push.target().clone(),
            rule: Rule::Pullback { inner: Box::new(inner.clone()), along: along.clone(), push: push.clone() },
        }
    }

    pub fn push(&self, f: &AbHom) -> PointMap {
        PointMap::pullback(self, &AbHom::identity(&self.domain), f)
    }

    pub fn sum(parts: Vec<PointMap>) -> PointMap {
        let (domain, codomain) = (parts[0].domain.clone(), parts[0].codomain.clone());
        assert!(parts.iter().all(|p| p.domain == domain && p.codomain == codomain));
        PointMap { domain, codomain, rule: Rule::Sum(parts) }
    }

    pub fn eval(&self, q: &[i128]) -> Elem {
        let q = self.domain.reduce(q);
        let g = &self.codomain;
        match &self.rule {
            Rule::Table(t) => t[self.domain.elem_index(&q)].clone(),
            Rule::Hom(h) => h.apply(&q),
            Rule::Square(b) => {
                let mut acc = g.zero_elem();
                for (i, &x) in q.iter().enumerate() {
                    for (j, &y) in q.iter().enumerate() {
                        if x != 0 && y != 0 {
                            acc = g.add(&acc, &g.scale(checked_mul(x, y), &b[i][j]));
                        }
                    }
                }
                acc
            }
            Rule::Section { group, lifts } => {
                let mut acc = group.zero_elem();
                for (i, &k) in q.iter().enumerate() {
                    if k != 0 {
                        let e = Nil2Elem::new(self.domain.gen(i), lifts[i].clone());
                        acc = group.add(&acc, &group.scale(k, &e));
                    }
                }
                acc.c
            }
            Rule::Quadratic { linear, form } => {
                let mut acc = g.zero_elem();
                for (i, &x) in q.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    acc = g.add(&acc, &g.scale(x, &linear[i]));
                    acc = g.add(&acc, &g.scale(checked_mul(x, x - 1) / 2, &form[i][i]));
                    for (j, &y) in q.iter().enumerate().skip(i + 1) {
                        if y != 0 {
                            acc = g.add(&acc, &g.scale(checked_mul(x, y), &form[i][j]));
                        }
                    }
                }
                acc
            }
            Rule::Pullback { inner, along, push } => push.apply(&inner.eval(&along.apply(&q))),
            Rule::Sum(parts) => parts.iter().fold(g.zero_elem(), |acc, p| g.add(&acc, &p.eval(&q))),
        }
    }

    /// `(x|y) = g(x+y) − g(x) − g(y)` as a cocycle on the domain.
    pub fn cross_cocycle(&self) -> Cocycle {
        let (q, c) = (&self.domain, &self.codomain);
        match &self.rule {
            Rule::Table(_) => {
                let elems = q.elements().expect("finite");
                let t = elems
                    .iter()
                    .flat_map(|x| elems.iter().map(move |y| (x, y)))
                    .map(|(x, y)| c.sub(&c.sub(&self.eval(&q.add(x, y)), &self.eval(x)), &self.eval(y)))
                    .collect();
                Cocycle::Table(t)
            }
            Rule::Hom(_) => Cocycle::Form(CocycleForm::zero(q, c)),
            Rule::Square(b) => {
                let n = q.ngens();
                let bilinear = (0..n).map(|i| (0..n).map(|j| c.add(&b[i][j], &b[j][i])).collect()).collect();
                Cocycle::Form(CocycleForm { bilinear, carries: vec![c.zero_elem(); n] })
            }
            Rule::Quadratic { linear, form } => {
                let n = q.ngens();
                let bilinear = (0..n)
                    .map(|i| (0..n).map(|j| form[i.min(j)][i.max(j)].clone()).collect())
                    .collect();
                let carries = q
                    .factors()
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| match d {
                        0 => c.zero_elem(),
                        d => c.sub(&c.scale(checked_mul(d, d + 1) / 2, &form[i][i]), &c.scale(d, &linear[i])),
                    })
                    .collect();
                Cocycle::Form(CocycleForm { bilinear, carries })
            }
            Rule::Section { group, .. } => Cocycle::Pullback {
                inner: Box::new(group.clone()),
                along: AbHom::identity(q),
                push: AbHom::identity(c),
            },
            Rule::Pullback { inner, along, push } => Cocycle::Pullback {
                inner: Box::new(inner.cross_group()),
                along: along.clone(),
                push: push.clone(),
            },
            Rule::Sum(parts) => Cocycle::Sum(parts.iter().map(|p| p.cross_cocycle()).collect()),
        }
    }

    /// The extension of the domain by the codomain with cocycle [`cross_cocycle`](Self::cross_cocycle).
    pub fn cross_group(&self) -> Nil2Group {
        Nil2Group::new(self.domain.clone(), self.codomain.clone(), self.cross_cocycle())
            .expect("cross effects are cocycles")
    }

    /// The same map as a table, for `|Q| <= max_order`.
    pub fn to_table(&self, max_order: i128) -> Result<PointMap> {
        match self.domain.order() {
            Some(n) if n <= max_order => {}
            _ => return Err(Error::Bound(format!("{} exceeds the bound {max_order}", self.domain))),
        }
        let values = self.domain.elements().expect("finite").iter().map(|x| self.eval(x)).collect();
        PointMap::table(&self.domain, &self.codomain, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn quadratic_cross_effect_is_its_form_cocycle(
            lin in proptest::collection::vec(-20i128..20, 3),
            f in proptest::collection::vec(-20i128..20, 6),
            xs in proptest::collection::vec((-9i128..9, -9i128..9, -9i128..9), 6),
        ) {
            let q = FgAbGroup::new(&[2, 6, 0]);
            let c = FgAbGroup::new(&[12]);
            let orders = q.factors().to_vec();
            let mut form = vec![vec![vec![0]; 3]; 3];
            let mut k = 0;
            for i in 0..3 {
                for j in i..3 {
                    let m = [orders[i], orders[j]].iter().filter(|&&d| d != 0).fold(0, |g, &d| crate::abelian::gcd(g, d));
                    form[i][j] = vec![if m == 0 { f[k] } else { f[k] * (12 / crate::abelian::gcd(12, m)) }];
                    k += 1;
                }
            }
            let g = PointMap::quadratic(&q, &c, lin.iter().map(|&v| vec![v]).collect(), form).unwrap();
            let e = g.cross_group();
            let pts: Vec<Elem> = xs.iter().map(|&(a, b, d)| q.reduce(&[a, b, d])).collect();
            for x in &pts {
                for y in &pts {
                    let direct = c.sub(&c.sub(&g.eval(&q.add(x, y)), &g.eval(x)), &g.eval(y));
                    prop_assert_eq!(e.cocycle_at(x, y), direct);
                }
            }
        }
    }
}

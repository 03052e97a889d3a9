use super::group::{add_forms, form_at, pull_form, PreSquareGroup};
use crate::abelian::{direct_sum, sum_of_homs, tensor, AbHom, DirectSum, Elem, FgAbGroup};
use crate::error::{Error, Result};
use crate::nil2::{Cocycle, CocycleForm, Nil2Group};

/// A combined presquare group with the coordinate maps of its pieces.
#[derive(Clone, Debug)]
pub struct Combined {
    pub psg: PreSquareGroup,
    /// `π₀` as a direct sum of the two `π₀`.
    pub pi0: DirectSum,
    /// The centre part of `Me` as a direct sum: the two centres, then the cross term.
    pub center: DirectSum,
    /// `Mee` as a direct sum: the two `Mee`, then `π₀ᴹ⊗π₀ᴺ` and `π₀ᴺ⊗π₀ᴹ` for coproducts.
    pub mee: DirectSum,
}

fn pulled(g: &Nil2Group, along: &AbHom, push: &AbHom) -> Cocycle {
    Cocycle::Pullback { inner: Box::new(g.clone()), along: along.clone(), push: push.clone() }
}

/// `M × N`, componentwise.
pub fn product(m: &PreSquareGroup, n: &PreSquareGroup) -> Combined {
    let qs = direct_sum(&[m.pi0().clone(), n.pi0().clone()]);
    let cs = direct_sum(&[m.me().center().clone(), n.me().center().clone()]);
    let cocycle = Cocycle::Sum(vec![
        pulled(m.me(), &qs.projections[0], &cs.injections[0]),
        pulled(n.me(), &qs.projections[1], &cs.injections[1]),
    ]);
    let me = Nil2Group::new(qs.group.clone(), cs.group.clone(), cocycle).expect("pullback cocycles");
    let es = direct_sum(&[m.mee().clone(), n.mee().clone()]);
    let sigma = sum_of_homs(&es, &es, &[m.sigma().clone(), n.sigma().clone()]);
    let p = sum_of_homs(&es, &cs, &[m.p().clone(), n.p().clone()]);
    let bracket = add_forms(
        &es.group,
        &[
            pull_form(m.bracket(), m.pi0(), &qs.projections[0], &es.injections[0]),
            pull_form(n.bracket(), n.pi0(), &qs.projections[1], &es.injections[1]),
        ],
    );
    let psg = PreSquareGroup::from_parts(me, es.group.clone(), sigma, p, bracket).expect("shapes");
    Combined { psg, pi0: qs, center: cs, mee: es }
}

/// `M ∨ N`.
///
/// `(M∨N)_e` is the central extension of `π₀ᴹ ⊕ π₀ᴺ` by `im Pᴹ ⊕ im Pᴺ ⊕ π₀ᴹ⊗π₀ᴺ`
/// whose cross cocycle `f((a,c),(a',c')) = −a'⊗c` gives `[(a,0),(0,c)] = a⊗c`.
/// On the cross summands `σ(a⊗c) = −c⊗a`, `σ(c⊗a) = −a⊗c`, `P(a⊗c) = a⊗c` and
/// `P(c⊗a) = −a⊗c`; the bracket gains `a⊗c' + c⊗a'`.
pub fn coproduct(m: &PreSquareGroup, n: &PreSquareGroup) -> Combined {
    let (qm, qn) = (m.pi0(), n.pi0());
    let qs = direct_sum(&[qm.clone(), qn.clone()]);
    let (mn, nm) = (tensor(qm, qn), tensor(qn, qm));
    let cs = direct_sum(&[m.me().center().clone(), n.me().center().clone(), mn.group().clone()]);
    let c = &cs.group;
    let q = &qs.group;
    let (pm, pn) = (&qs.projections[0], &qs.projections[1]);
    let cross: Vec<Vec<Elem>> = (0..q.ngens())
        .map(|i| {
            (0..q.ngens())
                .map(|j| {
                    let t = mn.pair(&pm.image_of_gen(j), &pn.image_of_gen(i));
                    c.neg(&cs.injections[2].apply(&t))
                })
                .collect()
        })
        .collect();
    let cocycle = Cocycle::Sum(vec![
        pulled(m.me(), pm, &cs.injections[0]),
        pulled(n.me(), pn, &cs.injections[1]),
        Cocycle::Form(CocycleForm { bilinear: cross, carries: vec![c.zero_elem(); q.ngens()] }),
    ]);
    let me = Nil2Group::new(q.clone(), c.clone(), cocycle).expect("coproduct cocycle");
    let es = direct_sum(&[m.mee().clone(), n.mee().clone(), mn.group().clone(), nm.group().clone()]);
    let e = &es.group;
    let inj = &es.injections;
    let to_nm = mn.swap(&nm);
    let to_mn = nm.swap(&mn);
    let sigma = es.copair(
        e,
        &[
            inj[0].compose(m.sigma()),
            inj[1].compose(n.sigma()),
            inj[3].compose(&to_nm).neg(),
            inj[2].compose(&to_mn).neg(),
        ],
    );
    let p = es.copair(
        c,
        &[
            cs.injections[0].compose(m.p()),
            cs.injections[1].compose(n.p()),
            cs.injections[2].clone(),
            cs.injections[2].compose(&to_mn).neg(),
        ],
    );
    let reps: Vec<(Elem, Elem)> = (0..q.ngens())
        .map(|i| (qm.reduce(&pm.image_of_gen(i)), qn.reduce(&pn.image_of_gen(i))))
        .collect();
    let bracket = reps
        .iter()
        .map(|(a, c1)| {
            reps.iter()
                .map(|(a2, c2)| {
                    es.combine(&[
                        form_at(m.mee(), m.bracket(), a, a2),
                        form_at(n.mee(), n.bracket(), c1, c2),
                        mn.pair(a, c2),
                        nm.pair(c1, a2),
                    ])
                })
                .collect()
        })
        .collect();
    let psg = PreSquareGroup::from_parts(me, e.clone(), sigma, p, bracket).expect("shapes");
    Combined { psg, pi0: qs, center: cs, mee: es }
}

/// `f_*(M)` with the map `A → π₁(f_*(M))`, an isomorphism.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub psg: PreSquareGroup,
    /// `A → f_*(Mee)`.
    pub from_target: AbHom,
    /// `Mee → f_*(Mee)`.
    pub from_mee: AbHom,
}

/// Pushforward along `f: π₁ → A` with `involution` on `A`; `f_*(Mee)` is the pushout
/// `(A ⊕ Mee)/⟨(f z, −z)⟩`.
pub fn pushforward(m: &PreSquareGroup, f: &AbHom, involution: &AbHom) -> Result<Pushforward> {
    let pi1 = m.p().kernel();
    let a = f.target();
    if f.source() != &pi1.group {
        return Err(Error::Invalid(format!("f must start at pi_1 = {}", pi1.group)));
    }
    if involution.source() != a || involution.target() != a {
        return Err(Error::Invalid("the involution must be an endomorphism of A".into()));
    }
    let sigma1 = m.sigma().compose(&pi1.inclusion).lift_through(&pi1.inclusion).expect("Pσ = P");
    if f.compose(&sigma1) != involution.compose(f) {
        return Err(Error::Domain("f does not commute with the involutions".into()));
    }
    let ds = direct_sum(&[a.clone(), m.mee().clone()]);
    let rel = ds.pair(&pi1.group, &[f.clone(), pi1.inclusion.neg()]);
    let (push, proj) = rel.cokernel();
    let lifted = ds.copair(
        &ds.group,
        &[ds.injections[0].compose(involution), ds.injections[1].compose(m.sigma())],
    );
    let sigma = proj
        .compose(&lifted)
        .descend_along(&proj)
        .expect("σ preserves the relations");
    let c = m.me().center();
    let p = ds
        .copair(c, &[AbHom::zero(a, c), m.p().clone()])
        .descend_along(&proj)
        .expect("P kills π₁");
    let from_target = proj.compose(&ds.injections[0]);
    let from_mee = proj.compose(&ds.injections[1]);
    let bracket =
        m.bracket().iter().map(|r| r.iter().map(|x| from_mee.apply(x)).collect()).collect();
    let psg = PreSquareGroup::from_parts(m.me().clone(), push, sigma, p, bracket)?;
    Ok(Pushforward { psg, from_target, from_mee })
}

/// `[n]⊙M`: the `e`-part of the `n`-fold coproduct, for `n ≤ max_arity`.
pub fn odot_eval(n: usize, m: &PreSquareGroup, max_arity: usize, max_order: i128) -> Result<Nil2Group> {
    if n > max_arity {
        return Err(Error::Bound(format!("arity {n} exceeds the bound {max_arity}")));
    }
    if n == 0 {
        return Ok(Nil2Group::abelian(FgAbGroup::zero(), FgAbGroup::zero()));
    }
    let mut acc = m.clone();
    for _ in 1..n {
        acc = coproduct(&acc, m).psg;
        if let Some(o) = acc.me().order_of_group() {
            if o > max_order {
                return Err(Error::Bound(format!("|[{n}]⊙M| exceeds the bound {max_order}")));
            }
        }
    }
    Ok(acc.me().clone())
}

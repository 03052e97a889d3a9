use super::group::{QuadraticMap, SquareGroup};
use super::pointmap::PointMap;
use crate::abelian::{tensor, AbHom, DirectSum, FgAbGroup};
use crate::error::{Error, Result};
use crate::nil2::Nil2Group;
use crate::psg::{self, PreSquareGroup};

/// A combined square group with the coordinate maps of its pieces.
#[derive(Clone, Debug)]
pub struct SgCombined {
    pub sg: SquareGroup,
    pub pi0: DirectSum,
    pub mee: DirectSum,
}

/// `Q × Q'` with `H(x, y) = (H(x), H'(y))`.
pub fn product(m: &SquareGroup, n: &SquareGroup) -> Result<SgCombined> {
    let c = psg::product(&m.wp(), &n.wp());
    let (hm, gm) = m.split_parts();
    let (hn, gn) = n.split_parts();
    let (qs, es, cs) = (&c.pi0, &c.mee, &c.center);
    let h = cs.copair(&es.group, &[es.injections[0].compose(&hm), es.injections[1].compose(&hn)]);
    let g = PointMap::sum(vec![
        PointMap::pullback(&gm, &qs.projections[0], &es.injections[0]),
        PointMap::pullback(&gn, &qs.projections[1], &es.injections[1]),
    ]);
    assemble(c, h, g)
}

/// `Q ∨ Q'`: `H` is `H_Q` and `H_Q'` on the two factors, `h(a⊗c) = a⊗c − c⊗a` on the
/// cross part of the centre and `g(a, c) = a⊗c` on `π₀`.
pub fn coproduct(m: &SquareGroup, n: &SquareGroup) -> Result<SgCombined> {
    let c = psg::coproduct(&m.wp(), &n.wp());
    let (hm, gm) = m.split_parts();
    let (hn, gn) = n.split_parts();
    let (qs, es, cs) = (&c.pi0, &c.mee, &c.center);
    let (qm, qn) = (m.pi0(), n.pi0());
    let (mn, nm) = (tensor(qm, qn), tensor(qn, qm));
    let cross_h = es.injections[2].sub(&es.injections[3].compose(&mn.swap(&nm)));
    let h = cs.copair(
        &es.group,
        &[es.injections[0].compose(&hm), es.injections[1].compose(&hn), cross_h],
    );
    let q = &qs.group;
    let reps: Vec<_> = (0..q.ngens())
        .map(|i| (qm.reduce(&qs.projections[0].image_of_gen(i)), qn.reduce(&qs.projections[1].image_of_gen(i))))
        .collect();
    let square = reps
        .iter()
        .map(|(a, _)| reps.iter().map(|(_, c2)| es.injections[2].apply(&mn.pair(a, c2))).collect())
        .collect();
    let g = PointMap::sum(vec![
        PointMap::pullback(&gm, &qs.projections[0], &es.injections[0]),
        PointMap::pullback(&gn, &qs.projections[1], &es.injections[1]),
        PointMap::square(q, &es.group, square)?,
    ]);
    assemble(c, h, g)
}

fn assemble(c: psg::Combined, h: AbHom, g: PointMap) -> Result<SgCombined> {
    let m = &c.psg;
    let sg = SquareGroup::from_parts(
        m.me().clone(),
        m.mee().clone(),
        QuadraticMap::Structured { h, g, cross: m.bracket().to_vec() },
        m.p().clone(),
    )?;
    if let Err(i) = sg.validate() {
        return Err(Error::Domain(format!("combined square group fails {i} (internal)")));
    }
    if &sg.wp() != m {
        return Err(Error::Domain("℘ does not commute with the combination (internal)".into()));
    }
    Ok(SgCombined { sg, pi0: c.pi0, mee: c.mee })
}

/// The iterated coproduct, with the maps from each `π₀` into the total `π₀`.
pub fn coproduct_all(parts: &[SquareGroup]) -> Result<(SquareGroup, Vec<AbHom>)> {
    let Some(first) = parts.first() else {
        let z = FgAbGroup::zero();
        let sg = SquareGroup::from_parts(
            Nil2Group::abelian(z.clone(), z.clone()),
            z.clone(),
            QuadraticMap::Table(vec![vec![]]),
            AbHom::zero(&z, &z),
        )?;
        return Ok((sg, Vec::new()));
    };
    let mut acc = first.clone();
    let mut injections = vec![AbHom::identity(first.pi0())];
    for q in &parts[1..] {
        let c = coproduct(&acc, q)?;
        injections = injections.iter().map(|i| c.pi0.injections[0].compose(i)).collect();
        injections.push(c.pi0.injections[1].clone());
        acc = c.sg;
    }
    Ok((acc, injections))
}

/// The iterated product, with the maps from each `π₀` into the total `π₀`.
pub fn product_all(parts: &[SquareGroup]) -> Result<(SquareGroup, Vec<AbHom>)> {
    let Some(first) = parts.first() else { return coproduct_all(parts) };
    let mut acc = first.clone();
    let mut injections = vec![AbHom::identity(first.pi0())];
    for q in &parts[1..] {
        let c = product(&acc, q)?;
        injections = injections.iter().map(|i| c.pi0.injections[0].compose(i)).collect();
        injections.push(c.pi0.injections[1].clone());
        acc = c.sg;
    }
    Ok((acc, injections))
}

/// `Q̄` with `Q̄ee = Qee/(HP − 2·Id)`, the reflection into `SG_s`.
pub fn underline(q: &SquareGroup) -> SquareGroup {
    let e = q.qee();
    let (bar, proj) = q.hp().sub(&AbHom::identity(e).scale(2)).cokernel();
    let p = q.p().descend_along(&proj).expect("P(HP − 2) = 0");
    SquareGroup::from_parts(q.qe().clone(), bar, q.quadratic().push(&proj), p).expect("shapes")
}

/// `f_*(Q)` with the maps `A → f_*(Qee)` and `Qee → f_*(Qee)`.
#[derive(Clone, Debug)]
pub struct SgPushforward {
    pub sg: SquareGroup,
    pub from_target: AbHom,
    pub from_qee: AbHom,
}

/// Pushforward along `f: π₁ → A`; the involution on `A` is `−Id`.
pub fn pushforward(q: &SquareGroup, f: &AbHom) -> Result<SgPushforward> {
    let minus = AbHom::identity(f.target()).neg();
    let pushed = psg::pushforward(&q.wp(), f, &minus)?;
    let m: &PreSquareGroup = &pushed.psg;
    let sg = SquareGroup::from_parts(
        m.me().clone(),
        m.mee().clone(),
        q.quadratic().push(&pushed.from_mee),
        m.p().clone(),
    )?;
    if let Err(i) = sg.validate() {
        return Err(Error::Domain(format!("pushforward fails {i} (internal)")));
    }
    Ok(SgPushforward { sg, from_target: pushed.from_target, from_qee: pushed.from_mee })
}

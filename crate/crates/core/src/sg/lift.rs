use super::group::{QuadraticMap, SquareGroup};
use super::pointmap::PointMap;
use crate::abelian::{ext, AbHom, Elem};
use crate::error::{Error, Result};
use crate::nil2::{canonical_ta, h2_split, solve_coboundary, twist_ta, Cocycle, CocycleForm, CentralExtension, H2Class, Nil2Group};
use crate::psg::{omega, OmegaVariant, PreSquareGroup};
use crate::quadfun::{map_out_of, quad_value, theta, ExtClass, Functor, RawGen};

/// Largest `|π₀|` for which [`lift`] solves for `g` by propagation over all of `π₀`.
pub const DEFAULT_TABLE_BOUND: i128 = 4096;

/// `ϑ(M) ∈ H²(π₀, Mee)`.
#[derive(Clone, Debug)]
pub struct Obstruction {
    pub value: H2Class,
    pub zero: bool,
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Lifted(SquareGroup),
    NotPsg0,
    Obstructed(Obstruction),
}

/// How [`lift_via`] finds the map `g: π₀ → Mee` with cross effect `{x,y} − hξ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoboundaryRoute {
    /// Solve the coboundary equation over all of a finite `π₀`.
    Table,
    /// Take a homomorphic section of the extension of `π₀` by `Mee`.
    Section,
}

/// `h: im P → Mee` with `hP = Id + σ`, for `M ∈ PSG₀`.
pub fn lift_map_h(m: &PreSquareGroup) -> Option<AbHom> {
    if !m.is_psg0() {
        return None;
    }
    let plus = AbHom::identity(m.mee()).add(m.sigma());
    Some(plus.descend_along(m.p()).expect("Id + σ kills ker P in PSG₀"))
}

/// The extension of `π₀` by `Mee` with cocycle `{x̄,ȳ} − h ξ(x̄,ȳ)`, `ξ` the cocycle of `Me`.
fn bracket_extension(m: &PreSquareGroup, h: &AbHom) -> Nil2Group {
    let q = m.pi0();
    let form = CocycleForm { bilinear: m.bracket().to_vec(), carries: vec![m.mee().zero_elem(); q.ngens()] };
    let cocycle = Cocycle::Sum(vec![
        Cocycle::Form(form),
        Cocycle::Pullback { inner: Box::new(m.me().clone()), along: AbHom::identity(q), push: h.neg() },
    ]);
    Nil2Group::new(q.clone(), m.mee().clone(), cocycle).expect("{x,y} − hξ is a cocycle")
}

/// `ϑ(M) = [Mee] − h_*([Me])`; `None` outside `PSG₀`.
pub fn obstruction(m: &PreSquareGroup) -> Option<Obstruction> {
    let h = lift_map_h(m)?;
    let value = h2_split(&bracket_extension(m, &h));
    Some(Obstruction { zero: value.is_zero(), value })
}

/// A square group `Q` with `℘(Q) = M`, or the reason there is none.
pub fn lift(m: &PreSquareGroup) -> Result<LiftOutcome> {
    let route = match m.pi0().order() {
        Some(n) if n <= DEFAULT_TABLE_BOUND => CoboundaryRoute::Table,
        _ => CoboundaryRoute::Section,
    };
    lift_via(m, route, DEFAULT_TABLE_BOUND)
}

pub fn lift_via(m: &PreSquareGroup, route: CoboundaryRoute, max_order: i128) -> Result<LiftOutcome> {
    let Some(h) = lift_map_h(m) else { return Ok(LiftOutcome::NotPsg0) };
    let f = bracket_extension(m, &h);
    let value = h2_split(&f);
    if !value.is_zero() {
        return Ok(LiftOutcome::Obstructed(Obstruction { value, zero: false }));
    }
    let (q, mee) = (m.pi0(), m.mee());
    let g = match route {
        CoboundaryRoute::Table => {
            let u = solve_coboundary(&f, max_order)?
                .ok_or_else(|| Error::Domain("vanishing class without a coboundary (internal)".into()))?;
            PointMap::table(q, mee, u.iter().map(|v| mee.neg(v)).collect())?
        }
        CoboundaryRoute::Section => {
            let mut lifts: Vec<Elem> = Vec::new();
            for (i, &d) in q.factors().iter().enumerate() {
                if d == 0 {
                    lifts.push(mee.zero_elem());
                    continue;
                }
                let t = f.scale(d, &f.lift(&q.gen(i))).c;
                let c = AbHom::identity(mee)
                    .scale(d)
                    .solve(&mee.neg(&t))
                    .ok_or_else(|| Error::Domain("vanishing class without a section (internal)".into()))?;
                lifts.push(c);
            }
            PointMap::section(&f, lifts)?
        }
    };
    let sg = SquareGroup::from_parts(
        m.me().clone(),
        mee.clone(),
        QuadraticMap::Structured { h, g, cross: m.bracket().to_vec() },
        m.p().clone(),
    )?;
    if let Err(i) = sg.validate() {
        return Err(Error::Domain(format!("lifted data fails {i} (internal)")));
    }
    if &sg.wp() != m {
        return Err(Error::Domain("the lift does not reproduce M (internal)".into()));
    }
    Ok(LiftOutcome::Lifted(sg))
}

#[derive(Clone, Debug)]
pub enum OmegaLift {
    Lifted { extension: CentralExtension, sg: SquareGroup },
    ThetaNonzero(ExtClass),
}

/// A square group with `℘(Q) = ω(N)` for a suitable `N ∈ T_A`, when `θ(A) = 0`.
pub fn lift_omega(a: &crate::abelian::FgAbGroup) -> Result<OmegaLift> {
    let th = theta(a, false);
    if !th.is_zero() {
        return Ok(OmegaLift::ThetaNonzero(th));
    }
    let n = canonical_ta(a);
    let m = omega(&n, OmegaVariant::Plain)?;
    let obs = obstruction(&m).expect("ω(N) is in PSG₀");
    if !obs.value.pairing.is_zero() {
        return Err(Error::Domain("the obstruction of ω(N) has a nonzero pairing part (internal)".into()));
    }
    let lambda = quad_value(Functor::Lambda2, a);
    let tensor = quad_value(Functor::Tensor2, a);
    let t = tensor.group().clone();
    let wedge_to_tensor = map_out_of(&lambda, &t, |r| match r {
        RawGen::Product(i, j) => t.sub(&tensor.product(&a.gen(i), &a.gen(j)), &tensor.product(&a.gen(j), &a.gen(i))),
        _ => unreachable!(),
    });
    let ext_lambda = ext(a, lambda.group());
    let push = ext_lambda.pushforward(&obs.value.ext.ambient, &wedge_to_tensor);
    let x = push
        .solve(&obs.value.ext.coords)
        .ok_or_else(|| Error::Domain("the obstruction is not in the image of Ext(A, Lambda^2 A) (internal)".into()))?;
    let twisted = twist_ta(&n, &ExtClass { ambient: ext_lambda, coords: x })?;
    match lift(&omega(&twisted, OmegaVariant::Plain)?)? {
        LiftOutcome::Lifted(sg) => Ok(OmegaLift::Lifted { extension: twisted, sg }),
        _ => Err(Error::Domain("the twisted omega does not lift (internal)".into())),
    }
}

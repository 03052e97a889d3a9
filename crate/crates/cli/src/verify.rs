//! The batch verification driver: independent suites, each named by an anchor,
//! run concurrently and reported in a fixed order.

use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quadfun::abelian::{direct_sum, hom_group, is_exact_at, tensor, AbHom, Elem, FgAbGroup};
use quadfun::nil2::{canonical_ta, h2_split, Cocycle, Nil2Elem, Nil2Group};
use quadfun::psg::{
    self, omega, realize_psg, upsilon_lambda, KTriple, OmegaVariant, PreSquareGroup, RealizeMode,
};
use quadfun::quadfun::{
    cross_effect_check, exact_sequences, mod_two, mod_two_projection, nat_map, oracle_value, quad_value, theta,
    theta_from_extension, Functor, NatMap,
};
use quadfun::sg::{
    coproduct, half_invertible, lift, lift_omega, obstruction, product, realize_sg_delta, realize_sg_flat,
    realize_sg_stable, stable_universal, two_power_cyclic, underline, znil, LiftOutcome, Nil2Map, OmegaLift,
    QuadraticMap, SgRealizeOutcome, SquareGroup,
};

use crate::app::CliError;

pub const DEFAULT_MAX_ORDER: i128 = 64;
pub const DEFAULT_MAX_ARITY: usize = 4;

/// Bounds for the enumeration-based suites; at most the defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_order: i128,
    pub max_arity: usize,
}

impl Bounds {
    pub fn new(max_order: Option<i128>, max_arity: Option<usize>) -> Result<Self, CliError> {
        let b = Bounds {
            max_order: max_order.unwrap_or(DEFAULT_MAX_ORDER),
            max_arity: max_arity.unwrap_or(DEFAULT_MAX_ARITY),
        };
        if b.max_order < 1 || b.max_order > DEFAULT_MAX_ORDER || b.max_arity < 1 || b.max_arity > DEFAULT_MAX_ARITY {
            return Err(CliError::Usage(format!(
                "verify bounds must lie in 1..={DEFAULT_MAX_ORDER} (order) and 1..={DEFAULT_MAX_ARITY} (arity)"
            )));
        }
        Ok(b)
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_order: DEFAULT_MAX_ORDER, max_arity: DEFAULT_MAX_ARITY }
    }
}

pub struct SuiteInfo {
    pub anchor: &'static str,
    pub about: &'static str,
    run: fn(&mut Checker, &Bounds, bool),
}

pub const SUITES: [SuiteInfo; 13] = [
    SuiteInfo { anchor: "functor-tables", about: "P, Gamma, Psi and Phi_n on cyclic groups", run: functor_tables },
    SuiteInfo { anchor: "exact-sequences", about: "the four natural exact sequences on all small groups", run: exact_suites },
    SuiteInfo { anchor: "oracle-agreement", about: "presentation oracles against the closed-form values", run: oracles },
    SuiteInfo { anchor: "cross-effects", about: "F(A + B) = F(A) + F(B) + A (x) B for P, Gamma, Psi", run: cross_effects },
    SuiteInfo { anchor: "theta", about: "theta(A) on 2-power cyclic, odd and free groups", run: theta_suite },
    SuiteInfo { anchor: "omega-invariants", about: "invariants and stable invariants of omega and omega-bar", run: omega_invariants },
    SuiteInfo { anchor: "coproduct-laws", about: "order and homotopy groups of coproducts", run: coproduct_laws },
    SuiteInfo { anchor: "braided-groups", about: "braided and symmetric categorical groups from presquare groups", run: braided },
    SuiteInfo { anchor: "obstruction-round-trip", about: "lifting the presquare group of a square group", run: round_trip },
    SuiteInfo { anchor: "stable-reflection", about: "the reflection into stable square groups", run: stable_reflection },
    SuiteInfo { anchor: "realization-psg", about: "presquare groups with prescribed k-invariant", run: realization_psg },
    SuiteInfo { anchor: "realization-sg", about: "square groups with prescribed k-invariant", run: realization_sg },
    SuiteInfo { anchor: "delta", about: "Delta on realizers, its twist law and delta realization", run: delta_suite },
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub anchor: &'static str,
    pub about: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0
    }
}

#[derive(Default)]
struct Checker {
    checks: usize,
    failures: Vec<String>,
}

impl Checker {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Runs the named suites concurrently; results follow the order of `anchors`.
/// With `fault` naming a suite, that suite runs on corrupted built-in data.
pub fn run(anchors: &[&'static str], bounds: &Bounds, fault: Option<&str>) -> Vec<SuiteResult> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = anchors
            .iter()
            .map(|&anchor| {
                let info = SUITES.iter().find(|s| s.anchor == anchor).expect("known anchor");
                let corrupt = fault == Some(anchor);
                scope.spawn(move || {
                    let mut c = Checker::default();
                    let outcome = catch_unwind(AssertUnwindSafe(|| (info.run)(&mut c, bounds, corrupt)));
                    if let Err(p) = outcome {
                        let msg = p
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_default();
                        c.failures.push(format!("panicked: {msg}"));
                    }
                    SuiteResult { anchor, about: info.about, checks: c.checks, failures: c.failures }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite threads catch panics")).collect()
    })
}

fn g(s: &str) -> FgAbGroup {
    s.parse().expect("group literal")
}

fn random_group(rng: &mut StdRng, max_order: i128, max_free: usize) -> FgAbGroup {
    let free = rng.gen_range(0..=max_free);
    let all = FgAbGroup::enumerate(max_order, free);
    all[rng.gen_range(0..all.len())].clone()
}

fn functor_tables(c: &mut Checker, _: &Bounds, corrupt: bool) {
    let mut table: Vec<(Functor, FgAbGroup, FgAbGroup)> = vec![
        (Functor::P, g("Z"), g("Z^2")),
        (Functor::P, g("Z/2"), g("Z/4")),
        (Functor::Gamma, g("Z"), g("Z")),
        (Functor::Psi, g("Z"), g("Z")),
    ];
    for n in 2..=3u32 {
        let d = 1i128 << n;
        table.push((Functor::P, FgAbGroup::cyclic(d), FgAbGroup::new(&[2 * d, d / 2])));
    }
    for p in [3i128, 5] {
        for n in 1..=3u32 {
            let q = p.pow(n);
            table.push((Functor::P, FgAbGroup::cyclic(q), FgAbGroup::new(&[q, q])));
            table.push((Functor::Gamma, FgAbGroup::cyclic(q), FgAbGroup::cyclic(q)));
        }
    }
    for n in 1..=3u32 {
        table.push((Functor::Gamma, FgAbGroup::cyclic(1 << n), FgAbGroup::cyclic(1 << (n + 1))));
    }
    for n in 1..=12 {
        table.push((Functor::Psi, FgAbGroup::cyclic(n), FgAbGroup::cyclic(n)));
    }
    for n in 1..=4u32 {
        for k in 1..=4u32 {
            let expect = if k == n { FgAbGroup::cyclic(2) } else { FgAbGroup::zero() };
            table.push((Functor::PhiN(n), FgAbGroup::cyclic(1 << k), expect));
        }
    }
    for (f, a, expect) in table {
        let used = if corrupt && f == Functor::P { Functor::Gamma } else { f };
        let got = quad_value(used, &a).group().clone();
        c.check(got == expect, || format!("{f}({a}) = {got}, expected {expect}"));
    }
}

fn exact_suites(c: &mut Checker, b: &Bounds, corrupt: bool) {
    for free in 0..=2 {
        for a in FgAbGroup::enumerate(b.max_order, free) {
            for s in exact_sequences(&a) {
                c.check(s.holds(), || format!("{} ({}) on {a} fails at term {:?}", s.name, s.shape, s.failure));
            }
            let j = nat_map(NatMap::J, &a);
            let j = if corrupt { j.scale(2) } else { j };
            let q = nat_map(NatMap::Q, &a);
            c.check(j.is_injective() && is_exact_at(&j, &q) && q.is_surjective(), || {
                format!("0 -> Sym2 -> P -> Id -> 0 is not exact on {a}")
            });
        }
    }
}

fn oracles(c: &mut Checker, b: &Bounds, corrupt: bool) {
    let mut groups: Vec<FgAbGroup> = (1..=b.max_order.min(32)).map(FgAbGroup::cyclic).collect();
    if b.max_order >= 8 {
        groups.push(g("Z/2 + Z/4"));
    }
    for a in &groups {
        for f in [Functor::P, Functor::Gamma, Functor::Sym2, Functor::Lambda2] {
            match oracle_value(f, a, 64) {
                Ok(o) => {
                    let closed = if corrupt && f == Functor::P { Functor::Gamma } else { f };
                    let expect = quad_value(closed, a).group().clone();
                    c.check(o.agrees() && o.group() == &expect, || {
                        format!("{f}({a}): oracle {} against {expect}", o.group())
                    });
                }
                Err(e) => c.check(false, || format!("{f}({a}): {e}")),
            }
        }
    }
}

fn cross_effects(c: &mut Checker, b: &Bounds, corrupt: bool) {
    let gs: Vec<FgAbGroup> = ["0", "Z", "Z/2", "Z/4", "Z/3", "Z/2 + Z/2", "Z + Z/6"]
        .iter()
        .map(|s| g(s))
        .filter(|a| a.torsion_order() <= b.max_order)
        .collect();
    for f in [Functor::P, Functor::Gamma, Functor::Psi] {
        for x in &gs {
            for y in &gs {
                match cross_effect_check(f, x, y) {
                    Ok(r) => {
                        let holds = if corrupt { r.holds && r.witness.scale(2).is_iso() } else { r.holds };
                        c.check(holds, || format!("{f}({x} + {y}): {:?}", r.counterexample));
                    }
                    Err(e) => c.check(false, || format!("{f}({x} + {y}): {e}")),
                }
            }
        }
    }
}

fn table_group(q: &FgAbGroup, center: &FgAbGroup, f: impl Fn(&[i128], &[i128]) -> Elem) -> Nil2Group {
    let elems = q.elements().expect("finite");
    let t = elems.iter().flat_map(|x| elems.iter().map(|y| center.reduce(&f(x, y)))).collect();
    Nil2Group::new(q.clone(), center.clone(), Cocycle::Table(t)).expect("cocycle")
}

fn theta_suite(c: &mut Checker, b: &Bounds, corrupt: bool) {
    for k in 1..=3u32 {
        let a = FgAbGroup::cyclic(1 << k);
        if a.torsion_order() > b.max_order {
            continue;
        }
        let t = if corrupt && k == 2 { theta(&a, true) } else { theta(&a, false) };
        c.check(!t.is_zero(), || format!("theta({a}) vanishes"));
        c.check(!theta_from_extension(&a).is_zero(), || format!("theta({a}) from P(A) vanishes"));
    }
    for a in FgAbGroup::enumerate(b.max_order.min(45), 0).into_iter().filter(|a| a.torsion_order() % 2 == 1) {
        c.check(theta(&a, false).is_zero(), || format!("theta({a}) is nonzero"));
        c.check(theta_from_extension(&a).is_zero(), || format!("theta({a}) from P(A) is nonzero"));
    }
    for r in 0..=2 {
        let a = FgAbGroup::free(r);
        c.check(theta(&a, false).is_zero(), || format!("theta({a}) is nonzero"));
    }
    for a in FgAbGroup::enumerate(b.max_order.min(32), 0) {
        let sym = quad_value(Functor::Sym2, &a);
        let h = h2_split(&table_group(&a, sym.group(), |x, y| sym.product(x, y)));
        let t = theta(&a, false);
        c.check(h.pairing.is_zero() && h.ext.coords == t.coords, || {
            format!("theta({a}) disagrees with the class of the symmetric cocycle")
        });
        let e = theta_from_extension(&a);
        c.check(e.carries() == t.carries(), || format!("theta({a}): the two routes disagree"));
    }
}

const CORPUS: [&str; 5] = ["Z", "Z/2", "Z/3", "Z/4", "Z/2 + Z/2"];

fn om(a: &FgAbGroup, v: OmegaVariant) -> PreSquareGroup {
    omega(&canonical_ta(a), v).expect("omega")
}

fn omega_invariants(c: &mut Checker, _: &Bounds, corrupt: bool) {
    for s in CORPUS {
        let a = g(s);
        let m = om(&a, if corrupt { OmegaVariant::Bar } else { OmegaVariant::Plain });
        c.check(m.validate().is_ok(), || format!("omega({s}) is not a presquare group"));
        if let Ok(r) = m.validate_exhaustive(64) {
            c.check(r.is_ok(), || format!("omega({s}) fails {r:?} exhaustively"));
        }
        let inv = m.invariants();
        c.check(inv.pi0 == a, || format!("pi_0 of omega({s}) is {}", inv.pi0));
        let psi = nat_map(NatMap::PsiIncl, &a);
        let through = (psi.target() == inv.pi1.inclusion.target()).then(|| psi.lift_through(&inv.pi1.inclusion));
        match through.flatten() {
            Some(phi) => {
                c.check(phi.is_iso(), || format!("Psi({s}) -> pi_1 is not an isomorphism"));
                c.check(inv.k == phi.compose(&nat_map(NatMap::TauPrime, &a)), || format!("k of omega({s}) is not tau'"));
            }
            None => c.check(false, || format!("Psi({s}) does not land in pi_1")),
        }
        c.check(inv.is_flat && inv.is_psg0, || format!("omega({s}) is not flat in PSG0"));
        let st = m.stable_invariants();
        c.check(&st.pi1_bar.group == mod_two(&a).group(), || format!("stable pi_1 of omega({s}) is not Z/2 (x) A"));
        let square = st.k_bar.is_iso()
            && st.epsilon.source() == inv.k.target()
            && st.epsilon.compose(&inv.k) == st.k_bar.compose(&nat_map(NatMap::GammaMod2, &a));
        c.check(square, || format!("the k-squares of omega({s}) do not commute"));

        let m = om(&a, OmegaVariant::Bar);
        let inv = m.invariants();
        c.check(inv.is_psgs, || format!("omega-bar({s}) is not in PSGs"));
        c.check(&inv.pi1.group == mod_two(&a).group(), || format!("pi_1 of omega-bar({s})"));
        let iso = inv.k.descend_along(&nat_map(NatMap::GammaMod2, &a));
        c.check(iso.is_some_and(|i| i.is_iso()), || format!("k of omega-bar({s}) is not Gamma -> Z/2 (x) A"));
        let st = m.stable_invariants();
        c.check(st.epsilon.is_iso() && st.k_bar.is_iso(), || format!("stable invariants of omega-bar({s})"));
    }
}

fn coproduct_laws(c: &mut Checker, _: &Bounds, corrupt: bool) {
    for s in CORPUS {
        for t in CORPUS {
            let (m, n) = (om(&g(s), OmegaVariant::Plain), om(&g(t), OmegaVariant::Plain));
            let z = if corrupt { psg::product(&m, &n).psg } else { psg::coproduct(&m, &n).psg };
            c.check(z.validate().is_ok(), || format!("{s} v {t} is not a presquare group"));
            if let (Some(x), Some(y)) = (m.me().order_of_group(), n.me().order_of_group()) {
                if x <= 16 && y <= 16 {
                    if let Ok(r) = z.validate_exhaustive(128) {
                        c.check(r.is_ok(), || format!("{s} v {t} fails {r:?} exhaustively"));
                    }
                    let (a, b) = (m.me().center().order().unwrap(), n.me().center().order().unwrap());
                    let (gq, hq) = (m.pi0(), n.pi0());
                    let gh = tensor(gq, hq).group().order().unwrap();
                    let expect = a * b * gh * gq.order().unwrap() * hq.order().unwrap();
                    let got = z.me().order_of_group();
                    c.check(got == Some(expect), || format!("|Me| of {s} v {t} is {got:?}, expected {expect}"));
                }
            }
            let (im, inn, iz) = (m.invariants(), n.invariants(), z.invariants());
            c.check(iz.pi0 == direct_sum(&[im.pi0.clone(), inn.pi0.clone()]).group, || format!("pi_0 of {s} v {t}"));
            let cross = tensor(&im.pi0, &inn.pi0).group().clone();
            let pi1 = direct_sum(&[im.pi1.group.clone(), inn.pi1.group.clone(), cross]).group;
            c.check(iz.pi1.group == pi1, || format!("pi_1 of {s} v {t} is {}, expected {pi1}", iz.pi1.group));
            let (sm, sn, sz) = (m.stable_invariants(), n.stable_invariants(), z.stable_invariants());
            let bar = direct_sum(&[sm.pi1_bar.group.clone(), sn.pi1_bar.group.clone()]).group;
            c.check(sz.pi1_bar.group == bar, || format!("stable pi_1 of {s} v {t}"));
        }
    }
}

fn braided(c: &mut Checker, b: &Bounds, corrupt: bool) {
    for s in CORPUS {
        let a = g(s);
        for v in [OmegaVariant::Plain, OmegaVariant::Bar] {
            let m = om(&a, v);
            let u = upsilon_lambda(&m, 64);
            c.check(u.valid(), || format!("{v:?}({s}): {:?} {:?}", u.bcg_check, u.scg_check));
        }
        let m = om(&a, OmegaVariant::Plain);
        if let Ok(one) = psg::odot_eval(1, &m, b.max_arity, 1 << 20) {
            let same = if corrupt { one.order_of_group() == Some(0) } else { &one == m.me() };
            c.check(same, || format!("M (.) X_1 differs from Me for omega({s})"));
        }
        if let (Some(o), true) = (m.me().order_of_group(), b.max_arity >= 2) {
            let two = psg::odot_eval(2, &m, b.max_arity, 1 << 20).map(|x| x.order_of_group());
            let t = tensor(m.pi0(), m.pi0()).group().order().unwrap();
            c.check(matches!(two, Ok(Some(n)) if n == o * o * t), || format!("|M (.) X_2| for omega({s})"));
        }
    }
}

fn lifted(m: &PreSquareGroup) -> Option<SquareGroup> {
    match lift(m) {
        Ok(LiftOutcome::Lifted(q)) => Some(q),
        _ => None,
    }
}

fn omega_lift(a: &FgAbGroup) -> SquareGroup {
    match lift_omega(a).expect("lift_omega") {
        OmegaLift::Lifted { sg, .. } => sg,
        OmegaLift::ThetaNonzero(_) => panic!("theta({a}) is nonzero"),
    }
}

/// Built-in realizers with products, coproducts and stable reflections of them.
fn sg_corpus(corrupt: bool) -> Vec<(String, SquareGroup)> {
    let mut t1 = two_power_cyclic(1).expect("builtin");
    if corrupt {
        if let QuadraticMap::Table(mut t) = t1.quadratic().clone() {
            t[2] = t1.qee().add(&t[2], &[1]);
            t1 = SquareGroup::from_parts(t1.qe().clone(), t1.qee().clone(), QuadraticMap::Table(t), t1.p().clone())
                .expect("shapes");
        }
    }
    let h3 = half_invertible(&g("Z/3")).expect("builtin");
    vec![
        ("Znil".into(), znil()),
        ("TwoPowerCyclic(1)".into(), t1.clone()),
        ("TwoPowerCyclic(2)".into(), two_power_cyclic(2).expect("builtin")),
        ("TwoPowerCyclic(3)".into(), two_power_cyclic(3).expect("builtin")),
        ("HalfInvertible(Z/3)".into(), h3.clone()),
        ("HalfInvertible(Z/15)".into(), half_invertible(&g("Z/15")).expect("builtin")),
        ("StableUniversal(Z/4)".into(), stable_universal(&g("Z/4")).expect("builtin").0),
        ("StableUniversal(Z + Z/2)".into(), stable_universal(&g("Z + Z/2")).expect("builtin").0),
        ("lift_omega(Z/3)".into(), omega_lift(&g("Z/3"))),
        ("lift_omega(Z)".into(), omega_lift(&g("Z"))),
        ("Znil x TwoPowerCyclic(1)".into(), product(&znil(), &t1).map(|c| c.sg).unwrap_or_else(|_| t1.clone())),
        ("TwoPowerCyclic(1) v HalfInvertible(Z/3)".into(), coproduct(&t1, &h3).map(|c| c.sg).unwrap_or_else(|_| t1.clone())),
        ("TwoPowerCyclic(1) v TwoPowerCyclic(1)".into(), coproduct(&t1, &t1).map(|c| c.sg).unwrap_or_else(|_| t1.clone())),
        (
            "Znil v TwoPowerCyclic(2)".into(),
            coproduct(&znil(), &two_power_cyclic(2).expect("builtin")).expect("coproduct").sg,
        ),
    ]
}

/// `H` agrees on all of `Qe` when small, on a window otherwise.
fn same_h(a: &SquareGroup, b: &SquareGroup) -> bool {
    let points = match a.qe().elements() {
        Some(xs) if xs.len() <= 512 => xs,
        _ => {
            let (qs, _) = a.pi0().sample(64);
            let (cs, _) = a.qe().center().sample(8);
            qs.iter().flat_map(|x| cs.iter().map(move |y| Nil2Elem::new(x.clone(), y.clone()))).collect()
        }
    };
    points.iter().all(|x| a.qee().eq_elem(&a.eval(x), &b.eval(x)))
}

fn round_trip(c: &mut Checker, _: &Bounds, corrupt: bool) {
    let mut rng = StdRng::seed_from_u64(5);
    for (name, q) in sg_corpus(corrupt) {
        let homs = hom_group(q.pi0(), q.qee());
        let mut instances = vec![q.clone()];
        for _ in 0..5 {
            instances.push(q.twist(&homs.random(&mut rng, 5)).expect("twist"));
        }
        for q in instances {
            c.check(q.validate().is_ok(), || format!("{name} is not a square group: {:?}", q.validate()));
            let w = q.wp();
            let Some(obs) = obstruction(&w) else {
                c.check(false, || format!("wp({name}) is not in PSG0"));
                continue;
            };
            c.check(obs.zero, || format!("the obstruction of wp({name}) is nonzero"));
            let Some(q2) = lifted(&w) else {
                c.check(false, || format!("wp({name}) does not lift"));
                continue;
            };
            c.check(q2.wp() == w, || format!("the lift of wp({name}) has a different presquare group"));
            let id = Nil2Map::identity(q.qe());
            match q.alpha_defect(&q2, &id, &AbHom::identity(q.qee())) {
                Ok(alpha) => {
                    let back = q.twist(&alpha).map(|t| same_h(&t, &q2)).unwrap_or(false);
                    c.check(back, || format!("the twist by alpha does not carry {name} to its lift"));
                }
                Err(e) => c.check(false, || format!("{name}: {e}")),
            }
            let beta = homs.random(&mut rng, 5);
            let unique = q.twist(&beta).ok().and_then(|t| q.alpha_defect(&t, &id, &AbHom::identity(q.qee())).ok());
            c.check(unique.as_ref() == Some(&beta), || format!("{name}: the twist is not recovered uniquely"));
        }
    }
    let bad = PreSquareGroup::from_involution(AbHom::identity(&g("Z"))).expect("Z with sigma = Id");
    c.check(bad.validate().is_ok(), || "Me = 0, Mee = Z, sigma = Id is not a presquare group".into());
    c.check(matches!(lift(&bad), Ok(LiftOutcome::NotPsg0)), || "Me = 0, Mee = Z, sigma = Id lifts".into());
}

fn stable_reflection(c: &mut Checker, _: &Bounds, corrupt: bool) {
    for (name, q) in sg_corpus(false) {
        let u = if corrupt { q.clone() } else { underline(&q) };
        c.check(u.validate().is_ok(), || format!("the reflection of {name} is not a square group"));
        c.check(u.hp() == AbHom::identity(u.qee()).scale(2), || format!("HP != 2 on the reflection of {name}"));
        c.check(u.wp().is_psgs(), || format!("the reflection of {name} is not stable"));
        let pi1 = u.pi1().group;
        c.check(pi1 == q.wp().stable_invariants().pi1_bar.group, || format!("pi_1 of the reflection of {name}"));
    }
    for s in ["Z/4", "Z/2", "Z", "Z/3", "Z/2 + Z/4", "Z + Z/6"] {
        let a = g(s);
        let (u, phi0) = stable_universal(&a).expect("builtin");
        let st = u.wp().stable_invariants();
        let b = mod_two(&a).group().clone();
        let t = KTriple::stable(a.clone(), AbHom::identity(&b)).expect("triple");
        let phi1 = st.k_bar.compose(&mod_two(&a).map(&mod_two(u.pi0()), &AbHom::identity(&g("Z/2")), &phi0));
        c.check(t.is_iso_via(&st.triple(u.pi0()), &phi0, &phi1), || format!("StableUniversal({s})"));
    }
}

/// A flat target `k = k'∘τ'` through `Ψ(A)`.
fn flat_target(rng: &mut StdRng, max_order: i128) -> KTriple {
    let a = random_group(rng, max_order, 1);
    let b = random_group(rng, 16, 1);
    let psi = quad_value(Functor::Psi, &a).group().clone();
    let k = hom_group(&psi, &b).random(rng, 3).compose(&nat_map(NatMap::TauPrime, &a));
    KTriple::whitehead(a, k, None).expect("triple")
}

fn stable_target(rng: &mut StdRng, max_order: i128) -> KTriple {
    let a = random_group(rng, max_order, 1);
    let b = FgAbGroup::new(&vec![2; rng.gen_range(0..=3)]);
    let k = hom_group(mod_two(&a).group(), &b).random(rng, 1);
    KTriple::stable(a, k).expect("triple")
}

/// Under corruption the target handed to the realizer has `k = 0`.
fn handed(t: &KTriple, corrupt: bool) -> KTriple {
    match corrupt {
        true => KTriple { k: AbHom::zero(t.k.source(), t.k.target()), ..t.clone() },
        false => t.clone(),
    }
}

fn realization_psg(c: &mut Checker, b: &Bounds, corrupt: bool) {
    let mut rng = StdRng::seed_from_u64(11);
    let bound = b.max_order.min(32);
    for _ in 0..20 {
        let t = flat_target(&mut rng, bound);
        match realize_psg(&handed(&t, corrupt), RealizeMode::Flat23) {
            Ok(r) => {
                c.check(r.psg.validate().is_ok(), || format!("flat {} -> {}: invalid", t.pi_n, t.pi_n1));
                let ok = t.is_iso_via(&r.psg.invariants().triple(), &r.phi0, &r.phi1);
                c.check(ok, || format!("flat {} -> {}: invariants differ", t.pi_n, t.pi_n1));
            }
            Err(e) => c.check(false, || format!("flat {} -> {}: {e}", t.pi_n, t.pi_n1)),
        }
    }
    for _ in 0..20 {
        let t = stable_target(&mut rng, bound);
        match realize_psg(&handed(&t, corrupt), RealizeMode::Stable) {
            Ok(r) => {
                c.check(r.psg.validate().is_ok(), || format!("stable {} -> {}: invalid", t.pi_n, t.pi_n1));
                let st = r.psg.stable_invariants();
                let ok = t.is_iso_via(&st.triple(&t.pi_n), &r.phi0, &r.phi1);
                c.check(ok, || format!("stable {} -> {}: invariants differ", t.pi_n, t.pi_n1));
            }
            Err(e) => c.check(false, || format!("stable {} -> {}: {e}", t.pi_n, t.pi_n1)),
        }
    }
}

fn realization_sg(c: &mut Checker, b: &Bounds, corrupt: bool) {
    let mut rng = StdRng::seed_from_u64(17);
    let bound = b.max_order.min(32);
    for _ in 0..20 {
        let t = flat_target(&mut rng, bound);
        match realize_sg_flat(&handed(&t, corrupt)) {
            Ok(SgRealizeOutcome::Realized(r)) => {
                c.check(r.sg.validate().is_ok(), || format!("flat {} -> {}: invalid", t.pi_n, t.pi_n1));
                let ok = t.is_iso_via(&r.sg.wp().invariants().triple(), &r.phi0, &r.phi1);
                c.check(ok, || format!("flat {} -> {}: invariants differ", t.pi_n, t.pi_n1));
            }
            Ok(SgRealizeOutcome::UnsupportedPi2 { summand, .. }) => {
                c.check(false, || format!("flat {} -> {}: no realizer for {summand}", t.pi_n, t.pi_n1))
            }
            Err(e) => c.check(false, || format!("flat {} -> {}: {e}", t.pi_n, t.pi_n1)),
        }
    }
    for _ in 0..20 {
        let t = stable_target(&mut rng, bound);
        match realize_sg_stable(&handed(&t, corrupt)) {
            Ok(r) => {
                c.check(r.sg.validate().is_ok() && r.sg.wp().is_psgs(), || {
                    format!("stable {} -> {}: invalid", t.pi_n, t.pi_n1)
                });
                let st = r.sg.wp().stable_invariants();
                let ok = t.is_iso_via(&st.triple(r.sg.pi0()), &r.phi0, &r.phi1);
                c.check(ok, || format!("stable {} -> {}: invariants differ", t.pi_n, t.pi_n1));
            }
            Err(e) => c.check(false, || format!("stable {} -> {}: {e}", t.pi_n, t.pi_n1)),
        }
    }
    let z2 = g("Z/2");
    match lift_omega(&z2) {
        Ok(OmegaLift::ThetaNonzero(t)) => {
            c.check(!t.is_zero() && t.coords == theta(&z2, false).coords, || "the certificate is not theta(Z/2)".into())
        }
        _ => c.check(false, || "lift_omega(Z/2) does not fail with theta".into()),
    }
}

fn delta_suite(c: &mut Checker, b: &Bounds, corrupt: bool) {
    let znil_like = if corrupt { two_power_cyclic(1).expect("builtin") } else { znil() };
    for (name, q) in [("Znil", znil_like), ("HalfInvertible(Z/3)", half_invertible(&g("Z/3")).expect("builtin"))] {
        let ok = q.delta().is_ok_and(|d| {
            q.pi0() == q.qee() && q.pi1().inclusion.compose(&d) == AbHom::identity(q.qee())
        });
        c.check(ok, || format!("Delta({name}) is not the identity"));
    }
    let mut rng = StdRng::seed_from_u64(21);
    let corpus = sg_corpus(false);
    let mut twists = 0;
    for (name, q) in corpus.iter().cycle().take(10) {
        let (Ok(d), pi1, w) = (q.delta(), q.pi1(), q.wp()) else {
            c.check(false, || format!("Delta({name}) is not defined"));
            continue;
        };
        let st = w.stable_invariants();
        c.check(st.epsilon.compose(&d) == st.k_bar.compose(&mod_two_projection(q.pi0())), || {
            format!("epsilon Delta != k-bar mod 2 on {name}")
        });
        let alpha = hom_group(q.pi0(), q.qee()).random(&mut rng, 5);
        let dt = q.twist(&alpha).and_then(|t| t.delta());
        let expect = pi1.inclusion.compose(&d).add(&w.sigma().compose(&alpha)).sub(&alpha);
        c.check(dt.is_ok_and(|dt| pi1.inclusion.compose(&dt) == expect), || format!("twist law on {name}"));
        twists += 1;
    }
    c.check(twists == 10, || format!("only {twists} twists checked"));
    let mut rng = StdRng::seed_from_u64(23);
    let bound = b.max_order.min(16);
    for _ in 0..10 {
        let a = random_group(&mut rng, bound, 1);
        let bb = random_group(&mut rng, 16, 1);
        let f = hom_group(&a, &bb).random(&mut rng, 4);
        match realize_sg_delta(&f) {
            Ok(r) => {
                let ok = r.sg.validate().is_ok()
                    && r.phi0.is_iso()
                    && r.phi1.is_iso()
                    && r.sg.delta().is_ok_and(|d| d.compose(&r.phi0) == r.phi1.compose(&f));
                c.check(ok, || format!("delta realization of {a} -> {bb}"));
            }
            Err(e) => c.check(false, || format!("delta realization of {a} -> {bb}: {e}")),
        }
    }
}

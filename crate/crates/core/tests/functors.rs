use std::time::Instant;

use proptest::prelude::*;
use quadfun::abelian::{AbHom, FgAbGroup};
use quadfun::quadfun::{
    cross_effect_check, exact_sequences, induced_map, nat_map, oracle_value, quad_value, theta,
    theta_from_extension, Functor, NatMap,
};

fn g(s: &str) -> FgAbGroup {
    s.parse().unwrap()
}

fn value(f: Functor, s: &str) -> FgAbGroup {
    quad_value(f, &g(s)).group().clone()
}

#[test]
fn table_values() {
    let start = Instant::now();
    assert_eq!(value(Functor::P, "Z"), g("Z + Z"));
    assert_eq!(value(Functor::P, "Z/2"), g("Z/4"));
    for n in 2..=3u32 {
        let d = 1i128 << n;
        let expect = FgAbGroup::new(&[2 * d, d / 2]);
        assert_eq!(quad_value(Functor::P, &FgAbGroup::cyclic(d)).group(), &expect);
    }
    for q in [3, 9, 27, 5, 25, 125] {
        let expect = FgAbGroup::new(&[q, q]);
        assert_eq!(quad_value(Functor::P, &FgAbGroup::cyclic(q)).group(), &expect);
        assert_eq!(quad_value(Functor::Gamma, &FgAbGroup::cyclic(q)).group(), &FgAbGroup::cyclic(q));
    }
    assert_eq!(value(Functor::Gamma, "Z"), g("Z"));
    for n in 1..=3u32 {
        let d = 1i128 << n;
        assert_eq!(quad_value(Functor::Gamma, &FgAbGroup::cyclic(d)).group(), &FgAbGroup::cyclic(2 * d));
    }
    assert_eq!(value(Functor::Psi, "Z"), g("Z"));
    for n in 1..=12 {
        let a = FgAbGroup::cyclic(n);
        assert_eq!(quad_value(Functor::Psi, &a).group(), &a);
    }
    for n in 1..=4u32 {
        for k in 1..=4u32 {
            let v = quad_value(Functor::PhiN(n), &FgAbGroup::cyclic(1 << k));
            let expect = if k == n { FgAbGroup::cyclic(2) } else { FgAbGroup::zero() };
            assert_eq!(v.group(), &expect, "Phi_{n}(Z/2^{k})");
        }
    }
    assert_eq!(value(Functor::P, "Z/2 + Z/2"), g("Z/4 + Z/4 + Z/2"));
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn exactness_suites() {
    let start = Instant::now();
    let mut count = 0;
    for free in 0..=2 {
        for a in FgAbGroup::enumerate(64, free) {
            for c in exact_sequences(&a) {
                assert!(c.holds(), "{} ({}) fails at term {:?} on {a}", c.name, c.shape, c.failure);
            }
            count += 1;
        }
    }
    assert!(count > 100);
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 10.0, "exactness suites took {secs:.2}s");
}

#[test]
fn tau_prime_and_mod_two_factorization() {
    for free in 0..=1 {
        for a in FgAbGroup::enumerate(32, free) {
            let t = nat_map(NatMap::TauPrime, &a);
            assert!(t.is_surjective(), "tau' not onto on {a}");
            let composite = nat_map(NatMap::PsiMod2, &a).compose(&t);
            assert_eq!(composite, nat_map(NatMap::GammaMod2, &a), "on {a}");
        }
    }
    assert!(nat_map(NatMap::TauPrime, &g("Z")).is_iso());
    for n in (1..=31).step_by(2) {
        assert!(nat_map(NatMap::TauPrime, &FgAbGroup::cyclic(n)).is_iso(), "Z/{n}");
    }
}

#[test]
fn oracles_agree() {
    let start = Instant::now();
    let mut groups: Vec<FgAbGroup> = (1..=32).map(FgAbGroup::cyclic).collect();
    groups.push(g("Z/2 + Z/4"));
    for a in &groups {
        for f in [Functor::P, Functor::Gamma, Functor::Sym2, Functor::Lambda2] {
            let o = oracle_value(f, a, 64).unwrap();
            assert!(o.agrees(), "{f} on {a}: oracle {} vs {}", o.group(), quad_value(f, a).group());
        }
    }
    eprintln!("oracle agreement took {:.2}s", start.elapsed().as_secs_f64());
}

#[test]
fn theta_values() {
    for k in 1..=3u32 {
        let a = FgAbGroup::cyclic(1 << k);
        assert!(!theta(&a, false).is_zero());
        assert!(!theta_from_extension(&a).is_zero());
    }
    for a in FgAbGroup::enumerate(45, 0).into_iter().filter(|a| a.torsion_order() % 2 == 1) {
        assert!(theta(&a, false).is_zero(), "{a}");
        assert!(theta_from_extension(&a).is_zero(), "{a}");
    }
    for r in 0..=2 {
        assert!(theta(&FgAbGroup::free(r), false).is_zero());
    }
}

#[test]
fn theta_routes_agree() {
    for free in 0..=1 {
        for a in FgAbGroup::enumerate(32, free) {
            let s = theta(&a, false);
            let e = theta_from_extension(&a);
            assert_eq!(s.group(), e.group());
            assert_eq!(s.carries(), e.carries(), "on {a}");
        }
    }
}

#[test]
fn cross_effects_hold() {
    let gs = ["0", "Z", "Z/2", "Z/4", "Z/3", "Z/2 + Z/2", "Z + Z/6"];
    for f in [Functor::P, Functor::Gamma, Functor::Psi] {
        for a in gs {
            for b in gs {
                let c = cross_effect_check(f, &g(a), &g(b)).unwrap();
                assert!(c.holds, "{f}({a} + {b}): {:?}", c.counterexample);
            }
        }
    }
}

fn small_group() -> impl Strategy<Value = FgAbGroup> {
    (prop::collection::vec(prop::sample::select(vec![0i128, 2, 3, 4, 6, 8]), 0..=2))
        .prop_map(|orders| FgAbGroup::new(&orders))
}

fn hom_between(a: FgAbGroup, b: FgAbGroup) -> impl Strategy<Value = AbHom> {
    let n = a.ngens() * b.ngens();
    prop::collection::vec(-5i128..=5, n).prop_filter_map("not a homomorphism", move |v| {
        let cols: Vec<Vec<i128>> =
            (0..a.ngens()).map(|i| v[i * b.ngens()..(i + 1) * b.ngens()].to_vec()).collect();
        AbHom::from_images(a.clone(), b.clone(), &cols).ok()
    })
}

fn composable() -> impl Strategy<Value = (AbHom, AbHom)> {
    (small_group(), small_group(), small_group()).prop_flat_map(|(a, b, c)| {
        (hom_between(a, b.clone()), hom_between(b, c))
    })
}

const ALL_FUNCTORS: [Functor; 7] = [
    Functor::P,
    Functor::Gamma,
    Functor::Psi,
    Functor::Sym2,
    Functor::Lambda2,
    Functor::LambdaTilde2,
    Functor::Tensor2,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn induced_maps_compose((h, k) in composable()) {
        for f in ALL_FUNCTORS.into_iter().chain([Functor::Phi]) {
            let lhs = induced_map(f, &k.compose(&h));
            let rhs = induced_map(f, &k).compose(&induced_map(f, &h));
            prop_assert_eq!(lhs, rhs, "{}", f);
        }
    }

    #[test]
    fn natural_maps_commute((h, _k) in composable()) {
        let (a, b) = (h.source(), h.target());
        let square = |n: NatMap, src: Functor, dst: Functor| {
            let top = induced_map(dst, &h).compose(&nat_map(n, a));
            let bottom = nat_map(n, b).compose(&induced_map(src, &h));
            top == bottom
        };
        prop_assert!(square(NatMap::J, Functor::Sym2, Functor::P));
        prop_assert!(square(NatMap::Nu, Functor::P, Functor::Gamma));
        prop_assert!(square(NatMap::Tau, Functor::Gamma, Functor::Tensor2));
        prop_assert!(square(NatMap::TauPrime, Functor::Gamma, Functor::Psi));
        prop_assert!(square(NatMap::Wedge, Functor::Tensor2, Functor::Lambda2));
        prop_assert!(square(NatMap::Iota, Functor::Phi, Functor::Gamma));
        let q_square = h.compose(&nat_map(NatMap::Q, a)) == nat_map(NatMap::Q, b).compose(&induced_map(Functor::P, &h));
        prop_assert!(q_square);
    }

    #[test]
    fn identity_induces_identity(a in small_group()) {
        for f in ALL_FUNCTORS {
            let id = induced_map(f, &AbHom::identity(&a));
            prop_assert_eq!(id, AbHom::identity(quad_value(f, &a).group()));
        }
    }
}

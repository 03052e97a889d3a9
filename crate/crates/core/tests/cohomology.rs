use proptest::prelude::*;
use quadfun::abelian::{ext, hom_group, AbHom, Elem, FgAbGroup};
use quadfun::nil2::{
    canonical_ta, class_to_cocycle, difference_class, h2_split, solve_coboundary, twist_ta, Cocycle,
    CocycleForm, Nil2Group,
};
use quadfun::quadfun::{quad_value, theta, ExtClass, Functor};

fn table_group(q: &FgAbGroup, c: &FgAbGroup, f: impl Fn(&[i128], &[i128]) -> Elem) -> Nil2Group {
    let elems = q.elements().unwrap();
    let t = elems.iter().flat_map(|a| elems.iter().map(|b| f(a, b)).collect::<Vec<_>>()).collect();
    Nil2Group::new(q.clone(), c.clone(), Cocycle::Table(t)).unwrap()
}

/// All normalized 1-cochains `Q → C`, as value lists over the enumeration of `Q`.
fn all_cochains(q: &FgAbGroup, c: &FgAbGroup) -> Vec<Vec<Elem>> {
    let cs = c.elements().unwrap();
    let n = q.order().unwrap() as usize;
    let mut out = vec![vec![c.zero_elem()]];
    for _ in 1..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                cs.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    out
}

fn coboundary(q: &FgAbGroup, c: &FgAbGroup, u: &[Elem]) -> Vec<Elem> {
    let elems = q.elements().unwrap();
    let mut t = Vec::new();
    for a in &elems {
        for b in &elems {
            let s = q.elem_index(&q.add(a, b));
            t.push(c.sub(&c.add(&u[q.elem_index(a)], &u[q.elem_index(b)]), &u[s]));
        }
    }
    t
}

/// `|H²(Q, C)|` by counting normalized cocycles and dividing by the coboundaries.
fn h2_order_by_enumeration(q: &FgAbGroup, c: &FgAbGroup) -> usize {
    let elems = q.elements().unwrap();
    let n = elems.len();
    let cs = c.elements().unwrap();
    let free: Vec<(usize, usize)> = (1..n).flat_map(|a| (1..n).map(move |b| (a, b))).collect();
    let mut cocycles = 0usize;
    let total = cs.len().pow(free.len() as u32);
    for code in 0..total {
        let mut t = vec![c.zero_elem(); n * n];
        let mut k = code;
        for &(a, b) in &free {
            t[a * n + b] = cs[k % cs.len()].clone();
            k /= cs.len();
        }
        if Nil2Group::new(q.clone(), c.clone(), Cocycle::Table(t)).is_ok() {
            cocycles += 1;
        }
    }
    let cochains = cs.len().pow((n - 1) as u32);
    let homs = hom_group(q, c).group().order().unwrap() as usize;
    cocycles * homs / cochains
}

#[test]
fn h2_orders_match_enumeration() {
    for (q, c) in [("Z/2", "Z/2"), ("Z/3", "Z/3"), ("Z/4", "Z/2"), ("Z/2 + Z/2", "Z/2"), ("Z/2", "Z/4")] {
        let (q, c): (FgAbGroup, FgAbGroup) = (q.parse().unwrap(), c.parse().unwrap());
        let lambda = quad_value(Functor::Lambda2, &q);
        let expect = ext(&q, &c).group().order().unwrap() * hom_group(lambda.group(), &c).group().order().unwrap();
        assert_eq!(h2_order_by_enumeration(&q, &c) as i128, expect, "H²({q}, {c})");
    }
}

#[test]
fn solve_coboundary_matches_enumeration() {
    for (qs, cs) in [("Z/2", "Z/2"), ("Z/4", "Z/2"), ("Z/2 + Z/2", "Z/2"), ("Z/2 + Z/4", "Z/2"), ("Z/3", "Z/3"), ("Z/2 + Z/2", "Z/4")] {
        let (q, c): (FgAbGroup, FgAbGroup) = (qs.parse().unwrap(), cs.parse().unwrap());
        let cochains = all_cochains(&q, &c);
        let lambda = quad_value(Functor::Lambda2, &q);
        let amb = ext(&q, &c);
        let homs = hom_group(lambda.group(), &c);
        for e in amb.group().elements().unwrap() {
            for h in homs.group().elements().unwrap() {
                let class = quadfun::nil2::H2Class {
                    ext: ExtClass { ambient: amb.clone(), coords: e.clone() },
                    pairing: homs.to_hom(&h),
                };
                let g = Nil2Group::new(q.clone(), c.clone(), Cocycle::Form(class_to_cocycle(&class))).unwrap();
                let t = g.to_table(64).unwrap();
                let by_enumeration = cochains.iter().any(|u| coboundary(&q, &c, u) == t);
                let solved = solve_coboundary(&g, 64).unwrap();
                assert_eq!(solved.is_some(), by_enumeration, "{qs}, {cs}");
                assert_eq!(solved.is_some(), h2_split(&g).is_zero());
                if let Some(u) = solved {
                    assert_eq!(coboundary(&q, &c, &u), t);
                }
            }
        }
    }
}

#[test]
fn symmetric_cocycle_on_z2_gives_z4() {
    let z2 = FgAbGroup::cyclic(2);
    let g = table_group(&z2, &z2, |a, b| vec![a[0] * b[0]]);
    assert_eq!(g.order(&g.lift(&[1])), Some(4));
    assert!(!h2_split(&g).is_zero());
}

#[test]
fn theta_matches_symmetric_cocycle() {
    for a in FgAbGroup::enumerate(32, 0) {
        let sym = quad_value(Functor::Sym2, &a);
        let g = table_group(&a, sym.group(), |x, y| sym.product(x, y));
        let h = h2_split(&g);
        assert!(h.pairing.is_zero(), "{a}");
        let t = theta(&a, false);
        assert_eq!(h.ext.coords, t.coords, "{a}");
    }
}

#[test]
fn canonical_ta_pairing_is_identity() {
    for free in 0..=2 {
        for a in FgAbGroup::enumerate(64, free).into_iter().filter(|a| a.ngens() <= 3) {
            let n = canonical_ta(&a);
            assert_eq!(h2_split(&n.total).pairing, AbHom::identity(n.kernel()), "{a}");
            // d_i·β(e_i, e_j) = 0
            let Cocycle::Form(form) = n.total.cocycle() else { panic!() };
            let l = n.kernel();
            for (i, row) in form.bilinear.iter().enumerate() {
                for (j, b) in row.iter().enumerate() {
                    for d in [a.factors()[i], a.factors()[j]] {
                        assert!(l.is_zero(&l.scale(d, b)));
                    }
                }
            }
        }
    }
}

fn small_group() -> impl Strategy<Value = FgAbGroup> {
    prop::collection::vec(prop::sample::select(vec![2i128, 3, 4]), 1..=2)
        .prop_map(|o| FgAbGroup::new(&o))
        .prop_filter("order <= 16", |g| g.order().unwrap() <= 16)
}

fn random_cocycle() -> impl Strategy<Value = Nil2Group> {
    (small_group(), 2i128..=4, prop::collection::vec(0i128..4, 8), prop::collection::vec(0i128..4, 16))
        .prop_map(|(q, c, coeffs, u)| {
            let cg = FgAbGroup::cyclic(c);
            let n = q.ngens();
            let d = q.factors().to_vec();
            // Scale each entry into the part of C killed by both orders.
            let bilinear = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let k = quadfun::abelian::gcd(quadfun::abelian::gcd(d[i], d[j]), c);
                            vec![(coeffs[i * n + j] * (c / k)) % c]
                        })
                        .collect()
                })
                .collect();
            let carries = (0..n).map(|i| vec![coeffs[4 + i] % c]).collect();
            let g = Nil2Group::new(q.clone(), cg.clone(), Cocycle::Form(CocycleForm { bilinear, carries })).unwrap();
            let size = q.order().unwrap() as usize;
            let mut cochain: Vec<Elem> = u.iter().take(size).map(|&x| vec![x % c]).collect();
            cochain.resize(size, vec![0]);
            cochain[0] = vec![0];
            let delta = coboundary(&q, &cg, &cochain);
            g.add_cocycle(&Cocycle::Table(delta)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_round_trip(g in random_cocycle()) {
        let h = h2_split(&g);
        let back = Nil2Group::new(g.quotient().clone(), g.center().clone(), Cocycle::Form(class_to_cocycle(&h))).unwrap();
        prop_assert_eq!(h2_split(&back), h.clone());
        // Same class means the difference is a coboundary.
        let neg: Vec<Elem> = back.to_table(64).unwrap().iter().map(|x| back.center().neg(x)).collect();
        let diff = g.add_cocycle(&Cocycle::Table(neg)).unwrap();
        prop_assert!(solve_coboundary(&diff, 64).unwrap().is_some());
    }

    #[test]
    fn commutator_formula(g in random_cocycle()) {
        let all = g.elements().unwrap();
        for x in all.iter().step_by(3) {
            for y in all.iter().step_by(5) {
                let expect = g.center().sub(&g.cocycle_at(&x.q, &y.q), &g.cocycle_at(&y.q, &x.q));
                prop_assert_eq!(g.commutator(x, y), g.central(&expect));
            }
        }
    }

    #[test]
    fn twist_and_untwist(a in small_group(), seed in 0usize..64) {
        let n = canonical_ta(&a);
        let amb = ext(&a, n.kernel());
        let elems = amb.group().elements().unwrap();
        let x = elems[seed % elems.len()].clone();
        let m = twist_ta(&n, &ExtClass { ambient: amb.clone(), coords: x.clone() }).unwrap();
        prop_assert_eq!(difference_class(&n, &m).unwrap().coords, x.clone());
        let back = twist_ta(&m, &ExtClass { ambient: amb.clone(), coords: amb.group().neg(&x) }).unwrap();
        prop_assert!(difference_class(&n, &back).unwrap().is_zero());
    }
}

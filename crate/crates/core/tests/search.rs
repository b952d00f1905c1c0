mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{random_knot, trefoil};
use gridcal::census::enumerate_all;
use gridcal::exchange::{exchange_class, DEFAULT_NODE_CAP};
use gridcal::invariants::{determinant, legendrian_invariants};
use gridcal::moves::{enumerate_moves, MoveCategory, MoveFilter, OrientedType, StabType};
use gridcal::search::{
    equiv_legendrian, equiv_transverse, find_middle, lambda_classes, pad, reachable_set, MiddleResult, SearchCaps,
    Verdict,
};
use gridcal::{ContactSign, Diagram, Quadrant};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn caps(size: usize) -> SearchCaps {
    SearchCaps::new(size, 500_000, 120.0)
}

fn stabilized(d: &Diagram, t: OrientedType) -> Diagram {
    let f = MoveFilter::from_categories([MoveCategory::Stab(t)]);
    enumerate_moves(d, &f).into_iter().next().unwrap().1
}

fn unknots_up_to(n: usize) -> Vec<Diagram> {
    (2..=n)
        .flat_map(|k| enumerate_all(k).unwrap())
        .map(|k| k.diagram())
        .filter(|d| d.num_components() == 1 && determinant(d) == BigUint::from(1u8))
        .collect()
}

#[test]
fn type_one_closure_of_the_small_unknot() {
    let r = reachable_set(&Diagram::unknot(), &MoveFilter::of_type(StabType::I), &caps(3));
    assert!(r.exhaustive);
    // Every size-3 pair with L+ = (-1, 0), by brute force over permutations.
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut expected = BTreeSet::new();
    for p in &perms {
        for m in &perms {
            if (0..3).all(|c| p[c] != m[c]) {
                let d = Diagram::new(p.to_vec(), m.to_vec()).unwrap();
                let inv = legendrian_invariants(&d);
                if d.num_components() == 1 && inv.tb_plus == -1 && inv.rot_plus == [0] {
                    expected.insert(d.canonical_key());
                }
            }
        }
    }
    assert!(!expected.is_empty());
    for k in &expected {
        assert!(r.contains(k), "{k} missing");
    }
}

#[test]
fn paths_follow_parent_links() {
    let r = reachable_set(&trefoil(), &MoveFilter::of_type(StabType::II), &SearchCaps::new(6, 2_000, 60.0));
    for k in r.keys().take(200) {
        let c = r.certificate_to(k).unwrap();
        assert_eq!(c.replay().unwrap().last(), Some(k));
    }
}

#[test]
fn node_cap_of_one_truncates() {
    let r = reachable_set(&trefoil(), &MoveFilter::all(), &SearchCaps::new(6, 1, 60.0));
    assert!(!r.exhaustive);
}

#[test]
fn shifted_diagrams_are_equivalent() {
    let d = trefoil();
    for sign in [ContactSign::Plus, ContactSign::Minus] {
        let v = equiv_legendrian(&d, &d.shift(3, 1), sign, &caps(5));
        assert!(v.certificate().unwrap().moves.is_empty());
    }
}

#[test]
fn trefoil_and_its_flip_differ() {
    let t = trefoil();
    match equiv_legendrian(&t, &t.flip_orientation(), ContactSign::Plus, &caps(7)) {
        Verdict::Distinct(w) => assert_eq!(w.invariant, "rot+"),
        Verdict::DistinctWithinBound { .. } => {}
        v => panic!("{v:?}"),
    }
}

#[test]
fn unknots_with_equal_plus_invariants_are_equivalent() {
    let mut groups: BTreeMap<(i64, i64), Vec<Diagram>> = BTreeMap::new();
    for d in unknots_up_to(4) {
        let inv = legendrian_invariants(&d);
        groups.entry((inv.tb_plus, inv.rot_plus[0])).or_default().push(d);
    }
    let mut certified = 0;
    for ds in groups.values() {
        for pair in ds.windows(2) {
            let n = pair[0].n().max(pair[1].n());
            let v = equiv_legendrian(&pair[0], &pair[1], ContactSign::Plus, &caps(n + 2));
            let c = v.certificate().unwrap_or_else(|| panic!("{v:?}"));
            c.replay().unwrap();
            certified += 1;
        }
    }
    assert!(certified > 5);
}

#[test]
fn exchange_related_diagrams_are_transversely_equivalent() {
    let d = Diagram::new(vec![0, 2, 4, 1, 5, 3], vec![3, 5, 1, 4, 2, 0]).unwrap();
    let cls = exchange_class(&d, DEFAULT_NODE_CAP).unwrap();
    let other = cls.keys.last().unwrap().diagram();
    for q in Quadrant::ALL {
        assert!(equiv_transverse(&d, &other, q, &caps(6)).certificate().is_some());
    }
}

#[test]
fn excluded_stabilization_changes_sl() {
    let d = trefoil();
    match equiv_transverse(&stabilized(&d, OrientedType::LeftII), &d, Quadrant::PlusPlus, &caps(7)) {
        Verdict::Distinct(w) => {
            assert_eq!(w.invariant, "sl[++]");
            let (a, b): (i64, i64) = (w.left.parse().unwrap(), w.right.parse().unwrap());
            assert_eq!(a - b, -2);
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn allowed_stabilization_is_transversely_trivial() {
    let d = trefoil();
    let v = equiv_transverse(&stabilized(&d, OrientedType::RightII), &d, Quadrant::PlusPlus, &caps(7));
    v.certificate().unwrap_or_else(|| panic!("{v:?}")).replay().unwrap();
}

#[test]
fn middle_of_the_unknot_and_a_type_two_stabilization() {
    let u = Diagram::unknot();
    let s = stabilized(&u, OrientedType::RightII);
    match find_middle(&u, &s, &caps(5)) {
        MiddleResult::Found(m) => {
            assert!(m.diagram.n() <= 3);
            m.from_first.replay().unwrap();
            m.from_second.replay().unwrap();
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn lambda_of_a_diagram_with_itself_contains_its_class() {
    let d = trefoil();
    let rep = lambda_classes(&d, &d, &caps(6));
    let own = exchange_class(&d, DEFAULT_NODE_CAP).unwrap().fingerprint();
    assert!(rep.certified.iter().any(|c| c.fingerprint == own));
    for c in &rep.certified {
        c.plus_certificate.replay().unwrap();
        c.minus_certificate.as_ref().unwrap().replay().unwrap();
    }
}

#[test]
fn unknot_lambda_sets_are_singletons() {
    let pool = unknots_up_to(4);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    use rand::seq::SliceRandom;
    for _ in 0..12 {
        let a = pool.choose(&mut rng).unwrap();
        let b = pool.choose(&mut rng).unwrap();
        let rep = lambda_classes(a, b, &caps(7));
        assert!(rep.certified.len() <= 1, "{} classes", rep.certified.len());
    }
}

#[test]
fn same_type_padding_lands_in_one_class() {
    let d = trefoil();
    for t in OrientedType::ALL {
        let p = pad(&d, 0, t, 2).unwrap();
        let f = MoveFilter::from_categories([MoveCategory::Stab(t)]);
        let once = stabilized(&d, t);
        let cls = exchange_class(&p, DEFAULT_NODE_CAP).unwrap();
        for (_, r) in enumerate_moves(&once, &f) {
            assert!(cls.contains(&r.canonical_key()), "{}", t.label());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exchange_reachability_is_the_exchange_class(d in common::diagram_strategy(2, 6)) {
        let r = reachable_set(&d, &MoveFilter::exchange_only(), &caps(d.n()));
        let mut keys: Vec<_> = r.keys().cloned().collect();
        keys.sort();
        prop_assert!(r.exhaustive);
        prop_assert_eq!(keys, exchange_class(&d, DEFAULT_NODE_CAP).unwrap().keys);
    }

    #[test]
    fn verdicts_are_symmetric(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_knot(&mut rng, n), random_knot(&mut rng, n));
        let c = SearchCaps::new(n + 1, 20_000, 60.0);
        for sign in [ContactSign::Plus, ContactSign::Minus] {
            let (x, y) = (equiv_legendrian(&a, &b, sign, &c), equiv_legendrian(&b, &a, sign, &c));
            let contradictory = matches!((&x, &y), (Verdict::Equivalent(_), Verdict::Distinct(_)) | (Verdict::Distinct(_), Verdict::Equivalent(_)));
            prop_assert!(!contradictory);
            if let Verdict::Equivalent(cert) = &x {
                prop_assert!(cert.replay().is_ok());
            }
        }
    }

    #[test]
    fn larger_caps_never_flip_a_certified_verdict(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_knot(&mut rng, 4);
        let b = random_knot(&mut rng, 4);
        let small = equiv_legendrian(&a, &b, ContactSign::Plus, &SearchCaps::new(5, 2_000, 60.0));
        let large = equiv_legendrian(&a, &b, ContactSign::Plus, &SearchCaps::new(6, 50_000, 60.0));
        match small {
            Verdict::Equivalent(_) => prop_assert!(matches!(large, Verdict::Equivalent(_))),
            Verdict::Distinct(_) => prop_assert!(matches!(large, Verdict::Distinct(_))),
            _ => {}
        }
    }

    #[test]
    fn middles_replay(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::seq::SliceRandom;
        let pool = unknots_up_to(4);
        let (a, b) = (pool.choose(&mut rng).unwrap(), pool.choose(&mut rng).unwrap());
        match find_middle(a, b, &caps(7)) {
            MiddleResult::Found(m) => {
                prop_assert_eq!(m.from_first.replay().unwrap().pop(), Some(m.diagram.canonical_key()));
                prop_assert_eq!(m.from_second.replay().unwrap().pop(), Some(m.diagram.canonical_key()));
                let inv = legendrian_invariants(&m.diagram);
                let (ia, ib) = (legendrian_invariants(a), legendrian_invariants(b));
                prop_assert_eq!((inv.tb_plus, &inv.rot_plus), (ia.tb_plus, &ia.rot_plus));
                prop_assert_eq!((inv.tb_minus, &inv.rot_minus), (ib.tb_minus, &ib.rot_minus));
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

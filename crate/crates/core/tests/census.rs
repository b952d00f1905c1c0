mod common;

use std::collections::BTreeSet;

use gridcal::census::{builtin_anchor, enumerate_all, nonsimplifiable_census, CensusRecord, KnotFilter, UNRESOLVED};
use gridcal::exchange::{is_simplifiable, DEFAULT_NODE_CAP};
use gridcal::invariants::determinant;
use gridcal::{CanonicalKey, Diagram, SearchCaps};
use num_bigint::BigUint;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn naive_types(n: usize) -> (usize, BTreeSet<CanonicalKey>) {
    let perms = permutations(n);
    let mut raw = 0;
    let mut types = BTreeSet::new();
    for p in &perms {
        for m in &perms {
            if (0..n).all(|c| p[c] != m[c]) {
                raw += 1;
                types.insert(Diagram::new(p.clone(), m.clone()).unwrap().canonical_key_unnumbered());
            }
        }
    }
    (raw, types)
}

#[test]
fn enumeration_matches_the_naive_count() {
    for n in 2..=5 {
        let (raw, types) = naive_types(n);
        if n == 4 {
            assert_eq!(raw, 216);
        }
        let fast = enumerate_all(n).unwrap();
        assert_eq!(fast.len(), types.len(), "n = {n}");
        assert_eq!(fast.iter().cloned().collect::<BTreeSet<_>>(), types);
    }
}

#[test]
fn enumeration_is_sorted_without_duplicates() {
    let keys = enumerate_all(6).unwrap();
    assert_eq!(keys.len(), 5368);
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn sizes_out_of_range_are_rejected() {
    assert!(enumerate_all(1).is_err());
    assert!(enumerate_all(9).is_err());
}

fn trefoil_census(n_max: usize) -> gridcal::census::CensusReport {
    let filter = KnotFilter {
        components: 1,
        determinant: Some(BigUint::from(3u8)),
        anchors: vec![builtin_anchor("trefoil").unwrap(), builtin_anchor("trefoil-mirror").unwrap()],
    };
    nonsimplifiable_census(&filter, n_max, DEFAULT_NODE_CAP, &SearchCaps::new(7, 50_000, 60.0)).unwrap()
}

#[test]
fn small_trefoil_census() {
    let rep = trefoil_census(5);
    assert_eq!(rep.count("trefoil"), 2);
    assert_eq!(rep.count("trefoil-mirror"), 2);
    assert_eq!(rep.count(UNRESOLVED), 0);
    let keys: BTreeSet<_> = rep.records.iter().map(|r| r.key.clone()).collect();
    assert_eq!(keys.len(), rep.records.len());
    for r in &rep.records {
        let d = r.key.diagram();
        assert_eq!(r.n, 5);
        assert_eq!(determinant(&d), BigUint::from(3u8));
        assert!(!is_simplifiable(&d, DEFAULT_NODE_CAP).unwrap());
        assert!(!r.simplifiable);
    }
    let per: usize = rep.per_size.iter().map(|s| s.nonsimplifiable).sum();
    assert_eq!(per, rep.records.len());
}

#[test]
fn jsonl_round_trips() {
    let rep = trefoil_census(5);
    let text = rep.to_jsonl();
    let back: Vec<CensusRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(back, rep.records);
    let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    for field in ["key", "n", "invariants", "fingerprint", "simplifiable", "bucket", "class_size"] {
        assert!(v.get(field).is_some(), "{field}");
    }
}

#[test]
fn missing_anchor_leaves_candidates_unresolved() {
    let filter = KnotFilter {
        components: 1,
        determinant: Some(BigUint::from(3u8)),
        anchors: vec![builtin_anchor("trefoil").unwrap()],
    };
    let rep = nonsimplifiable_census(&filter, 5, DEFAULT_NODE_CAP, &SearchCaps::new(7, 50_000, 60.0)).unwrap();
    assert_eq!(rep.count("trefoil"), 2);
    assert_eq!(rep.count(UNRESOLVED), 2);
}

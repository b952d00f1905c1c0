//! Exhaustive enumeration of combinatorial types and the
//! non-simplifiability census.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::CanonicalKey;
use crate::exchange::{fingerprint_of, simplifiability_with, ExchangeError, Fingerprint};
use crate::grid::Diagram;
use crate::invariants::{alexander_polynomial, classical_invariants, determinant, ClassicalInvariants};
use crate::moves::MoveFilter;
use crate::search::{equiv_search_filtered, SearchCaps, Verdict};

/// Largest `n` accepted by [`enumerate_all`].
pub const ENUMERATION_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("grid size {0} is outside 2..={ENUMERATION_LIMIT}")]
    SizeOutOfRange(usize),
    #[error("exchange closure of {key} exceeded the node cap after {nodes} keys")]
    CapExceeded { key: CanonicalKey, nodes: usize },
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0];
    let mut used = vec![false; n];
    used[0] = true;
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Calls `f` on every permutation `m` with `m[c] != avoid[c]` for all `c`.
fn for_each_avoiding(avoid: &[usize], f: &mut impl FnMut(&[usize])) {
    fn rec(avoid: &[usize], cur: &mut Vec<usize>, used: &mut [bool], f: &mut impl FnMut(&[usize])) {
        let c = cur.len();
        if c == avoid.len() {
            f(cur);
            return;
        }
        for v in 0..avoid.len() {
            if !used[v] && v != avoid[c] {
                used[v] = true;
                cur.push(v);
                rec(avoid, cur, used, f);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let n = avoid.len();
    rec(avoid, &mut Vec::with_capacity(n), &mut vec![false; n], f);
}

/// Every unnumbered canonical key of size exactly `n`, sorted. Each
/// combinatorial type appears once.
pub fn enumerate_all(n: usize) -> Result<Vec<CanonicalKey>, CensusError> {
    enumerate_where(n, |_| true)
}

/// [`enumerate_all`] restricted to diagrams satisfying `keep`.
pub fn enumerate_where(
    n: usize,
    keep: impl Fn(&Diagram) -> bool + Sync,
) -> Result<Vec<CanonicalKey>, CensusError> {
    if !(2..=ENUMERATION_LIMIT).contains(&n) {
        return Err(CensusError::SizeOutOfRange(n));
    }
    // A canonical encoding always has its column-0 `+` vertex in row 0.
    let mut keys: Vec<CanonicalKey> = permutations_fixing_zero(n)
        .into_par_iter()
        .flat_map_iter(|plus| {
            let mut shard = Vec::new();
            for_each_avoiding(&plus, &mut |minus| {
                let d = Diagram::new(plus.clone(), minus.to_vec()).expect("avoiding pair is valid");
                if d.is_canonical_unnumbered() && keep(&d) {
                    shard.push(d.canonical_key_unnumbered());
                }
            });
            shard
        })
        .collect();
    keys.sort();
    Ok(keys)
}

#[derive(Clone, Debug)]
pub struct Anchor {
    pub name: String,
    pub diagram: Diagram,
}

impl Anchor {
    pub fn new(name: &str, diagram: Diagram) -> Anchor {
        Anchor { name: name.into(), diagram }
    }
}

fn torus(n: usize, s: usize) -> Diagram {
    Diagram::new((0..n).map(|c| (c + s) % n).collect(), (0..n).collect()).expect("torus grid")
}

/// Named diagrams used to place census candidates.
pub fn builtin_anchors() -> Vec<Anchor> {
    let trefoil = torus(5, 2);
    let cinquefoil = torus(7, 2);
    let t34 = torus(7, 3);
    // Least canonical key of a single-component determinant 5 diagram at n = 6.
    let figure_eight = Diagram::new(vec![0, 1, 3, 2, 5, 4], vec![2, 5, 0, 4, 3, 1]).expect("figure eight");
    vec![
        Anchor::new("unknot", Diagram::unknot()),
        Anchor::new("trefoil", trefoil.clone()),
        Anchor::new("trefoil-mirror", trefoil.reflect_theta()),
        Anchor::new("figure-eight", figure_eight),
        Anchor::new("cinquefoil", cinquefoil.clone()),
        Anchor::new("cinquefoil-mirror", cinquefoil.reflect_theta()),
        Anchor::new("t34", t34.clone()),
        Anchor::new("t34-mirror", t34.reflect_theta()),
    ]
}

pub fn builtin_anchor(name: &str) -> Option<Anchor> {
    builtin_anchors().into_iter().find(|a| a.name == name)
}

/// Knot-type selector: component count, determinant, and anchors.
#[derive(Clone, Debug)]
pub struct KnotFilter {
    pub components: usize,
    pub determinant: Option<BigUint>,
    /// Candidates are placed by full-move search to one of these. A
    /// candidate matching none is labelled `unresolved`.
    pub anchors: Vec<Anchor>,
}

impl KnotFilter {
    pub fn matches(&self, d: &Diagram) -> bool {
        d.num_components() == self.components
            && self.determinant.as_ref().is_none_or(|want| determinant(d) == *want)
    }
}

pub const UNRESOLVED: &str = "unresolved";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub key: CanonicalKey,
    pub n: usize,
    pub invariants: ClassicalInvariants,
    pub fingerprint: Fingerprint,
    pub simplifiable: bool,
    pub bucket: String,
    /// Size of the exchange class.
    pub class_size: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeStats {
    pub n: usize,
    /// Combinatorial types passing the knot filter.
    pub candidates: usize,
    pub nonsimplifiable: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    /// Non-simplifiable records, sorted by key.
    pub records: Vec<CensusRecord>,
    pub per_size: Vec<SizeStats>,
    /// Non-simplifiable type count per bucket label.
    pub buckets: BTreeMap<String, usize>,
    pub n_max: usize,
}

impl CensusReport {
    pub fn count(&self, bucket: &str) -> usize {
        self.buckets.get(bucket).copied().unwrap_or(0)
    }

    pub fn in_bucket<'a>(&'a self, bucket: &'a str) -> impl Iterator<Item = &'a CensusRecord> + 'a {
        self.records.iter().filter(move |r| r.bucket == bucket)
    }

    /// One JSON object per line, sorted by key.
    pub fn to_jsonl(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
            .collect()
    }
}

/// Label for a diagram: the first anchor reachable by unrestricted moves
/// within `caps`. Anchors with a different Alexander polynomial are skipped.
pub fn place(d: &Diagram, anchors: &[Anchor], caps: &SearchCaps) -> String {
    let alex = alexander_polynomial(d);
    for a in anchors {
        if a.diagram.num_components() != d.num_components() || alexander_polynomial(&a.diagram) != alex {
            continue;
        }
        let c = SearchCaps { max_grid_size: caps.max_grid_size.max(d.n().max(a.diagram.n())), ..*caps };
        if let Verdict::Equivalent(_) = equiv_search_filtered(d, &a.diagram, &MoveFilter::all(), &c) {
            return a.name.clone();
        }
    }
    UNRESOLVED.into()
}

/// Non-simplifiable combinatorial types of the filtered knot type with
/// `2 <= n <= n_max`. `class_cap` bounds each exchange closure; `caps`
/// bounds each anchoring search.
pub fn nonsimplifiable_census(
    filter: &KnotFilter,
    n_max: usize,
    class_cap: usize,
    caps: &SearchCaps,
) -> Result<CensusReport, CensusError> {
    let mut report = CensusReport { records: vec![], per_size: vec![], buckets: BTreeMap::new(), n_max };
    for n in 2..=n_max {
        let candidates = enumerate_where(n, |d| filter.matches(d))?;
        let mut stats = SizeStats { n, candidates: candidates.len(), nonsimplifiable: 0 };
        // Keys whose class is already decided; insert-only.
        let mut decided: HashSet<CanonicalKey> = HashSet::new();
        for key in &candidates {
            if decided.contains(key) {
                continue;
            }
            let d = key.diagram();
            let (simplifiable, keys) = simplifiability_with(&d, class_cap, |k| decided.contains(k))
                .map_err(|ExchangeError::CapExceeded(nodes)| CensusError::CapExceeded { key: key.clone(), nodes })?;
            if simplifiable {
                decided.extend(keys);
                continue;
            }
            let fingerprint = fingerprint_of(&keys);
            let class_size = keys.len();
            let members: Vec<CanonicalKey> = keys
                .iter()
                .map(|k| k.diagram().canonical_key_unnumbered())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            decided.extend(keys);
            for m in members {
                let md = m.diagram();
                if !filter.matches(&md) {
                    continue;
                }
                stats.nonsimplifiable += 1;
                report.records.push(CensusRecord {
                    invariants: classical_invariants(&md),
                    n,
                    fingerprint,
                    simplifiable: false,
                    bucket: String::new(),
                    class_size,
                    key: m,
                });
            }
        }
        report.per_size.push(stats);
    }
    report.records.sort_by(|a, b| a.key.cmp(&b.key));
    report.records.dedup_by(|a, b| a.key == b.key);
    let labels: Vec<String> = report
        .records
        .par_iter()
        .map(|r| place(&r.key.diagram(), &filter.anchors, caps))
        .collect();
    for (r, l) in report.records.iter_mut().zip(labels) {
        *report.buckets.entry(l.clone()).or_default() += 1;
        r.bucket = l;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sizes() {
        assert_eq!(enumerate_all(2).unwrap().len(), 1);
        assert!(enumerate_all(1).is_err());
        let three = enumerate_all(3).unwrap();
        assert!(three.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn anchors_are_knots_with_expected_determinants() {
        let dets: Vec<(String, BigUint)> =
            builtin_anchors().iter().map(|a| (a.name.clone(), determinant(&a.diagram))).collect();
        for (name, det) in dets {
            let want: u32 = match name.as_str() {
                "unknot" => 1,
                "trefoil" | "trefoil-mirror" | "t34" | "t34-mirror" => 3,
                _ => 5,
            };
            assert_eq!(det, BigUint::from(want), "{name}");
        }
    }
}

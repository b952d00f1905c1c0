//! Type-restricted reachability and equivalence search.
//!
//! Every search works on canonical keys. A move found at a node always
//! applies to that node's canonical representative, which is how
//! certificates are replayed.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::CanonicalKey;
use crate::cert::Certificate;
use crate::exchange::{exchange_class, Fingerprint, DEFAULT_NODE_CAP};
use crate::grid::Diagram;
use crate::invariants::{classical_invariants, legendrian_invariants, LegendrianInvariants};
use crate::moves::{
    enumerate_moves, ContactSign, MoveCategory, MoveFilter, MoveRecord, OrientedType, Quadrant, StabType,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchCaps {
    pub max_grid_size: usize,
    pub max_nodes: usize,
    pub max_seconds: f64,
}

impl Eq for SearchCaps {}

impl SearchCaps {
    pub fn new(max_grid_size: usize, max_nodes: usize, max_seconds: f64) -> SearchCaps {
        SearchCaps { max_grid_size, max_nodes, max_seconds }
    }

    /// `max(n1, n2) + 3` cells, a million nodes, a minute.
    pub fn default_for(n1: usize, n2: usize) -> SearchCaps {
        SearchCaps::new(n1.max(n2) + 3, 1_000_000, 60.0)
    }

    /// `None` for zero or unrepresentable budgets: no time limit.
    fn deadline(&self) -> Option<Instant> {
        let d = Duration::try_from_secs_f64(self.max_seconds).ok().filter(|d| !d.is_zero())?;
        Instant::now().checked_add(d)
    }
}

impl fmt::Display for SearchCaps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.max_grid_size, self.max_nodes, self.max_seconds)
    }
}

impl FromStr for SearchCaps {
    type Err = String;

    /// `size:nodes:seconds`.
    fn from_str(s: &str) -> Result<SearchCaps, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("caps must be size:nodes:seconds, got {s:?}"));
        }
        let size: usize = parts[0].parse().map_err(|_| format!("bad grid size {:?}", parts[0]))?;
        let nodes: usize = parts[1].parse().map_err(|_| format!("bad node cap {:?}", parts[1]))?;
        let secs: f64 = parts[2].parse().map_err(|_| format!("bad seconds {:?}", parts[2]))?;
        if !(2..=crate::grid::MAX_GRID_SIZE).contains(&size) || nodes == 0 || secs.is_nan() || secs < 0.0 {
            return Err(format!("caps out of range: {s:?}"));
        }
        Ok(SearchCaps::new(size, nodes, secs))
    }
}

/// Why a search stopped short of exhausting its space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CapHit {
    Nodes,
    Time,
}

#[derive(Clone, Debug)]
struct Node {
    key: CanonicalKey,
    parent: Option<u32>,
    via: Option<MoveRecord>,
    depth: u32,
}

/// Keys reachable from a start diagram, with parent links.
#[derive(Clone, Debug)]
pub struct Reachable {
    nodes: Vec<Node>,
    index: HashMap<CanonicalKey, u32>,
    pub filter: MoveFilter,
    pub caps: SearchCaps,
    /// True when the whole space within `max_grid_size` was enumerated.
    pub exhaustive: bool,
    pub cap_hit: Option<CapHit>,
}

impl Reachable {
    pub fn start(&self) -> &CanonicalKey {
        &self.nodes[0].key
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, k: &CanonicalKey) -> bool {
        self.index.contains_key(k)
    }

    /// Keys in discovery order.
    pub fn keys(&self) -> impl Iterator<Item = &CanonicalKey> {
        self.nodes.iter().map(|n| &n.key)
    }

    /// Moves from the start to `k`.
    pub fn path_to(&self, k: &CanonicalKey) -> Option<Vec<MoveRecord>> {
        let mut i = *self.index.get(k)?;
        let mut out = Vec::new();
        while let Some(p) = self.nodes[i as usize].parent {
            out.push(self.nodes[i as usize].via.expect("non-root nodes have a move"));
            i = p;
        }
        out.reverse();
        Some(out)
    }

    pub fn certificate_to(&self, k: &CanonicalKey) -> Option<Certificate> {
        Some(Certificate {
            from: self.start().clone(),
            to: k.clone(),
            filter: self.filter.clone(),
            caps: self.caps,
            moves: self.path_to(k)?,
        })
    }
}

fn filter_at(filter: &MoveFilter, n: usize, caps: &SearchCaps) -> MoveFilter {
    if n >= caps.max_grid_size {
        filter.without_stabilizations()
    } else {
        filter.clone()
    }
}

/// Successors of a canonical representative: `(record, key)` in move order.
fn successors(key: &CanonicalKey, filter: &MoveFilter, caps: &SearchCaps) -> Vec<(MoveRecord, CanonicalKey)> {
    let d = key.diagram();
    let f = filter_at(filter, d.n(), caps);
    enumerate_moves(&d, &f)
        .into_iter()
        .map(|(m, r)| (m.record(), r.canonical_key()))
        .collect()
}

/// Breadth-first closure of `d` under `filter`, bounded by `caps`.
pub fn reachable_set(d: &Diagram, filter: &MoveFilter, caps: &SearchCaps) -> Reachable {
    let start = d.canonical_key();
    let mut r = Reachable {
        nodes: vec![Node { key: start.clone(), parent: None, via: None, depth: 0 }],
        index: HashMap::from([(start, 0)]),
        filter: filter.clone(),
        caps: *caps,
        exhaustive: false,
        cap_hit: None,
    };
    if d.n() > caps.max_grid_size {
        return r;
    }
    let deadline = caps.deadline();
    let mut frontier: Vec<u32> = vec![0];
    while !frontier.is_empty() {
        if deadline.is_some_and(|t| Instant::now() >= t) {
            r.cap_hit = Some(CapHit::Time);
            return r;
        }
        let expanded: Vec<Vec<(MoveRecord, CanonicalKey)>> = frontier
            .par_iter()
            .map(|&i| successors(&r.nodes[i as usize].key, filter, caps))
            .collect();
        let mut next = Vec::new();
        for (&p, succ) in frontier.iter().zip(expanded) {
            for (rec, k) in succ {
                if r.index.contains_key(&k) {
                    continue;
                }
                if r.nodes.len() >= caps.max_nodes {
                    r.cap_hit = Some(CapHit::Nodes);
                    return r;
                }
                let id = r.nodes.len() as u32;
                let depth = r.nodes[p as usize].depth + 1;
                r.nodes.push(Node { key: k.clone(), parent: Some(p), via: Some(rec), depth });
                r.index.insert(k, id);
                next.push(id);
            }
        }
        next.sort_by(|a, b| r.nodes[*a as usize].key.cmp(&r.nodes[*b as usize].key));
        frontier = next;
    }
    r.exhaustive = true;
    r
}

/// Evidence that two diagrams are not equivalent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub invariant: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub nodes: usize,
    pub cap_hit: Option<CapHit>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Chain from the first diagram's representative to the second's.
    Equivalent(Certificate),
    Distinct(Witness),
    /// One side's reachable set within `max_grid_size` was exhausted without
    /// meeting the other. Says nothing about chains through larger grids.
    DistinctWithinBound { max_grid_size: usize, nodes: usize },
    Unknown(SearchReport),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Equivalent(_) => "equivalent",
            Verdict::Distinct(_) => "distinct",
            Verdict::DistinctWithinBound { .. } => "distinct-within-bound",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::Equivalent(c) => Some(c),
            _ => None,
        }
    }
}

/// Invariant targets that steer a best-first side toward its goal.
#[derive(Clone, Debug)]
struct Target {
    n: Option<usize>,
    inv: LegendrianInvariants,
    plus: bool,
    minus: bool,
}

impl Target {
    fn distance(&self, d: &Diagram) -> i64 {
        let inv = legendrian_invariants(d);
        let mut h = 0;
        let pair = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<i64>();
        if self.plus {
            h += pair(&inv.tb_plus_components, &self.inv.tb_plus_components) + pair(&inv.rot_plus, &self.inv.rot_plus);
        }
        if self.minus {
            h += pair(&inv.tb_minus_components, &self.inv.tb_minus_components)
                + pair(&inv.rot_minus, &self.inv.rot_minus);
        }
        if let Some(n) = self.n {
            h += (d.n() as i64 - n as i64).abs();
        }
        h
    }
}

type Priority = (i64, u32, usize, CanonicalKey);

struct Side {
    nodes: Vec<Node>,
    index: HashMap<CanonicalKey, u32>,
    heap: BinaryHeap<Reverse<(Priority, u32)>>,
    filter: MoveFilter,
    target: Target,
}

impl Side {
    fn new(d: &Diagram, filter: MoveFilter, target: Target) -> Side {
        let key = d.canonical_key();
        let rep = key.diagram();
        let h = target.distance(&rep);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse(((h, 0, rep.n(), key.clone()), 0)));
        Side {
            nodes: vec![Node { key: key.clone(), parent: None, via: None, depth: 0 }],
            index: HashMap::from([(key, 0)]),
            heap,
            filter,
            target,
        }
    }

    fn path_to(&self, mut i: u32) -> Vec<(MoveRecord, CanonicalKey, CanonicalKey)> {
        // (move, key it applies to, key it produces)
        let mut out = Vec::new();
        while let Some(p) = self.nodes[i as usize].parent {
            let n = &self.nodes[i as usize];
            out.push((n.via.expect("non-root"), self.nodes[p as usize].key.clone(), n.key.clone()));
            i = p;
        }
        out.reverse();
        out
    }
}

const BATCH: usize = 64;

enum Meet {
    At(u32, u32),
    AExhausted,
    BExhausted,
    Capped(CapHit),
}

/// Best-first search from both ends with a shared meeting test.
///
/// The side with the smaller heap expands a batch of up to [`BATCH`] nodes
/// in parallel; successors merge in pop order, so the outcome is the same
/// for any thread count unless the time cap fires.
///
/// An equivalence search can stop once either side is exhausted, since the
/// other side's root is indexed from the start. A middle search (`need_both`)
/// keeps expanding the remaining side until it too is exhausted.
fn bidirectional(a: &mut Side, b: &mut Side, caps: &SearchCaps, need_both: bool) -> Meet {
    if let Some(&j) = b.index.get(&a.nodes[0].key) {
        return Meet::At(0, j);
    }
    let deadline = caps.deadline();
    loop {
        match (a.heap.is_empty(), b.heap.is_empty()) {
            (true, true) => return Meet::AExhausted,
            (true, false) if !need_both => return Meet::AExhausted,
            (false, true) if !need_both => return Meet::BExhausted,
            _ => {}
        }
        if deadline.is_some_and(|t| Instant::now() >= t) {
            return Meet::Capped(CapHit::Time);
        }
        let a_turn = !a.heap.is_empty() && (b.heap.is_empty() || a.heap.len() <= b.heap.len());
        let (me, other) = if a_turn { (&mut *a, &*b) } else { (&mut *b, &*a) };
        let mut batch = Vec::with_capacity(BATCH);
        while batch.len() < BATCH {
            match me.heap.pop() {
                Some(Reverse((_, i))) => batch.push(i),
                None => break,
            }
        }
        let filter = me.filter.clone();
        let target = me.target.clone();
        let nodes = &me.nodes;
        let index = &me.index;
        let expanded: Vec<Vec<(MoveRecord, CanonicalKey, i64, usize)>> = batch
            .par_iter()
            .map(|&i| {
                successors(&nodes[i as usize].key, &filter, caps)
                    .into_iter()
                    .filter(|(_, k)| !index.contains_key(k))
                    .map(|(rec, k)| {
                        let d = k.diagram();
                        let h = target.distance(&d);
                        (rec, k, h, d.n())
                    })
                    .collect()
            })
            .collect();
        for (&p, succ) in batch.iter().zip(expanded) {
            for (rec, k, h, n) in succ {
                if me.index.contains_key(&k) {
                    continue;
                }
                if me.nodes.len() + other.nodes.len() >= caps.max_nodes {
                    return Meet::Capped(CapHit::Nodes);
                }
                let id = me.nodes.len() as u32;
                let depth = me.nodes[p as usize].depth + 1;
                me.nodes.push(Node { key: k.clone(), parent: Some(p), via: Some(rec), depth });
                me.index.insert(k.clone(), id);
                if let Some(&j) = other.index.get(&k) {
                    return if a_turn { Meet::At(id, j) } else { Meet::At(j, id) };
                }
                me.heap.push(Reverse(((h, depth, n, k), id)));
            }
        }
    }
}

/// The unique-by-order move at `from` in `category` producing `to`.
fn find_move(from: &CanonicalKey, to: &CanonicalKey, category: MoveCategory) -> MoveRecord {
    let d = from.diagram();
    enumerate_moves(&d, &MoveFilter::from_categories([category]))
        .into_iter()
        .find(|(_, r)| r.canonical_key() == *to)
        .map(|(m, _)| m.record())
        .expect("every move has an inverse of the inverse category")
}

fn join_chain(a: &Side, b: &Side, ia: u32, ib: u32) -> Vec<MoveRecord> {
    let mut moves: Vec<MoveRecord> = a.path_to(ia).into_iter().map(|(m, _, _)| m).collect();
    for (rec, from, to) in b.path_to(ib).into_iter().rev() {
        let cat = rec.category().expect("recorded moves carry a category").inverse();
        moves.push(find_move(&to, &from, cat));
    }
    moves
}

fn total_nodes(a: &Side, b: &Side) -> usize {
    a.nodes.len() + b.nodes.len()
}

/// Search for a chain `d1 -> d2` inside `filter`, steering both sides with
/// the invariants in `plus`/`minus`.
fn equiv_search(d1: &Diagram, d2: &Diagram, filter: &MoveFilter, caps: &SearchCaps, plus: bool, minus: bool) -> Verdict {
    let i1 = legendrian_invariants(d1);
    let i2 = legendrian_invariants(d2);
    let mut a = Side::new(d1, filter.clone(), Target { n: Some(d2.n()), inv: i2, plus, minus });
    let mut b = Side::new(d2, filter.inverse(), Target { n: Some(d1.n()), inv: i1, plus, minus });
    if d1.n().max(d2.n()) > caps.max_grid_size {
        return Verdict::Unknown(SearchReport { nodes: 2, cap_hit: None });
    }
    match bidirectional(&mut a, &mut b, caps, false) {
        Meet::At(ia, ib) => Verdict::Equivalent(Certificate {
            from: a.nodes[0].key.clone(),
            to: b.nodes[0].key.clone(),
            filter: filter.clone(),
            caps: *caps,
            moves: join_chain(&a, &b, ia, ib),
        }),
        Meet::AExhausted | Meet::BExhausted => Verdict::DistinctWithinBound {
            max_grid_size: caps.max_grid_size,
            nodes: total_nodes(&a, &b),
        },
        Meet::Capped(hit) => Verdict::Unknown(SearchReport { nodes: total_nodes(&a, &b), cap_hit: Some(hit) }),
    }
}

/// Bidirectional search for a chain `d1 -> d2` inside `filter`, without
/// invariant prechecks.
pub fn equiv_search_filtered(d1: &Diagram, d2: &Diagram, filter: &MoveFilter, caps: &SearchCaps) -> Verdict {
    if let Some(v) = topological_witness(d1, d2) {
        return v;
    }
    equiv_search(d1, d2, filter, caps, true, true)
}

fn witness(invariant: &str, left: impl fmt::Debug, right: impl fmt::Debug) -> Verdict {
    Verdict::Distinct(Witness {
        invariant: invariant.into(),
        left: format!("{left:?}"),
        right: format!("{right:?}"),
    })
}

fn topological_witness(d1: &Diagram, d2: &Diagram) -> Option<Verdict> {
    if d1.num_components() != d2.num_components() {
        return Some(witness("components", d1.num_components(), d2.num_components()));
    }
    let (x, y) = (classical_invariants(d1).determinant, classical_invariants(d2).determinant);
    if x != y {
        return Some(witness("determinant", x, y));
    }
    None
}

fn sign_label(sign: ContactSign) -> &'static str {
    match sign {
        ContactSign::Plus => "+",
        ContactSign::Minus => "-",
    }
}

/// Legendrian equivalence for the given contact structure, through moves
/// that keep the link's class: exchanges and type I (`+`) or type II (`-`)
/// (de)stabilizations.
pub fn equiv_legendrian(d1: &Diagram, d2: &Diagram, sign: ContactSign, caps: &SearchCaps) -> Verdict {
    if let Some(v) = topological_witness(d1, d2) {
        return v;
    }
    let (i1, i2) = (legendrian_invariants(d1), legendrian_invariants(d2));
    let s = sign_label(sign);
    let (t1, t2) = match sign {
        ContactSign::Plus => (i1.tb_plus, i2.tb_plus),
        ContactSign::Minus => (i1.tb_minus, i2.tb_minus),
    };
    if t1 != t2 {
        return witness(&format!("tb{s}"), t1, t2);
    }
    let pairs = |i: &LegendrianInvariants| {
        let mut v: Vec<(i64, i64)> = i.tb_components(sign).iter().copied().zip(i.rot(sign).iter().copied()).collect();
        v.sort_unstable();
        v
    };
    if pairs(&i1) != pairs(&i2) {
        let rots = |i: &LegendrianInvariants| {
            let mut v = i.rot(sign).to_vec();
            v.sort_unstable();
            v
        };
        if rots(&i1) != rots(&i2) {
            return witness(&format!("rot{s}"), rots(&i1), rots(&i2));
        }
        return witness(&format!("tb{s} per component"), pairs(&i1), pairs(&i2));
    }
    let filter = MoveFilter::legendrian(sign);
    let (plus, minus) = match sign {
        ContactSign::Plus => (false, true),
        ContactSign::Minus => (true, false),
    };
    equiv_search(d1, d2, &filter, caps, plus, minus)
}

/// Transverse equivalence of the pushoffs in quadrant `q`: every move except
/// (de)stabilizations of the quadrant's excluded oriented type.
pub fn equiv_transverse(d1: &Diagram, d2: &Diagram, q: Quadrant, caps: &SearchCaps) -> Verdict {
    if let Some(v) = topological_witness(d1, d2) {
        return v;
    }
    let (s1, s2) = (legendrian_invariants(d1).sl().get(q), legendrian_invariants(d2).sl().get(q));
    if s1 != s2 {
        return witness(&format!("sl[{}]", q.label()), s1, s2);
    }
    equiv_search(d1, d2, &MoveFilter::transverse(q), caps, true, true)
}

/// A diagram with `L₊` of `d1` and `L₋` of `d2`, with both one-sided chains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Middle {
    pub diagram: Diagram,
    /// Type I chain from `d1`.
    pub from_first: Certificate,
    /// Type II chain from `d2`.
    pub from_second: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MiddleResult {
    Found(Box<Middle>),
    /// Both sides were exhausted within `max_grid_size`.
    NoneWithinBound { max_grid_size: usize, nodes: usize },
    Unknown(SearchReport),
}

/// The size any middle diagram must have: `tb₊ + tb₋ = -n`, and a middle
/// carries `tb₊` of `d1` and `tb₋` of `d2`.
pub fn middle_size(d1: &Diagram, d2: &Diagram) -> i64 {
    -(legendrian_invariants(d1).tb_plus + legendrian_invariants(d2).tb_minus)
}

pub fn find_middle(d1: &Diagram, d2: &Diagram, caps: &SearchCaps) -> MiddleResult {
    let i1 = legendrian_invariants(d1);
    let i2 = legendrian_invariants(d2);
    let n3 = middle_size(d1, d2);
    // Both sides steer toward the middle's invariants: L₊ from d1, L₋ from d2.
    let goal = LegendrianInvariants {
        tb_plus: i1.tb_plus,
        tb_minus: i2.tb_minus,
        tb_plus_components: i1.tb_plus_components.clone(),
        tb_minus_components: i2.tb_minus_components.clone(),
        rot_plus: i1.rot_plus.clone(),
        rot_minus: i2.rot_minus.clone(),
    };
    let n_goal = usize::try_from(n3).ok();
    let fa = MoveFilter::of_type(StabType::I);
    let fb = MoveFilter::of_type(StabType::II);
    let mut a = Side::new(d1, fa.clone(), Target { n: n_goal, inv: goal.clone(), plus: false, minus: true });
    let mut b = Side::new(d2, fb.clone(), Target { n: n_goal, inv: goal, plus: true, minus: false });
    if d1.num_components() != d2.num_components() || n3 < 2 || n3 as usize > caps.max_grid_size {
        return MiddleResult::NoneWithinBound { max_grid_size: caps.max_grid_size, nodes: 2 };
    }
    match bidirectional(&mut a, &mut b, caps, true) {
        Meet::At(ia, ib) => {
            let key = a.nodes[ia as usize].key.clone();
            let cert = |s: &Side, i: u32, f: &MoveFilter| Certificate {
                from: s.nodes[0].key.clone(),
                to: key.clone(),
                filter: f.clone(),
                caps: *caps,
                moves: s.path_to(i).into_iter().map(|(m, _, _)| m).collect(),
            };
            MiddleResult::Found(Box::new(Middle {
                diagram: key.diagram(),
                from_first: cert(&a, ia, &fa),
                from_second: cert(&b, ib, &fb),
            }))
        }
        Meet::AExhausted | Meet::BExhausted => MiddleResult::NoneWithinBound {
            max_grid_size: caps.max_grid_size,
            nodes: total_nodes(&a, &b),
        },
        Meet::Capped(hit) => MiddleResult::Unknown(SearchReport { nodes: total_nodes(&a, &b), cap_hit: Some(hit) }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaClass {
    pub representative: CanonicalKey,
    pub fingerprint: Fingerprint,
    pub size: usize,
    /// Type I chain from `d1` to the representative.
    pub plus_certificate: Certificate,
    /// Chain within the `-` Legendrian class from the representative to `d2`.
    pub minus_certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaReport {
    pub grid_size: Option<usize>,
    pub certified: Vec<LambdaClass>,
    /// Candidate classes whose `L₋` check came back Unknown.
    pub unknown: Vec<LambdaClass>,
    /// True when the type I search from `d1` was exhaustive within the caps.
    pub exhaustive_within_bound: bool,
}

/// Exchange classes `c` with `L₊(c) = L₊(d1)` and `L₋(c) = L₋(d2)` found
/// within the caps. Only certified classes are listed in `certified`.
pub fn lambda_classes(d1: &Diagram, d2: &Diagram, caps: &SearchCaps) -> LambdaReport {
    let n3 = middle_size(d1, d2);
    let mut report = LambdaReport { grid_size: None, certified: vec![], unknown: vec![], exhaustive_within_bound: false };
    if n3 < 2 || n3 as usize > caps.max_grid_size || d1.num_components() != d2.num_components() {
        report.exhaustive_within_bound = true;
        return report;
    }
    let n3 = n3 as usize;
    report.grid_size = Some(n3);
    let reach = reachable_set(d1, &MoveFilter::of_type(StabType::I), caps);
    report.exhaustive_within_bound = reach.exhaustive;
    let target = legendrian_invariants(d2);
    let matches = |k: &CanonicalKey| {
        let inv = legendrian_invariants(&k.diagram());
        inv.tb_minus_components == target.tb_minus_components && inv.rot_minus == target.rot_minus
    };
    let mut candidates: Vec<CanonicalKey> = reach.keys().filter(|k| k.grid_size() == n3).cloned().collect();
    candidates.sort();
    let mut claimed: std::collections::HashSet<CanonicalKey> = std::collections::HashSet::new();
    for k in candidates {
        if claimed.contains(&k) || !matches(&k) {
            continue;
        }
        let Ok(cls) = exchange_class(&k.diagram(), DEFAULT_NODE_CAP) else { continue };
        claimed.extend(cls.keys.iter().cloned());
        let rep = cls.representative.clone();
        // The representative is in the type I closure whenever k is.
        let plus_certificate = match reach.certificate_to(&rep) {
            Some(c) => c,
            None => continue,
        };
        let verdict = equiv_legendrian(&rep.diagram(), d2, ContactSign::Minus, caps);
        let entry = |minus| LambdaClass {
            representative: rep.clone(),
            fingerprint: cls.fingerprint(),
            size: cls.len(),
            plus_certificate: plus_certificate.clone(),
            minus_certificate: minus,
        };
        match verdict {
            Verdict::Equivalent(c) => report.certified.push(entry(Some(c))),
            Verdict::Unknown(_) | Verdict::DistinctWithinBound { .. } => report.unknown.push(entry(None)),
            Verdict::Distinct(_) => {}
        }
    }
    report
}

/// Applies `count` stabilizations of oriented type `t` on component `k`,
/// each time taking the first such move in enumeration order. All choices
/// give the same exchange class.
pub fn pad(d: &Diagram, k: usize, t: OrientedType, count: usize) -> Option<Diagram> {
    let mut cur = d.canonical_representative();
    let f = MoveFilter::from_categories([MoveCategory::Stab(t)]).with_components(vec![k]);
    for _ in 0..count {
        let (_, r) = enumerate_moves(&cur, &f).into_iter().next()?;
        cur = r.canonical_representative();
    }
    Some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> Diagram {
        Diagram::new(vec![2, 3, 4, 0, 1], vec![0, 1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn caps_text_round_trip() {
        let c = SearchCaps::new(8, 1000, 2.5);
        assert_eq!(c.to_string().parse::<SearchCaps>().unwrap(), c);
        assert!("8:0:1".parse::<SearchCaps>().is_err());
        assert!("8:10".parse::<SearchCaps>().is_err());
    }

    #[test]
    fn node_cap_truncates() {
        let r = reachable_set(&trefoil(), &MoveFilter::all(), &SearchCaps::new(6, 1, 10.0));
        assert!(!r.exhaustive);
        assert_eq!(r.cap_hit, Some(CapHit::Nodes));
    }

    #[test]
    fn exchange_reachability_is_the_exchange_class() {
        let r = reachable_set(&trefoil(), &MoveFilter::exchange_only(), &SearchCaps::new(5, 1000, 10.0));
        let mut keys: Vec<_> = r.keys().cloned().collect();
        keys.sort();
        assert!(r.exhaustive);
        assert_eq!(keys, exchange_class(&trefoil(), DEFAULT_NODE_CAP).unwrap().keys);
    }

    #[test]
    fn shift_is_equivalent() {
        let d = trefoil();
        let v = equiv_legendrian(&d, &d.shift(2, 3), ContactSign::Plus, &SearchCaps::default_for(5, 5));
        let c = v.certificate().unwrap();
        assert!(c.moves.is_empty());
        c.replay().unwrap();
    }

    #[test]
    fn middle_of_identical_diagrams_is_immediate() {
        let d = trefoil();
        match find_middle(&d, &d, &SearchCaps::default_for(5, 5)) {
            MiddleResult::Found(m) => {
                assert_eq!(m.diagram.canonical_key(), d.canonical_key());
                assert!(m.from_first.moves.is_empty() && m.from_second.moves.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn padding_adds_cells() {
        let p = pad(&Diagram::unknot(), 0, OrientedType::RightI, 3).unwrap();
        assert_eq!(p.n(), 5);
    }
}

//! Exchange classes: closures of a diagram under exchange moves.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::canon::CanonicalKey;
use crate::grid::Diagram;
use crate::moves::{admits_destabilization, exchange_neighbors};

pub const DEFAULT_NODE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExchangeError {
    #[error("exchange closure exceeded the node cap after {0} keys")]
    CapExceeded(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeClass {
    /// Sorted.
    pub keys: Vec<CanonicalKey>,
    pub representative: CanonicalKey,
    pub size_n: usize,
    pub simplifiable: bool,
}

/// 128-bit digest of a class's sorted key set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Fingerprint(pub [u8; 16]);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl fmt::Debug for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fingerprint({self})")
    }
}

impl From<Fingerprint> for String {
    fn from(f: Fingerprint) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Fingerprint {
    type Error = String;
    fn try_from(s: String) -> Result<Fingerprint, String> {
        let bytes = hex::decode(&s).map_err(|e| e.to_string())?;
        let arr: [u8; 16] = bytes.try_into().map_err(|_| "fingerprint must be 16 bytes".to_string())?;
        Ok(Fingerprint(arr))
    }
}

struct Closure {
    keys: Vec<CanonicalKey>,
    /// Set when `stop` fired before the closure was complete.
    stopped: bool,
}

/// Breadth-first exchange closure. Levels expand in parallel and merge in
/// sorted order, so the visit order does not depend on thread count.
fn closure(
    d: &Diagram,
    node_cap: usize,
    stop: impl Fn(&CanonicalKey, &Diagram) -> bool + Sync,
) -> Result<Closure, ExchangeError> {
    let start = d.canonical_key();
    let rep = start.diagram();
    if stop(&start, &rep) {
        return Ok(Closure { keys: vec![start], stopped: true });
    }
    let mut seen: HashSet<CanonicalKey> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let seen_ref = &seen;
        let expanded: Vec<Vec<(CanonicalKey, bool)>> = frontier
            .par_iter()
            .map(|k| {
                exchange_neighbors(&k.diagram())
                    .into_iter()
                    .filter_map(|r| {
                        let rep = r.canonical_representative();
                        let key = rep.canonical_key();
                        if seen_ref.contains(&key) {
                            return None;
                        }
                        let halt = stop(&key, &rep);
                        Some((key, halt))
                    })
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (k, halt) in expanded.into_iter().flatten() {
            if seen.contains(&k) {
                continue;
            }
            if seen.len() >= node_cap {
                return Err(ExchangeError::CapExceeded(seen.len()));
            }
            if halt {
                seen.insert(k);
                let mut keys: Vec<_> = seen.into_iter().collect();
                keys.sort();
                return Ok(Closure { keys, stopped: true });
            }
            seen.insert(k.clone());
            next.push(k);
        }
        next.sort();
        frontier = next;
    }
    let mut keys: Vec<_> = seen.into_iter().collect();
    keys.sort();
    Ok(Closure { keys, stopped: false })
}

pub fn exchange_class(d: &Diagram, node_cap: usize) -> Result<ExchangeClass, ExchangeError> {
    let c = closure(d, node_cap, |_, _| false)?;
    let simplifiable = c
        .keys
        .par_iter()
        .any(|k| admits_destabilization(&k.diagram()));
    Ok(ExchangeClass {
        representative: c.keys[0].clone(),
        size_n: d.n(),
        simplifiable,
        keys: c.keys,
    })
}

/// True iff some member of the exchange class admits a destabilization.
/// Stops at the first such member.
pub fn is_simplifiable(d: &Diagram, node_cap: usize) -> Result<bool, ExchangeError> {
    Ok(closure(d, node_cap, |_, r| admits_destabilization(r))?.stopped)
}

/// As [`is_simplifiable`], also stopping on a member `known` reports as
/// simplifiable. On a `false` result the whole class is returned so the
/// caller can remember it.
pub fn simplifiability_with(
    d: &Diagram,
    node_cap: usize,
    known: impl Fn(&CanonicalKey) -> bool + Sync,
) -> Result<(bool, Vec<CanonicalKey>), ExchangeError> {
    let c = closure(d, node_cap, |k, r| known(k) || admits_destabilization(r))?;
    Ok((c.stopped, c.keys))
}

/// True iff every key in `targets` lies in the exchange class of `d`. The
/// search stops as soon as the last target is seen.
pub fn exchange_connected(d: &Diagram, targets: &[CanonicalKey], node_cap: usize) -> Result<bool, ExchangeError> {
    let start = d.canonical_key();
    let mut missing: HashSet<&CanonicalKey> = targets.iter().filter(|k| **k != start).collect();
    let mut seen: HashSet<CanonicalKey> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    while !missing.is_empty() && !frontier.is_empty() {
        let seen_ref = &seen;
        let expanded: Vec<Vec<CanonicalKey>> = frontier
            .par_iter()
            .map(|k| {
                exchange_neighbors(&k.diagram())
                    .into_iter()
                    .map(|r| r.canonical_key())
                    .filter(|k| !seen_ref.contains(k))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for k in expanded.into_iter().flatten() {
            if seen.contains(&k) {
                continue;
            }
            if seen.len() >= node_cap {
                return Err(ExchangeError::CapExceeded(seen.len()));
            }
            missing.remove(&k);
            seen.insert(k.clone());
            next.push(k);
        }
        next.sort();
        frontier = next;
    }
    Ok(missing.is_empty())
}

pub fn class_fingerprint(cls: &ExchangeClass) -> Fingerprint {
    fingerprint_of(&cls.keys)
}

/// Digest of a strictly sorted key list.
pub fn fingerprint_of(sorted: &[CanonicalKey]) -> Fingerprint {
    let mut h = Sha256::new();
    for k in sorted {
        h.update((k.as_bytes().len() as u32).to_le_bytes());
        h.update(k.as_bytes());
    }
    let digest = h.finalize();
    let mut out = [0u8; 16];
    out.copy_from_slice(&digest[..16]);
    Fingerprint(out)
}

impl ExchangeClass {
    pub fn fingerprint(&self) -> Fingerprint {
        class_fingerprint(self)
    }

    pub fn contains(&self, k: &CanonicalKey) -> bool {
        self.keys.binary_search(k).is_ok()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Header line followed by one `{"key": ...}` line per member.
    pub fn to_jsonl(&self) -> String {
        let header = ClassHeader {
            representative: self.representative.clone(),
            n: self.size_n,
            simplifiable: self.simplifiable,
            fingerprint: self.fingerprint(),
            size: self.keys.len(),
        };
        let mut s = serde_json::to_string(&header).expect("header serializes");
        s.push('\n');
        for k in &self.keys {
            s.push_str(&serde_json::to_string(&KeyLine { key: k.clone() }).expect("key serializes"));
            s.push('\n');
        }
        s
    }

    /// Parses [`ExchangeClass::to_jsonl`] output and checks its internal
    /// consistency. Closure under exchanges is not re-verified.
    pub fn from_jsonl(text: &str) -> Result<ExchangeClass, ClassFileError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(ClassFileError::Empty)?;
        let header: ClassHeader =
            serde_json::from_str(first).map_err(|e| ClassFileError::Json { line: 1, message: e.to_string() })?;
        let mut keys = Vec::new();
        for (i, l) in lines {
            let kl: KeyLine = serde_json::from_str(l)
                .map_err(|e| ClassFileError::Json { line: i + 1, message: e.to_string() })?;
            keys.push(kl.key);
        }
        if keys.len() != header.size {
            return Err(ClassFileError::Inconsistent(format!(
                "header says {} keys, found {}",
                header.size,
                keys.len()
            )));
        }
        if keys.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ClassFileError::Inconsistent("keys are not strictly sorted".into()));
        }
        if keys.first() != Some(&header.representative) {
            return Err(ClassFileError::Inconsistent("representative is not the least key".into()));
        }
        if keys.iter().any(|k| k.grid_size() != header.n) {
            return Err(ClassFileError::Inconsistent("keys of different grid sizes".into()));
        }
        if fingerprint_of(&keys) != header.fingerprint {
            return Err(ClassFileError::Inconsistent("fingerprint mismatch".into()));
        }
        Ok(ExchangeClass {
            keys,
            representative: header.representative,
            size_n: header.n,
            simplifiable: header.simplifiable,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassHeader {
    representative: CanonicalKey,
    n: usize,
    simplifiable: bool,
    fingerprint: Fingerprint,
    size: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KeyLine {
    key: CanonicalKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassFileError {
    #[error("empty class file")]
    Empty,
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("inconsistent class file: {0}")]
    Inconsistent(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> Diagram {
        Diagram::new(vec![2, 3, 4, 0, 1], vec![0, 1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn unknot_class_is_a_singleton() {
        let c = exchange_class(&Diagram::unknot(), DEFAULT_NODE_CAP).unwrap();
        assert_eq!(c.len(), 1);
        assert!(!c.simplifiable);
        assert!(!is_simplifiable(&Diagram::unknot(), DEFAULT_NODE_CAP).unwrap());
    }

    #[test]
    fn trefoil_classes_differ_from_their_flip() {
        let a = exchange_class(&trefoil(), DEFAULT_NODE_CAP).unwrap();
        let b = exchange_class(&trefoil().flip_orientation(), DEFAULT_NODE_CAP).unwrap();
        assert_ne!(a.keys, b.keys);
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert!(!a.simplifiable && !b.simplifiable);
    }

    #[test]
    fn cap_is_reported() {
        let big = Diagram::new(vec![0, 2, 4, 1, 3, 5], vec![3, 5, 1, 4, 0, 2]).unwrap();
        let full = exchange_class(&big, DEFAULT_NODE_CAP).unwrap();
        if full.len() > 1 {
            assert_eq!(exchange_class(&big, 1), Err(ExchangeError::CapExceeded(1)));
        }
    }

    #[test]
    fn connectivity_agrees_with_the_class() {
        let t = trefoil();
        let flip = t.flip_orientation().canonical_key();
        assert!(exchange_connected(&t, &[t.shift(1, 3).canonical_key()], DEFAULT_NODE_CAP).unwrap());
        assert!(!exchange_connected(&t, &[flip], DEFAULT_NODE_CAP).unwrap());
    }

    #[test]
    fn jsonl_round_trip() {
        let c = exchange_class(&trefoil(), DEFAULT_NODE_CAP).unwrap();
        let text = c.to_jsonl();
        assert_eq!(ExchangeClass::from_jsonl(&text).unwrap(), c);
        let tampered = text.replacen("\"simplifiable\":false", "\"simplifiable\":false,\"extra\":1", 1);
        assert!(ExchangeClass::from_jsonl(&tampered).is_err());
    }
}

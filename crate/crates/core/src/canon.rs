//! Canonical keys: the least byte encoding over all cyclic row/column shifts.
//!
//! Two diagrams have equal keys exactly when one is a cyclic shift of the
//! other with identical orientations and component numbers.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Diagram, GridError, RawDiagram};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CanonicalKey(Box<[u8]>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KeyError {
    #[error("invalid hex: {0}")]
    Hex(String),
    #[error("key length {0} does not match any grid size")]
    Length(usize),
    #[error("key is not a canonical encoding")]
    NotCanonical,
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Cyclic shift applied to reach the canonical representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shift {
    pub rows: usize,
    pub cols: usize,
}

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn grid_size(&self) -> usize {
        self.0[0] as usize
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    /// Parses a hex key and checks that it decodes to its own canonical form.
    pub fn from_hex(s: &str) -> Result<CanonicalKey, KeyError> {
        let bytes = hex::decode(s.trim()).map_err(|e| KeyError::Hex(e.to_string()))?;
        let key = CanonicalKey(bytes.into_boxed_slice());
        let d = key.decode()?;
        if d.canonical_key() != key && d.canonical_key_unnumbered() != key {
            return Err(KeyError::NotCanonical);
        }
        Ok(key)
    }

    /// The canonical representative encoded by this key.
    pub fn decode(&self) -> Result<Diagram, KeyError> {
        let b = &self.0;
        let n = match b.first() {
            Some(&n) => n as usize,
            None => return Err(KeyError::Length(0)),
        };
        if b.len() != 3 * n + 1 {
            return Err(KeyError::Length(b.len()));
        }
        let take = |i: usize| b[1 + i * n..1 + (i + 1) * n].iter().map(|&x| x as usize).collect();
        Ok(Diagram::validate(RawDiagram {
            plus_row: take(0),
            minus_row: take(1),
            component_of: Some(take(2)),
        })?)
    }

    /// Decodes a key produced by this library; panics on foreign bytes.
    pub fn diagram(&self) -> Diagram {
        self.decode().expect("canonical keys decode to valid diagrams")
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl From<CanonicalKey> for String {
    fn from(k: CanonicalKey) -> String {
        k.to_hex()
    }
}

impl TryFrom<String> for CanonicalKey {
    type Error = KeyError;
    fn try_from(s: String) -> Result<Self, KeyError> {
        CanonicalKey::from_hex(&s)
    }
}

fn encode_shift(d: &Diagram, dc: usize, dr: usize, renumber: bool, out: &mut Vec<u8>) {
    let n = d.n();
    out.clear();
    out.push(n as u8);
    // Target column t holds source column t - dc.
    let src = |t: usize| (t + n - dc) % n;
    out.extend((0..n).map(|t| ((d.plus_row()[src(t)] + dr) % n) as u8));
    out.extend((0..n).map(|t| ((d.minus_row()[src(t)] + dr) % n) as u8));
    if renumber {
        let mut relabel = vec![usize::MAX; d.num_components()];
        let mut next = 0;
        for t in 0..n {
            let k = d.component_of()[src(t)];
            if relabel[k] == usize::MAX {
                relabel[k] = next;
                next += 1;
            }
            out.push(relabel[k] as u8);
        }
    } else {
        out.extend((0..n).map(|t| d.component_of()[src(t)] as u8));
    }
}

fn canonical(d: &Diagram, renumber: bool) -> (CanonicalKey, Shift) {
    let n = d.n();
    let mut best: Vec<u8> = Vec::with_capacity(3 * n + 1);
    let mut best_shifts: Vec<Shift> = Vec::new();
    let mut buf = Vec::with_capacity(3 * n + 1);
    // Only the row shift that puts the first `+` vertex in row 0 can be
    // minimal, so each column shift has one candidate.
    for dc in 0..n {
        let dr = (n - d.plus_row()[(n - dc) % n]) % n;
        encode_shift(d, dc, dr, renumber, &mut buf);
        if best.is_empty() || buf < best {
            std::mem::swap(&mut best, &mut buf);
            best_shifts.clear();
            best_shifts.push(Shift { rows: dr, cols: dc });
        } else if buf == best {
            best_shifts.push(Shift { rows: dr, cols: dc });
        }
    }
    let shift = *best_shifts.iter().min().expect("at least one shift");
    (CanonicalKey(best.into_boxed_slice()), shift)
}

impl Diagram {
    /// Least encoding over all `n^2` cyclic shifts; component numbers are
    /// carried unchanged.
    pub fn canonical_key(&self) -> CanonicalKey {
        canonical(self, false).0
    }

    /// Canonical key plus the smallest `(rows, cols)` shift reaching it.
    pub fn canonical_form(&self) -> (CanonicalKey, Shift) {
        canonical(self, false)
    }

    /// Variant that also minimises over renumberings of components.
    /// Identical to [`Diagram::canonical_key`] for knots.
    pub fn canonical_key_unnumbered(&self) -> CanonicalKey {
        canonical(self, true).0
    }

    pub fn canonical_representative(&self) -> Diagram {
        let (_, s) = self.canonical_form();
        self.shift(s.cols, s.rows)
    }

    /// True when this exact diagram is the canonical encoding of its class.
    pub fn is_canonical(&self) -> bool {
        let (_, s) = self.canonical_form();
        s.cols == 0 && s.rows == 0
    }

    /// As [`Diagram::is_canonical`] for the unnumbered key.
    pub fn is_canonical_unnumbered(&self) -> bool {
        let (_, s) = canonical(self, true);
        s.cols == 0 && s.rows == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn trefoil() -> Diagram {
        Diagram::new(vec![2, 3, 4, 0, 1], vec![0, 1, 2, 3, 4]).unwrap()
    }

    // Brute force over every shift pair, no pruning.
    fn naive_key(d: &Diagram) -> Vec<u8> {
        let n = d.n();
        let mut best: Option<Vec<u8>> = None;
        let mut buf = Vec::new();
        for dc in 0..n {
            for dr in 0..n {
                encode_shift(d, dc, dr, false, &mut buf);
                if best.as_ref().is_none_or(|b| buf < *b) {
                    best = Some(buf.clone());
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn unknot_has_one_key_among_its_four_shifts() {
        let d = Diagram::unknot();
        let keys: BTreeSet<_> = (0..2)
            .flat_map(|dc| (0..2).map(move |dr| (dc, dr)))
            .map(|(dc, dr)| d.shift(dc, dr).canonical_key())
            .collect();
        assert_eq!(keys.len(), 1);
    }

    #[test]
    fn pruned_minimum_matches_brute_force() {
        let d = trefoil();
        for dc in 0..5 {
            for dr in 0..5 {
                let s = d.shift(dc, dr);
                assert_eq!(s.canonical_key().as_bytes(), naive_key(&s).as_slice());
            }
        }
    }

    #[test]
    fn representative_is_idempotent() {
        let d = trefoil().shift(3, 1);
        let rep = d.canonical_representative();
        assert!(rep.is_canonical());
        assert_eq!(rep.canonical_key(), d.canonical_key());
        assert_eq!(rep.canonical_representative(), rep);
    }

    #[test]
    fn hex_round_trip() {
        let k = trefoil().canonical_key();
        assert_eq!(CanonicalKey::from_hex(&k.to_hex()).unwrap(), k);
        assert_eq!(k.diagram().canonical_key(), k);
    }

    #[test]
    fn non_canonical_hex_is_rejected() {
        let d = trefoil().shift(1, 0);
        if !d.is_canonical() {
            let mut bytes = vec![5u8];
            bytes.extend(d.plus_row().iter().map(|&x| x as u8));
            bytes.extend(d.minus_row().iter().map(|&x| x as u8));
            bytes.extend(d.component_of().iter().map(|&x| x as u8));
            assert_eq!(
                CanonicalKey::from_hex(&hex::encode(bytes)),
                Err(KeyError::NotCanonical)
            );
        }
    }
}

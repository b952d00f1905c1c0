//! Certificates: move chains that can be re-validated independently.
//!
//! ```text
//! gridcal-certificate v1
//! from <hex key>
//! to <hex key>
//! filter <move filter>
//! caps <size>:<nodes>:<seconds>
//! moves <count>
//! <move record>
//! ...
//! ```
//!
//! Each move applies to the canonical representative of the diagram the
//! previous move produced, starting from the representative of `from`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::canon::CanonicalKey;
use crate::moves::{apply_record, MoveFilter, MoveRecord};
use crate::search::SearchCaps;

pub const CERTIFICATE_HEADER: &str = "gridcal-certificate v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub from: CanonicalKey,
    pub to: CanonicalKey,
    pub filter: MoveFilter,
    pub caps: SearchCaps,
    pub moves: Vec<MoveRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

fn syntax(line: usize, message: impl Into<String>) -> CertificateParseError {
    CertificateParseError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("move {step}: category {category} is not allowed by the filter")]
    Filtered { step: usize, category: String },
    #[error("move {step}: {message}")]
    Illegal { step: usize, message: String },
    #[error("move {step}: grid size {size} exceeds the cap {cap}")]
    TooLarge { step: usize, size: usize, cap: usize },
    #[error("chain ends at {got}, expected {expected}")]
    WrongEnd { got: CanonicalKey, expected: CanonicalKey },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{CERTIFICATE_HEADER}")?;
        writeln!(f, "from {}", self.from)?;
        writeln!(f, "to {}", self.to)?;
        writeln!(f, "filter {}", self.filter)?;
        writeln!(f, "caps {}", self.caps)?;
        writeln!(f, "moves {}", self.moves.len())?;
        for m in &self.moves {
            writeln!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Certificate {
    type Err = CertificateParseError;

    fn from_str(text: &str) -> Result<Certificate, CertificateParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| lines.next().ok_or_else(|| syntax(0, format!("missing {what}")));
        let (ln, head) = next("header")?;
        if head.trim() != CERTIFICATE_HEADER {
            return Err(syntax(ln, format!("expected `{CERTIFICATE_HEADER}`")));
        }
        let mut field = |name: &str| -> Result<(usize, String), CertificateParseError> {
            let (ln, l) = next(name)?;
            match l.trim().split_once(' ') {
                Some((k, v)) if k == name => Ok((ln, v.trim().to_string())),
                _ => Err(syntax(ln, format!("expected `{name} ...`"))),
            }
        };
        let key = |(ln, v): (usize, String)| CanonicalKey::from_hex(&v).map_err(|e| syntax(ln, e.to_string()));
        let from = key(field("from")?)?;
        let to = key(field("to")?)?;
        let (ln, f) = field("filter")?;
        let filter = f.parse::<MoveFilter>().map_err(|e| syntax(ln, e.to_string()))?;
        let (ln, c) = field("caps")?;
        let caps = c.parse::<SearchCaps>().map_err(|e| syntax(ln, e))?;
        let (ln, count) = field("moves")?;
        let count: usize = count.parse().map_err(|_| syntax(ln, "bad move count"))?;
        let mut moves = Vec::new();
        for (ln, l) in lines.by_ref() {
            moves.push(l.parse::<MoveRecord>().map_err(|e| syntax(ln, e.to_string()))?);
            if moves.len() > count {
                return Err(syntax(ln, "more moves than declared"));
            }
        }
        if moves.len() != count {
            return Err(syntax(0, format!("declared {count} moves, found {}", moves.len())));
        }
        Ok(Certificate { from, to, filter, caps, moves })
    }
}

impl Certificate {
    /// Re-validates every move with the literal move checker and returns the
    /// keys visited, `from` first and `to` last.
    pub fn replay(&self) -> Result<Vec<CanonicalKey>, ReplayError> {
        let mut cur = self.from.diagram();
        let mut trail = vec![self.from.clone()];
        for (i, rec) in self.moves.iter().enumerate() {
            let step = i + 1;
            match rec.category() {
                Some(c) if self.filter.allows_category(c) => {}
                c => {
                    return Err(ReplayError::Filtered {
                        step,
                        category: c.map_or("invalid".into(), |c| c.label()),
                    })
                }
            }
            let (m, r) = apply_record(&cur, rec).map_err(|e| ReplayError::Illegal {
                step,
                message: e.to_string(),
            })?;
            if !self.filter.allows(&m) {
                return Err(ReplayError::Filtered {
                    step,
                    category: format!("{} on component {}", m.category().label(), m.component() + 1),
                });
            }
            if r.n() > self.caps.max_grid_size {
                return Err(ReplayError::TooLarge {
                    step,
                    size: r.n(),
                    cap: self.caps.max_grid_size,
                });
            }
            cur = r.canonical_representative();
            trail.push(cur.canonical_key());
        }
        let end = trail.last().expect("non-empty").clone();
        if end != self.to {
            return Err(ReplayError::WrongEnd {
                got: end,
                expected: self.to.clone(),
            });
        }
        Ok(trail)
    }
}

//! Oriented rectangular diagrams on a discrete `n x n` torus grid.
//!
//! Column `c` is the meridian at the `c`-th position of the θ-circle and row
//! `r` the longitude at the `r`-th position of the φ-circle, both read in the
//! positive direction. Every column and every row carries exactly one `+`
//! and one `-` vertex. Vertical edges run from `+` to `-`, horizontal edges
//! from `-` to `+`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest grid size: canonical keys store coordinates as single bytes.
pub const MAX_GRID_SIZE: usize = 255;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid size {0} is too small (need at least 2)")]
    SizeTooSmall(usize),
    #[error("grid size {0} exceeds the supported maximum of {MAX_GRID_SIZE}")]
    SizeTooLarge(usize),
    #[error("{which} has length {got}, expected {expected}")]
    LengthMismatch {
        which: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{which} rows do not form a permutation of 0..{n}")]
    NotAPermutation { which: &'static str, n: usize },
    #[error("column {column} has both vertices in row {row}")]
    SignClash { column: usize, row: usize },
    #[error("bad component numbering: {0}")]
    BadComponentNumbering(String),
}

/// A vertex of a diagram: position, orientation sign and component number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub col: usize,
    pub row: usize,
    pub sign: Sign,
    pub component: usize,
}

/// Unchecked field set, as read from a file or built by hand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawDiagram {
    pub plus_row: Vec<usize>,
    pub minus_row: Vec<usize>,
    pub component_of: Option<Vec<usize>>,
}

/// A validated oriented rectangular diagram with numbered components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    plus_row: Vec<usize>,
    minus_row: Vec<usize>,
    plus_col: Vec<usize>,
    minus_col: Vec<usize>,
    component_of: Vec<usize>,
    num_components: usize,
}

fn inverse_permutation(perm: &[usize], which: &'static str) -> Result<Vec<usize>, GridError> {
    let n = perm.len();
    let mut inv = vec![usize::MAX; n];
    for (i, &p) in perm.iter().enumerate() {
        if p >= n || inv[p] != usize::MAX {
            return Err(GridError::NotAPermutation { which, n });
        }
        inv[p] = i;
    }
    Ok(inv)
}

/// Cycles of `c -> plus_col[minus_row[c]]`, i.e. the column reached after
/// following the vertical edge of `c` and then its horizontal edge. Numbered
/// by first appearance in column order.
fn cycle_numbering(minus_row: &[usize], plus_col: &[usize]) -> (Vec<usize>, usize) {
    let n = minus_row.len();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut c = start;
        while comp[c] == usize::MAX {
            comp[c] = count;
            c = plus_col[minus_row[c]];
        }
        count += 1;
    }
    (comp, count)
}

impl Diagram {
    /// Checks a raw field set. Component numbers are recomputed from the
    /// cycle structure; a supplied numbering must be a relabelling of it.
    pub fn validate(raw: RawDiagram) -> Result<Diagram, GridError> {
        let n = raw.plus_row.len();
        if n < 2 {
            return Err(GridError::SizeTooSmall(n));
        }
        if n > MAX_GRID_SIZE {
            return Err(GridError::SizeTooLarge(n));
        }
        if raw.minus_row.len() != n {
            return Err(GridError::LengthMismatch {
                which: "minus_row",
                expected: n,
                got: raw.minus_row.len(),
            });
        }
        let plus_col = inverse_permutation(&raw.plus_row, "plus")?;
        let minus_col = inverse_permutation(&raw.minus_row, "minus")?;
        for c in 0..n {
            if raw.plus_row[c] == raw.minus_row[c] {
                return Err(GridError::SignClash {
                    column: c,
                    row: raw.plus_row[c],
                });
            }
        }
        let (cycles, count) = cycle_numbering(&raw.minus_row, &plus_col);
        let component_of = match raw.component_of {
            None => cycles,
            Some(given) => {
                if given.len() != n {
                    return Err(GridError::LengthMismatch {
                        which: "component_of",
                        expected: n,
                        got: given.len(),
                    });
                }
                let mut label_of_cycle = vec![usize::MAX; count];
                let mut cycle_of_label = vec![usize::MAX; count];
                for c in 0..n {
                    let (cy, lab) = (cycles[c], given[c]);
                    if lab >= count {
                        return Err(GridError::BadComponentNumbering(format!(
                            "column {c} has component {lab}, but there are only {count} components"
                        )));
                    }
                    if label_of_cycle[cy] == usize::MAX && cycle_of_label[lab] == usize::MAX {
                        label_of_cycle[cy] = lab;
                        cycle_of_label[lab] = cy;
                    } else if label_of_cycle[cy] != lab || cycle_of_label[lab] != cy {
                        return Err(GridError::BadComponentNumbering(format!(
                            "column {c}: numbering does not match the cycle structure"
                        )));
                    }
                }
                given
            }
        };
        Ok(Diagram {
            plus_row: raw.plus_row,
            minus_row: raw.minus_row,
            plus_col,
            minus_col,
            component_of,
            num_components: count,
        })
    }

    /// Builds a diagram with components numbered by first appearance.
    pub fn new(plus_row: Vec<usize>, minus_row: Vec<usize>) -> Result<Diagram, GridError> {
        Diagram::validate(RawDiagram {
            plus_row,
            minus_row,
            component_of: None,
        })
    }

    pub fn with_components(
        plus_row: Vec<usize>,
        minus_row: Vec<usize>,
        component_of: Vec<usize>,
    ) -> Result<Diagram, GridError> {
        Diagram::validate(RawDiagram {
            plus_row,
            minus_row,
            component_of: Some(component_of),
        })
    }

    /// Smallest legal diagram: the 2x2 unknot.
    pub fn unknot() -> Diagram {
        Diagram::new(vec![0, 1], vec![1, 0]).expect("2x2 unknot is valid")
    }

    pub fn n(&self) -> usize {
        self.plus_row.len()
    }

    pub fn plus_row(&self) -> &[usize] {
        &self.plus_row
    }

    pub fn minus_row(&self) -> &[usize] {
        &self.minus_row
    }

    /// Column of the `+` vertex in each row.
    pub fn plus_col(&self) -> &[usize] {
        &self.plus_col
    }

    /// Column of the `-` vertex in each row.
    pub fn minus_col(&self) -> &[usize] {
        &self.minus_col
    }

    pub fn component_of(&self) -> &[usize] {
        &self.component_of
    }

    pub fn num_components(&self) -> usize {
        self.num_components
    }

    /// Component of the cycle through row `r`.
    pub fn component_of_row(&self, r: usize) -> usize {
        self.component_of[self.plus_col[r]]
    }

    pub fn sign_at(&self, col: usize, row: usize) -> Option<Sign> {
        if self.plus_row[col] == row {
            Some(Sign::Plus)
        } else if self.minus_row[col] == row {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    /// All `2n` vertices, column by column, `+` before `-`.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n()).flat_map(move |c| {
            let component = self.component_of[c];
            [
                Vertex {
                    col: c,
                    row: self.plus_row[c],
                    sign: Sign::Plus,
                    component,
                },
                Vertex {
                    col: c,
                    row: self.minus_row[c],
                    sign: Sign::Minus,
                    component,
                },
            ]
        })
    }

    /// Row of the other vertex in column `col`.
    pub fn column_partner(&self, col: usize, row: usize) -> usize {
        if self.plus_row[col] == row {
            self.minus_row[col]
        } else {
            self.plus_row[col]
        }
    }

    /// Column of the other vertex in row `row`.
    pub fn row_partner(&self, col: usize, row: usize) -> usize {
        if self.plus_col[row] == col {
            self.minus_col[row]
        } else {
            self.plus_col[row]
        }
    }

    /// Cyclic shift: column `c` moves to `c + dc`, row `r` to `r + dr`.
    pub fn shift(&self, dc: usize, dr: usize) -> Diagram {
        let n = self.n();
        let (dc, dr) = (dc % n, dr % n);
        let mut plus = vec![0; n];
        let mut minus = vec![0; n];
        let mut comp = vec![0; n];
        for c in 0..n {
            let t = (c + dc) % n;
            plus[t] = (self.plus_row[c] + dr) % n;
            minus[t] = (self.minus_row[c] + dr) % n;
            comp[t] = self.component_of[c];
        }
        Diagram::from_parts(plus, minus, comp)
    }

    /// Reverses the orientation of every component.
    pub fn flip_orientation(&self) -> Diagram {
        Diagram::from_parts(
            self.minus_row.clone(),
            self.plus_row.clone(),
            self.component_of.clone(),
        )
    }

    /// Reverses the cyclic order of the columns; represents the mirror link.
    pub fn reflect_theta(&self) -> Diagram {
        let rev = |v: &[usize]| v.iter().rev().copied().collect::<Vec<_>>();
        Diagram::from_parts(
            rev(&self.plus_row),
            rev(&self.minus_row),
            rev(&self.component_of),
        )
    }

    /// Assembles a diagram from arrays already known to be consistent.
    pub(crate) fn from_parts(
        plus_row: Vec<usize>,
        minus_row: Vec<usize>,
        component_of: Vec<usize>,
    ) -> Diagram {
        let n = plus_row.len();
        let mut plus_col = vec![0; n];
        let mut minus_col = vec![0; n];
        for c in 0..n {
            plus_col[plus_row[c]] = c;
            minus_col[minus_row[c]] = c;
        }
        let num_components = component_of.iter().max().map_or(0, |m| m + 1);
        let d = Diagram {
            plus_row,
            minus_row,
            plus_col,
            minus_col,
            component_of,
            num_components,
        };
        debug_assert!(
            Diagram::validate(d.to_raw()).is_ok(),
            "inconsistent diagram parts: {d:?}"
        );
        d
    }

    pub fn to_raw(&self) -> RawDiagram {
        RawDiagram {
            plus_row: self.plus_row.clone(),
            minus_row: self.minus_row.clone(),
            component_of: Some(self.component_of.clone()),
        }
    }

    /// Cyclic column order of component `k`'s traversal, starting from its
    /// least column.
    pub fn component_columns(&self, k: usize) -> Vec<usize> {
        let Some(start) = (0..self.n()).find(|&c| self.component_of[c] == k) else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut c = self.plus_col[self.minus_row[start]];
        while c != start {
            out.push(c);
            c = self.plus_col[self.minus_row[c]];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> Diagram {
        Diagram::new(vec![2, 3, 4, 0, 1], vec![0, 1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn smallest_unknot_is_valid() {
        let d = Diagram::new(vec![0, 1], vec![1, 0]).unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.num_components(), 1);
    }

    #[test]
    fn sign_clash_is_rejected() {
        assert_eq!(
            Diagram::new(vec![0, 1], vec![0, 1]),
            Err(GridError::SignClash { column: 0, row: 0 })
        );
    }

    #[test]
    fn size_one_is_rejected() {
        assert_eq!(
            Diagram::new(vec![0], vec![0]),
            Err(GridError::SizeTooSmall(1))
        );
    }

    #[test]
    fn non_permutation_is_rejected() {
        assert!(matches!(
            Diagram::new(vec![0, 0], vec![1, 1]),
            Err(GridError::NotAPermutation { which: "plus", .. })
        ));
    }

    #[test]
    fn trefoil_is_a_single_cycle() {
        let d = trefoil();
        assert_eq!(d.num_components(), 1);
        assert_eq!(d.component_columns(0).len(), 5);
    }

    #[test]
    fn supplied_numbering_must_match_cycles() {
        // Two 2x2 squares side by side on a 4x4 grid.
        let plus = vec![0, 1, 2, 3];
        let minus = vec![1, 0, 3, 2];
        let d = Diagram::with_components(plus.clone(), minus.clone(), vec![1, 1, 0, 0]).unwrap();
        assert_eq!(d.num_components(), 2);
        assert!(matches!(
            Diagram::with_components(plus.clone(), minus.clone(), vec![0, 1, 0, 1]),
            Err(GridError::BadComponentNumbering(_))
        ));
        assert!(matches!(
            Diagram::with_components(plus, minus, vec![0, 0, 0, 0]),
            Err(GridError::BadComponentNumbering(_))
        ));
    }

    #[test]
    fn flip_of_unknot_swaps_rows() {
        let f = Diagram::unknot().flip_orientation();
        assert_eq!(f.plus_row(), &[1, 0]);
        assert_eq!(f.minus_row(), &[0, 1]);
    }

    #[test]
    fn flip_is_an_involution() {
        let d = trefoil();
        assert_eq!(d.flip_orientation().flip_orientation(), d);
    }

    #[test]
    fn partners() {
        let d = trefoil();
        for v in d.vertices() {
            let r = d.column_partner(v.col, v.row);
            assert_ne!(r, v.row);
            assert_eq!(d.sign_at(v.col, r), Some(v.sign.opposite()));
            let c = d.row_partner(v.col, v.row);
            assert_ne!(c, v.col);
            assert_eq!(d.sign_at(c, v.row), Some(v.sign.opposite()));
        }
    }
}

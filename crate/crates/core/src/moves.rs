//! Elementary moves: exchanges, stabilizations and destabilizations.
//!
//! A move `R1 -> R2` is described on the *refinement grid*, the union of the
//! meridians and longitudes of both diagrams. Each diagram occupies all but
//! at most one column and one row of that grid; [`Frame`] records which.
//!
//! [`enumerate_moves`] builds candidates geometrically. [`classify_aligned`]
//! checks the six defining conditions literally on two point sets and is the
//! code path used to replay certificates.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Diagram, Sign, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    Exchange,
    Stabilization,
    Destabilization,
}

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::Exchange => "exchange",
            MoveKind::Stabilization => "stab",
            MoveKind::Destabilization => "destab",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StabType {
    I,
    II,
}

/// `→I`, `←I`, `→II`, `←II`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OrientedType {
    RightI,
    LeftI,
    RightII,
    LeftII,
}

impl OrientedType {
    pub const ALL: [OrientedType; 4] = [
        OrientedType::RightI,
        OrientedType::LeftI,
        OrientedType::RightII,
        OrientedType::LeftII,
    ];

    pub fn stab_type(self) -> StabType {
        match self {
            OrientedType::RightI | OrientedType::LeftI => StabType::I,
            OrientedType::RightII | OrientedType::LeftII => StabType::II,
        }
    }

    fn from_parts(t: StabType, positive: bool) -> OrientedType {
        match (t, positive) {
            (StabType::I, true) => OrientedType::RightI,
            (StabType::I, false) => OrientedType::LeftI,
            (StabType::II, true) => OrientedType::RightII,
            (StabType::II, false) => OrientedType::LeftII,
        }
    }

    /// ASCII label used in certificates: `>I`, `<I`, `>II`, `<II`.
    pub fn label(self) -> &'static str {
        match self {
            OrientedType::RightI => ">I",
            OrientedType::LeftI => "<I",
            OrientedType::RightII => ">II",
            OrientedType::LeftII => "<II",
        }
    }

    pub fn from_label(s: &str) -> Option<OrientedType> {
        OrientedType::ALL.into_iter().find(|t| t.label() == s)
    }
}

/// Directed rectangle `[c1; c2] x [r1; r2]` on the refinement grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub c1: usize,
    pub c2: usize,
    pub r1: usize,
    pub r2: usize,
}

impl Rect {
    fn is_corner(&self, col: usize, row: usize) -> bool {
        (col == self.c1 || col == self.c2) && (row == self.r1 || row == self.r2)
    }
}

/// Which refinement column/row a diagram does not occupy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub missing_col: Option<usize>,
    pub missing_row: Option<usize>,
}

fn lift(i: usize, missing: Option<usize>) -> usize {
    match missing {
        Some(m) if i >= m => i + 1,
        _ => i,
    }
}

fn lower(i: usize, missing: Option<usize>) -> Option<usize> {
    match missing {
        Some(m) if i == m => None,
        Some(m) if i > m => Some(i - 1),
        _ => Some(i),
    }
}

impl Embedding {
    pub fn col_to_ref(&self, c: usize) -> usize {
        lift(c, self.missing_col)
    }
    pub fn row_to_ref(&self, r: usize) -> usize {
        lift(r, self.missing_row)
    }
    pub fn col_from_ref(&self, c: usize) -> Option<usize> {
        lower(c, self.missing_col)
    }
    pub fn row_from_ref(&self, r: usize) -> Option<usize> {
        lower(r, self.missing_row)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Frame {
    pub cols: usize,
    pub rows: usize,
    pub source: Embedding,
    pub target: Embedding,
}

impl Frame {
    pub fn reversed(&self) -> Frame {
        Frame {
            source: self.target,
            target: self.source,
            ..*self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub rect: Rect,
    /// Vertices of `R1 \ R2`, refinement coordinates.
    pub removed: Vec<Vertex>,
    /// Vertices of `R2 \ R1`, refinement coordinates.
    pub added: Vec<Vertex>,
    pub stab_type: Option<StabType>,
    pub oriented_type: Option<OrientedType>,
    pub local: bool,
    pub frame: Frame,
}

impl Move {
    pub fn category(&self) -> MoveCategory {
        match (self.kind, self.oriented_type) {
            (MoveKind::Exchange, _) => MoveCategory::Exchange,
            (MoveKind::Stabilization, Some(t)) => MoveCategory::Stab(t),
            (MoveKind::Destabilization, Some(t)) => MoveCategory::Destab(t),
            _ => unreachable!("(de)stabilizations always carry an oriented type"),
        }
    }

    /// Component the move acts on.
    pub fn component(&self) -> usize {
        self.removed[0].component
    }

    pub fn record(&self) -> MoveRecord {
        let src = self.frame.source;
        MoveRecord {
            kind: self.kind,
            oriented_type: self.oriented_type,
            rect: self.rect,
            local: self.local,
            insertion: (src != Embedding::default()).then_some(src),
        }
    }

    /// The same move read backwards, `R2 -> R1`, in the same frame.
    pub fn inverse(&self) -> Move {
        Move {
            kind: match self.kind {
                MoveKind::Exchange => MoveKind::Exchange,
                MoveKind::Stabilization => MoveKind::Destabilization,
                MoveKind::Destabilization => MoveKind::Stabilization,
            },
            removed: self.added.clone(),
            added: self.removed.clone(),
            frame: self.frame.reversed(),
            ..self.clone()
        }
    }

    fn sort_key(&self) -> (MoveKind, Rect, Frame) {
        (self.kind, self.rect, self.frame)
    }
}

/// The nine move categories a [`MoveFilter`] selects from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveCategory {
    Exchange,
    Stab(OrientedType),
    Destab(OrientedType),
}

impl MoveCategory {
    pub const ALL: [MoveCategory; 9] = [
        MoveCategory::Exchange,
        MoveCategory::Stab(OrientedType::RightI),
        MoveCategory::Stab(OrientedType::LeftI),
        MoveCategory::Stab(OrientedType::RightII),
        MoveCategory::Stab(OrientedType::LeftII),
        MoveCategory::Destab(OrientedType::RightI),
        MoveCategory::Destab(OrientedType::LeftI),
        MoveCategory::Destab(OrientedType::RightII),
        MoveCategory::Destab(OrientedType::LeftII),
    ];

    fn bit(self) -> u16 {
        let idx = MoveCategory::ALL
            .iter()
            .position(|&c| c == self)
            .expect("category is listed");
        1 << idx
    }

    pub fn inverse(self) -> MoveCategory {
        match self {
            MoveCategory::Exchange => MoveCategory::Exchange,
            MoveCategory::Stab(t) => MoveCategory::Destab(t),
            MoveCategory::Destab(t) => MoveCategory::Stab(t),
        }
    }

    pub fn label(self) -> String {
        match self {
            MoveCategory::Exchange => "exchange".into(),
            MoveCategory::Stab(t) => format!("stab{}", t.label()),
            MoveCategory::Destab(t) => format!("destab{}", t.label()),
        }
    }
}

/// `+` for the standard contact structure, `-` for its mirror.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ContactSign {
    Plus,
    Minus,
}

/// Transverse pushoff quadrant `T_{±±}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    PlusPlus,
    PlusMinus,
    MinusPlus,
    MinusMinus,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant::PlusPlus,
        Quadrant::PlusMinus,
        Quadrant::MinusPlus,
        Quadrant::MinusMinus,
    ];

    /// The single oriented type whose (de)stabilizations may change the
    /// transverse class of this quadrant.
    pub fn excluded(self) -> OrientedType {
        match self {
            Quadrant::PlusPlus => OrientedType::LeftII,
            Quadrant::PlusMinus => OrientedType::RightII,
            Quadrant::MinusPlus => OrientedType::LeftI,
            Quadrant::MinusMinus => OrientedType::RightI,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Quadrant::PlusPlus => "++",
            Quadrant::PlusMinus => "+-",
            Quadrant::MinusPlus => "-+",
            Quadrant::MinusMinus => "--",
        }
    }

    pub fn from_label(s: &str) -> Option<Quadrant> {
        Quadrant::ALL.into_iter().find(|q| q.label() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveFilter {
    mask: u16,
    components: Option<Vec<usize>>,
}

impl MoveFilter {
    pub fn none() -> MoveFilter {
        MoveFilter {
            mask: 0,
            components: None,
        }
    }

    pub fn all() -> MoveFilter {
        MoveFilter::from_categories(MoveCategory::ALL)
    }

    pub fn from_categories(cats: impl IntoIterator<Item = MoveCategory>) -> MoveFilter {
        let mut f = MoveFilter::none();
        for c in cats {
            f.mask |= c.bit();
        }
        f
    }

    pub fn exchange_only() -> MoveFilter {
        MoveFilter::from_categories([MoveCategory::Exchange])
    }

    /// Exchanges plus (de)stabilizations of one type: type I preserves the
    /// `+` Legendrian class, type II the `-` one.
    pub fn of_type(t: StabType) -> MoveFilter {
        MoveFilter::from_categories(MoveCategory::ALL.into_iter().filter(|c| match c {
            MoveCategory::Exchange => true,
            MoveCategory::Stab(o) | MoveCategory::Destab(o) => o.stab_type() == t,
        }))
    }

    /// Moves preserving the Legendrian class for the given contact structure.
    pub fn legendrian(sign: ContactSign) -> MoveFilter {
        match sign {
            ContactSign::Plus => MoveFilter::of_type(StabType::I),
            ContactSign::Minus => MoveFilter::of_type(StabType::II),
        }
    }

    /// Everything except (de)stabilizations of the quadrant's excluded type.
    pub fn transverse(q: Quadrant) -> MoveFilter {
        let bad = q.excluded();
        MoveFilter::from_categories(MoveCategory::ALL.into_iter().filter(|c| match c {
            MoveCategory::Exchange => true,
            MoveCategory::Stab(o) | MoveCategory::Destab(o) => *o != bad,
        }))
    }

    pub fn with_components(mut self, comps: Vec<usize>) -> MoveFilter {
        self.components = Some(comps);
        self
    }

    pub fn components(&self) -> Option<&[usize]> {
        self.components.as_deref()
    }

    pub fn allows_category(&self, c: MoveCategory) -> bool {
        self.mask & c.bit() != 0
    }

    pub fn allows_component(&self, k: usize) -> bool {
        self.components.as_ref().is_none_or(|cs| cs.contains(&k))
    }

    pub fn allows(&self, m: &Move) -> bool {
        self.allows_category(m.category()) && self.allows_component(m.component())
    }

    pub fn categories(&self) -> impl Iterator<Item = MoveCategory> + '_ {
        MoveCategory::ALL
            .into_iter()
            .filter(move |&c| self.allows_category(c))
    }

    /// Filter of inverse moves: stabilization and destabilization bits swapped.
    pub fn inverse(&self) -> MoveFilter {
        let mut f = MoveFilter::from_categories(self.categories().map(MoveCategory::inverse));
        f.components = self.components.clone();
        f
    }

    /// Drops stabilizations; used at the grid-size cap.
    pub fn without_stabilizations(&self) -> MoveFilter {
        let mut f = MoveFilter::from_categories(
            self.categories()
                .filter(|c| !matches!(c, MoveCategory::Stab(_))),
        );
        f.components = self.components.clone();
        f
    }

    fn any_of(&self, pred: impl Fn(MoveCategory) -> bool) -> bool {
        self.categories().any(pred)
    }
}

impl fmt::Display for MoveFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cats: Vec<String> = self.categories().map(|c| c.label()).collect();
        write!(f, "{}", if cats.is_empty() { "none".into() } else { cats.join(",") })?;
        if let Some(cs) = &self.components {
            let list: Vec<String> = cs.iter().map(|k| (k + 1).to_string()).collect();
            write!(f, ";comp={}", list.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad move filter: {0}")]
pub struct FilterParseError(String);

impl FromStr for MoveFilter {
    type Err = FilterParseError;

    /// Parses the [`Display`](fmt::Display) form, plus the shorthands
    /// `all`, `type-I`, `type-II` and `transverse:<quadrant>`.
    fn from_str(s: &str) -> Result<MoveFilter, FilterParseError> {
        let (cats, comps) = match s.split_once(";comp=") {
            Some((c, k)) => (c, Some(k)),
            None => (s, None),
        };
        let mut f = match cats {
            "all" => MoveFilter::all(),
            "none" => MoveFilter::none(),
            "type-I" => MoveFilter::of_type(StabType::I),
            "type-II" => MoveFilter::of_type(StabType::II),
            other => {
                if let Some(q) = other.strip_prefix("transverse:") {
                    let q = Quadrant::from_label(q)
                        .ok_or_else(|| FilterParseError(format!("unknown quadrant {q:?}")))?;
                    MoveFilter::transverse(q)
                } else {
                    let mut f = MoveFilter::none();
                    for part in other.split(',') {
                        let cat = MoveCategory::ALL
                            .into_iter()
                            .find(|c| c.label() == part)
                            .ok_or_else(|| FilterParseError(format!("unknown category {part:?}")))?;
                        f.mask |= cat.bit();
                    }
                    f
                }
            }
        };
        if let Some(k) = comps {
            let list = k
                .split(',')
                .map(|x| match x.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(FilterParseError(format!("bad component {x:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            f.components = Some(list);
        }
        Ok(f)
    }
}

fn arc_len(a: usize, b: usize, m: usize) -> usize {
    (b + m - a) % m
}

fn in_closed_arc(x: usize, a: usize, b: usize, m: usize) -> bool {
    arc_len(a, x, m) <= arc_len(a, b, m)
}

fn in_open_arc(x: usize, a: usize, b: usize, m: usize) -> bool {
    let k = arc_len(a, x, m);
    k > 0 && k < arc_len(a, b, m)
}

fn in_closed_rect(col: usize, row: usize, r: &Rect, cols: usize, rows: usize) -> bool {
    in_closed_arc(col, r.c1, r.c2, cols) && in_closed_arc(row, r.r1, r.r2, rows)
}

/// Source vertices in refinement coordinates.
fn lift_all(d: &Diagram, emb: &Embedding) -> Vec<Vertex> {
    d.vertices()
        .map(|v| Vertex {
            col: emb.col_to_ref(v.col),
            row: emb.row_to_ref(v.row),
            ..v
        })
        .collect()
}

/// Condition 5, given that every point of `R2 \ R1` is a corner.
fn only_corners_inside(points: &[Vertex], r: &Rect, cols: usize, rows: usize) -> bool {
    points
        .iter()
        .all(|p| !in_closed_rect(p.col, p.row, r, cols, rows) || r.is_corner(p.col, p.row))
}

fn open_annuli_empty(points: &[Vertex], r: &Rect, cols: usize, rows: usize) -> bool {
    points.iter().all(|p| {
        !in_open_arc(p.col, r.c1, r.c2, cols) && !in_open_arc(p.row, r.r1, r.r2, rows)
    })
}

/// Builds a diagram from refinement-grid points and its embedding.
fn assemble(points: &[Vertex], emb: &Embedding) -> Option<Diagram> {
    let n = points.len() / 2;
    let mut plus = vec![usize::MAX; n];
    let mut minus = vec![usize::MAX; n];
    let mut comp = vec![usize::MAX; n];
    for p in points {
        let c = emb.col_from_ref(p.col)?;
        let r = emb.row_from_ref(p.row)?;
        if c >= n || r >= n {
            return None;
        }
        let slot = match p.sign {
            Sign::Plus => &mut plus[c],
            Sign::Minus => &mut minus[c],
        };
        if *slot != usize::MAX {
            return None;
        }
        *slot = r;
        if comp[c] != usize::MAX && comp[c] != p.component {
            return None;
        }
        comp[c] = p.component;
    }
    Diagram::with_components(plus, minus, comp).ok()
}

fn replace(points: &[Vertex], removed: &[Vertex], added: &[Vertex]) -> Vec<Vertex> {
    points
        .iter()
        .filter(|p| !removed.iter().any(|q| q.col == p.col && q.row == p.row))
        .chain(added.iter())
        .copied()
        .collect()
}

/// Every legal move at `d` whose category and component pass `filter`, with
/// the resulting diagrams, in order of kind and rectangle.
///
/// Exchanges that only slide an edge within its own gap leave the diagram
/// unchanged and are not reported.
pub fn enumerate_moves(d: &Diagram, filter: &MoveFilter) -> Vec<(Move, Diagram)> {
    let mut out = Vec::new();
    if filter.allows_category(MoveCategory::Exchange) {
        exchanges(d, filter, &mut out);
    }
    if filter.any_of(|c| matches!(c, MoveCategory::Stab(_))) {
        stabilizations(d, filter, &mut out);
    }
    if filter.any_of(|c| matches!(c, MoveCategory::Destab(_))) {
        destabilizations(d, filter, &mut out);
    }
    for (m, _) in &mut out {
        m.removed.sort();
        m.added.sort();
    }
    out.sort_by_key(|(m, _)| m.sort_key());
    out
}

fn exchanges(d: &Diagram, filter: &MoveFilter, out: &mut Vec<(Move, Diagram)>) {
    let n = d.n();
    if n < 3 {
        return;
    }
    for vertical in [true, false] {
        // `line` is the column (or row) whose edge moves to gap `gap`.
        for line in 0..n {
            let (pcol, prow, mcol, mrow, comp);
            if vertical {
                (pcol, prow, mcol, mrow) = (line, d.plus_row()[line], line, d.minus_row()[line]);
                comp = d.component_of()[line];
            } else {
                (pcol, prow, mcol, mrow) = (d.plus_col()[line], line, d.minus_col()[line], line);
                comp = d.component_of_row(line);
            }
            if !filter.allows_component(comp) {
                continue;
            }
            for gap in 0..n {
                if gap == line || gap == (line + 1) % n {
                    continue;
                }
                let src = if vertical {
                    Embedding { missing_col: Some(gap), missing_row: None }
                } else {
                    Embedding { missing_col: None, missing_row: Some(gap) }
                };
                let old = lift(line, Some(gap));
                let frame = Frame {
                    cols: n + vertical as usize,
                    rows: n + !vertical as usize,
                    source: src,
                    target: if vertical {
                        Embedding { missing_col: Some(old), missing_row: None }
                    } else {
                        Embedding { missing_col: None, missing_row: Some(old) }
                    },
                };
                let points = lift_all(d, &src);
                let at = |col: usize, row: usize, sign| Vertex { col, row, sign, component: comp };
                let (removed, added, along, across);
                if vertical {
                    let (p, m) = (src.row_to_ref(prow), src.row_to_ref(mrow));
                    removed = vec![at(old, p, Sign::Plus), at(old, m, Sign::Minus)];
                    added = vec![at(gap, p, Sign::Plus), at(gap, m, Sign::Minus)];
                    along = [(old, gap), (gap, old)];
                    across = [(p, m), (m, p)];
                } else {
                    let (p, m) = (src.col_to_ref(pcol), src.col_to_ref(mcol));
                    removed = vec![at(p, old, Sign::Plus), at(m, old, Sign::Minus)];
                    added = vec![at(p, gap, Sign::Plus), at(m, gap, Sign::Minus)];
                    along = [(old, gap), (gap, old)];
                    across = [(p, m), (m, p)];
                }
                let mut result: Option<Diagram> = None;
                for &(a1, a2) in &along {
                    for &(b1, b2) in &across {
                        let rect = if vertical {
                            Rect { c1: a1, c2: a2, r1: b1, r2: b2 }
                        } else {
                            Rect { c1: b1, c2: b2, r1: a1, r2: a2 }
                        };
                        if !only_corners_inside(&points, &rect, frame.cols, frame.rows) {
                            continue;
                        }
                        let r2 = result.get_or_insert_with(|| {
                            assemble(&replace(&points, &removed, &added), &frame.target)
                                .expect("exchange result is a valid diagram")
                        });
                        out.push((
                            Move {
                                kind: MoveKind::Exchange,
                                rect,
                                removed: removed.clone(),
                                added: added.clone(),
                                stab_type: None,
                                oriented_type: None,
                                local: open_annuli_empty(&points, &rect, frame.cols, frame.rows),
                                frame,
                            },
                            r2.clone(),
                        ));
                    }
                }
            }
        }
    }
}

fn stabilizations(d: &Diagram, filter: &MoveFilter, out: &mut Vec<(Move, Diagram)>) {
    let n = d.n();
    let size = n + 1;
    for v in d.vertices() {
        if !filter.allows_component(v.component) {
            continue;
        }
        let partner_row = d.column_partner(v.col, v.row);
        let partner_col = d.row_partner(v.col, v.row);
        for gc in 0..n {
            for gr in 0..n {
                let src = Embedding { missing_col: Some(gc), missing_row: Some(gr) };
                let (a, b) = (src.col_to_ref(v.col), src.row_to_ref(v.row));
                let (pr, pc) = (src.row_to_ref(partner_row), src.col_to_ref(partner_col));
                let mut points: Option<Vec<Vertex>> = None;
                for &(c1, c2) in &[(a, gc), (gc, a)] {
                    // The row partner would sit on the rectangle's edge.
                    if in_open_arc(pc, c1, c2, size) {
                        continue;
                    }
                    for &(r1, r2) in &[(b, gr), (gr, b)] {
                        if in_open_arc(pr, r1, r2, size) {
                            continue;
                        }
                        let rect = Rect { c1, c2, r1, r2 };
                        let stab_type = if (a, b) == (c1, r1) || (a, b) == (c2, r2) {
                            StabType::I
                        } else {
                            StabType::II
                        };
                        // (θ2, φ0) with φ0 the new row: sign s in column a, -s in the new column.
                        let positive = (c2 == a) == (v.sign == Sign::Plus);
                        let oriented = OrientedType::from_parts(stab_type, positive);
                        if !filter.allows_category(MoveCategory::Stab(oriented)) {
                            continue;
                        }
                        let pts = points.get_or_insert_with(|| lift_all(d, &src));
                        if !only_corners_inside(pts, &rect, size, size) {
                            continue;
                        }
                        let at = |col, row, sign| Vertex { col, row, sign, component: v.component };
                        let removed = vec![at(a, b, v.sign)];
                        let added = vec![
                            at(a, gr, v.sign),
                            at(gc, b, v.sign),
                            at(gc, gr, v.sign.opposite()),
                        ];
                        let frame = Frame {
                            cols: size,
                            rows: size,
                            source: src,
                            target: Embedding::default(),
                        };
                        let r2 = assemble(&replace(pts, &removed, &added), &frame.target)
                            .expect("stabilization result is a valid diagram");
                        out.push((
                            Move {
                                kind: MoveKind::Stabilization,
                                rect,
                                local: open_annuli_empty(pts, &rect, size, size),
                                removed,
                                added,
                                stab_type: Some(stab_type),
                                oriented_type: Some(oriented),
                                frame,
                            },
                            r2,
                        ));
                    }
                }
            }
        }
    }
}

fn destabilizations(d: &Diagram, filter: &MoveFilter, out: &mut Vec<(Move, Diagram)>) {
    let n = d.n();
    if n < 3 {
        return;
    }
    let points = lift_all(d, &Embedding::default());
    for w in d.vertices() {
        if !filter.allows_component(w.component) {
            continue;
        }
        let ru = d.column_partner(w.col, w.row);
        let ct = d.row_partner(w.col, w.row);
        if d.column_partner(ct, w.row) == ru {
            // The new corner is already occupied: the component is a 2x2 square.
            continue;
        }
        let s = w.sign.opposite();
        let at = |col, row, sign| Vertex { col, row, sign, component: w.component };
        let v = at(ct, ru, s);
        let frame = Frame {
            cols: n,
            rows: n,
            source: Embedding::default(),
            target: Embedding { missing_col: Some(w.col), missing_row: Some(w.row) },
        };
        let mut result: Option<Diagram> = None;
        for &(c1, c2) in &[(ct, w.col), (w.col, ct)] {
            for &(r1, r2) in &[(ru, w.row), (w.row, ru)] {
                let rect = Rect { c1, c2, r1, r2 };
                let stab_type = if (ct, ru) == (c1, r1) || (ct, ru) == (c2, r2) {
                    StabType::I
                } else {
                    StabType::II
                };
                // (θ2, φ0) with φ0 = w.row; the big diagram has t = (ct, w.row) of sign s.
                let positive = if c2 == ct { s == Sign::Plus } else { w.sign == Sign::Plus };
                let oriented = OrientedType::from_parts(stab_type, positive);
                if !filter.allows_category(MoveCategory::Destab(oriented)) {
                    continue;
                }
                if !only_corners_inside(&points, &rect, n, n) {
                    continue;
                }
                let removed = vec![at(ct, w.row, s), w, at(w.col, ru, s)];
                let added = vec![v];
                let r2 = result.get_or_insert_with(|| {
                    assemble(&replace(&points, &removed, &added), &frame.target)
                        .expect("destabilization result is a valid diagram")
                });
                out.push((
                    Move {
                        kind: MoveKind::Destabilization,
                        rect,
                        local: open_annuli_empty(&points, &rect, n, n),
                        removed,
                        added,
                        stab_type: Some(stab_type),
                        oriented_type: Some(oriented),
                        frame,
                    },
                    r2.clone(),
                ));
            }
        }
    }
}

/// Results of all nontrivial exchange moves at `d`, one per moved edge and
/// target gap. Equivalent to the exchange part of [`enumerate_moves`] up to
/// cyclic shifts of the results, without building [`Move`] values.
pub fn exchange_neighbors(d: &Diagram) -> Vec<Diagram> {
    let n = d.n();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    for vertical in [true, false] {
        // In row terms for vertical moves: the moved column `a` spans rows
        // p, q; every column strictly between `a` and the gap must keep both
        // of its rows off one closed arc from p to q.
        let ends = |a: usize| {
            if vertical {
                (d.plus_row()[a], d.minus_row()[a])
            } else {
                (d.plus_col()[a], d.minus_col()[a])
            }
        };
        for a in 0..n {
            let (p, q) = ends(a);
            let span = arc_len(p, q, n);
            let mut ok = vec![false; n];
            for step in [1usize, n - 1] {
                let (mut hit, mut in_pq, mut in_qp) = (false, false, false);
                let mut c = (a + step) % n;
                while c != a {
                    let (x, y) = ends(c);
                    for z in [x, y] {
                        let k = arc_len(p, z, n);
                        if k == 0 || k == span {
                            hit = true;
                        } else if k < span {
                            in_pq = true;
                        } else {
                            in_qp = true;
                        }
                    }
                    if hit || (in_pq && in_qp) {
                        break;
                    }
                    // Gap just past `c` in the direction of travel.
                    let gap = if step == 1 { (c + 1) % n } else { c };
                    ok[gap] = true;
                    c = (c + step) % n;
                }
            }
            for gap in 0..n {
                if !ok[gap] || gap == a || gap == (a + 1) % n {
                    continue;
                }
                // New cyclic order of lines: from `gap` round, with `a` last.
                let order: Vec<usize> = (0..n).map(|i| (gap + i) % n).filter(|&x| x != a).chain([a]).collect();
                let r = if vertical {
                    let plus = order.iter().map(|&c| d.plus_row()[c]).collect();
                    let minus = order.iter().map(|&c| d.minus_row()[c]).collect();
                    let comp = order.iter().map(|&c| d.component_of()[c]).collect();
                    Diagram::from_parts(plus, minus, comp)
                } else {
                    let mut pos = vec![0; n];
                    for (i, &r) in order.iter().enumerate() {
                        pos[r] = i;
                    }
                    let plus = d.plus_row().iter().map(|&r| pos[r]).collect();
                    let minus = d.minus_row().iter().map(|&r| pos[r]).collect();
                    Diagram::from_parts(plus, minus, d.component_of().to_vec())
                };
                out.push(r);
            }
        }
    }
    out
}

/// True when conditions for a destabilization hold somewhere; cheaper than
/// [`enumerate_moves`] because no result diagram is built.
pub fn admits_destabilization(d: &Diagram) -> bool {
    let n = d.n();
    if n < 3 {
        return false;
    }
    let points = lift_all(d, &Embedding::default());
    d.vertices().any(|w| {
        let ru = d.column_partner(w.col, w.row);
        let ct = d.row_partner(w.col, w.row);
        if d.column_partner(ct, w.row) == ru {
            return false;
        }
        [(ct, w.col), (w.col, ct)].iter().any(|&(c1, c2)| {
            [(ru, w.row), (w.row, ru)].iter().any(|&(r1, r2)| {
                only_corners_inside(&points, &Rect { c1, c2, r1, r2 }, n, n)
            })
        })
    })
}

/// Which defining condition a pair of diagrams violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not an elementary move: condition {condition} fails ({detail})")]
pub struct NotAnElementaryMove {
    pub condition: u8,
    pub detail: String,
}

fn fail(condition: u8, detail: impl Into<String>) -> NotAnElementaryMove {
    NotAnElementaryMove {
        condition,
        detail: detail.into(),
    }
}

type PointMap = HashMap<(usize, usize), (Sign, usize)>;

fn point_map(d: &Diagram, emb: &Embedding, cols: usize, rows: usize) -> Result<PointMap, NotAnElementaryMove> {
    let mut map = PointMap::new();
    for v in d.vertices() {
        let (c, r) = (emb.col_to_ref(v.col), emb.row_to_ref(v.row));
        if c >= cols || r >= rows {
            return Err(fail(0, "diagram does not fit the frame"));
        }
        map.insert((c, r), (v.sign, v.component));
    }
    Ok(map)
}

/// Checks the six defining conditions for `d1 -> d2` laid out on `frame`,
/// returning one move per directed rectangle that satisfies them.
pub fn classify_aligned(
    d1: &Diagram,
    d2: &Diagram,
    frame: &Frame,
) -> Result<Vec<Move>, NotAnElementaryMove> {
    let (cols, rows) = (frame.cols, frame.rows);
    let p1 = point_map(d1, &frame.source, cols, rows)?;
    let p2 = point_map(d2, &frame.target, cols, rows)?;

    // (4) neither diagram is a subset of the other.
    if p1.keys().all(|k| p2.contains_key(k)) || p2.keys().all(|k| p1.contains_key(k)) {
        return Err(fail(4, "one diagram is contained in the other"));
    }
    if d1 == d2 {
        return Err(fail(4, "the diagrams coincide"));
    }

    // (1), (2): the symmetric difference is the corner set of a rectangle.
    let mut diff: Vec<(usize, usize)> = p1
        .keys()
        .filter(|k| !p2.contains_key(k))
        .chain(p2.keys().filter(|k| !p1.contains_key(k)))
        .copied()
        .collect();
    diff.sort_unstable();
    let mut dcols: Vec<usize> = diff.iter().map(|p| p.0).collect();
    let mut drows: Vec<usize> = diff.iter().map(|p| p.1).collect();
    dcols.dedup();
    drows.sort_unstable();
    drows.dedup();
    if diff.len() != 4 || dcols.len() != 2 || drows.len() != 2 {
        return Err(fail(2, format!("symmetric difference has {} points", diff.len())));
    }
    let (ca, cb, ra, rb) = (dcols[0], dcols[1], drows[0], drows[1]);
    if ca == cb || ra == rb {
        return Err(fail(1, "degenerate rectangle"));
    }

    // (3) the symmetric difference contains an edge of one of the diagrams.
    let has_edge = |p: &PointMap| {
        let inside: Vec<_> = diff.iter().filter(|k| p.contains_key(k)).collect();
        inside
            .iter()
            .enumerate()
            .any(|(i, a)| inside[i + 1..].iter().any(|b| a.0 == b.0 || a.1 == b.1))
    };
    if !has_edge(&p1) && !has_edge(&p2) {
        return Err(fail(3, "no edge inside the symmetric difference"));
    }

    // (6) shared vertices keep sign and component.
    for (k, a) in &p1 {
        if let Some(b) = p2.get(k) {
            if a != b {
                return Err(fail(6, format!("vertex {k:?} changes sign or component")));
            }
        }
    }

    let kind = match (p1.len(), p2.len()) {
        (a, b) if a == b => MoveKind::Exchange,
        (a, b) if b == a + 2 => MoveKind::Stabilization,
        (a, b) if a == b + 2 => MoveKind::Destabilization,
        _ => return Err(fail(2, "sizes differ by more than one vertex pair")),
    };
    let to_vertex = |k: &(usize, usize), v: &(Sign, usize)| Vertex {
        col: k.0,
        row: k.1,
        sign: v.0,
        component: v.1,
    };
    let mut removed: Vec<Vertex> = diff.iter().filter_map(|k| p1.get(k).map(|v| to_vertex(k, v))).collect();
    let mut added: Vec<Vertex> = diff.iter().filter_map(|k| p2.get(k).map(|v| to_vertex(k, v))).collect();
    removed.sort();
    added.sort();
    let all: Vec<Vertex> = p1
        .iter()
        .chain(p2.iter())
        .map(|(k, v)| to_vertex(k, v))
        .collect();

    let mut moves = Vec::new();
    for &(c1, c2) in &[(ca, cb), (cb, ca)] {
        for &(r1, r2) in &[(ra, rb), (rb, ra)] {
            let rect = Rect { c1, c2, r1, r2 };
            // (5) the closed rectangle meets R1 ∪ R2 only in its corners.
            if !only_corners_inside(&all, &rect, cols, rows) {
                continue;
            }
            let (stab_type, oriented_type) = match kind {
                MoveKind::Exchange => (None, None),
                _ => {
                    let (small, big) = if kind == MoveKind::Stabilization { (&p1, &p2) } else { (&p2, &p1) };
                    let main = [(c1, r1), (c2, r2)];
                    let anti = [(c1, r2), (c2, r1)];
                    let corners_in_small: Vec<_> = [(c1, r1), (c2, r2), (c1, r2), (c2, r1)]
                        .into_iter()
                        .filter(|k| small.contains_key(k))
                        .collect();
                    let t = if corners_in_small.iter().all(|k| main.contains(k)) {
                        StabType::I
                    } else if corners_in_small.iter().all(|k| anti.contains(k)) {
                        StabType::II
                    } else {
                        return Err(fail(2, "corner pattern fits neither type"));
                    };
                    let phi0 = [r1, r2]
                        .into_iter()
                        .find(|&r| big.contains_key(&(c1, r)) && big.contains_key(&(c2, r)))
                        .ok_or_else(|| fail(2, "no fully occupied row among the corners"))?;
                    let positive = big[&(c2, phi0)].0 == Sign::Plus;
                    (Some(t), Some(OrientedType::from_parts(t, positive)))
                }
            };
            moves.push(Move {
                kind,
                rect,
                removed: removed.clone(),
                added: added.clone(),
                stab_type,
                oriented_type,
                local: open_annuli_empty(&all, &rect, cols, rows),
                frame: *frame,
            });
        }
    }
    if moves.is_empty() {
        return Err(fail(5, "every directed rectangle contains other vertices"));
    }
    Ok(moves)
}

/// Every frame on which two diagrams of the given sizes could differ by one move.
fn candidate_frames(n1: usize, n2: usize) -> Vec<Frame> {
    let mut frames = Vec::new();
    if n1 == n2 {
        frames.push(Frame { cols: n1, rows: n1, source: Embedding::default(), target: Embedding::default() });
        for a in 0..=n1 {
            for b in 0..=n1 {
                if a == b {
                    continue;
                }
                let col = |m| Embedding { missing_col: Some(m), missing_row: None };
                let row = |m| Embedding { missing_col: None, missing_row: Some(m) };
                frames.push(Frame { cols: n1 + 1, rows: n1, source: col(a), target: col(b) });
                frames.push(Frame { cols: n1, rows: n1 + 1, source: row(a), target: row(b) });
            }
        }
    } else if n2 == n1 + 1 || n1 == n2 + 1 {
        let big = n1.max(n2);
        for c in 0..big {
            for r in 0..big {
                let e = Embedding { missing_col: Some(c), missing_row: Some(r) };
                let (source, target) = if n1 < n2 { (e, Embedding::default()) } else { (Embedding::default(), e) };
                frames.push(Frame { cols: big, rows: big, source, target });
            }
        }
    }
    frames
}

/// Classifies `d1 -> d2` over every alignment of the two grids and returns
/// the first elementary move found.
pub fn classify(d1: &Diagram, d2: &Diagram) -> Result<Move, NotAnElementaryMove> {
    let mut first_err = None;
    for frame in candidate_frames(d1.n(), d2.n()) {
        match classify_aligned(d1, d2, &frame) {
            Ok(mut ms) => return Ok(ms.remove(0)),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.unwrap_or_else(|| fail(2, "grid sizes differ by more than one")))
}

/// Rebuilds `R2` from a move's frame and vertex changes.
pub fn apply(d: &Diagram, m: &Move) -> Option<Diagram> {
    let points = lift_all(d, &m.frame.source);
    for r in &m.removed {
        if !points.contains(r) {
            return None;
        }
    }
    assemble(&replace(&points, &m.removed, &m.added), &m.frame.target)
}

/// Locality of a legal move: no vertex of either diagram in the open annuli
/// spanned by the rectangle.
pub fn is_local(d: &Diagram, m: &Move) -> bool {
    let points = lift_all(d, &m.frame.source);
    let all: Vec<Vertex> = points.iter().chain(m.added.iter()).copied().collect();
    open_annuli_empty(&all, &m.rect, m.frame.cols, m.frame.rows)
}

/// One-line move description used in certificates:
/// `kind orient c1 c2 r1 r2 local [ins c,r]`, 1-based, arcs directed.
///
/// The optional `ins` suffix names the refinement column and row missing from
/// the source diagram (`-` for none). Without it a stabilization or exchange
/// record can have several legal readings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub oriented_type: Option<OrientedType>,
    pub rect: Rect,
    pub local: bool,
    pub insertion: Option<Embedding>,
}

impl MoveRecord {
    pub fn category(&self) -> Option<MoveCategory> {
        match (self.kind, self.oriented_type) {
            (MoveKind::Exchange, None) => Some(MoveCategory::Exchange),
            (MoveKind::Stabilization, Some(t)) => Some(MoveCategory::Stab(t)),
            (MoveKind::Destabilization, Some(t)) => Some(MoveCategory::Destab(t)),
            _ => None,
        }
    }
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {} {}",
            self.kind.name(),
            self.oriented_type.map_or("-", |t| t.label()),
            self.rect.c1 + 1,
            self.rect.c2 + 1,
            self.rect.r1 + 1,
            self.rect.r2 + 1,
            if self.local { "local" } else { "nonlocal" }
        )?;
        if let Some(e) = self.insertion {
            let show = |x: Option<usize>| x.map_or("-".to_string(), |v| (v + 1).to_string());
            write!(f, " ins {},{}", show(e.missing_col), show(e.missing_row))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("malformed move record: {0}")]
    Malformed(String),
    #[error("record does not describe a legal move here: {0}")]
    Illegal(String),
    #[error("record is ambiguous: {0} distinct results")]
    Ambiguous(usize),
}

impl FromStr for MoveRecord {
    type Err = RecordError;

    fn from_str(s: &str) -> Result<MoveRecord, RecordError> {
        let bad = |m: &str| RecordError::Malformed(format!("{m} in {s:?}"));
        let t: Vec<&str> = s.split_whitespace().collect();
        if t.len() != 7 && !(t.len() == 9 && t[7] == "ins") {
            return Err(bad("expected 7 fields or 7 fields and `ins c,r`"));
        }
        let kind = match t[0] {
            "exchange" => MoveKind::Exchange,
            "stab" => MoveKind::Stabilization,
            "destab" => MoveKind::Destabilization,
            _ => return Err(bad("unknown kind")),
        };
        let oriented_type = match t[1] {
            "-" => None,
            o => Some(OrientedType::from_label(o).ok_or_else(|| bad("unknown oriented type"))?),
        };
        if (kind == MoveKind::Exchange) != oriented_type.is_none() {
            return Err(bad("oriented type does not match kind"));
        }
        let coord = |x: &str| match x.parse::<usize>() {
            Ok(v) if (1..=1024).contains(&v) => Ok(v - 1),
            _ => Err(bad("bad coordinate")),
        };
        let rect = Rect {
            c1: coord(t[2])?,
            c2: coord(t[3])?,
            r1: coord(t[4])?,
            r2: coord(t[5])?,
        };
        let local = match t[6] {
            "local" => true,
            "nonlocal" => false,
            _ => return Err(bad("expected local/nonlocal")),
        };
        let insertion = match t.get(8) {
            None => None,
            Some(ins) => {
                let (c, r) = ins.split_once(',').ok_or_else(|| bad("bad insertion"))?;
                let part = |x: &str| if x == "-" { Ok(None) } else { coord(x).map(Some) };
                let e = Embedding { missing_col: part(c)?, missing_row: part(r)? };
                if e == Embedding::default() || kind == MoveKind::Destabilization {
                    return Err(bad("insertion does not fit the kind"));
                }
                Some(e)
            }
        };
        Ok(MoveRecord { kind, oriented_type, rect, local, insertion })
    }
}

/// Reconstructs the move a record describes at `d` and checks it with
/// [`classify_aligned`]. The record omits the frame, so each consistent
/// frame is tried; all legal readings must agree on the result.
pub fn apply_record(d: &Diagram, rec: &MoveRecord) -> Result<(Move, Diagram), RecordError> {
    let n = d.n();
    let Rect { c1, c2, r1, r2 } = rec.rect;
    if c1 == c2 || r1 == r2 {
        return Err(RecordError::Illegal("degenerate rectangle".into()));
    }
    let mut candidates: Vec<(Frame, Diagram)> = Vec::new();
    let corners = [(c1, r1), (c1, r2), (c2, r1), (c2, r2)];
    match rec.kind {
        MoveKind::Destabilization => {
            if c1.max(c2) < n && r1.max(r2) < n {
                let vacant: Vec<_> = corners.iter().filter(|&&(c, r)| d.sign_at(c, r).is_none()).collect();
                if let [&(vc, vr)] = vacant[..] {
                    let (wc, wr) = (if vc == c1 { c2 } else { c1 }, if vr == r1 { r2 } else { r1 });
                    let t_sign = d.sign_at(vc, wr);
                    if let Some(s) = t_sign {
                        let comp = d.component_of()[vc];
                        let points = lift_all(d, &Embedding::default());
                        let removed: Vec<Vertex> = points
                            .iter()
                            .filter(|p| corners.contains(&(p.col, p.row)))
                            .copied()
                            .collect();
                        let added = [Vertex { col: vc, row: vr, sign: s, component: comp }];
                        let target = Embedding { missing_col: Some(wc), missing_row: Some(wr) };
                        let frame = Frame { cols: n, rows: n, source: Embedding::default(), target };
                        if let Some(r2d) = assemble(&replace(&points, &removed, &added), &target) {
                            candidates.push((frame, r2d));
                        }
                    }
                }
            }
        }
        MoveKind::Stabilization => {
            let size = n + 1;
            if c1.max(c2) < size && r1.max(r2) < size {
                for &(nc, oc) in &[(c1, c2), (c2, c1)] {
                    for &(nr, or) in &[(r1, r2), (r2, r1)] {
                        let src = Embedding { missing_col: Some(nc), missing_row: Some(nr) };
                        let (Some(c), Some(r)) = (src.col_from_ref(oc), src.row_from_ref(or)) else {
                            continue;
                        };
                        if c >= n || r >= n {
                            continue;
                        }
                        let Some(s) = d.sign_at(c, r) else { continue };
                        let comp = d.component_of()[c];
                        let at = |col, row, sign| Vertex { col, row, sign, component: comp };
                        let points = lift_all(d, &src);
                        let removed = [at(oc, or, s)];
                        let added = [at(oc, nr, s), at(nc, or, s), at(nc, nr, s.opposite())];
                        let frame = Frame { cols: size, rows: size, source: src, target: Embedding::default() };
                        if let Some(r2d) = assemble(&replace(&points, &removed, &added), &frame.target) {
                            candidates.push((frame, r2d));
                        }
                    }
                }
            }
        }
        MoveKind::Exchange => {
            for vertical in [true, false] {
                let (a, b) = if vertical { (c1, c2) } else { (r1, r2) };
                let (cols, rows) = if vertical { (n + 1, n) } else { (n, n + 1) };
                if c1.max(c2) >= cols || r1.max(r2) >= rows {
                    continue;
                }
                for &(new, old) in &[(a, b), (b, a)] {
                    let src = if vertical {
                        Embedding { missing_col: Some(new), missing_row: None }
                    } else {
                        Embedding { missing_col: None, missing_row: Some(new) }
                    };
                    let target = if vertical {
                        Embedding { missing_col: Some(old), missing_row: None }
                    } else {
                        Embedding { missing_col: None, missing_row: Some(old) }
                    };
                    let points = lift_all(d, &src);
                    let removed: Vec<Vertex> = points
                        .iter()
                        .filter(|p| if vertical { p.col == old } else { p.row == old })
                        .copied()
                        .collect();
                    let added: Vec<Vertex> = removed
                        .iter()
                        .map(|p| if vertical { Vertex { col: new, ..*p } } else { Vertex { row: new, ..*p } })
                        .collect();
                    if removed.len() != 2 {
                        continue;
                    }
                    let frame = Frame { cols, rows, source: src, target };
                    if let Some(r2d) = assemble(&replace(&points, &removed, &added), &target) {
                        candidates.push((frame, r2d));
                    }
                }
            }
        }
    }

    if let Some(e) = rec.insertion {
        candidates.retain(|(f, _)| f.source == e);
    }
    let mut found: Vec<(Move, Diagram)> = Vec::new();
    for (frame, r2d) in candidates {
        if let Ok(ms) = classify_aligned(d, &r2d, &frame) {
            if let Some(m) = ms.into_iter().find(|m| m.record() == *rec) {
                found.push((m, r2d));
            }
        }
    }
    match found.len() {
        0 => Err(RecordError::Illegal(rec.to_string())),
        1 => Ok(found.remove(0)),
        _ => {
            let mut keys: Vec<_> = found.iter().map(|(_, r)| r.canonical_key()).collect();
            keys.sort();
            keys.dedup();
            if keys.len() == 1 {
                Ok(found.remove(0))
            } else {
                Err(RecordError::Ambiguous(keys.len()))
            }
        }
    }
}

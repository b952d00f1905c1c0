//! Classical invariants read off a diagram.
//!
//! The planar projection puts vertical edges over horizontal ones. Rotating
//! it 45° counterclockwise gives a front for the `+` Legendrian link, with
//! cusps at the `┌` and `┘` corners; rotating clockwise and mirroring gives
//! the `-` link, with cusps at `└` and `┐`.
//!
//! Rotation signs are normalized so that a `<II` stabilization raises
//! `rot₊` by one and a `<I` stabilization raises `rot₋` by one.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::grid::{Diagram, Sign};
use crate::moves::{ContactSign, Move, MoveKind, OrientedType, Quadrant, StabType};

/// Corner shape at a vertex, named by where the vertex sits on the curve:
/// `ne` is `┐`, `nw` is `┌`, `se` is `┘`, `sw` is `└`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CornerCounts {
    pub ne: usize,
    pub nw: usize,
    pub se: usize,
    pub sw: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Corner {
    Ne,
    Nw,
    Se,
    Sw,
}

/// `sl` of the four transverse pushoffs, indexed by [`Quadrant`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SelfLinking {
    #[serde(rename = "++")]
    pub pp: i64,
    #[serde(rename = "+-")]
    pub pm: i64,
    #[serde(rename = "-+")]
    pub mp: i64,
    #[serde(rename = "--")]
    pub mm: i64,
}

impl SelfLinking {
    pub fn get(&self, q: Quadrant) -> i64 {
        match q {
            Quadrant::PlusPlus => self.pp,
            Quadrant::PlusMinus => self.pm,
            Quadrant::MinusPlus => self.mp,
            Quadrant::MinusMinus => self.mm,
        }
    }

    fn get_mut(&mut self, q: Quadrant) -> &mut i64 {
        match q {
            Quadrant::PlusPlus => &mut self.pp,
            Quadrant::PlusMinus => &mut self.pm,
            Quadrant::MinusPlus => &mut self.mp,
            Quadrant::MinusMinus => &mut self.mm,
        }
    }

    fn from_tb_rot(tb_plus: i64, rot_plus: i64, tb_minus: i64, rot_minus: i64) -> SelfLinking {
        SelfLinking {
            pp: tb_plus - rot_plus,
            pm: tb_plus + rot_plus,
            mp: tb_minus - rot_minus,
            mm: tb_minus + rot_minus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalInvariants {
    pub writhe: i64,
    pub corner_counts: CornerCounts,
    pub tb_plus: i64,
    pub tb_minus: i64,
    pub tb_plus_components: Vec<i64>,
    pub tb_minus_components: Vec<i64>,
    pub rot_plus: Vec<i64>,
    pub rot_minus: Vec<i64>,
    pub sl: SelfLinking,
    #[serde(serialize_with = "big_as_number", deserialize_with = "big_from_number")]
    pub determinant: BigUint,
}

fn big_as_number<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn big_from_number<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Num {
        Small(u64),
        Big(String),
    }
    match Num::deserialize(d)? {
        Num::Small(x) => Ok(BigUint::from(x)),
        Num::Big(s) => s.parse().map_err(serde::de::Error::custom),
    }
}

impl ClassicalInvariants {
    pub fn tb(&self, sign: ContactSign) -> i64 {
        match sign {
            ContactSign::Plus => self.tb_plus,
            ContactSign::Minus => self.tb_minus,
        }
    }

    pub fn tb_components(&self, sign: ContactSign) -> &[i64] {
        match sign {
            ContactSign::Plus => &self.tb_plus_components,
            ContactSign::Minus => &self.tb_minus_components,
        }
    }

    pub fn rot(&self, sign: ContactSign) -> &[i64] {
        match sign {
            ContactSign::Plus => &self.rot_plus,
            ContactSign::Minus => &self.rot_minus,
        }
    }

    pub fn num_components(&self) -> usize {
        self.rot_plus.len()
    }

    /// Sorted per-component `(tb, rot)` pairs, for comparing links whose
    /// component numbering is not fixed.
    pub fn tb_rot_multiset(&self, sign: ContactSign) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = self
            .tb_components(sign)
            .iter()
            .copied()
            .zip(self.rot(sign).iter().copied())
            .collect();
        v.sort_unstable();
        v
    }

    /// Change from `self` to `after`, if it lies on component `k` alone.
    pub fn delta_to(&self, after: &ClassicalInvariants, k: usize) -> Option<InvariantDelta> {
        let n = self.num_components();
        if after.num_components() != n || k >= n {
            return None;
        }
        for j in (0..n).filter(|&j| j != k) {
            if self.tb_plus_components[j] != after.tb_plus_components[j]
                || self.tb_minus_components[j] != after.tb_minus_components[j]
                || self.rot_plus[j] != after.rot_plus[j]
                || self.rot_minus[j] != after.rot_minus[j]
            {
                return None;
            }
        }
        let d = InvariantDelta {
            component: k,
            tb_plus: after.tb_plus_components[k] - self.tb_plus_components[k],
            tb_minus: after.tb_minus_components[k] - self.tb_minus_components[k],
            rot_plus: after.rot_plus[k] - self.rot_plus[k],
            rot_minus: after.rot_minus[k] - self.rot_minus[k],
            sl: SelfLinking {
                pp: after.sl.pp - self.sl.pp,
                pm: after.sl.pm - self.sl.pm,
                mp: after.sl.mp - self.sl.mp,
                mm: after.sl.mm - self.sl.mm,
            },
        };
        // Total tb moves with the component's own tb since linking is invariant.
        if after.tb_plus - self.tb_plus != d.tb_plus || after.tb_minus - self.tb_minus != d.tb_minus {
            return None;
        }
        Some(d)
    }
}

/// Predicted change of the Legendrian and transverse invariants under a move.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantDelta {
    pub component: usize,
    pub tb_plus: i64,
    pub tb_minus: i64,
    pub rot_plus: i64,
    pub rot_minus: i64,
    pub sl: SelfLinking,
}

pub fn invariant_delta(m: &Move) -> InvariantDelta {
    let mut d = InvariantDelta {
        component: m.component(),
        ..Default::default()
    };
    let Some(t) = m.oriented_type else { return d };
    let up = matches!(t, OrientedType::LeftI | OrientedType::LeftII);
    let rot = if up { 1 } else { -1 };
    match t.stab_type() {
        StabType::I => {
            d.tb_minus = -1;
            d.rot_minus = rot;
        }
        StabType::II => {
            d.tb_plus = -1;
            d.rot_plus = rot;
        }
    }
    d.sl = SelfLinking::from_tb_rot(d.tb_plus, d.rot_plus, d.tb_minus, d.rot_minus);
    if m.kind == MoveKind::Destabilization {
        d.tb_plus = -d.tb_plus;
        d.tb_minus = -d.tb_minus;
        d.rot_plus = -d.rot_plus;
        d.rot_minus = -d.rot_minus;
        for q in Quadrant::ALL {
            *d.sl.get_mut(q) = -d.sl.get(q);
        }
    }
    d
}

fn corner(d: &Diagram, col: usize, row: usize, sign: Sign) -> Corner {
    let (up, right) = match sign {
        Sign::Plus => (d.minus_row()[col] > row, d.minus_col()[row] > col),
        Sign::Minus => (d.plus_row()[col] > row, d.plus_col()[row] > col),
    };
    match (up, right) {
        (true, true) => Corner::Sw,
        (true, false) => Corner::Se,
        (false, true) => Corner::Nw,
        (false, false) => Corner::Ne,
    }
}

/// Signed crossings: `(self-writhe per component, linking matrix doubled)`.
fn crossing_signs(d: &Diagram) -> (Vec<i64>, i64) {
    let n = d.n();
    let mut selfw = vec![0i64; d.num_components()];
    let mut mixed = 0i64;
    for c in 0..n {
        let (p, m) = (d.plus_row()[c], d.minus_row()[c]);
        let (lo, hi) = (p.min(m), p.max(m));
        let su: i64 = if p < m { 1 } else { -1 };
        for r in lo + 1..hi {
            let (a, b) = (d.minus_col()[r], d.plus_col()[r]);
            if a.min(b) < c && c < a.max(b) {
                let sv: i64 = if a < b { 1 } else { -1 };
                let sign = -su * sv;
                let (kc, kr) = (d.component_of()[c], d.component_of_row(r));
                if kc == kr {
                    selfw[kc] += sign;
                } else {
                    mixed += sign;
                }
            }
        }
    }
    (selfw, mixed)
}

pub fn writhe(d: &Diagram) -> i64 {
    let (s, m) = crossing_signs(d);
    s.iter().sum::<i64>() + m
}

pub fn corner_counts(d: &Diagram) -> CornerCounts {
    let mut cc = CornerCounts::default();
    for v in d.vertices() {
        match corner(d, v.col, v.row, v.sign) {
            Corner::Ne => cc.ne += 1,
            Corner::Nw => cc.nw += 1,
            Corner::Se => cc.se += 1,
            Corner::Sw => cc.sw += 1,
        }
    }
    cc
}

/// The tb and rot part of [`ClassicalInvariants`], without the determinant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LegendrianInvariants {
    pub tb_plus: i64,
    pub tb_minus: i64,
    pub tb_plus_components: Vec<i64>,
    pub tb_minus_components: Vec<i64>,
    pub rot_plus: Vec<i64>,
    pub rot_minus: Vec<i64>,
}

impl LegendrianInvariants {
    pub fn tb_components(&self, sign: ContactSign) -> &[i64] {
        match sign {
            ContactSign::Plus => &self.tb_plus_components,
            ContactSign::Minus => &self.tb_minus_components,
        }
    }

    pub fn rot(&self, sign: ContactSign) -> &[i64] {
        match sign {
            ContactSign::Plus => &self.rot_plus,
            ContactSign::Minus => &self.rot_minus,
        }
    }

    pub fn sl(&self) -> SelfLinking {
        SelfLinking::from_tb_rot(
            self.tb_plus,
            self.rot_plus.iter().sum(),
            self.tb_minus,
            self.rot_minus.iter().sum(),
        )
    }
}

pub fn legendrian_invariants(d: &Diagram) -> LegendrianInvariants {
    legendrian_with_writhe(d).0
}

fn legendrian_with_writhe(d: &Diagram) -> (LegendrianInvariants, i64) {
    let k = d.num_components();
    let (selfw, mixed) = crossing_signs(d);
    // Cusp counts and (down - up) cusp balance per component, per front.
    let mut cusps_p = vec![0i64; k];
    let mut cusps_m = vec![0i64; k];
    let mut bal_p = vec![0i64; k];
    let mut bal_m = vec![0i64; k];
    for v in d.vertices() {
        let c = v.component;
        let plus = v.sign == Sign::Plus;
        match corner(d, v.col, v.row, v.sign) {
            Corner::Nw => {
                cusps_p[c] += 1;
                bal_p[c] += if plus { 1 } else { -1 };
            }
            Corner::Se => {
                cusps_p[c] += 1;
                bal_p[c] += if plus { -1 } else { 1 };
            }
            Corner::Sw => {
                cusps_m[c] += 1;
                bal_m[c] += if plus { -1 } else { 1 };
            }
            Corner::Ne => {
                cusps_m[c] += 1;
                bal_m[c] += if plus { 1 } else { -1 };
            }
        }
    }
    let tb_plus_components: Vec<i64> = (0..k).map(|c| selfw[c] - cusps_p[c] / 2).collect();
    let tb_minus_components: Vec<i64> = (0..k).map(|c| -selfw[c] - cusps_m[c] / 2).collect();
    let inv = LegendrianInvariants {
        tb_plus: tb_plus_components.iter().sum::<i64>() + mixed,
        tb_minus: tb_minus_components.iter().sum::<i64>() - mixed,
        tb_plus_components,
        tb_minus_components,
        rot_plus: bal_p.iter().map(|b| ROT_PLUS_SIGN * b / 2).collect(),
        rot_minus: bal_m.iter().map(|b| ROT_MINUS_SIGN * b / 2).collect(),
    };
    (inv, selfw.iter().sum::<i64>() + mixed)
}

pub fn classical_invariants(d: &Diagram) -> ClassicalInvariants {
    let (leg, writhe) = legendrian_with_writhe(d);
    ClassicalInvariants {
        writhe,
        corner_counts: corner_counts(d),
        sl: leg.sl(),
        tb_plus: leg.tb_plus,
        tb_minus: leg.tb_minus,
        tb_plus_components: leg.tb_plus_components,
        tb_minus_components: leg.tb_minus_components,
        rot_plus: leg.rot_plus,
        rot_minus: leg.rot_minus,
        determinant: determinant(d),
    }
}

// Calibrated against the stabilization deltas; see the tests.
const ROT_PLUS_SIGN: i64 = 1;
const ROT_MINUS_SIGN: i64 = -1;

/// `|Δ(-1)|` of the underlying link, from the Goeritz matrix of the
/// checkerboard-coloured planar diagram.
pub fn determinant(d: &Diagram) -> BigUint {
    let n = d.n();
    let side = n + 1;
    let idx = |i: usize, j: usize| i * side + j;
    // Span of each column's vertical segment and each row's horizontal one.
    let col_span: Vec<(usize, usize)> = (0..n)
        .map(|c| {
            let (p, m) = (d.plus_row()[c], d.minus_row()[c]);
            (p.min(m), p.max(m))
        })
        .collect();
    let row_span: Vec<(usize, usize)> = (0..n)
        .map(|r| {
            let (p, m) = (d.plus_col()[r], d.minus_col()[r]);
            (p.min(m), p.max(m))
        })
        .collect();
    // Cell (i, j) lies left of column line i and below row line j.
    let blocked_right = |i: usize, j: usize| {
        let (lo, hi) = col_span[i];
        lo < j && j <= hi
    };
    let blocked_up = |i: usize, j: usize| {
        let (lo, hi) = row_span[j];
        lo < i && i <= hi
    };

    let mut region = vec![usize::MAX; side * side];
    let mut colour = vec![0u8; side * side];
    let mut region_colour: Vec<u8> = Vec::new();
    let mut seeds = VecDeque::from([(0usize, 0usize, 0u8)]);
    while let Some((si, sj, sc)) = seeds.pop_front() {
        if region[idx(si, sj)] != usize::MAX {
            continue;
        }
        let id = region_colour.len();
        region_colour.push(sc);
        let mut queue = VecDeque::from([(si, sj)]);
        region[idx(si, sj)] = id;
        colour[idx(si, sj)] = sc;
        while let Some((i, j)) = queue.pop_front() {
            let mut step = |a: usize, b: usize, wall: bool, queue: &mut VecDeque<(usize, usize)>| {
                if wall {
                    if region[idx(a, b)] == usize::MAX {
                        seeds.push_back((a, b, 1 - sc));
                    }
                } else if region[idx(a, b)] == usize::MAX {
                    region[idx(a, b)] = id;
                    colour[idx(a, b)] = sc;
                    queue.push_back((a, b));
                }
            };
            if i + 1 < side {
                step(i + 1, j, i < n && blocked_right(i, j), &mut queue);
            }
            if i > 0 {
                step(i - 1, j, blocked_right(i - 1, j), &mut queue);
            }
            if j + 1 < side {
                step(i, j + 1, j < n && blocked_up(i, j), &mut queue);
            }
            if j > 0 {
                step(i, j - 1, blocked_up(i, j - 1), &mut queue);
            }
        }
    }

    if !projection_connected(d, &col_span, &row_span) {
        // A disconnected projection is a split link.
        return BigUint::zero();
    }
    // Shade the colour class the unbounded region does not belong to.
    let shaded: Vec<usize> = (0..region_colour.len()).filter(|&r| region_colour[r] == 1).collect();
    if shaded.len() <= 1 {
        return BigUint::from(1u8);
    }
    let pos = |r: usize| shaded.iter().position(|&s| s == r);
    let m = shaded.len();
    let mut g = vec![vec![0i64; m]; m];
    for c in 0..n {
        let (lo, hi) = col_span[c];
        for r in lo + 1..hi {
            let (a, b) = row_span[r];
            if !(a < c && c < b) {
                continue;
            }
            let sw = idx(c, r);
            let ne = idx(c + 1, r + 1);
            let nw = idx(c, r + 1);
            let se = idx(c + 1, r);
            let (x, y, eta) = if colour[sw] == 1 {
                (region[sw], region[ne], 1)
            } else {
                (region[nw], region[se], -1)
            };
            if x == y {
                continue;
            }
            let (px, py) = (pos(x).expect("shaded"), pos(y).expect("shaded"));
            g[px][py] -= eta;
            g[py][px] -= eta;
            g[px][px] += eta;
            g[py][py] += eta;
        }
    }
    let minor: Vec<Vec<i64>> = g[1..].iter().map(|row| row[1..].to_vec()).collect();
    bareiss(&minor).abs().to_biguint().expect("absolute value")
}

fn projection_connected(d: &Diagram, col_span: &[(usize, usize)], row_span: &[(usize, usize)]) -> bool {
    let k = d.num_components();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (c, &(lo, hi)) in col_span.iter().enumerate() {
        for r in lo + 1..hi {
            let (a, b) = row_span[r];
            if a < c && c < b {
                let (x, y) = (find(&mut parent, d.component_of()[c]), find(&mut parent, d.component_of_row(r)));
                parent[x] = y;
            }
        }
    }
    let root = find(&mut parent, 0);
    (1..k).all(|j| find(&mut parent, j) == root)
}

/// Fraction-free Gaussian elimination; `i128` with a `BigInt` fallback.
fn bareiss(a: &[Vec<i64>]) -> BigInt {
    if let Some(v) = bareiss_i128(a) {
        return BigInt::from(v);
    }
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    &m[n - 1][n - 1] * sign
}

fn bareiss_i128(a: &[Vec<i64>]) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j]
                    .checked_mul(m[k][k])?
                    .checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

type Poly = Vec<BigInt>;

fn poly_trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(out)
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    poly_trim(out)
}

/// `a / b` when `b` divides `a` exactly over the integers.
fn poly_div_exact(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() {
        return vec![];
    }
    let mut rem = a.clone();
    let db = b.len() - 1;
    let lead = b.last().expect("nonzero divisor");
    let mut q = vec![BigInt::zero(); a.len().saturating_sub(db).max(1)];
    while rem.len() > db {
        let k = rem.len() - 1 - db;
        let c = rem.last().expect("non-empty") / lead;
        for (i, y) in b.iter().enumerate() {
            rem[i + k] -= &c * y;
        }
        q[k] = c;
        rem = poly_trim(rem);
    }
    debug_assert!(rem.is_empty(), "inexact polynomial division");
    poly_trim(q)
}

fn poly_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    let mut prev: Poly = vec![BigInt::from(1)];
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_empty()) else {
            return vec![];
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = poly_sub(&poly_mul(&m[k][k], &m[i][j]), &poly_mul(&m[i][k], &m[k][j]));
                m[i][j] = poly_div_exact(&t, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    let mut d = prev;
    if negate {
        d.iter_mut().for_each(|c| *c = -&*c);
    }
    d
}

/// Single-variable Alexander polynomial, coefficients from the lowest
/// degree, normalised to a nonzero constant term and a positive leading
/// coefficient. Empty when it vanishes.
///
/// Computed from the grid matrix `t^{-w}` of winding numbers at lattice
/// points, whose determinant is `±t^a (1 - t)^{n-1} Δ(t)`.
pub fn alexander_polynomial(d: &Diagram) -> Vec<BigInt> {
    let n = d.n();
    let mut m = vec![vec![vec![]; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut w = 0i64;
            for c in i..n {
                let (p, q) = (d.plus_row()[c], d.minus_row()[c]);
                if p < j && j <= q {
                    w += 1;
                } else if q < j && j <= p {
                    w -= 1;
                }
            }
            let e = (n as i64 - w) as usize;
            let mut mono = vec![BigInt::zero(); e + 1];
            mono[e] = BigInt::from(1);
            *cell = mono;
        }
    }
    let mut p = poly_det(m);
    let one_minus_t: Poly = vec![BigInt::from(1), BigInt::from(-1)];
    for _ in 1..n {
        p = poly_div_exact(&p, &one_minus_t);
    }
    let lo = p.iter().position(|c| !c.is_zero()).unwrap_or(p.len());
    let mut p = p.split_off(lo);
    if p.last().is_some_and(|c| c.is_negative()) {
        p.iter_mut().for_each(|c| *c = -&*c);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{enumerate_moves, MoveFilter};

    fn trefoil() -> Diagram {
        Diagram::new(vec![2, 3, 4, 0, 1], vec![0, 1, 2, 3, 4]).unwrap()
    }

    #[test]
    fn unknot_values() {
        let inv = classical_invariants(&Diagram::unknot());
        assert_eq!(inv.writhe, 0);
        assert_eq!((inv.tb_plus, inv.rot_plus[0]), (-1, 0));
        assert_eq!((inv.tb_minus, inv.rot_minus[0]), (-1, 0));
        assert_eq!(inv.determinant, BigUint::from(1u8));
    }

    #[test]
    fn alexander_of_small_knots() {
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(alexander_polynomial(&Diagram::unknot()), big(&[1]));
        assert_eq!(alexander_polynomial(&trefoil()), big(&[1, -1, 1]));
        assert_eq!(alexander_polynomial(&trefoil().reflect_theta()), big(&[1, -1, 1]));
        let fig8 = Diagram::new(vec![0, 1, 3, 2, 5, 4], vec![2, 5, 0, 4, 3, 1]).unwrap();
        assert_eq!(alexander_polynomial(&fig8), big(&[1, -3, 1]));
    }

    #[test]
    fn trefoil_determinant() {
        assert_eq!(determinant(&trefoil()), BigUint::from(3u8));
    }

    #[test]
    fn tb_sum_is_minus_grid_size() {
        let inv = classical_invariants(&trefoil());
        assert_eq!(inv.tb_plus + inv.tb_minus, -5);
    }

    #[test]
    fn stabilization_deltas_on_the_unknot() {
        let d = Diagram::unknot();
        let before = classical_invariants(&d);
        for (m, r) in enumerate_moves(&d, &MoveFilter::all()) {
            let after = classical_invariants(&r);
            assert_eq!(before.delta_to(&after, 0), Some(invariant_delta(&m)), "{m:?}");
        }
    }

    #[test]
    fn bareiss_matches_small_determinants() {
        assert_eq!(bareiss(&[vec![2, 1], vec![1, 2]]), BigInt::from(3));
        assert_eq!(bareiss(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(bareiss(&[]), BigInt::from(1));
    }
}

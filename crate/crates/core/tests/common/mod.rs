#![allow(dead_code, clippy::needless_range_loop)]

use gridcal::Diagram;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn trefoil() -> Diagram {
    Diagram::new(vec![2, 3, 4, 0, 1], vec![0, 1, 2, 3, 4]).unwrap()
}

pub fn random_diagram<R: Rng>(rng: &mut R, n: usize) -> Diagram {
    let mut plus: Vec<usize> = (0..n).collect();
    plus.shuffle(rng);
    loop {
        let mut minus: Vec<usize> = (0..n).collect();
        minus.shuffle(rng);
        if (0..n).all(|c| plus[c] != minus[c]) {
            return Diagram::new(plus, minus).unwrap();
        }
    }
}

pub fn diagram_strategy(lo: usize, hi: usize) -> impl Strategy<Value = Diagram> {
    (lo..=hi, any::<u64>()).prop_map(|(n, seed)| random_diagram(&mut ChaCha8Rng::seed_from_u64(seed), n))
}

/// Random knot diagram of size `n`, by rejection.
pub fn random_knot<R: Rng>(rng: &mut R, n: usize) -> Diagram {
    loop {
        let d = random_diagram(rng, n);
        if d.num_components() == 1 {
            return d;
        }
    }
}

/// `|det M(-1)|` where `M_ij = (-1)^w(i,j)` and `w` is the winding number of
/// the planar curve around lattice point `(i, j)`. Equals `2^(n-1) |Δ(-1)|`.
pub fn grid_matrix_determinant(d: &Diagram) -> u128 {
    let n = d.n();
    let mut m = vec![vec![0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut w = 0i64;
            for c in i..n {
                let (p, q) = (d.plus_row()[c], d.minus_row()[c]);
                if p.min(q) < j && j <= p.max(q) {
                    w += 1;
                }
            }
            m[i][j] = if w % 2 == 0 { 1.0 } else { -1.0 };
        }
    }
    let mut det = 1f64;
    for k in 0..n {
        let piv = (k..n).max_by(|&a, &b| m[a][k].abs().total_cmp(&m[b][k].abs())).unwrap();
        if m[piv][k].abs() < 1e-9 {
            return 0;
        }
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    det.abs().round() as u128
}

/// Legendrian front oracle: rotates the planar curve by 45° and reads
/// `tb = writhe - cusps/2`, `rot = (down cusps - up cusps)/2` from the
/// polyline itself. `ccw` selects the `+` front; the `-` front is the
/// clockwise rotation viewed from behind, which negates crossing signs.
pub fn front_tb_rot(d: &Diagram, ccw: bool) -> (i64, Vec<i64>) {
    let n = d.n();
    let mut rot = vec![0i64; d.num_components()];
    let mut cusps = 0i64;
    // Walk each component: + vertex -> vertical -> - vertex -> horizontal -> next + vertex.
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let k = d.component_of()[start];
        let mut pts: Vec<(i64, i64)> = Vec::new();
        let mut c = start;
        while !seen[c] {
            seen[c] = true;
            pts.push((c as i64, d.plus_row()[c] as i64));
            let r = d.minus_row()[c];
            pts.push((c as i64, r as i64));
            c = d.plus_col()[r];
        }
        let proj = |p: (i64, i64)| if ccw { (p.0 - p.1, p.0 + p.1) } else { (p.0 + p.1, p.1 - p.0) };
        let m = pts.len();
        for i in 0..m {
            let a = proj(pts[(i + m - 1) % m]);
            let b = proj(pts[i]);
            let e = proj(pts[(i + 1) % m]);
            let (dx1, dx2) = (b.0 - a.0, e.0 - b.0);
            if dx1.signum() != dx2.signum() {
                cusps += 1;
                // Both edges at a cusp share their z direction.
                if e.1 < b.1 {
                    rot[k] += 1;
                } else {
                    rot[k] -= 1;
                }
            }
        }
    }
    let w: i64 = planar_writhe(d);
    let tb = if ccw { w } else { -w } - cusps / 2;
    (tb, rot.into_iter().map(|r| r / 2).collect())
}

/// Crossing count straight from segment geometry.
pub fn planar_writhe(d: &Diagram) -> i64 {
    let n = d.n();
    let mut w = 0;
    for c in 0..n {
        let (y0, y1) = (d.plus_row()[c] as i64, d.minus_row()[c] as i64);
        for r in 0..n {
            let (x0, x1) = (d.minus_col()[r] as i64, d.plus_col()[r] as i64);
            let (cx, ry) = (c as i64, r as i64);
            if y0.min(y1) < ry && ry < y0.max(y1) && x0.min(x1) < cx && cx < x0.max(x1) {
                let over = (0, (y1 - y0).signum());
                let under = ((x1 - x0).signum(), 0);
                w += over.0 * under.1 - over.1 * under.0;
            }
        }
    }
    w
}

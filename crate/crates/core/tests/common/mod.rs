//! Independent reference computations for the integration tests. None of
//! these call into the engine's DP, tails, or polytope code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn q_to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

/// Step law over integer steps.
pub type Law = Vec<(i64, Q)>;

/// The two laws saturating the Ch constraint.
pub fn ch_saturating() -> Vec<Law> {
    vec![vec![(1, q(1, 2)), (-1, q(1, 2))], vec![(1, q(2, 3)), (-2, q(1, 3))]]
}

/// Every law a deterministic local strategy induces on Ch steps with
/// equiprobable settings, worked out by hand from the strategy table.
pub fn ch_all_vertex_laws() -> Vec<Law> {
    vec![
        vec![(1, q(2, 3)), (-2, q(1, 3))],
        vec![(1, q(1, 3)), (-1, q(1, 3)), (-2, q(1, 3))],
        vec![(1, q(1, 2)), (-1, q(1, 2))],
        vec![(-1, q(1, 1))],
        vec![(-2, q(1, 1))],
    ]
}

/// Exhaustive game tree: at every node the adversary sees the whole path so
/// far and picks any law. No memoization, no pruning.
pub fn game_tree_value(laws: &[Law], target: i64, remaining: u32, position: i64) -> Q {
    if remaining == 0 {
        return if position >= target { Q::one() } else { Q::zero() };
    }
    let mut best: Option<Q> = None;
    for law in laws {
        let mut v = Q::zero();
        for (s, p) in law {
            v += p * game_tree_value(laws, target, remaining - 1, position + s);
        }
        if best.as_ref().is_none_or(|b| &v > b) {
            best = Some(v);
        }
    }
    best.unwrap()
}

/// `P(X ≥ k)` for `X ~ Binomial(n, 1/2)`, exactly.
pub fn binomial_half_tail(k: i64, n: u32) -> Q {
    if k <= 0 {
        return Q::one();
    }
    let mut c = BigInt::one();
    let mut total = BigInt::zero();
    for i in 0..=n as i64 {
        if i >= k {
            total += &c;
        }
        c = c * BigInt::from(n as i64 - i) / BigInt::from(i + 1);
    }
    Q::new(total, BigInt::one() << n)
}

/// `P(S ≥ target)` for an i.i.d. walk with law `law` after `n` steps, exactly.
pub fn iid_tail_exact(law: &Law, target: i64, n: u32) -> Q {
    let mut dist: std::collections::BTreeMap<i64, Q> = [(0, Q::one())].into();
    for _ in 0..n {
        let mut next = std::collections::BTreeMap::new();
        for (x, p) in &dist {
            for (s, w) in law {
                *next.entry(x + s).or_insert_with(Q::zero) += p * w;
            }
        }
        dist = next;
    }
    dist.iter().filter(|(x, _)| **x >= target).fold(Q::zero(), |a, (_, p)| a + p)
}

pub fn mix_laws(a: &Law, b: &Law, w: &Q) -> Law {
    let mut out: Law = a.iter().map(|(s, p)| (*s, p * w)).collect();
    for (s, p) in b {
        let add = p * (Q::one() - w);
        match out.iter_mut().find(|e| e.0 == *s) {
            Some(e) => e.1 += add,
            None => out.push((*s, add)),
        }
    }
    out
}

/// Exact phase-one simplex: is there `d ≥ 0` with `A d = b`?
/// Rows with negative right-hand side are negated first. Bland's rule.
pub fn feasible(a: &[Vec<Q>], b: &[Q]) -> bool {
    let rows = a.len();
    let cols = a[0].len();
    // Tableau: [A | I | b], objective minimizes the sum of artificials.
    let width = cols + rows + 1;
    let mut t: Vec<Vec<Q>> = (0..rows)
        .map(|i| {
            let flip = b[i].is_negative();
            let sign = if flip { -Q::one() } else { Q::one() };
            let mut row: Vec<Q> = a[i].iter().map(|x| x * &sign).collect();
            row.extend((0..rows).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row.push(&b[i] * &sign);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    loop {
        // Reduced costs of the phase-one objective.
        let reduced = |j: usize, t: &Vec<Vec<Q>>| -> Q {
            let cost = if j >= cols && j < cols + rows { Q::one() } else { Q::zero() };
            let mut z = Q::zero();
            for (i, &bi) in basis.iter().enumerate() {
                if bi >= cols {
                    z += &t[i][j];
                }
            }
            cost - z
        };
        let entering = (0..cols + rows).find(|&j| reduced(j, &t).is_negative());
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..rows {
            if t[i][e].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { return false };
        let pivot = t[r][e].clone();
        for x in t[r].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..rows {
            if i != r && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                let pivot_row = t[r].clone();
                for (x, y) in t[i].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        basis[r] = e;
    }
    basis
        .iter()
        .enumerate()
        .all(|(i, &bi)| bi < cols || t[i][width - 1].is_zero())
}

/// Hand-written conditional non-00 laws of the fifteen clicking strategies
/// with equiprobable settings, over outcomes in the order
/// `(r1 r2) ∈ {++, +0, 0+}` × settings `ab, ab', a'b, a'b'`. Built from the
/// outcome assignment `(a, a', b, b')` directly.
pub fn vertex_matrix() -> Vec<Vec<Q>> {
    let table: [[bool; 4]; 15] = [
        [true, true, true, true],
        [false, true, true, true],
        [true, false, true, true],
        [true, true, false, true],
        [true, true, true, false],
        [false, false, true, true],
        [true, true, false, false],
        [false, true, true, false],
        [true, false, false, true],
        [true, false, true, false],
        [false, true, false, true],
        [false, false, false, true],
        [false, false, true, false],
        [false, true, false, false],
        [true, false, false, false],
    ];
    table
        .iter()
        .map(|row| {
            let mut v = vec![Q::zero(); 12];
            let mut clicking_pairs = 0i64;
            for (sp, (a, b)) in [(0usize, 2usize), (0, 3), (1, 2), (1, 3)].iter().enumerate() {
                let (ra, rb) = (row[*a], row[*b]);
                let rp = match (ra, rb) {
                    (true, true) => Some(0),
                    (true, false) => Some(1),
                    (false, true) => Some(2),
                    (false, false) => None,
                };
                if let Some(r) = rp {
                    v[r * 4 + sp] = Q::one();
                    clicking_pairs += 1;
                }
            }
            v.iter().map(|x| x / Q::from_integer(clicking_pairs.into())).collect()
        })
        .collect()
}

/// Basis of `{x : rows · x = 0}` by exact row reduction.
pub fn nullspace(rows: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = rows[0].len();
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &pv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pr) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][free].clone();
            }
            v
        })
        .collect()
}

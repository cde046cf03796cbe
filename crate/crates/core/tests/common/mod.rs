//! Brute-force oracles. Nothing here calls into the library's linear algebra
//! or simplex code: membership is decided by Carathéodory subset enumeration
//! and cone intersections by enumerating the nonnegative circuits of the
//! relevant kernel.
#![allow(dead_code)]

use num::{BigInt, BigRational, One, Signed, Zero};
use proptest::prelude::*;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Row reduction to reduced echelon form; returns the pivot columns.
pub fn reduce(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    reduce(&mut rows.to_vec(), ncols).len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn null_space(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = reduce(&mut m, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Unique solution of `cols · μ = x` when the columns are independent.
fn solve_columns(cols: &[&Vec<Q>], x: &[Q]) -> Option<Vec<Q>> {
    let n = x.len();
    let k = cols.len();
    let mut aug: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            cols.iter()
                .map(|c| c[i].clone())
                .chain(std::iter::once(x[i].clone()))
                .collect()
        })
        .collect();
    let pivots = reduce(&mut aug, k + 1);
    if pivots.contains(&k) || pivots.len() < k {
        return None;
    }
    Some((0..k).map(|i| aug[i][k].clone()).collect())
}

pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

pub fn is_zero(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Carathéodory: `x` lies in the cone iff it is a nonnegative combination of
/// some linearly independent subset of generators.
pub fn cone_contains(gens: &[Vec<Q>], x: &[Q]) -> bool {
    if is_zero(x) {
        return true;
    }
    let dim = x.len();
    subsets(gens.len()).filter(|s| s.len() <= dim).any(|s| {
        let cols: Vec<&Vec<Q>> = s.iter().map(|&i| &gens[i]).collect();
        let owned: Vec<Vec<Q>> = cols.iter().map(|c| (*c).clone()).collect();
        rank(&owned, dim) == s.len() && solve_columns(&cols, x).is_some_and(|mu| mu.iter().all(|m| !m.is_negative()))
    })
}

/// Extreme rays of `{z ≥ 0 : m · z = 0}`: kernel vectors of minimal support
/// whose entries all have one sign.
pub fn nonneg_circuits(m: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for s in subsets(ncols) {
        let sub: Vec<Vec<Q>> = m.iter().map(|r| s.iter().map(|&j| r[j].clone()).collect()).collect();
        let ker = null_space(&sub, s.len());
        if ker.len() != 1 {
            continue;
        }
        let v = &ker[0];
        if v.iter().any(Zero::is_zero) {
            continue;
        }
        let sign = if v[0].is_positive() { Q::one() } else { -Q::one() };
        if v.iter().all(|x| (x * &sign).is_positive()) {
            let mut z = vec![Q::zero(); ncols];
            for (&j, x) in s.iter().zip(v) {
                z[j] = x * &sign;
            }
            out.push(z);
        }
    }
    out
}

fn combine(gens: &[Vec<Q>], z: &[Q], dim: usize) -> Vec<Q> {
    let mut x = vec![Q::zero(); dim];
    for (g, c) in gens.iter().zip(z) {
        for i in 0..dim {
            x[i] += &g[i] * c;
        }
    }
    x
}

/// Whether cone(a) ∩ cone(b) contains a nonzero point.
pub fn cones_meet(a: &[Vec<Q>], b: &[Vec<Q>], dim: usize) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let ncols = a.len() + b.len();
    let m: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            a.iter()
                .map(|g| g[i].clone())
                .chain(b.iter().map(|g| -g[i].clone()))
                .collect()
        })
        .collect();
    nonneg_circuits(&m, ncols)
        .iter()
        .any(|z| !is_zero(&combine(a, &z[..a.len()], dim)))
}

/// Whether cone(gens) meets span(w) away from the origin.
pub fn cone_meets_span(gens: &[Vec<Q>], w: &[Vec<Q>], dim: usize) -> bool {
    if gens.is_empty() {
        return false;
    }
    let perp = null_space(w, dim);
    let m: Vec<Vec<Q>> = perp
        .iter()
        .map(|y| gens.iter().map(|g| y.iter().zip(g).map(|(a, b)| a * b).sum()).collect())
        .collect();
    nonneg_circuits(&m, gens.len())
        .iter()
        .any(|z| !is_zero(&combine(gens, z, dim)))
}

pub fn neg(gens: &[Vec<Q>]) -> Vec<Vec<Q>> {
    gens.iter().map(|g| g.iter().map(|x| -x.clone()).collect()).collect()
}

pub fn union_is_tame(pieces: &[Vec<Vec<Q>>], dim: usize) -> bool {
    pieces
        .iter()
        .all(|a| pieces.iter().all(|b| !cones_meet(a, &neg(b), dim)))
}

/// Maximizes `c · x` over `{x ≥ 0 : rows}` by enumerating vertices. Each row
/// is `(coeffs, kind, rhs)` with kind `-1` for `≤`, `0` for `=`, `1` for `≥`.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleLp {
    Infeasible,
    Unbounded,
    Optimal(Q),
}

pub fn vertices(rows: &[(Vec<Q>, i8, Q)], n: usize) -> Vec<Vec<Q>> {
    let mut hyper: Vec<(Vec<Q>, Q)> = rows.iter().map(|(a, _, b)| (a.clone(), b.clone())).collect();
    for j in 0..n {
        let mut e = vec![Q::zero(); n];
        e[j] = Q::one();
        hyper.push((e, Q::zero()));
    }
    let feasible = |x: &[Q]| {
        x.iter().all(|v| !v.is_negative())
            && rows.iter().all(|(a, kind, b)| {
                let lhs: Q = a.iter().zip(x).map(|(p, q)| p * q).sum();
                match kind {
                    -1 => lhs <= *b,
                    0 => lhs == *b,
                    _ => lhs >= *b,
                }
            })
    };
    let mut out = Vec::new();
    for s in subsets(hyper.len()).filter(|s| s.len() == n) {
        let mut aug: Vec<Vec<Q>> = s
            .iter()
            .map(|&i| {
                hyper[i]
                    .0
                    .iter()
                    .cloned()
                    .chain(std::iter::once(hyper[i].1.clone()))
                    .collect()
            })
            .collect();
        let pivots = reduce(&mut aug, n + 1);
        if pivots.len() != n || pivots.contains(&n) {
            continue;
        }
        let x: Vec<Q> = (0..n).map(|i| aug[i][n].clone()).collect();
        if feasible(&x) && !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn lp_oracle(rows: &[(Vec<Q>, i8, Q)], c: &[Q]) -> OracleLp {
    let n = c.len();
    let verts = vertices(rows, n);
    if verts.is_empty() {
        return OracleLp::Infeasible;
    }
    // Recession directions normalized by Σd = 1.
    let mut rec: Vec<(Vec<Q>, i8, Q)> = rows.iter().map(|(a, k, _)| (a.clone(), *k, Q::zero())).collect();
    rec.push((vec![Q::one(); n], 0, Q::one()));
    let dot = |x: &[Q]| -> Q { x.iter().zip(c).map(|(a, b)| a * b).sum() };
    if vertices(&rec, n).iter().any(|d| dot(d).is_positive()) {
        return OracleLp::Unbounded;
    }
    OracleLp::Optimal(verts.iter().map(|v| dot(v)).max().unwrap())
}

pub fn small_rational() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=4).prop_map(|(n, d)| qr(n, d))
}

pub fn small_vector(dim: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(small_rational(), dim)
}

pub fn small_cone(dim: usize, max_gens: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    prop::collection::vec(small_vector(dim), 1..=max_gens)
}

//! Exact rational vectors, matrices and subspaces.
//!
//! Every subspace is stored through its reduced row-echelon basis, which makes
//! equality a plain entry-wise comparison.

use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{check_dim, Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn vector(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Largest absolute coordinate.
pub fn linf_norm(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

/// Positive multiple of `v` with coprime integer coordinates. The direction
/// (and therefore the sign pattern) of `v` is preserved.
pub fn primitive_ray(v: &[Rational]) -> Vec<Rational> {
    if is_zero_vector(v) {
        return v.to_vec();
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = ints
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| Rational::from_integer(x / &gcd)).collect()
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length; `cols` is needed to give
    /// an empty row list a shape.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            check_dim(cols, row.len())?;
            data.extend(row.iter().cloned());
        }
        Ok(RationalMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| vector(r)).collect();
        Self::from_rows(cols, &rows).expect("ragged integer matrix")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<Rational> {
        self.row(i).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Rational]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        self.rows_iter().map(<[Rational]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.cols, x.len())?;
        Ok(self.rows_iter().map(|r| dot(r, x)).collect())
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        check_dim(self.cols, other.cols)?;
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Sub-matrix keeping the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> RationalMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    pub fn determinant(&self) -> Result<Rational> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] / &pivot;
                for j in c..n {
                    let t = &f * &a[(c, j)];
                    a[(r, j)] -= t;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularBasis);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_vector(row))?;
        }
        write!(f, "]")
    }
}

pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

/// Reduced row-echelon form with zero rows removed, together with the pivot
/// columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = a[(r, c)].recip();
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] *= &inv;
            }
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let t = &f * &a[(r, j)];
                a[(i, j)] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.data.truncate(r * cols);
    a.rows = r;
    (a, pivots)
}

/// Right kernel `{x : m x = 0}`.
pub fn kernel_basis(m: &RationalMatrix) -> Subspace {
    let (r, pivots) = rref(m);
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect();
    Subspace::span(n, &basis).expect("kernel vectors have ambient length")
}

/// A linear subspace of ℚ^n, stored by its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: RationalMatrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let m = RationalMatrix::from_rows(ambient_dim, vectors)?;
        Ok(Self::row_space(&m))
    }

    pub fn row_space(m: &RationalMatrix) -> Self {
        let (basis, pivots) = rref(m);
        Subspace {
            ambient_dim: m.cols,
            basis,
            pivots,
        }
    }

    /// Span of vectors that must be linearly independent.
    pub fn from_independent(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let s = Self::span(ambient_dim, vectors)?;
        if s.dim() != vectors.len() {
            return Err(Error::RankDeficient {
                rank: s.dim(),
                rows: vectors.len(),
            });
        }
        Ok(s)
    }

    /// Coordinate subspace spanned by the standard basis vectors in `range`.
    pub fn coordinate(ambient_dim: usize, range: std::ops::Range<usize>) -> Self {
        let rows: Vec<Vec<Rational>> = range
            .map(|c| {
                let mut v = vec![Rational::zero(); ambient_dim];
                v[c] = Rational::one();
                v
            })
            .collect();
        Self::span(ambient_dim, &rows).expect("coordinate vectors")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        check_dim(self.ambient_dim, v.len())?;
        // Reduce against the RREF basis using the pivot coordinates.
        let mut rest = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if rest[p].is_zero() {
                continue;
            }
            let f = rest[p].clone();
            for (x, b) in rest.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *x -= &f * b;
                }
            }
        }
        Ok(is_zero_vector(&rest))
    }

    /// Rows `K` with `x ∈ self ⟺ K x = 0`.
    pub fn constraint_matrix(&self) -> RationalMatrix {
        kernel_basis(&self.basis).basis
    }

    pub fn intersects_trivially(&self, other: &Subspace) -> Result<bool> {
        subspaces_intersect_trivially(self, other)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?} in Q^{}", self.basis, self.ambient_dim)
    }
}

pub fn subspaces_intersect_trivially(u: &Subspace, v: &Subspace) -> Result<bool> {
    check_dim(u.ambient_dim, v.ambient_dim)?;
    if u.dim() + v.dim() > u.ambient_dim {
        return Ok(false);
    }
    let stacked = u.basis.vstack(&v.basis)?;
    Ok(stacked.rank() == u.dim() + v.dim())
}

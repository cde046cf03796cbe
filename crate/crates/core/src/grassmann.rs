//! Points of the Grassmannian of `(N−k)`-dimensional rational subspaces of
//! `G*`, the `[I | A]` chart, and seeded sampling.

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{Rational, RationalMatrix, Subspace};
use crate::product::ProductSpace;

/// Sampled entries are `a / 2^16` with `|a| ≤ 2^20`.
pub const SAMPLE_DENOMINATOR_BITS: u32 = 16;
pub const SAMPLE_NUMERATOR_BOUND: i64 = 1 << 20;
pub const MAX_SAMPLE_ATTEMPTS: usize = 64;

/// A subspace `S°` of dimension `N − k`, tagged with `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubspacePoint {
    subspace: Subspace,
    k: usize,
}

impl SubspacePoint {
    pub fn new(subspace: Subspace, k: usize) -> Result<Self> {
        let n = subspace.ambient_dim();
        if k > n {
            return Err(Error::InvalidK { k, min: 0, max: n });
        }
        check_dim(n - k, subspace.dim())?;
        Ok(SubspacePoint { subspace, k })
    }

    /// Point spanned by independent rows; `k` is their codimension.
    pub fn from_rows(ambient_dim: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        let s = Subspace::from_independent(ambient_dim, rows)?;
        let k = ambient_dim - s.dim();
        Ok(SubspacePoint { subspace: s, k })
    }

    /// Like [`SubspacePoint::new`], additionally enforcing `m ≤ k ≤ N` for the
    /// product space.
    pub fn in_space(subspace: Subspace, p: &ProductSpace) -> Result<Self> {
        check_dim(p.total_dim(), subspace.ambient_dim())?;
        let k = p.total_dim() - subspace.dim();
        p.check_k(k)?;
        Ok(SubspacePoint { subspace, k })
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ambient_dim(&self) -> usize {
        self.subspace.ambient_dim()
    }

    /// Same pivots, `delta` added entry-wise to the non-pivot entries of the
    /// RREF basis. `delta` is indexed like the basis matrix; pivot-column
    /// entries of `delta` are ignored.
    pub fn perturbed(&self, delta: &RationalMatrix) -> Result<SubspacePoint> {
        let b = self.subspace.basis();
        check_dim(b.nrows(), delta.nrows())?;
        check_dim(b.ncols(), delta.ncols())?;
        let pivots = self.subspace.pivot_columns();
        let mut m = b.clone();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if !pivots.contains(&j) {
                    m[(i, j)] += &delta[(i, j)];
                }
            }
        }
        SubspacePoint::new(Subspace::row_space(&m), self.k)
    }
}

/// A chart of the Grassmannian: subspaces complementary to the span `W` of
/// the last `k` vectors of `basis`, written as row spaces of `[I | A]` in
/// those coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    /// Rows are basis vectors of `Q^N`.
    pub basis: RationalMatrix,
    pub k: usize,
}

impl Chart {
    pub fn new(basis: RationalMatrix, k: usize) -> Result<Self> {
        check_dim(basis.nrows(), basis.ncols())?;
        if k > basis.nrows() {
            return Err(Error::InvalidK {
                k,
                min: 0,
                max: basis.nrows(),
            });
        }
        if basis.rank() < basis.nrows() {
            return Err(Error::SingularBasis);
        }
        Ok(Chart { basis, k })
    }

    pub fn standard(n: usize, k: usize) -> Result<Self> {
        Self::new(RationalMatrix::identity(n), k)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Rows of `[I | A]` in standard coordinates (not canonicalized).
    pub fn rows(&self, a: &RationalMatrix) -> Result<Vec<Vec<Rational>>> {
        let n = self.ambient_dim();
        let l = n - self.k;
        check_dim(l, a.nrows())?;
        check_dim(self.k, a.ncols())?;
        Ok((0..l)
            .map(|r| {
                let mut v = self.basis.row_vec(r);
                for j in 0..self.k {
                    let c = &a[(r, j)];
                    if c.is_zero() {
                        continue;
                    }
                    for (x, b) in v.iter_mut().zip(self.basis.row(l + j)) {
                        *x += c * b;
                    }
                }
                v
            })
            .collect())
    }

    pub fn point(&self, a: &RationalMatrix) -> Result<SubspacePoint> {
        let rows = self.rows(a)?;
        SubspacePoint::new(Subspace::span(self.ambient_dim(), &rows)?, self.k)
    }
}

pub fn chart_to_point(c: &Chart, a: &RationalMatrix) -> Result<SubspacePoint> {
    c.point(a)
}

/// `S° ∩ Gᵢ* = {0}` for every factor block. Returns the first offending
/// factor on failure.
pub fn first_block_hit(pt: &SubspacePoint, p: &ProductSpace) -> Result<Option<usize>> {
    check_dim(p.total_dim(), pt.ambient_dim())?;
    p.check_k(pt.k)?;
    for i in 0..p.factors().len() {
        if !pt.subspace.intersects_trivially(&p.block_subspace(i))? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Whether the point is a virtual subdirect product of the factors.
pub fn is_virtual_subdirect(pt: &SubspacePoint, p: &ProductSpace) -> Result<bool> {
    Ok(first_block_hit(pt, p)?.is_none())
}

/// Counter-based stream for `(seed, index)`: the same pair always yields the
/// same draws regardless of evaluation order.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn grid_rational(rng: &mut impl Rng) -> Rational {
    let a = rng.gen_range(-SAMPLE_NUMERATOR_BOUND..=SAMPLE_NUMERATOR_BOUND);
    Rational::new(BigInt::from(a), BigInt::one() << SAMPLE_DENOMINATOR_BITS)
}

/// One `rows × cols` draw of grid entries `a/2^16`, `|a| ≤ 2^20`.
pub fn draw_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = grid_rational(rng);
        }
    }
    m
}

/// Random `(N−k)`-dimensional subspace with grid entries, redrawn until the
/// drawn matrix has full row rank.
pub fn sample_point(p: &ProductSpace, k: usize, seed: u64, index: u64) -> Result<SubspacePoint> {
    p.check_k(k)?;
    let n = p.total_dim();
    let l = n - k;
    let mut rng = sample_rng(seed, index);
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let s = Subspace::row_space(&draw_matrix(&mut rng, l, n));
        if s.dim() == l {
            return SubspacePoint::new(s, k);
        }
    }
    Err(Error::DegenerateSampler {
        attempts: MAX_SAMPLE_ATTEMPTS,
    })
}

/// Convenience: `[I | 0]` in the standard chart spans the first `N−k`
/// coordinate vectors.
pub fn zero_chart_matrix(n: usize, k: usize) -> RationalMatrix {
    RationalMatrix::zeros(n - k, k)
}

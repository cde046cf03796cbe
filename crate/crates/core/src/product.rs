//! The dual space `G* = G₁* ⊕ … ⊕ Gₙ*` of a direct product and the cone
//! data living in it.

use std::fmt;
use std::ops::Range;

use num::Zero;

use crate::cone::{ConeUnion, ConvexCone};
use crate::error::{check_dim, Error, Result};
use crate::linalg::{Rational, Subspace};

/// One factor group, described by the rank of its abelianisation and the
/// complement `Σ^c` of its invariant as a union of cones in `Q^rank`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSpec {
    pub name: String,
    rank: usize,
    sigma_c: ConeUnion,
}

impl FactorSpec {
    pub fn new(name: impl Into<String>, rank: usize, sigma_c: ConeUnion) -> Result<Self> {
        check_dim(rank, sigma_c.ambient_dim())?;
        if rank == 0 {
            return Err(Error::Validation("factor rank must be positive".into()));
        }
        Ok(FactorSpec {
            name: name.into(),
            rank,
            sigma_c,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn sigma_c(&self) -> &ConeUnion {
        &self.sigma_c
    }

    /// `Σ^c = {0}`, which happens exactly for polycyclic factors.
    pub fn is_polycyclic(&self) -> bool {
        self.sigma_c.is_trivial()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub factor: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "WARNING",
            Severity::Error => "ERROR",
        };
        write!(f, "{tag} [{}]: {}", self.factor, self.message)
    }
}

/// Necessary conditions on factor data: `Σ^c` must be tame for a finitely
/// presented factor, and a tame `Σ^c` has dimension at most `rank/2 + 1`.
pub fn validate_factor(f: &FactorSpec) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if let Some((i, j, ray)) = f.sigma_c.antipodal_pair() {
        out.push(Diagnostic {
            severity: Severity::Error,
            factor: f.name.clone(),
            message: format!(
                "Σ^c is not tame (pieces {i} and {j} contain ±{}); the factor cannot be finitely presented",
                crate::linalg::format_vector(&ray)
            ),
        });
    }
    let d = f.sigma_c.dim();
    if 2 * d > f.rank + 2 {
        out.push(Diagnostic {
            severity: Severity::Warning,
            factor: f.name.clone(),
            message: format!(
                "dim Σ^c = {d} exceeds rank/2 + 1 = {}/2 + 1; data cannot come from a tame module",
                f.rank
            ),
        });
    }
    out
}

/// The product space with its factor blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSpace {
    factors: Vec<FactorSpec>,
    blocks: Vec<Range<usize>>,
}

impl ProductSpace {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Validation("at least one factor is required".into()));
        }
        let mut blocks = Vec::with_capacity(factors.len());
        let mut start = 0;
        for f in &factors {
            blocks.push(start..start + f.rank);
            start += f.rank;
        }
        Ok(ProductSpace { factors, blocks })
    }

    /// Like [`ProductSpace::new`], but rejects factors with error-level
    /// diagnostics.
    pub fn validated(factors: Vec<FactorSpec>) -> Result<Self> {
        let p = Self::new(factors)?;
        let errors: Vec<String> = p
            .diagnostics()
            .into_iter()
            .filter(|d| d.severity == Severity::Error)
            .map(|d| d.to_string())
            .collect();
        if errors.is_empty() {
            Ok(p)
        } else {
            Err(Error::Validation(errors.join("; ")))
        }
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        self.factors.iter().flat_map(validate_factor).collect()
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    /// Total dimension `N = Σ mᵢ`.
    pub fn total_dim(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.end)
    }

    /// Largest factor rank `m`.
    pub fn max_rank(&self) -> usize {
        self.factors.iter().map(FactorSpec::rank).max().unwrap_or(0)
    }

    pub fn check_k(&self, k: usize) -> Result<()> {
        let (min, max) = (self.max_rank(), self.total_dim());
        if k < min || k > max {
            return Err(Error::InvalidK { k, min, max });
        }
        Ok(())
    }

    /// The coordinate subspace `Gᵢ*`.
    pub fn block_subspace(&self, i: usize) -> Subspace {
        Subspace::coordinate(self.total_dim(), self.blocks[i].clone())
    }

    pub fn embed_factor(&self, i: usize, x: &[Rational]) -> Result<Vec<Rational>> {
        let block = self.blocks.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.blocks.len(),
        })?;
        check_dim(block.len(), x.len())?;
        let mut v = vec![Rational::zero(); self.total_dim()];
        v[block.clone()].clone_from_slice(x);
        Ok(v)
    }

    /// `Σ^c_G(G')`: the union of the block-embedded factor data.
    pub fn assemble_sigma(&self) -> ConeUnion {
        let n = self.total_dim();
        let pieces = self
            .factors
            .iter()
            .zip(&self.blocks)
            .flat_map(|(f, b)| f.sigma_c.pieces().iter().map(move |p| p.embed(b.start, n)))
            .collect();
        ConeUnion::new(n, pieces).expect("embedded pieces live in Q^N")
    }

    /// Factor permutation with correspondingly permuted coordinates; used by
    /// invariance tests and tools.
    pub fn permuted(&self, order: &[usize]) -> Result<(ProductSpace, Vec<usize>)> {
        check_dim(self.factors.len(), order.len())?;
        let factors: Vec<FactorSpec> = order.iter().map(|&i| self.factors[i].clone()).collect();
        let coords: Vec<usize> = order.iter().flat_map(|&i| self.blocks[i].clone()).collect();
        Ok((ProductSpace::new(factors)?, coords))
    }
}

/// `Γ = Σ^c + Σ^c`: Minkowski sums of all unordered pairs of pieces, the
/// diagonal included. Repeated pieces are dropped; subsumed ones are kept.
pub fn build_gamma(sigma: &ConeUnion) -> ConeUnion {
    let ps = sigma.pieces();
    let mut pieces: Vec<ConvexCone> = Vec::new();
    for i in 0..ps.len() {
        for j in i..ps.len() {
            let s = ps[i].sum(&ps[j]).expect("pieces share the ambient dimension");
            if !pieces.contains(&s) {
                pieces.push(s);
            }
        }
    }
    ConeUnion::new(sigma.ambient_dim(), pieces).expect("sums stay in the ambient space")
}

/// Whether the dimension condition `dim Γ ≤ k` behind the generic
/// finite-presentability result holds.
pub fn theorem_a_applicable(p: &ProductSpace, gamma: &ConeUnion, k: usize) -> Result<bool> {
    p.check_k(k)?;
    check_dim(p.total_dim(), gamma.ambient_dim())?;
    Ok(gamma.dim() <= k)
}

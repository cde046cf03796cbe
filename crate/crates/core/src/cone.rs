//! Rational polyhedral cones in V-representation and finite unions of them.
//!
//! All decisions reduce to LP feasibility over generator coefficients. The
//! slice `Σλ = 1` first rules out any nonzero coefficient vector; otherwise a
//! nonzero common point is found by normalizing one coordinate at a time
//! (`±xᵢ ≥ 1`), which also copes with non-pointed cones.

use num::{One, Signed, Zero};

use crate::error::{check_dim, Result};
use crate::linalg::{is_zero_vector, primitive_ray, Rational, RationalMatrix, Subspace};
use crate::lp::{self, LinearProgram, LpOutcome, Relation};

/// The set of nonnegative combinations of finitely many rational rays.
///
/// Generators are stored as primitive integer vectors in first-seen order,
/// without repeats; an empty generator list is the cone `{0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvexCone {
    ambient_dim: usize,
    generators: Vec<Vec<Rational>>,
}

/// Evidence that some set meets another in a nonzero point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionWitness {
    pub ray: Vec<Rational>,
    pub piece_index: usize,
    /// Nonnegative weights on the piece's generators; `ray = G · coefficients`.
    pub coefficients: Vec<Rational>,
}

impl ConvexCone {
    /// Zero vectors are dropped; the rest are canonicalized and deduplicated.
    pub fn new(ambient_dim: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        let mut cone = ConvexCone {
            ambient_dim,
            generators: Vec::with_capacity(generators.len()),
        };
        for g in generators {
            check_dim(ambient_dim, g.len())?;
            cone.push(&g);
        }
        Ok(cone)
    }

    pub fn zero(ambient_dim: usize) -> Self {
        ConvexCone {
            ambient_dim,
            generators: Vec::new(),
        }
    }

    pub fn from_i64(ambient_dim: usize, generators: &[&[i64]]) -> Self {
        let gens = generators.iter().map(|g| crate::linalg::vector(g)).collect();
        Self::new(ambient_dim, gens).expect("generator length")
    }

    fn push(&mut self, g: &[Rational]) {
        if is_zero_vector(g) {
            return;
        }
        let ray = primitive_ray(g);
        if !self.generators.contains(&ray) {
            self.generators.push(ray);
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// `N × n` matrix whose columns are the generators.
    pub fn generator_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(self.ambient_dim, &self.generators)
            .expect("generators share the ambient dimension")
            .transpose()
    }

    /// `G · λ`.
    pub fn combine(&self, coefficients: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.ambient_dim];
        for (g, c) in self.generators.iter().zip(coefficients) {
            if c.is_zero() {
                continue;
            }
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += c * gi;
            }
        }
        x
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.ambient_dim, x.len())?;
        if self.is_zero() {
            return Ok(is_zero_vector(x));
        }
        let n = self.generators.len();
        let mut prog = LinearProgram::new(n);
        prog.set_all_nonneg();
        for i in 0..self.ambient_dim {
            let row = self.generators.iter().map(|g| g[i].clone()).collect();
            prog.add_constraint(row, Relation::Eq, x[i].clone());
        }
        lp::is_feasible(&prog)
    }

    /// Dimension of the linear span.
    pub fn dim(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        RationalMatrix::from_rows(self.ambient_dim, &self.generators)
            .expect("generators share the ambient dimension")
            .rank()
    }

    /// Whether `0` is a convex combination of the generators, i.e. the cone is
    /// not pointed.
    pub fn contains_line(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let n = self.generators.len();
        let mut prog = LinearProgram::new(n);
        prog.set_all_nonneg();
        for i in 0..self.ambient_dim {
            let row = self.generators.iter().map(|g| g[i].clone()).collect();
            prog.add_constraint(row, Relation::Eq, Rational::zero());
        }
        prog.add_constraint(vec![Rational::one(); n], Relation::Eq, Rational::one());
        lp::is_feasible(&prog).expect("well-formed program")
    }

    /// Minkowski sum. Both cones contain 0, so the generators simply merge.
    pub fn sum(&self, other: &ConvexCone) -> Result<ConvexCone> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let mut out = self.clone();
        for g in &other.generators {
            out.push(g);
        }
        Ok(out)
    }

    pub fn neg(&self) -> ConvexCone {
        ConvexCone {
            ambient_dim: self.ambient_dim,
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().map(|x| -x.clone()).collect())
                .collect(),
        }
    }

    /// Image under the linear map `x ↦ m x`.
    pub fn image(&self, m: &RationalMatrix) -> Result<ConvexCone> {
        check_dim(self.ambient_dim, m.ncols())?;
        let gens = self
            .generators
            .iter()
            .map(|g| m.mul_vec(g))
            .collect::<Result<Vec<_>>>()?;
        ConvexCone::new(m.nrows(), gens)
    }

    /// Places the cone in coordinates `offset..offset + dim` of `Q^total`.
    pub fn embed(&self, offset: usize, total: usize) -> ConvexCone {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let mut v = vec![Rational::zero(); total];
                v[offset..offset + self.ambient_dim].clone_from_slice(g);
                v
            })
            .collect();
        ConvexCone {
            ambient_dim: total,
            generators: gens,
        }
    }
}

/// Finds `z ≥ 0` with `eq · z = 0` and `value · z ≠ 0`, trying `±(value·z)ᵢ ≥ 1`
/// for each coordinate `i` in order, `+` before `−`.
fn nonzero_solution(eq: &RationalMatrix, value: &RationalMatrix) -> Option<Vec<Rational>> {
    let nz = value.ncols();
    // One normalized LP settles the common case where no z ≠ 0 exists at all.
    let mut probe = LinearProgram::new(nz);
    probe.set_all_nonneg();
    for e in eq.rows_iter() {
        probe.add_constraint(e.to_vec(), Relation::Eq, Rational::zero());
    }
    probe.add_constraint(vec![Rational::one(); nz], Relation::Eq, Rational::one());
    if !lp::is_feasible(&probe).expect("well-formed program") {
        return None;
    }
    for i in 0..value.nrows() {
        let row = value.row(i);
        if is_zero_vector(row) {
            continue;
        }
        for sign in [Rational::one(), -Rational::one()] {
            let mut prog = LinearProgram::new(nz);
            prog.set_all_nonneg();
            for e in eq.rows_iter() {
                prog.add_constraint(e.to_vec(), Relation::Eq, Rational::zero());
            }
            prog.add_constraint(row.iter().map(|a| a * &sign).collect(), Relation::Ge, Rational::one());
            if let LpOutcome::Feasible { point } = lp::solve(&prog).expect("well-formed program") {
                return Some(point);
            }
        }
    }
    None
}

/// Rescales `coefficients` so that `G · coefficients` is a primitive ray.
fn canonical_witness(cone: &ConvexCone, coefficients: Vec<Rational>, piece_index: usize) -> IntersectionWitness {
    let x = cone.combine(&coefficients);
    let ray = primitive_ray(&x);
    let j = x.iter().position(|v| !v.is_zero()).expect("witness is nonzero");
    let scale = &ray[j] / &x[j];
    let coefficients = coefficients.into_iter().map(|c| c * &scale).collect();
    IntersectionWitness {
        ray,
        piece_index,
        coefficients,
    }
}

/// A nonzero point of `a ∩ b`, if any. The witness is expressed through the
/// generators of `a` (`piece_index` is 0).
pub fn cones_meet_nontrivially(a: &ConvexCone, b: &ConvexCone) -> Result<Option<IntersectionWitness>> {
    check_dim(a.ambient_dim, b.ambient_dim)?;
    if a.is_zero() || b.is_zero() {
        return Ok(None);
    }
    let (na, nb, n) = (a.generators.len(), b.generators.len(), a.ambient_dim);
    let mut eq = RationalMatrix::zeros(n, na + nb);
    let mut value = RationalMatrix::zeros(n, na + nb);
    for i in 0..n {
        for (j, g) in a.generators.iter().enumerate() {
            eq[(i, j)] = g[i].clone();
            value[(i, j)] = g[i].clone();
        }
        for (j, g) in b.generators.iter().enumerate() {
            eq[(i, na + j)] = -g[i].clone();
        }
    }
    Ok(nonzero_solution(&eq, &value).map(|z| canonical_witness(a, z[..na].to_vec(), 0)))
}

/// A nonzero point of `cone ∩ w`, if any.
pub fn cone_meets_subspace(cone: &ConvexCone, w: &Subspace) -> Result<Option<IntersectionWitness>> {
    check_dim(cone.ambient_dim, w.ambient_dim())?;
    if cone.is_zero() {
        return Ok(None);
    }
    let g = cone.generator_matrix();
    let eq = w.constraint_matrix().mul(&g)?;
    Ok(nonzero_solution(&eq, &g).map(|z| canonical_witness(cone, z, 0)))
}

/// A finite union of convex cones in a common ambient space. No pieces at
/// all denotes `{0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConeUnion {
    ambient_dim: usize,
    pieces: Vec<ConvexCone>,
}

impl ConeUnion {
    pub fn new(ambient_dim: usize, pieces: Vec<ConvexCone>) -> Result<Self> {
        for p in &pieces {
            check_dim(ambient_dim, p.ambient_dim)?;
        }
        Ok(ConeUnion { ambient_dim, pieces })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        ConeUnion {
            ambient_dim,
            pieces: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pieces(&self) -> &[ConvexCone] {
        &self.pieces
    }

    /// True when the union is `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.pieces.iter().all(ConvexCone::is_zero)
    }

    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        check_dim(self.ambient_dim, x.len())?;
        if is_zero_vector(x) {
            return Ok(true);
        }
        for p in &self.pieces {
            if p.contains(x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn neg(&self) -> ConeUnion {
        ConeUnion {
            ambient_dim: self.ambient_dim,
            pieces: self.pieces.iter().map(ConvexCone::neg).collect(),
        }
    }

    pub fn image(&self, m: &RationalMatrix) -> Result<ConeUnion> {
        let pieces = self.pieces.iter().map(|p| p.image(m)).collect::<Result<_>>()?;
        ConeUnion::new(m.nrows(), pieces)
    }

    /// Largest dimension of a piece; 0 for `{0}`.
    pub fn dim(&self) -> usize {
        self.pieces.iter().map(ConvexCone::dim).max().unwrap_or(0)
    }

    /// No two nonzero points `x`, `−x` both lie in the union.
    pub fn is_tame(&self) -> bool {
        self.antipodal_pair().is_none()
    }

    /// First ordered pair of pieces `(a, b)` with `a ∩ −b ≠ {0}`, with the
    /// offending ray of `a`.
    pub fn antipodal_pair(&self) -> Option<(usize, usize, Vec<Rational>)> {
        for (i, a) in self.pieces.iter().enumerate() {
            for (j, b) in self.pieces.iter().enumerate() {
                let hit = cones_meet_nontrivially(a, &b.neg()).expect("pieces share the ambient dimension");
                if let Some(w) = hit {
                    return Some((i, j, w.ray));
                }
            }
        }
        None
    }

    /// First nonzero point of the union inside `w`: lowest piece index, then
    /// lowest normalized coordinate, `+` before `−`.
    pub fn meets_subspace(&self, w: &Subspace) -> Result<Option<IntersectionWitness>> {
        check_dim(self.ambient_dim, w.ambient_dim())?;
        for (idx, p) in self.pieces.iter().enumerate() {
            if let Some(mut wit) = cone_meets_subspace(p, w)? {
                wit.piece_index = idx;
                return Ok(Some(wit));
            }
        }
        Ok(None)
    }
}

/// Checks a witness against `union` and, optionally, a subspace.
pub fn verify_witness(union: &ConeUnion, w: Option<&Subspace>, wit: &IntersectionWitness) -> bool {
    let Some(piece) = union.pieces.get(wit.piece_index) else {
        return false;
    };
    wit.coefficients.len() == piece.generators.len()
        && wit.coefficients.iter().all(|c| !c.is_negative())
        && !is_zero_vector(&wit.ray)
        && piece.combine(&wit.coefficients) == wit.ray
        && w.is_none_or(|s| s.contains(&wit.ray).unwrap_or(false))
}

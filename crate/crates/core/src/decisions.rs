//! Finite-presentability decisions for virtual subdirect products, together
//! with the constructive side: openness radii, the `ρ` pairing for two
//! factors, explicit non-finitely-presented points and open boxes of them,
//! and the sampling experiment for the generic case.

use std::cmp::Ordering;
use std::fmt;
use std::time::Instant;

use num::{BigInt, One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{cones_meet_nontrivially, verify_witness, ConeUnion, ConvexCone, IntersectionWitness};
use crate::error::{check_dim, Error, Result};
use crate::grassmann::{first_block_hit, sample_point, sample_rng, Chart, SubspacePoint, MAX_SAMPLE_ATTEMPTS};
use crate::linalg::{format_vector, linf_norm, primitive_ray, rat, rref, Rational, RationalMatrix, Subspace};
use crate::lp::{self, LinearProgram, LpOutcome, Relation, Sense};
use crate::product::{build_gamma, theorem_a_applicable, ProductSpace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpDecision {
    pub finitely_presented: bool,
    /// A nonzero ray of `Γ ∩ S°` when the point is not finitely presented.
    pub witness: Option<IntersectionWitness>,
}

/// `S` is finitely presented iff `Γ ∩ S° = {0}`. Only meaningful for virtual
/// subdirect products, so other points are rejected.
pub fn is_finitely_presented(pt: &SubspacePoint, gamma: &ConeUnion, p: &ProductSpace) -> Result<FpDecision> {
    check_dim(p.total_dim(), gamma.ambient_dim())?;
    if let Some(factor) = first_block_hit(pt, p)? {
        return Err(Error::NotVirtualSubdirect { factor });
    }
    let witness = gamma.meets_subspace(pt.subspace())?;
    debug_assert!(witness
        .as_ref()
        .is_none_or(|w| verify_witness(gamma, Some(pt.subspace()), w)));
    Ok(FpDecision {
        finitely_presented: witness.is_none(),
        witness,
    })
}

/// Per-piece data behind an openness radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceBound {
    pub piece: usize,
    /// L∞ distance from the convex hull of the piece's generators to `S°`.
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub distance: Rational,
    /// `distance / (2 · dim S° · max‖g‖∞)`.
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub bound: Rational,
}

/// A rational radius `delta` such that moving every non-pivot entry of the
/// RREF basis of `S°` by at most `delta` keeps the point a finitely
/// presented virtual subdirect product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpennessCertificate {
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub delta: Rational,
    pub chart_pivots: Vec<usize>,
    pub per_piece: Vec<PieceBound>,
    /// Smallest per-factor radius keeping `S° ∩ Gᵢ* = {0}`; `None` when no
    /// perturbable entry can affect it.
    #[serde(serialize_with = "crate::io::ser_opt_rational")]
    pub vsp_margin: Option<Rational>,
}

/// L∞ distance between `conv(generators)` and the row space of `basis`.
fn slice_distance(piece: &ConvexCone, basis: &RationalMatrix) -> Rational {
    let n = piece.ambient_dim();
    let ng = piece.generators().len();
    let l = basis.nrows();
    // variables: λ (ng, ≥ 0), s (l, free), t (≥ 0)
    let nv = ng + l + 1;
    let mut prog = LinearProgram::new(nv);
    for j in 0..ng {
        prog.set_nonneg(j);
    }
    prog.set_nonneg(nv - 1);
    let mut simplex = vec![Rational::zero(); nv];
    simplex[..ng].fill(Rational::one());
    prog.add_constraint(simplex, Relation::Eq, Rational::one());
    for i in 0..n {
        let mut row = vec![Rational::zero(); nv];
        for (j, g) in piece.generators().iter().enumerate() {
            row[j] = g[i].clone();
        }
        for r in 0..l {
            row[ng + r] = -basis[(r, i)].clone();
        }
        let mut upper = row.clone();
        upper[nv - 1] = -Rational::one();
        prog.add_constraint(upper, Relation::Le, Rational::zero());
        let mut lower: Vec<Rational> = row.into_iter().map(|x| -x).collect();
        lower[nv - 1] = -Rational::one();
        prog.add_constraint(lower, Relation::Le, Rational::zero());
    }
    let mut obj = vec![Rational::zero(); nv];
    obj[nv - 1] = Rational::one();
    prog.set_objective(Sense::Minimize, obj);
    match lp::solve(&prog).expect("well-formed program") {
        LpOutcome::Optimal { value, .. } => value,
        other => unreachable!("distance program is feasible and bounded: {other:?}"),
    }
}

/// Radius keeping the stacked matrix `[S° basis; Gᵢ* basis]` of full rank.
///
/// Picks independent columns `J`, so `M_J` is invertible. A perturbation `E`
/// of the `S°` rows has `‖E‖∞ ≤ c·δ` with `c` the number of non-pivot columns
/// in `J`, and `‖M_J⁻¹ E‖∞ ≤ 1/2` keeps `M_J + E` invertible.
fn vsp_radius(basis: &RationalMatrix, pivots: &[usize], block: &Subspace) -> Result<Option<Rational>> {
    let stacked = basis.vstack(block.basis())?;
    let (_, cols) = rref(&stacked);
    debug_assert_eq!(cols.len(), stacked.nrows());
    let c = cols.iter().filter(|j| !pivots.contains(j)).count();
    if c == 0 || basis.nrows() == 0 {
        return Ok(None);
    }
    let inv = stacked.select_columns(&cols).inverse()?;
    let norm = inv
        .rows_iter()
        .map(|r| r.iter().fold(Rational::zero(), |acc, x| acc + x.abs()))
        .max()
        .expect("nonempty inverse");
    Ok(Some(Rational::one() / (rat(2) * rat(c as i64) * norm)))
}

pub fn openness_certificate(pt: &SubspacePoint, gamma: &ConeUnion, p: &ProductSpace) -> Result<OpennessCertificate> {
    let decision = is_finitely_presented(pt, gamma, p)?;
    if !decision.finitely_presented {
        return Err(Error::NotFinitelyPresented);
    }
    for (i, piece) in gamma.pieces().iter().enumerate() {
        if piece.contains_line() {
            return Err(Error::NonPointedPiece { piece: i });
        }
    }
    let basis = pt.subspace().basis();
    let pivots = pt.subspace().pivot_columns().to_vec();
    let l = basis.nrows();

    let mut per_piece = Vec::new();
    for (i, piece) in gamma.pieces().iter().enumerate() {
        if piece.is_zero() || l == 0 {
            continue;
        }
        let distance = slice_distance(piece, basis);
        debug_assert!(distance.is_positive());
        let r0 = piece
            .generators()
            .iter()
            .map(|g| linf_norm(g))
            .max()
            .expect("nonzero piece");
        let bound = &distance / (rat(2) * rat(l as i64) * r0);
        per_piece.push(PieceBound {
            piece: i,
            distance,
            bound,
        });
    }

    let mut vsp_margin: Option<Rational> = None;
    for i in 0..p.factors().len() {
        if let Some(r) = vsp_radius(basis, &pivots, &p.block_subspace(i))? {
            vsp_margin = Some(match vsp_margin {
                Some(m) if m <= r => m,
                _ => r,
            });
        }
    }

    let delta = per_piece
        .iter()
        .map(|b| b.bound.clone())
        .chain(vsp_margin.clone())
        .min()
        .unwrap_or_else(Rational::one);
    Ok(OpennessCertificate {
        delta,
        chart_pivots: pivots,
        per_piece,
        vsp_margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhoMethod {
    /// Identical factor data: `ρ = −I`.
    Negation,
    /// Rank one: `ρ = [±1]`.
    Sign,
    /// Rank two: rescale along two lines avoiding the cones.
    AngularScaling,
}

/// Scaling data for the rank-two construction: `ρ(v1) = v1/λ`,
/// `ρ(v2) = λ·v2`, where the line through `v1` avoids `Σ₂^c`, the line
/// through `v2` avoids `Σ₁^c`, and in coordinates making `{v1, v2}`
/// orthonormal every nonzero `x ∈ Σ₂^c` has squared cosine to `v1` at most
/// `eps1` (likewise `Σ₁^c`, `v2`, `eps2`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoScaling {
    #[serde(serialize_with = "crate::io::ser_vector")]
    pub v1: Vec<Rational>,
    #[serde(serialize_with = "crate::io::ser_vector")]
    pub v2: Vec<Rational>,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub eps1: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub eps2: Rational,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub lambda: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoConstruction {
    pub method: RhoMethod,
    /// `ρ: G₂* → G₁*` with `Σ₁^c ∩ ρ(Σ₂^c) = {0}`.
    pub rho: RationalMatrix,
    pub scaling: Option<RhoScaling>,
    /// `{w + ρ(w) : w ∈ G₂*}`.
    pub point: SubspacePoint,
    pub verified: bool,
}

fn cross(a: &[Rational], b: &[Rational]) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Upper half-plane (including the positive x-axis) first.
fn half(v: &[Rational]) -> u8 {
    if v[1].is_positive() || (v[1].is_zero() && v[0].is_positive()) {
        0
    } else {
        1
    }
}

fn angle_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross(a, b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Extreme rays of a pointed planar cone.
fn extreme_rays(piece: &ConvexCone) -> Vec<Vec<Rational>> {
    let gens = piece.generators();
    if gens.len() <= 1 {
        return gens.to_vec();
    }
    let first = gens
        .iter()
        .find(|g| gens.iter().all(|h| !cross(g, h).is_negative()))
        .expect("pointed planar cone has a clockwise-most ray");
    let last = gens
        .iter()
        .find(|g| gens.iter().all(|h| !cross(h, g).is_negative()))
        .expect("pointed planar cone has a counter-clockwise-most ray");
    if first == last {
        vec![first.clone()]
    } else {
        vec![first.clone(), last.clone()]
    }
}

fn l1_normalized(v: &[Rational]) -> Vec<Rational> {
    let s = v.iter().fold(Rational::zero(), |acc, x| acc + x.abs());
    v.iter().map(|x| x / &s).collect()
}

/// A direction strictly inside the counter-clockwise arc from `a` to `b`.
fn arc_midpoint(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if cross(a, b).is_positive() {
        let (na, nb) = (l1_normalized(a), l1_normalized(b));
        primitive_ray(&[&na[0] + &nb[0], &na[1] + &nb[1]])
    } else {
        primitive_ray(&[-a[1].clone(), a[0].clone()])
    }
}

/// Primitive direction with first nonzero coordinate positive.
fn line_representative(v: &[Rational]) -> Vec<Rational> {
    let r = primitive_ray(v);
    if r.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        r.into_iter().map(|x| -x).collect()
    } else {
        r
    }
}

fn line_avoids(union: &ConeUnion, v: &[Rational]) -> bool {
    let neg: Vec<Rational> = v.iter().map(|x| -x.clone()).collect();
    !union.contains(v).expect("planar") && !union.contains(&neg).expect("planar")
}

/// Directions `v` whose line meets the planar union only in 0, three from
/// every gap of `Δ ∪ −Δ`, in angular order of the gaps.
fn avoiding_lines(union: &ConeUnion) -> Vec<Vec<Rational>> {
    let mut rays: Vec<Vec<Rational>> = Vec::new();
    for piece in union.pieces() {
        for e in extreme_rays(piece) {
            let neg: Vec<Rational> = e.iter().map(|x| -x.clone()).collect();
            rays.push(e);
            rays.push(neg);
        }
    }
    rays.sort_by(|a, b| angle_cmp(a, b));
    rays.dedup();
    if rays.is_empty() {
        return vec![
            crate::linalg::vector(&[1, 0]),
            crate::linalg::vector(&[0, 1]),
            crate::linalg::vector(&[1, 1]),
        ];
    }
    let mut out = Vec::new();
    for i in 0..rays.len() {
        let (a, b) = (&rays[i], &rays[(i + 1) % rays.len()]);
        let mid = arc_midpoint(a, b);
        if !line_avoids(union, &mid) {
            continue;
        }
        for c in [mid.clone(), arc_midpoint(a, &mid), arc_midpoint(&mid, b)] {
            if line_avoids(union, &c) {
                let rep = line_representative(&c);
                if !out.contains(&rep) {
                    out.push(rep);
                }
            }
        }
    }
    out
}

/// Largest squared cosine between a generator of `union` and `axis`, measured
/// in the inner product making `{v1, v2}` orthonormal.
fn max_squared_cosine(union: &ConeUnion, v1: &[Rational], v2: &[Rational], axis_is_v1: bool) -> Rational {
    let det = cross(v1, v2);
    let mut best = Rational::zero();
    for piece in union.pieces() {
        for g in piece.generators() {
            let alpha = cross(g, v2) / &det;
            let beta = cross(v1, g) / &det;
            let along = if axis_is_v1 { &alpha } else { &beta };
            let c = along * along / (&alpha * &alpha + &beta * &beta);
            if c > best {
                best = c;
            }
        }
    }
    best
}

fn post_check(sigma1: &ConeUnion, sigma2: &ConeUnion, rho: &RationalMatrix) -> Result<bool> {
    let image = sigma2.image(rho)?;
    for a in sigma1.pieces() {
        for b in image.pieces() {
            if cones_meet_nontrivially(a, b)?.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `{w + ρ(w) : w ∈ G₂*}` inside `G₁* ⊕ G₂*`.
fn graph_point(rho: &RationalMatrix, p: &ProductSpace) -> Result<SubspacePoint> {
    let m = rho.nrows();
    let rows: Vec<Vec<Rational>> = (0..m)
        .map(|j| {
            let mut v = rho.column(j);
            v.extend((0..m).map(|i| if i == j { Rational::one() } else { Rational::zero() }));
            v
        })
        .collect();
    SubspacePoint::in_space(Subspace::from_independent(2 * m, &rows)?, p)
}

fn rank_two_scaling(sigma1: &ConeUnion, sigma2: &ConeUnion) -> Result<(RationalMatrix, RhoScaling)> {
    let from_source = avoiding_lines(sigma2);
    let from_target = avoiding_lines(sigma1);
    let v1 = from_source
        .first()
        .ok_or_else(|| Error::ConstructionFailed("no line avoids Σ₂^c".into()))?
        .clone();
    let v2 = from_target
        .iter()
        .find(|v| !cross(&v1, v).is_zero())
        .ok_or_else(|| Error::ConstructionFailed("no independent line avoids Σ₁^c".into()))?
        .clone();

    let fallback = |e: Rational| {
        if e.is_zero() {
            Rational::new(1.into(), 2.into())
        } else {
            e
        }
    };
    let eps1 = fallback(max_squared_cosine(sigma2, &v1, &v2, true));
    let eps2 = fallback(max_squared_cosine(sigma1, &v1, &v2, false));
    debug_assert!(eps1 < Rational::one() && eps2 < Rational::one());

    let slack = (Rational::one() - &eps1) * (Rational::one() - &eps2);
    let target = &eps1 * &eps2;
    let mut lambda = Rational::one();
    while {
        let l2 = &lambda * &lambda;
        &l2 * &l2 * &slack <= target
    } {
        lambda *= Rational::from_integer(BigInt::from(2));
    }

    let v = RationalMatrix::from_rows(2, &[v1.clone(), v2.clone()])?.transpose();
    let mut diag = RationalMatrix::zeros(2, 2);
    diag[(0, 0)] = lambda.recip();
    diag[(1, 1)] = lambda.clone();
    let rho = v.mul(&diag)?.mul(&v.inverse()?)?;
    Ok((
        rho,
        RhoScaling {
            v1,
            v2,
            eps1,
            eps2,
            lambda,
        },
    ))
}

/// An invertible `ρ: G₂* → G₁*` whose graph is a finitely presented virtual
/// subdirect product of two factors of equal rank.
pub fn construct_rho(p: &ProductSpace) -> Result<RhoConstruction> {
    let [f1, f2] = p.factors() else {
        return Err(Error::UnsupportedRank(format!(
            "exactly two factors required, found {}",
            p.factors().len()
        )));
    };
    if f1.rank() != f2.rank() {
        return Err(Error::UnsupportedRank(format!(
            "factor ranks differ ({} vs {})",
            f1.rank(),
            f2.rank()
        )));
    }
    for f in [f1, f2] {
        if !f.sigma_c().is_tame() {
            return Err(Error::Validation(format!("Σ^c of {} is not tame", f.name)));
        }
    }
    let m = f1.rank();
    let (s1, s2) = (f1.sigma_c(), f2.sigma_c());
    let neg_identity = || {
        let mut r = RationalMatrix::identity(m);
        for i in 0..m {
            r[(i, i)] = -Rational::one();
        }
        r
    };

    let (method, rho, scaling) = if s1 == s2 {
        (RhoMethod::Negation, neg_identity(), None)
    } else if m == 1 {
        let rho = [-1i64, 1]
            .into_iter()
            .map(|c| RationalMatrix::from_i64(&[&[c]]))
            .find(|r| post_check(s1, s2, r).unwrap_or(false))
            .ok_or_else(|| Error::ConstructionFailed("neither sign separates the rays".into()))?;
        (RhoMethod::Sign, rho, None)
    } else if m == 2 {
        let (rho, scaling) = rank_two_scaling(s1, s2)?;
        (RhoMethod::AngularScaling, rho, Some(scaling))
    } else {
        return Err(Error::UnsupportedRank(format!(
            "rank {m} > 2 with distinct factor data"
        )));
    };

    if !post_check(s1, s2, &rho)? {
        return Err(Error::ConstructionFailed(format!(
            "Σ₁^c ∩ ρ(Σ₂^c) ≠ {{0}} for ρ = {rho:?}"
        )));
    }
    let point = graph_point(&rho, p)?;
    let gamma = build_gamma(&p.assemble_sigma());
    let decision = is_finitely_presented(&point, &gamma, p)?;
    if !decision.finitely_presented {
        return Err(Error::ConstructionFailed("graph of ρ meets Γ".into()));
    }
    Ok(RhoConstruction {
        method,
        rho,
        scaling,
        point,
        verified: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonFpWitness {
    pub point: SubspacePoint,
    /// `χ + ψ` with `χ`, `ψ` taken from two different factors; lies in `Γ`
    /// and in `S°`.
    pub ray: Vec<Rational>,
    pub decision: FpDecision,
}

fn first_nonzero_generator(p: &ProductSpace) -> impl Iterator<Item = (usize, &Vec<Rational>)> {
    p.factors().iter().enumerate().filter_map(|(i, f)| {
        f.sigma_c()
            .pieces()
            .iter()
            .find_map(|c| c.generators().first())
            .map(|g| (i, g))
    })
}

fn avoids_blocks(rows: &[Vec<Rational>], p: &ProductSpace) -> Result<bool> {
    let s = Subspace::span(p.total_dim(), rows)?;
    if s.dim() != rows.len() {
        return Ok(false);
    }
    for i in 0..p.factors().len() {
        if !s.intersects_trivially(&p.block_subspace(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Candidate directions for extending a block-avoiding subspace: sums of two
/// coordinate vectors from different blocks, then seeded small-integer
/// vectors.
fn extension_candidates(p: &ProductSpace) -> impl Iterator<Item = Vec<Rational>> + '_ {
    let n = p.total_dim();
    let block_of: Vec<usize> = p
        .blocks()
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.clone().map(move |_| i))
        .collect();
    let pairs = (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)));
    let block_of2 = block_of.clone();
    let sums = pairs
        .filter(move |&(a, b)| block_of2[a] != block_of2[b])
        .map(move |(a, b)| {
            let mut v = vec![Rational::zero(); n];
            v[a] = Rational::one();
            v[b] = Rational::one();
            v
        });
    let random = (0..4096u64).map(move |i| {
        let mut rng = sample_rng(0x5eed, i);
        (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()
    });
    sums.chain(random)
}

/// A virtual subdirect product of codimension `k` that is not finitely
/// presented, built around a ray `χ + ψ ∈ Γ` meeting no factor block.
pub fn construct_nonfp_witness(p: &ProductSpace, k: usize) -> Result<NonFpWitness> {
    p.check_k(k)?;
    let n = p.total_dim();
    if k >= n {
        return Err(Error::InvalidK {
            k,
            min: p.max_rank(),
            max: n - 1,
        });
    }
    let mut sources = first_nonzero_generator(p);
    let (Some((i, chi)), Some((j, psi))) = (sources.next(), sources.next()) else {
        return Err(Error::NoSuitableFactors);
    };
    let chi = p.embed_factor(i, chi)?;
    let psi = p.embed_factor(j, psi)?;
    let ray: Vec<Rational> = chi.iter().zip(&psi).map(|(a, b)| a + b).collect();

    let target = n - k;
    let mut rows = vec![ray.clone()];
    for cand in extension_candidates(p) {
        if rows.len() == target {
            break;
        }
        rows.push(cand);
        if !avoids_blocks(&rows, p)? {
            rows.pop();
        }
    }
    if rows.len() < target {
        return Err(Error::ConstructionFailed(
            "could not extend the ray to a block-avoiding subspace".into(),
        ));
    }
    let point = SubspacePoint::in_space(Subspace::from_independent(n, &rows)?, p)?;
    let gamma = build_gamma(&p.assemble_sigma());
    let decision = is_finitely_presented(&point, &gamma, p)?;
    if decision.finitely_presented {
        return Err(Error::ConstructionFailed("χ + ψ is not detected in Γ ∩ S°".into()));
    }
    Ok(NonFpWitness { point, ray, decision })
}

/// One point drawn from a [`NonFpBox`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxSample {
    pub index: u64,
    pub a: RationalMatrix,
    pub point: SubspacePoint,
    pub decision: FpDecision,
}

/// An open set of non-finitely-presented points: all `[I | A]` in `chart`
/// with every entry of `A` in `(0, 1]`, restricted to virtual subdirect
/// products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonFpBox {
    pub chart: Chart,
    /// Index of the piece of `Γ` whose generators built the chart.
    pub gamma_piece: usize,
    pub piece_dim: usize,
    pub seed: u64,
    pub sample_points: Vec<BoxSample>,
}

pub const BOX_SAMPLE_COUNT: u64 = 10;

impl NonFpBox {
    /// Deterministic sample `index`: entries `a/2^16` with `a ∈ [1, 2^16]`,
    /// redrawn while the point fails to be a virtual subdirect product.
    pub fn sample(&self, p: &ProductSpace, gamma: &ConeUnion, index: u64) -> Result<BoxSample> {
        let n = self.chart.ambient_dim();
        let k = self.chart.k;
        let mut rng = sample_rng(self.seed, index);
        let den: BigInt = BigInt::one() << 16;
        for _ in 0..MAX_SAMPLE_ATTEMPTS {
            let mut a = RationalMatrix::zeros(n - k, k);
            for r in 0..n - k {
                for c in 0..k {
                    a[(r, c)] = Rational::new(BigInt::from(rng.gen_range(1..=1i64 << 16)), den.clone());
                }
            }
            let point = self.chart.point(&a)?;
            if first_block_hit(&point, p)?.is_some() {
                continue;
            }
            let decision = is_finitely_presented(&point, gamma, p)?;
            if decision.finitely_presented {
                return Err(Error::ConstructionFailed(format!(
                    "box point {:?} is finitely presented",
                    point.subspace()
                )));
            }
            return Ok(BoxSample {
                index,
                a,
                point,
                decision,
            });
        }
        Err(Error::DegenerateSampler {
            attempts: MAX_SAMPLE_ATTEMPTS,
        })
    }
}

impl fmt::Display for NonFpBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "all entries of A strictly positive within (0, 1]; chart basis {:?}, k = {}",
            self.chart.basis, self.chart.k
        )
    }
}

/// Builds the chart around a piece of `Γ` of dimension `d > k`: the basis
/// lists `d − k` of the piece's independent generators first, a completion
/// next, and the remaining `k` generators last, so that the first row of any
/// `[I | A]` with `A > 0` is a positive combination of generators.
pub fn construct_nonfp_box(p: &ProductSpace, gamma: &ConeUnion, k: usize, seed: u64) -> Result<NonFpBox> {
    p.check_k(k)?;
    check_dim(p.total_dim(), gamma.ambient_dim())?;
    let gamma_dim = gamma.dim();
    if gamma_dim <= k {
        return Err(Error::TheoremAApplies { gamma_dim, k });
    }
    let n = p.total_dim();
    let (gamma_piece, piece) = gamma
        .pieces()
        .iter()
        .enumerate()
        .find(|(_, c)| c.dim() > k)
        .expect("some piece attains dim Γ");

    let mut independent: Vec<Vec<Rational>> = Vec::new();
    for g in piece.generators() {
        independent.push(g.clone());
        if Subspace::span(n, &independent)?.dim() < independent.len() {
            independent.pop();
        }
    }
    let d = independent.len();
    let (b1, b2) = independent.split_at(k);

    let mut basis: Vec<Vec<Rational>> = b2.to_vec();
    let mut used: Vec<Vec<Rational>> = independent.clone();
    for c in 0..n {
        if used.len() == n {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[c] = Rational::one();
        used.push(e.clone());
        if Subspace::span(n, &used)?.dim() == used.len() {
            basis.push(e);
        } else {
            used.pop();
        }
    }
    basis.extend(b1.iter().cloned());
    let chart = Chart::new(RationalMatrix::from_rows(n, &basis)?, k)?;

    let mut bx = NonFpBox {
        chart,
        gamma_piece,
        piece_dim: d,
        seed,
        sample_points: Vec::new(),
    };
    bx.sample_points = (0..BOX_SAMPLE_COUNT)
        .map(|i| bx.sample(p, gamma, i))
        .collect::<Result<_>>()?;
    Ok(bx)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureReport {
    pub k: usize,
    pub samples: u64,
    pub seed: u64,
    pub vsp_failures: u64,
    pub fp_count: u64,
    pub nonfp_count: u64,
    pub theorem_a_applicable: bool,
    pub gamma_dim: usize,
    pub elapsed_ms: u64,
}

#[derive(Clone, Copy)]
enum Verdict {
    NotVsp,
    Fp,
    NonFp,
}

/// Seeded sampling of points `(seed, 0..samples)` and their verdicts. The
/// counts do not depend on `jobs`.
pub fn run_measure_experiment(
    p: &ProductSpace,
    k: usize,
    samples: u64,
    seed: u64,
    jobs: usize,
) -> Result<MeasureReport> {
    let start = Instant::now();
    let gamma = build_gamma(&p.assemble_sigma());
    let applicable = theorem_a_applicable(p, &gamma, k)?;
    let eval = |i: u64| -> Result<Verdict> {
        let pt = sample_point(p, k, seed, i)?;
        if first_block_hit(&pt, p)?.is_some() {
            return Ok(Verdict::NotVsp);
        }
        Ok(match gamma.meets_subspace(pt.subspace())? {
            None => Verdict::Fp,
            Some(_) => Verdict::NonFp,
        })
    };
    let verdicts: Vec<Verdict> = if jobs <= 1 {
        (0..samples).map(eval).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        pool.install(|| (0..samples).into_par_iter().map(eval).collect::<Result<_>>())?
    };
    let mut report = MeasureReport {
        k,
        samples,
        seed,
        vsp_failures: 0,
        fp_count: 0,
        nonfp_count: 0,
        theorem_a_applicable: applicable,
        gamma_dim: gamma.dim(),
        elapsed_ms: 0,
    };
    for v in verdicts {
        match v {
            Verdict::NotVsp => report.vsp_failures += 1,
            Verdict::Fp => report.fp_count += 1,
            Verdict::NonFp => report.nonfp_count += 1,
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

impl fmt::Display for FpDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "finitely presented"),
            Some(w) => write!(
                f,
                "NOT finitely presented; witness ray = {} (Γ piece {})",
                format_vector(&w.ray),
                w.piece_index
            ),
        }
    }
}

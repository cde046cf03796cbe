//! Exact two-phase simplex over the rationals.
//!
//! Pivoting follows Bland's rule (lowest eligible index for both the entering
//! and the leaving variable), so the method terminates and is deterministic.
//! Infeasible programs come back with Farkas multipliers read off the phase-1
//! duals; unbounded ones with an improving ray.

use num::{One, Signed, Zero};

use crate::error::{check_dim, Result};
use crate::linalg::{dot, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Option<(Sense, Vec<Rational>)>,
    constraints: Vec<Constraint>,
    nonneg: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    /// Pure feasibility problem with a satisfying point.
    Feasible {
        point: Vec<Rational>,
    },
    /// `farkas[i]` multiplies constraint `i` written in `≥` form; see
    /// [`LinearProgram::verify_farkas`].
    Infeasible {
        farkas: Vec<Rational>,
    },
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
    /// `point` is feasible and `point + t·ray` stays feasible for all `t ≥ 0`
    /// while improving the objective without bound.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible { .. })
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible { point } | LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => {
                Some(point)
            }
            LpOutcome::Infeasible { .. } => None,
        }
    }
}

impl LinearProgram {
    /// A program over `num_vars` free variables with no constraints.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: None,
            constraints: Vec::new(),
            nonneg: vec![false; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> Option<(Sense, &[Rational])> {
        self.objective.as_ref().map(|(s, c)| (*s, c.as_slice()))
    }

    pub fn is_nonneg(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn set_all_nonneg(&mut self) {
        self.nonneg.iter_mut().for_each(|b| *b = true);
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn set_objective(&mut self, sense: Sense, coeffs: Vec<Rational>) {
        self.objective = Some((sense, coeffs));
    }

    fn check_shape(&self) -> Result<()> {
        for c in &self.constraints {
            check_dim(self.num_vars, c.coeffs.len())?;
        }
        if let Some((_, c)) = &self.objective {
            check_dim(self.num_vars, c.len())?;
        }
        Ok(())
    }

    /// Exact substitution check of every constraint and sign restriction.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        if x.iter().zip(&self.nonneg).any(|(v, &nn)| nn && v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, x);
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }

    /// Checks a Farkas certificate. Each constraint is first rewritten as
    /// `a·x ≥ b` (negating `≤` rows); `y` must be nonnegative on inequality
    /// rows. The aggregate `Σ yᵢ aᵢ·x ≥ Σ yᵢ bᵢ` is contradictory when its
    /// coefficients vanish on free variables, are `≤ 0` on nonnegative ones,
    /// and the right-hand side is positive.
    pub fn verify_farkas(&self, y: &[Rational]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        let mut agg = vec![Rational::zero(); self.num_vars];
        let mut rhs = Rational::zero();
        for (c, yi) in self.constraints.iter().zip(y) {
            let scale = match c.relation {
                Relation::Ge => yi.clone(),
                Relation::Le => -yi.clone(),
                Relation::Eq => yi.clone(),
            };
            if c.relation != Relation::Eq && yi.is_negative() {
                return false;
            }
            for (a, coeff) in agg.iter_mut().zip(&c.coeffs) {
                *a += &scale * coeff;
            }
            rhs += &scale * &c.rhs;
        }
        let coeffs_ok = agg
            .iter()
            .zip(&self.nonneg)
            .all(|(a, &nn)| if nn { !a.is_positive() } else { a.is_zero() });
        coeffs_ok && rhs.is_positive()
    }

    /// Checks that `ray` is a recession direction that strictly improves the
    /// objective.
    pub fn verify_ray(&self, ray: &[Rational]) -> bool {
        let Some((sense, obj)) = &self.objective else {
            return false;
        };
        if ray.len() != self.num_vars {
            return false;
        }
        if ray.iter().zip(&self.nonneg).any(|(v, &nn)| nn && v.is_negative()) {
            return false;
        }
        let homogeneous_ok = self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, ray);
            match c.relation {
                Relation::Le => !lhs.is_positive(),
                Relation::Eq => lhs.is_zero(),
                Relation::Ge => !lhs.is_negative(),
            }
        });
        let gain = dot(obj, ray);
        homogeneous_ok
            && match sense {
                Sense::Maximize => gain.is_positive(),
                Sense::Minimize => gain.is_negative(),
            }
    }
}

/// Solves `lp` exactly.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.check_shape()?;
    Ok(Tableau::build(lp).run(lp))
}

/// Convenience wrapper: `true` iff the constraint system has a solution.
pub fn is_feasible(lp: &LinearProgram) -> Result<bool> {
    Ok(solve(lp)?.is_feasible())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    /// Structural column for `var`; `negated` marks the negative half of a
    /// split free variable.
    Structural {
        var: usize,
        negated: bool,
    },
    Slack,
    Artificial,
}

struct Tableau {
    /// `rows × (cols + 1)`, right-hand side in the last slot.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    /// Column that formed the identity for each row in the starting basis.
    initial_basis: Vec<usize>,
    /// Original constraint index for each tableau row.
    origin: Vec<usize>,
    /// Sign applied to the original row to make its right-hand side ≥ 0.
    row_sign: Vec<bool>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut kinds = Vec::new();
        for v in 0..lp.num_vars {
            kinds.push(ColKind::Structural { var: v, negated: false });
            if !lp.nonneg[v] {
                kinds.push(ColKind::Structural { var: v, negated: true });
            }
        }
        let n_struct = kinds.len();

        // Normalized rows: (structural coeffs, relation, rhs), rhs ≥ 0.
        let mut rows = Vec::with_capacity(lp.constraints.len());
        let mut row_sign = Vec::with_capacity(lp.constraints.len());
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            let mut coeffs = Vec::with_capacity(n_struct);
            for k in &kinds[..n_struct] {
                if let ColKind::Structural { var, negated } = *k {
                    let a = &c.coeffs[var];
                    coeffs.push(if negated ^ flip { -a.clone() } else { a.clone() });
                }
            }
            let rhs = if flip { -c.rhs.clone() } else { c.rhs.clone() };
            let relation = match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            rows.push((coeffs, relation, rhs));
            row_sign.push(flip);
        }

        // Slack/surplus columns, then artificials.
        let m = rows.len();
        let mut slack_col = vec![None; m];
        for (i, (_, rel, _)) in rows.iter().enumerate() {
            if *rel != Relation::Eq {
                slack_col[i] = Some(kinds.len());
                kinds.push(ColKind::Slack);
            }
        }
        let mut initial_basis = vec![0; m];
        for (i, (_, rel, _)) in rows.iter().enumerate() {
            if *rel == Relation::Le {
                initial_basis[i] = slack_col[i].expect("≤ rows carry a slack");
            } else {
                initial_basis[i] = kinds.len();
                kinds.push(ColKind::Artificial);
            }
        }

        let width = kinds.len();
        let mut t = Vec::with_capacity(m);
        for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
            let mut row = vec![Rational::zero(); width + 1];
            for (j, a) in coeffs.into_iter().enumerate() {
                row[j] = a;
            }
            if let Some(s) = slack_col[i] {
                row[s] = if rel == Relation::Le {
                    Rational::one()
                } else {
                    -Rational::one()
                };
            }
            row[initial_basis[i]] = Rational::one();
            row[width] = rhs;
            t.push(row);
        }

        Tableau {
            t,
            basis: initial_basis.clone(),
            kinds,
            initial_basis,
            origin: (0..m).collect(),
            row_sign,
        }
    }

    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in 0..=w {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (r, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.t[r][j].is_zero() {
                d -= &cost[b] * &self.t[r][j];
            }
        }
        d
    }

    /// Minimizes `cost` over the current tableau. Returns the entering column
    /// if the objective is unbounded below.
    fn minimize(&mut self, cost: &[Rational], allowed: &dyn Fn(ColKind) -> bool) -> Option<usize> {
        let w = self.width();
        loop {
            let entering = (0..w).find(|&j| {
                allowed(self.kinds[j]) && !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative()
            });
            let e = entering?;
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[r][w] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return Some(e),
            }
        }
    }

    fn column_values(&self) -> Vec<Rational> {
        let w = self.width();
        let mut vals = vec![Rational::zero(); w];
        for (r, &b) in self.basis.iter().enumerate() {
            vals[b] = self.t[r][w].clone();
        }
        vals
    }

    fn to_vars(&self, cols: &[Rational], num_vars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); num_vars];
        for (j, k) in self.kinds.iter().enumerate() {
            if let ColKind::Structural { var, negated } = *k {
                if negated {
                    x[var] -= &cols[j];
                } else {
                    x[var] += &cols[j];
                }
            }
        }
        x
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let w = self.width();
        let phase1: Vec<Rational> = self
            .kinds
            .iter()
            .map(|k| {
                if *k == ColKind::Artificial {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let unbounded = self.minimize(&phase1, &|_| true);
        debug_assert!(unbounded.is_none(), "phase 1 is bounded below by 0");

        let infeasibility: Rational = self
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| self.kinds[b] == ColKind::Artificial)
            .fold(Rational::zero(), |acc, (r, _)| acc + &self.t[r][w]);
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible {
                farkas: self.farkas(lp, &phase1),
            };
        }

        self.drive_out_artificials();

        let Some((sense, obj)) = &lp.objective else {
            let point = self.to_vars(&self.column_values(), lp.num_vars);
            return LpOutcome::Feasible { point };
        };
        let cost: Vec<Rational> = self
            .kinds
            .iter()
            .map(|k| match *k {
                ColKind::Structural { var, negated } => {
                    let c = if *sense == Sense::Maximize {
                        -obj[var].clone()
                    } else {
                        obj[var].clone()
                    };
                    if negated {
                        -c
                    } else {
                        c
                    }
                }
                _ => Rational::zero(),
            })
            .collect();
        let not_artificial = |k: ColKind| k != ColKind::Artificial;
        let unbounded = self.minimize(&cost, &not_artificial);
        let point = self.to_vars(&self.column_values(), lp.num_vars);
        match unbounded {
            None => {
                let value = dot(obj, &point);
                LpOutcome::Optimal { point, value }
            }
            Some(e) => {
                let mut dir = vec![Rational::zero(); w];
                dir[e] = Rational::one();
                for (r, &b) in self.basis.iter().enumerate() {
                    dir[b] = -self.t[r][e].clone();
                }
                let ray = self.to_vars(&dir, lp.num_vars);
                LpOutcome::Unbounded { point, ray }
            }
        }
    }

    /// Phase-1 duals `u = c_B B⁻¹` mapped back to the original constraints
    /// in `≥` form.
    fn farkas(&self, lp: &LinearProgram, phase1: &[Rational]) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); lp.constraints.len()];
        for (r, &init) in self.initial_basis.iter().enumerate() {
            let mut u = Rational::zero();
            for (q, &b) in self.basis.iter().enumerate() {
                if !phase1[b].is_zero() && !self.t[q][init].is_zero() {
                    u += &phase1[b] * &self.t[q][init];
                }
            }
            let orig = self.origin[r];
            let mut yi = if self.row_sign[r] { -u } else { u };
            if lp.constraints[orig].relation == Relation::Le {
                yi = -yi;
            }
            y[orig] = yi;
        }
        debug_assert!(lp.verify_farkas(&y), "phase-1 duals must certify infeasibility");
        y
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are redundant and dropped.
    fn drive_out_artificials(&mut self) {
        let w = self.width();
        let mut r = 0;
        while r < self.t.len() {
            if self.kinds[self.basis[r]] != ColKind::Artificial {
                r += 1;
                continue;
            }
            let replacement = (0..w).find(|&j| self.kinds[j] != ColKind::Artificial && !self.t[r][j].is_zero());
            match replacement {
                Some(j) => {
                    self.pivot(r, j);
                    r += 1;
                }
                None => {
                    self.t.remove(r);
                    self.basis.remove(r);
                    self.initial_basis.remove(r);
                    self.origin.remove(r);
                    self.row_sign.remove(r);
                }
            }
        }
    }
}

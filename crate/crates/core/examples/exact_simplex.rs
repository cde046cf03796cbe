//! Exact two-phase simplex: an optimum, an infeasible system with its Farkas
//! multipliers, and an unbounded program with a recession ray.
//!
//! cargo run --example exact_simplex

use subdirect::linalg::{format_vector, rat, ratio};
use subdirect::lp::{self, LinearProgram, LpOutcome, Relation, Sense};

fn show(name: &str, p: &LinearProgram) {
    match lp::solve(p).expect("well-formed program") {
        LpOutcome::Optimal { point, value } => println!("{name}: optimum {value} at {}", format_vector(&point)),
        LpOutcome::Feasible { point } => println!("{name}: feasible at {}", format_vector(&point)),
        LpOutcome::Infeasible { farkas } => {
            println!(
                "{name}: infeasible, Farkas y = {} (verifies: {})",
                format_vector(&farkas),
                p.verify_farkas(&farkas)
            )
        }
        LpOutcome::Unbounded { point, ray } => {
            println!(
                "{name}: unbounded from {} along {}",
                format_vector(&point),
                format_vector(&ray)
            )
        }
    }
}

fn main() {
    // max x + y  s.t.  x + 2y ≤ 4,  3x + y ≤ 6,  x, y ≥ 0
    let mut p = LinearProgram::new(2);
    p.set_all_nonneg();
    p.add_constraint(vec![rat(1), rat(2)], Relation::Le, rat(4));
    p.add_constraint(vec![rat(3), rat(1)], Relation::Le, rat(6));
    p.set_objective(Sense::Maximize, vec![rat(1), rat(1)]);
    show("bounded", &p);

    // x ≥ 1 and x ≤ 1/2
    let mut q = LinearProgram::new(1);
    q.add_constraint(vec![rat(1)], Relation::Ge, rat(1));
    q.add_constraint(vec![rat(1)], Relation::Le, ratio(1, 2));
    show("contradiction", &q);

    // max y  s.t.  x − y ≤ 1,  x, y ≥ 0
    let mut r = LinearProgram::new(2);
    r.set_all_nonneg();
    r.add_constraint(vec![rat(1), rat(-1)], Relation::Le, rat(1));
    r.set_objective(Sense::Maximize, vec![rat(0), rat(1)]);
    show("unbounded", &r);
}

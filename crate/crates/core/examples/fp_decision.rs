//! Builds Γ for two rank-1 factors and decides finite presentability for
//! the antidiagonal, the diagonal and an axis.
//!
//! cargo run --example fp_decision

use subdirect::linalg::vector;
use subdirect::{build_gamma, is_finitely_presented, ConeUnion, ConvexCone, FactorSpec, ProductSpace, SubspacePoint};

fn main() -> subdirect::Result<()> {
    let ray = || ConeUnion::new(1, vec![ConvexCone::from_i64(1, &[&[1]])]).unwrap();
    let p = ProductSpace::new(vec![FactorSpec::new("G1", 1, ray())?, FactorSpec::new("G2", 1, ray())?])?;
    let gamma = build_gamma(&p.assemble_sigma());
    println!("Γ has {} pieces, dim {}", gamma.pieces().len(), gamma.dim());

    for line in [[1, -1], [1, 1], [1, 0]] {
        let pt = SubspacePoint::from_rows(2, &[vector(&line)])?;
        match is_finitely_presented(&pt, &gamma, &p) {
            Ok(d) => println!("span{line:?}: {d}"),
            Err(e) => println!("span{line:?}: {e}"),
        }
    }
    Ok(())
}

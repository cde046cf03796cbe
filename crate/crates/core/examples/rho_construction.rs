//! Builds ρ for two planar factors with different Σ^c so that the graph of ρ
//! is a finitely presented point with k = m.
//!
//! cargo run --example rho_construction

use subdirect::linalg::format_vector;
use subdirect::{construct_rho, ConeUnion, ConvexCone, FactorSpec, ProductSpace};

fn main() -> subdirect::Result<()> {
    let a = ConeUnion::new(2, vec![ConvexCone::from_i64(2, &[&[1, 0], &[1, 1]])])?;
    let b = ConeUnion::new(
        2,
        vec![
            ConvexCone::from_i64(2, &[&[0, 1]]),
            ConvexCone::from_i64(2, &[&[-1, 3]]),
        ],
    )?;
    let p = ProductSpace::new(vec![FactorSpec::new("A", 2, a)?, FactorSpec::new("B", 2, b)?])?;
    let r = construct_rho(&p)?;
    println!("method {:?}", r.method);
    if let Some(s) = &r.scaling {
        println!("v1 = {}, v2 = {}", format_vector(&s.v1), format_vector(&s.v2));
        println!("eps1 = {}, eps2 = {}, lambda = {}", s.eps1, s.eps2, s.lambda);
    }
    println!("rho = {:?}", r.rho);
    println!("graph basis = {:?}", r.point.subspace().basis());
    println!("verified: {}", r.verified);
    Ok(())
}

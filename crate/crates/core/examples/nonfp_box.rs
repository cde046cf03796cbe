//! A non-FP witness and a chart box of non-FP points for a product where
//! dim Γ exceeds k.
//!
//! cargo run --example nonfp_box

use subdirect::io::parse_problem;
use subdirect::linalg::format_vector;
use subdirect::{build_gamma, construct_nonfp_box, construct_nonfp_witness};

const F4: &str = include_str!("../fixtures/f4.json");

fn main() -> subdirect::Result<()> {
    let p = parse_problem(F4)?;
    let gamma = build_gamma(&p.assemble_sigma());
    println!("N = {}, m = {}, dim Γ = {}", p.total_dim(), p.max_rank(), gamma.dim());

    let w = construct_nonfp_witness(&p, 2)?;
    println!(
        "witness ray {} in {:?}",
        format_vector(&w.ray),
        w.point.subspace().basis()
    );

    let b = construct_nonfp_box(&p, &gamma, 2, 0)?;
    println!("{b}");
    println!("built on Γ piece {} of dimension {}", b.gamma_piece, b.piece_dim);
    for s in &b.sample_points {
        println!("sample {}: A = {:?} → {}", s.index, s.a, s.decision);
    }
    Ok(())
}

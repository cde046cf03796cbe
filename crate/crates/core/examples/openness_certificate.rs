//! Certifies a neighbourhood of an FP point and checks a few perturbations
//! at the edge of the emitted radius.
//!
//! cargo run --example openness_certificate

use subdirect::grassmann::is_virtual_subdirect;
use subdirect::io::{parse_problem, parse_subspace};
use subdirect::{build_gamma, is_finitely_presented, openness_certificate, RationalMatrix};

const F1: &str = include_str!("../fixtures/f1.json");

fn main() -> subdirect::Result<()> {
    let p = parse_problem(F1)?;
    let gamma = build_gamma(&p.assemble_sigma());
    let pt = parse_subspace(r#"{"basis": [["1", "-1"]]}"#, &p)?;
    let cert = openness_certificate(&pt, &gamma, &p)?;
    for b in &cert.per_piece {
        println!("piece {}: distance {} bound {}", b.piece, b.distance, b.bound);
    }
    if let Some(m) = &cert.vsp_margin {
        println!("vsp margin {m}");
    }
    println!("delta = {}", cert.delta);

    for sign in [1, -1] {
        let mut d = RationalMatrix::zeros(1, 2);
        d[(0, 1)] = &cert.delta * subdirect::linalg::rat(sign);
        let moved = pt.perturbed(&d)?;
        println!(
            "basis {:?}: vsp {}, FP {}",
            moved.subspace().basis(),
            is_virtual_subdirect(&moved, &p)?,
            is_finitely_presented(&moved, &gamma, &p)?.finitely_presented
        );
    }
    Ok(())
}

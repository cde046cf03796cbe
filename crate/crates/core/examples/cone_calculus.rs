//! Cone membership, pairwise intersection, subspace intersection and the
//! tameness check on small planar examples.
//!
//! cargo run --example cone_calculus

use subdirect::cone::cones_meet_nontrivially;
use subdirect::linalg::{format_vector, vector};
use subdirect::{ConeUnion, ConvexCone, Subspace};

fn main() {
    let quadrant = ConvexCone::from_i64(2, &[&[1, 0], &[0, 1]]);
    let wedge = ConvexCone::from_i64(2, &[&[1, 1], &[-1, 2]]);
    for x in [[2, 3], [-1, 1]] {
        println!("{:?} in quadrant: {}", x, quadrant.contains(&vector(&x)).unwrap());
    }

    match cones_meet_nontrivially(&quadrant, &wedge).unwrap() {
        Some(w) => println!("quadrant ∩ wedge contains {}", format_vector(&w.ray)),
        None => println!("quadrant ∩ wedge = {{0}}"),
    }

    let union = ConeUnion::new(2, vec![quadrant.clone(), ConvexCone::from_i64(2, &[&[-1, -2]])]).unwrap();
    for line in [[1, -1], [1, 2]] {
        let s = Subspace::span(2, &[vector(&line)]).unwrap();
        match union.meets_subspace(&s).unwrap() {
            Some(w) => println!(
                "span{:?} meets piece {} at {}",
                line,
                w.piece_index,
                format_vector(&w.ray)
            ),
            None => println!("span{:?} meets the union only at 0", line),
        }
    }

    println!("union tame: {}", union.is_tame());
    let wild = ConeUnion::new(2, vec![quadrant, ConvexCone::from_i64(2, &[&[-1, 0]])]).unwrap();
    if let Some((i, j, ray)) = wild.antipodal_pair() {
        println!("not tame: pieces {i} and {j} contain ±{}", format_vector(&ray));
    }
}

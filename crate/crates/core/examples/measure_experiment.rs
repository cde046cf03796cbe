//! Grassmannian sampling on three ray factors in the plane, once with
//! dim Γ ≤ k and once with dim Γ > k.
//!
//! cargo run --release --example measure_experiment [samples] [jobs]

use subdirect::io::{parse_problem, serialize_report};
use subdirect::run_measure_experiment;

const F1: &str = include_str!("../fixtures/f1.json");
const F2: &str = include_str!("../fixtures/f2.json");

fn main() -> subdirect::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let jobs = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    for (name, text, k) in [("F2", F2, 4), ("F1", F1, 1)] {
        let p = parse_problem(text)?;
        let r = run_measure_experiment(&p, k, samples, 42, jobs)?;
        println!("{name}, k = {k}:\n{}", serialize_report(&r));
    }
    Ok(())
}

//! Exact polyhedral decisions about finite presentability of subdirect
//! products of finitely presented metabelian groups.
//!
//! A product space is described by its factors: each has a rank `n_i` and
//! the complement `Σ^c` of its BNS invariant, given as a finite union of
//! rational polyhedral cones. A point of the Grassmannian is a rational
//! subspace `S°` of the total space `Q^N`. The library decides whether the
//! subspace is a virtual subdirect product, whether it is finitely
//! presented, certifies open neighbourhoods of FP points and builds explicit
//! non-FP points and boxes.
//!
//! All arithmetic is over `BigRational`; no floating point is used in any
//! decision.

pub mod cli;
pub mod cone;
pub mod decisions;
pub mod error;
pub mod grassmann;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod product;

pub use cone::{ConeUnion, ConvexCone, IntersectionWitness};
pub use decisions::{
    construct_nonfp_box, construct_nonfp_witness, construct_rho, is_finitely_presented, openness_certificate,
    run_measure_experiment, FpDecision, MeasureReport, NonFpBox, OpennessCertificate, RhoConstruction,
};
pub use error::{Error, Result};
pub use grassmann::{Chart, SubspacePoint};
pub use linalg::{Rational, RationalMatrix, Subspace};
pub use lp::{LinearProgram, LpOutcome};
pub use product::{build_gamma, FactorSpec, ProductSpace};

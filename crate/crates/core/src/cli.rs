//! Command-line front end. `run` is what the `subdirect` binary calls; it
//! can also be driven in-process with any writer.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::decisions::{
    construct_nonfp_box, construct_nonfp_witness, construct_rho, is_finitely_presented, openness_certificate,
    run_measure_experiment,
};
use crate::error::{Error, Result};
use crate::grassmann::{first_block_hit, SubspacePoint};
use crate::io::{self, box_json, certificate_json, rho_json};
use crate::linalg::format_vector;
use crate::product::{build_gamma, theorem_a_applicable, ProductSpace, Severity};

#[derive(Debug, Parser)]
#[command(
    name = "subdirect",
    version,
    about = "Finite presentability of metabelian subdirect products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a problem file and report diagnostics for each factor.
    Validate { problem: PathBuf },
    /// Print the pieces of Γ and its dimension.
    Gamma { problem: PathBuf },
    /// Decide whether a subspace is a virtual subdirect product.
    CheckVsp {
        problem: PathBuf,
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Decide finite presentability of a subspace.
    CheckFp {
        problem: PathBuf,
        #[arg(long)]
        subspace: PathBuf,
        /// Also print a radius of FP points around the subspace.
        #[arg(long)]
        certify: bool,
    },
    /// Check that every factor has tame Σ^c.
    Tame { problem: PathBuf },
    /// Build an FP point with k = m as the graph of a linear map ρ.
    ConstructRho { problem: PathBuf },
    /// Build a non-FP virtual subdirect product of codimension k.
    NonfpWitness {
        problem: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Build a chart box of non-FP points when dim Γ > k.
    NonfpBox {
        problem: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample the Grassmannian and count FP points.
    Measure {
        problem: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<ProductSpace> {
    io::parse_problem(&read(path)?)
}

fn load_point(problem: &Path, subspace: &Path) -> Result<(ProductSpace, SubspacePoint)> {
    let p = load_problem(problem)?;
    let pt = io::parse_subspace(&read(subspace)?, &p)?;
    Ok((p, pt))
}

fn write_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(write_err)?
    };
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code: 0 success, 1 usage, 2 input, 3 precondition, 4 refusal, 5 failure.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Validate { problem } => {
            let p = io::parse_problem_unchecked(&read(&problem)?)?;
            let diags = p.diagnostics();
            for d in &diags {
                outln!(out, "{d}");
            }
            let ok = diags.iter().all(|d| d.severity < Severity::Error);
            outln!(
                out,
                "validate [Tameness: Σ^c ∩ −Σ^c = {{0}} for each factor] → {} (N = {}, m = {}, {} factors)",
                if ok { "ok" } else { "invalid" },
                p.total_dim(),
                p.max_rank(),
                p.factors().len()
            );
            Ok(if ok { 0 } else { 2 })
        }
        Command::Gamma { problem } => {
            let p = load_problem(&problem)?;
            let gamma = build_gamma(&p.assemble_sigma());
            for (i, c) in gamma.pieces().iter().enumerate() {
                let gens: Vec<String> = c.generators().iter().map(|g| format_vector(g)).collect();
                outln!(out, "piece {i}: cone{{{}}} dim {}", gens.join(","), c.dim());
            }
            outln!(
                out,
                "gamma [Definition: Γ = Σ^c + Σ^c] → {} pieces, dim Γ = {}",
                gamma.pieces().len(),
                gamma.dim()
            );
            Ok(0)
        }
        Command::CheckVsp { problem, subspace } => {
            let (p, pt) = load_point(&problem, &subspace)?;
            match first_block_hit(&pt, &p)? {
                None => outln!(
                    out,
                    "vsp-check [Lemma: S° ∩ G_i* = {{0}} for each factor] → virtual subdirect product"
                ),
                Some(i) => outln!(
                    out,
                    "vsp-check [Lemma: S° ∩ G_i* = {{0}} for each factor] → NOT a virtual subdirect product (S° meets the block of {})",
                    p.factors()[i].name
                ),
            }
            Ok(0)
        }
        Command::CheckFp {
            problem,
            subspace,
            certify,
        } => {
            let (p, pt) = load_point(&problem, &subspace)?;
            let gamma = build_gamma(&p.assemble_sigma());
            let decision = is_finitely_presented(&pt, &gamma, &p)?;
            outln!(out, "fp-check [Lemma: Γ ∩ S° = {{0}}] → {decision}");
            if certify {
                if decision.finitely_presented {
                    let cert = openness_certificate(&pt, &gamma, &p)?;
                    outln!(
                        out,
                        "openness [Openness: FP virtual subdirect products form an open set] → delta = {}",
                        cert.delta
                    );
                    outln!(out, "{}", io::pretty(&certificate_json(&cert)));
                } else {
                    outln!(out, "openness [Openness: FP virtual subdirect products form an open set] → not applicable to a non-FP point");
                }
            }
            Ok(0)
        }
        Command::Tame { problem } => {
            let p = io::parse_problem_unchecked(&read(&problem)?)?;
            let mut all = true;
            for f in p.factors() {
                match f.sigma_c().antipodal_pair() {
                    None => outln!(out, "{}: tame", f.name),
                    Some((i, j, ray)) => {
                        all = false;
                        outln!(
                            out,
                            "{}: NOT tame (pieces {i} and {j} contain ±{})",
                            f.name,
                            format_vector(&ray)
                        );
                    }
                }
            }
            outln!(
                out,
                "tame [Tameness: Σ^c ∩ −Σ^c = {{0}}] → {}",
                if all {
                    "all factors tame"
                } else {
                    "some factor is not tame"
                }
            );
            Ok(0)
        }
        Command::ConstructRho { problem } => {
            let p = load_problem(&problem)?;
            let r = construct_rho(&p)?;
            outln!(
                out,
                "construct-rho [Theorem: for m ≤ 2 the graph {{w + ρ(w)}} is an FP virtual subdirect product with k = m] → {}",
                if r.verified { "verified FP (Σ₁^c ∩ ρ(Σ₂^c) = {0})" } else { "construction not verified" }
            );
            outln!(out, "{}", io::pretty(&rho_json(&r)));
            Ok(if r.verified { 0 } else { 5 })
        }
        Command::NonfpWitness { problem, k } => {
            let p = load_problem(&problem)?;
            let w = construct_nonfp_witness(&p, k)?;
            outln!(
                out,
                "nonfp-witness [Theorem: non-FP virtual subdirect products exist for m ≤ k < N] → {}",
                w.decision
            );
            outln!(out, "{}", io::serialize_subspace(w.point.subspace()));
            Ok(0)
        }
        Command::NonfpBox { problem, k, seed } => {
            let p = load_problem(&problem)?;
            let gamma = build_gamma(&p.assemble_sigma());
            let b = construct_nonfp_box(&p, &gamma, k, seed)?;
            let all = b.sample_points.iter().all(|s| !s.decision.finitely_presented);
            outln!(
                out,
                "nonfp-box [Theorem: dim Γ > k gives a nonempty open set of non-FP points] → {}; {}/{} samples non-FP",
                b,
                b.sample_points
                    .iter()
                    .filter(|s| !s.decision.finitely_presented)
                    .count(),
                b.sample_points.len()
            );
            outln!(out, "{}", io::pretty(&box_json(&b)));
            Ok(if all { 0 } else { 5 })
        }
        Command::Measure {
            problem,
            k,
            samples,
            seed,
            jobs,
            report,
        } => {
            let p = load_problem(&problem)?;
            let gamma = build_gamma(&p.assemble_sigma());
            let applicable = theorem_a_applicable(&p, &gamma, k)?;
            let r = run_measure_experiment(&p, k, samples, seed, jobs)?;
            outln!(
                out,
                "measure [Theorem: dim Γ ≤ k makes FP points generic] → applicable = {applicable}; fp {} / non-fp {} / vsp failures {} of {}",
                r.fp_count,
                r.nonfp_count,
                r.vsp_failures,
                r.samples
            );
            let text = io::serialize_report(&r);
            match report {
                Some(path) => {
                    std::fs::write(&path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
                }
                None => outln!(out, "{text}"),
            }
            Ok(0)
        }
    }
}

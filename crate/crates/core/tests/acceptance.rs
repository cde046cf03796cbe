//! Acceptance run: one PASS/FAIL line per criterion, each under its time
//! limit. Exits nonzero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subdirect::cone::{cone_meets_subspace, cones_meet_nontrivially};
use subdirect::decisions::RhoMethod;
use subdirect::grassmann::{is_virtual_subdirect, sample_point};
use subdirect::io::{parse_problem, parse_report, without_elapsed};
use subdirect::lp::{self, LinearProgram, LpOutcome, Relation, Sense};
use subdirect::{
    build_gamma, construct_nonfp_box, construct_rho, is_finitely_presented, openness_certificate, ConeUnion,
    ConvexCone, FactorSpec, ProductSpace, RationalMatrix, Subspace,
};

type Outcome = Result<String, String>;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_subdirect"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn verdict(text: &str) -> String {
    text.lines().find(|l| l.contains(" → ")).unwrap_or("").to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(name: &str) -> ProductSpace {
    parse_problem(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let f1 = fixture("f1.json");
    let (_, a) = cli(&["check-fp", &f1, "--subspace", &fixture("f1_antidiagonal.json")]);
    let (_, b) = cli(&["check-fp", &f1, "--subspace", &fixture("f1_diagonal.json")]);
    let (_, c) = cli(&["check-vsp", &f1, "--subspace", &fixture("f1_axis.json")]);
    ensure(
        verdict(&a) == "fp-check [Lemma: Γ ∩ S° = {0}] → finitely presented",
        || a.clone(),
    )?;
    ensure(
        verdict(&b).starts_with("fp-check [Lemma: Γ ∩ S° = {0}] → NOT finitely presented; witness ray = (1,1) "),
        || b.clone(),
    )?;
    ensure(verdict(&c).contains("→ NOT a virtual subdirect product"), || {
        c.clone()
    })?;
    Ok("FP, non-FP with witness (1,1), vsp false".into())
}

fn rand_q(rng: &mut ChaCha8Rng) -> Q {
    qr(rng.gen_range(-4..=4), rng.gen_range(1..=4))
}

fn rand_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Q> {
    (0..dim).map(|_| rand_q(rng)).collect()
}

fn rand_gens(rng: &mut ChaCha8Rng, dim: usize, max: usize) -> Vec<Vec<Q>> {
    let n = rng.gen_range(1..=max);
    (0..n).map(|_| rand_vec(rng, dim)).collect()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let instances = 250;
    let mut positives = [0usize; 4];
    for t in 0..instances {
        let dim = rng.gen_range(1..=3);
        let a = rand_gens(&mut rng, dim, 4);
        let b = rand_gens(&mut rng, dim, 3);
        let x = rand_vec(&mut rng, dim);
        let ca = ConvexCone::new(dim, a.clone()).unwrap();
        let cb = ConvexCone::new(dim, b.clone()).unwrap();

        let got = ca.contains(&x).unwrap();
        ensure(got == cone_contains(&a, &x), || {
            format!("cone_contains disagrees on instance {t}")
        })?;
        positives[0] += got as usize;

        let got = cones_meet_nontrivially(&ca, &cb).unwrap().is_some();
        ensure(got == cones_meet(&a, &b, dim), || {
            format!("cones_meet_nontrivially disagrees on instance {t}")
        })?;
        positives[1] += got as usize;

        let pieces: Vec<Vec<Vec<Q>>> = (0..rng.gen_range(1..=3)).map(|_| rand_gens(&mut rng, dim, 3)).collect();
        let union = ConeUnion::new(
            dim,
            pieces
                .iter()
                .map(|g| ConvexCone::new(dim, g.clone()).unwrap())
                .collect(),
        )
        .unwrap();
        let w: Vec<Vec<Q>> = (0..rng.gen_range(0..dim)).map(|_| rand_vec(&mut rng, dim)).collect();
        let s = Subspace::span(dim, &w).unwrap();
        let got = union.meets_subspace(&s).unwrap().is_some();
        let expected = pieces.iter().any(|g| cone_meets_span(g, &w, dim));
        ensure(got == expected, || {
            format!("union_meets_subspace disagrees on instance {t}")
        })?;
        for g in &pieces {
            let single = cone_meets_subspace(&ConvexCone::new(dim, g.clone()).unwrap(), &s)
                .unwrap()
                .is_some();
            ensure(single == cone_meets_span(g, &w, dim), || {
                format!("cone_meets_subspace disagrees on instance {t}")
            })?;
        }
        positives[2] += got as usize;

        let got = union.is_tame();
        ensure(got == union_is_tame(&pieces, dim), || {
            format!("union_is_tame disagrees on instance {t}")
        })?;
        positives[3] += got as usize;
    }
    Ok(format!(
        "{instances} instances x 4 operations agree (true counts: contains {}, meet {}, subspace {}, tame {})",
        positives[0], positives[1], positives[2], positives[3]
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut opt, mut inf, mut unb) = (0, 0, 0);
    for t in 0..100 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=8);
        let rows: Vec<(Vec<Q>, i8, Q)> = (0..m)
            .map(|_| {
                let kind = [-1i8, -1, 1, 1, 0][rng.gen_range(0..5)];
                (rand_vec(&mut rng, n), kind, rand_q(&mut rng))
            })
            .collect();
        let c = rand_vec(&mut rng, n);
        let mut p = LinearProgram::new(n);
        p.set_all_nonneg();
        for (a, kind, b) in &rows {
            let rel = match kind {
                -1 => Relation::Le,
                0 => Relation::Eq,
                _ => Relation::Ge,
            };
            p.add_constraint(a.clone(), rel, b.clone());
        }
        p.set_objective(Sense::Maximize, c.clone());
        let got = lp::solve(&p).map_err(|e| format!("LP {t}: {e}"))?;
        match (lp_oracle(&rows, &c), got) {
            (OracleLp::Optimal(v), LpOutcome::Optimal { point, value }) => {
                ensure(value == v && p.is_feasible_point(&point), || {
                    format!("LP {t}: optimum mismatch")
                })?;
                opt += 1;
            }
            (OracleLp::Infeasible, LpOutcome::Infeasible { farkas }) => {
                ensure(p.verify_farkas(&farkas), || format!("LP {t}: Farkas certificate fails"))?;
                inf += 1;
            }
            (OracleLp::Unbounded, LpOutcome::Unbounded { point, ray }) => {
                ensure(p.verify_ray(&ray) && p.is_feasible_point(&point), || {
                    format!("LP {t}: bad ray")
                })?;
                unb += 1;
            }
            (e, g) => return Err(format!("LP {t}: oracle {e:?}, simplex {g:?}")),
        }
    }
    Ok(format!(
        "100 LPs match ({opt} optimal, {inf} infeasible with verified Farkas, {unb} unbounded)"
    ))
}

fn criterion_4() -> Outcome {
    let mut instances = 0;
    let mut checks = 0;
    for name in ["f1.json", "f2.json", "f3.json", "f4.json"] {
        let p = load(name);
        let gamma = build_gamma(&p.assemble_sigma());
        let ks: Vec<usize> = (p.max_rank()..p.total_dim()).collect();
        let mut found = 0;
        for index in 0..1000u64 {
            if found == 5 {
                break;
            }
            let k = ks[index as usize % ks.len()];
            let pt = sample_point(&p, k, 4, index).map_err(|e| e.to_string())?;
            if !is_virtual_subdirect(&pt, &p).unwrap()
                || !is_finitely_presented(&pt, &gamma, &p).unwrap().finitely_presented
            {
                continue;
            }
            let cert = openness_certificate(&pt, &gamma, &p).map_err(|e| format!("{name}: {e}"))?;
            let b = pt.subspace().basis();
            let mut rng = ChaCha8Rng::seed_from_u64(index);
            for trial in 0..100 {
                let mut delta = RationalMatrix::zeros(b.nrows(), b.ncols());
                for i in 0..b.nrows() {
                    for j in 0..b.ncols() {
                        delta[(i, j)] = &cert.delta * qr(rng.gen_range(-1000..=1000), 1000);
                    }
                }
                let moved = pt.perturbed(&delta).unwrap();
                ensure(is_virtual_subdirect(&moved, &p).unwrap(), || {
                    format!("{name} point {index} trial {trial}: vsp lost")
                })?;
                ensure(
                    is_finitely_presented(&moved, &gamma, &p).unwrap().finitely_presented,
                    || format!("{name} point {index} trial {trial}: FP lost"),
                )?;
                checks += 1;
            }
            found += 1;
            instances += 1;
        }
        ensure(found == 5, || format!("{name}: only {found} FP instances found"))?;
    }
    ensure(instances >= 20, || format!("only {instances} instances"))?;
    Ok(format!(
        "{instances} FP instances, {checks} perturbations within δ, 0 violations"
    ))
}

fn planar(name: &str, pieces: &[Vec<Vec<Q>>]) -> FactorSpec {
    let cones = pieces.iter().map(|g| ConvexCone::new(2, g.clone()).unwrap()).collect();
    FactorSpec::new(name, 2, ConeUnion::new(2, cones).unwrap()).unwrap()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let random_tame = |rng: &mut ChaCha8Rng| loop {
        let pieces: Vec<Vec<Vec<Q>>> = (0..rng.gen_range(1..=2))
            .map(|_| {
                (0..rng.gen_range(1..=2))
                    .map(|_| vec![q(rng.gen_range(-3..=3)), q(rng.gen_range(-3..=3))])
                    .collect()
            })
            .collect();
        if union_is_tame(&pieces, 2) {
            return pieces;
        }
    };
    let mut methods = [0usize; 3];
    for t in 0..50 {
        let a = random_tame(&mut rng);
        let b = random_tame(&mut rng);
        let p = ProductSpace::new(vec![planar("A", &a), planar("B", &b)]).unwrap();
        let r = construct_rho(&p).map_err(|e| format!("problem {t}: {e}"))?;
        ensure(r.verified, || format!("problem {t}: not verified"))?;
        for x in &a {
            for y in &b {
                let image: Vec<Vec<Q>> = y.iter().map(|v| r.rho.mul_vec(v).unwrap()).collect();
                ensure(!cones_meet(x, &image, 2), || format!("problem {t}: Δ1 ∩ ρ(Δ2) ≠ 0"))?;
            }
        }
        methods[r.method as usize] += 1;
    }
    let iso = load("f1.json");
    let r = construct_rho(&iso).map_err(|e| e.to_string())?;
    ensure(r.verified && r.method == RhoMethod::Negation, || {
        "F1 not by negation".into()
    })?;
    ensure(r.rho == RationalMatrix::from_i64(&[&[-1]]), || "F1 ρ ≠ −I".into())?;
    let same = vec![vec![vec![q(1), q(0)], vec![q(1), q(1)]]];
    let p2 = ProductSpace::new(vec![planar("A", &same), planar("B", &same)]).unwrap();
    let r2 = construct_rho(&p2).map_err(|e| e.to_string())?;
    ensure(
        r2.verified && r2.rho == RationalMatrix::from_i64(&[&[-1, 0], &[0, -1]]),
        || "rank-2 isomorphic case".into(),
    )?;
    Ok(format!(
        "50/50 random planar pairs verified (negation {}, sign {}, angular scaling {}); isomorphic cases give ρ = −I",
        methods[0], methods[1], methods[2]
    ))
}

fn measure(problem: &str, k: &str, samples: &str, jobs: &str) -> Result<(String, subdirect::MeasureReport), String> {
    let (code, out) = cli(&[
        "measure",
        &fixture(problem),
        "--k",
        k,
        "--samples",
        samples,
        "--seed",
        "42",
        "--jobs",
        jobs,
    ]);
    ensure(code == 0, || out.clone())?;
    let json = &out[out.find('{').ok_or("no report")?..];
    let r = parse_report(json).map_err(|e| e.to_string())?;
    Ok((json.to_string(), r))
}

fn criterion_6() -> Outcome {
    let (_, r) = measure("f2.json", "4", "10000", "1")?;
    ensure(r.vsp_failures == 0 && r.nonfp_count == 0 && r.samples == 10000, || {
        format!("{r:?}")
    })?;
    ensure(r.theorem_a_applicable && r.gamma_dim == 2, || format!("{r:?}"))?;
    Ok(format!("vsp_failures 0, nonfp_count 0, fp_count {}", r.fp_count))
}

fn criterion_7() -> Outcome {
    let f1 = fixture("f1.json");
    let (code, out) = cli(&["nonfp-witness", &f1, "--k", "1"]);
    ensure(code == 0 && verdict(&out).contains("NOT finitely presented"), || {
        out.clone()
    })?;
    let (code, out) = cli(&["nonfp-box", &f1, "--k", "1"]);
    ensure(code == 0 && verdict(&out).ends_with("10/10 samples non-FP"), || {
        out.clone()
    })?;
    let p = load("f1.json");
    let gamma = build_gamma(&p.assemble_sigma());
    let b = construct_nonfp_box(&p, &gamma, 1, 0).map_err(|e| e.to_string())?;
    for s in &b.sample_points {
        ensure(
            is_virtual_subdirect(&s.point, &p).unwrap() && !s.decision.finitely_presented,
            || format!("sample {}", s.index),
        )?;
    }
    for i in 0..100 {
        let s = b.sample(&p, &gamma, 1000 + i).map_err(|e| e.to_string())?;
        ensure(
            is_virtual_subdirect(&s.point, &p).unwrap()
                && !is_finitely_presented(&s.point, &gamma, &p).unwrap().finitely_presented,
            || format!("extra sample {i} is FP"),
        )?;
    }
    Ok("witness verified; box 10/10 non-FP; 100/100 extra samples non-FP".into())
}

fn criterion_8() -> Outcome {
    let (_, r) = measure("f1.json", "1", "10000", "1")?;
    ensure((3000..=7000).contains(&r.nonfp_count) && r.vsp_failures == 0, || {
        format!("{r:?}")
    })?;
    ensure(!r.theorem_a_applicable, || {
        "dimension condition unexpectedly holds".into()
    })?;
    Ok(format!("nonfp_count {} of 10000", r.nonfp_count))
}

fn criterion_9() -> Outcome {
    for (problem, k) in [("f2.json", "4"), ("f1.json", "1")] {
        let (a, _) = measure(problem, k, "10000", "1")?;
        let (b, _) = measure(problem, k, "10000", "1")?;
        let (c, _) = measure(problem, k, "10000", "4")?;
        ensure(without_elapsed(&a) == without_elapsed(&b), || {
            format!("{problem}: repeat differs")
        })?;
        ensure(without_elapsed(&a) == without_elapsed(&c), || {
            format!("{problem}: --jobs 4 differs")
        })?;
    }
    let f1 = fixture("f1.json");
    for args in [
        vec!["nonfp-witness", &f1, "--k", "1"],
        vec!["nonfp-box", &f1, "--k", "1"],
    ] {
        ensure(cli(&args) == cli(&args), || format!("{} output differs", args[0]))?;
    }
    Ok("measure reports identical across repeats and --jobs 4; witness and box output identical".into())
}

fn main() {
    // `cargo test` passes harness flags such as `--quiet`; a positional
    // argument filters criteria by number.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    type Criterion = (usize, u64, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        (1, 1, criterion_1),
        (2, 120, criterion_2),
        (3, 60, criterion_3),
        (4, 120, criterion_4),
        (5, 60, criterion_5),
        (6, 300, criterion_6),
        (7, 60, criterion_7),
        (8, 300, criterion_8),
        (9, 900, criterion_9),
    ];
    let mut failed = 0;
    for (n, limit, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| x == &n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(limit);
        let (status, detail) = match (&result, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over time limit: {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {n}: {status} ({:.2}s, limit {limit}s) {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

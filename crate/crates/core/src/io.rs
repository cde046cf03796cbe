//! JSON problem, subspace and report files. Rationals travel as strings
//! `"p"` or `"p/q"`; nothing on the wire is floating point.

use std::fmt;

use num::{BigInt, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::cone::{ConeUnion, ConvexCone, IntersectionWitness};
use crate::decisions::{MeasureReport, NonFpBox, OpennessCertificate, RhoConstruction};
use crate::error::{Error, Result};
use crate::grassmann::SubspacePoint;
use crate::linalg::{Rational, RationalMatrix, Subspace};
use crate::product::{FactorSpec, ProductSpace};

/// Parses `-?digits(/digits)?` with a nonzero denominator.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = num.strip_prefix('-').unwrap_or(num);
    let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(digits) || den.is_some_and(|d| !all_digits(d)) {
        return Err(format!("malformed rational {s:?}"));
    }
    let n: BigInt = num.parse().map_err(|_| format!("malformed rational {s:?}"))?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| format!("malformed rational {s:?}"))?,
        None => BigInt::from(1),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// A rational carried as a JSON string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalString(pub Rational);

impl Serialize for RationalString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalString;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string such as \"-3/4\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RationalString, E> {
                parse_rational(v).map(RationalString).map_err(E::custom)
            }
        }
        d.deserialize_str(V)
    }
}

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub(crate) fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

pub(crate) fn ser_vector<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

fn to_strings(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn matrix_json(m: &RationalMatrix) -> Value {
    Value::Array(m.rows_iter().map(to_strings).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceEntry {
    pub generators: Vec<Vec<RationalString>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub name: String,
    pub rank: usize,
    #[serde(default)]
    pub sigma_c: Vec<PieceEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub factors: Vec<FactorEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceFile {
    /// Basis rows of `S°`; normally its RREF basis.
    pub basis: Vec<Vec<RationalString>>,
    /// Needed only when `basis` is empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("{} (line {}, column {})", e, e.line(), e.column()))
}

impl ProblemFile {
    pub fn into_space(self) -> Result<ProductSpace> {
        let mut factors = Vec::with_capacity(self.factors.len());
        for f in self.factors {
            let pieces = f
                .sigma_c
                .into_iter()
                .map(|p| {
                    let gens = p
                        .generators
                        .into_iter()
                        .map(|g| g.into_iter().map(|r| r.0).collect())
                        .collect();
                    ConvexCone::new(f.rank, gens)
                })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Validation(format!("factor {}: {e}", f.name)))?;
            let sigma = ConeUnion::new(f.rank, pieces)?;
            factors.push(FactorSpec::new(f.name, f.rank, sigma)?);
        }
        ProductSpace::new(factors)
    }

    pub fn from_space(p: &ProductSpace) -> Self {
        ProblemFile {
            factors: p
                .factors()
                .iter()
                .map(|f| FactorEntry {
                    name: f.name.clone(),
                    rank: f.rank(),
                    sigma_c: f
                        .sigma_c()
                        .pieces()
                        .iter()
                        .map(|c| PieceEntry {
                            generators: c
                                .generators()
                                .iter()
                                .map(|g| g.iter().cloned().map(RationalString).collect())
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Parses a problem without rejecting factors that fail validation.
pub fn parse_problem_unchecked(text: &str) -> Result<ProductSpace> {
    let file: ProblemFile = serde_json::from_str(text).map_err(json_error)?;
    file.into_space()
}

/// Parses a problem; factors with error-level diagnostics are rejected.
pub fn parse_problem(text: &str) -> Result<ProductSpace> {
    let p = parse_problem_unchecked(text)?;
    ProductSpace::validated(p.factors().to_vec())
}

pub fn serialize_problem(p: &ProductSpace) -> String {
    pretty(&ProblemFile::from_space(p))
}

/// Subspace file for a product space; `k` is inferred from the row count.
pub fn parse_subspace(text: &str, p: &ProductSpace) -> Result<SubspacePoint> {
    let file: SubspaceFile = serde_json::from_str(text).map_err(json_error)?;
    let n = file
        .ambient_dim
        .or_else(|| file.basis.first().map(Vec::len))
        .unwrap_or(p.total_dim());
    let rows: Vec<Vec<Rational>> = file
        .basis
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.0).collect())
        .collect();
    let s = Subspace::from_independent(n, &rows)?;
    SubspacePoint::in_space(s, p)
}

pub fn serialize_subspace(s: &Subspace) -> String {
    let file = SubspaceFile {
        basis: s
            .basis()
            .rows_iter()
            .map(|r| r.iter().cloned().map(RationalString).collect())
            .collect(),
        ambient_dim: (s.dim() == 0).then_some(s.ambient_dim()),
    };
    pretty(&file)
}

/// Pretty JSON with object keys in sorted order.
pub fn pretty<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    serde_json::to_string_pretty(&v).expect("json value")
}

pub fn serialize_report(report: &MeasureReport) -> String {
    pretty(report)
}

pub fn parse_report(text: &str) -> Result<MeasureReport> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Raw {
        k: usize,
        samples: u64,
        seed: u64,
        vsp_failures: u64,
        fp_count: u64,
        nonfp_count: u64,
        theorem_a_applicable: bool,
        gamma_dim: usize,
        elapsed_ms: u64,
    }
    let r: Raw = serde_json::from_str(text).map_err(json_error)?;
    Ok(MeasureReport {
        k: r.k,
        samples: r.samples,
        seed: r.seed,
        vsp_failures: r.vsp_failures,
        fp_count: r.fp_count,
        nonfp_count: r.nonfp_count,
        theorem_a_applicable: r.theorem_a_applicable,
        gamma_dim: r.gamma_dim,
        elapsed_ms: r.elapsed_ms,
    })
}

/// Drops `elapsed_ms` from a JSON document so runs can be compared byte for
/// byte.
pub fn without_elapsed(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with("\"elapsed_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn witness_json(w: &IntersectionWitness) -> Value {
    json!({
        "ray": to_strings(&w.ray),
        "piece_index": w.piece_index,
        "coefficients": to_strings(&w.coefficients),
    })
}

pub fn certificate_json(c: &OpennessCertificate) -> Value {
    serde_json::to_value(c).expect("serializable")
}

pub fn rho_json(r: &RhoConstruction) -> Value {
    json!({
        "method": r.method,
        "rho": matrix_json(&r.rho),
        "scaling": r.scaling,
        "point": matrix_json(r.point.subspace().basis()),
        "verified": r.verified,
    })
}

pub fn box_json(b: &NonFpBox) -> Value {
    json!({
        "chart_basis": matrix_json(&b.chart.basis),
        "k": b.chart.k,
        "entries": {"lower_exclusive": "0", "upper_inclusive": "1"},
        "gamma_piece": b.gamma_piece,
        "piece_dim": b.piece_dim,
        "seed": b.seed,
        "samples": b.sample_points.iter().map(|s| json!({
            "index": s.index,
            "a": matrix_json(&s.a),
            "point": matrix_json(s.point.subspace().basis()),
            "witness": s.decision.witness.as_ref().map(witness_json),
        })).collect::<Vec<_>>(),
    })
}

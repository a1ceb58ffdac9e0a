//! JSON job files in, one JSON report out.
//!
//! A job is `{"version": 1, "command": ..., "payload": {...}}`. Points are
//! arrays of integers, supports are arrays of points; integers may be JSON
//! numbers or decimal strings. The report echoes the job, the effective
//! overrides, the result and the crate version. Wall time goes to stderr so
//! that stdout is byte-identical across runs.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::chow_formal::{segre_pullback, verify_splitting, MultiProjRing};
use crate::error::Error;
use crate::grothendieck::{self, VirtualClass};
use crate::lattice_geometry::{mixed_volume, LatticePoint, LatticePolytope};
use crate::oracle::{self, CountReport};
use crate::subspaces::{LatticeIndex, MonomialSubspace, WitnessSearch, DEFAULT_K_MAX, DEFAULT_Q_MAX};
use crate::toric_bdiv::{self, BDivisor, ToricDivisor, ToricModel};

pub const JOB_VERSION: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "toric-index", version, about = "Run a toric-index job file and print a JSON report")]
pub struct Args {
    /// Path to the JSON job file.
    #[arg(long)]
    pub job: PathBuf,
    /// Worker threads (default: all cores). Never changes results.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Override for the integrality-certificate degree bound.
    #[arg(long)]
    pub q_max: Option<u32>,
    /// Override for `k_max` (extension degree for oracle jobs, witness power
    /// for equivalence jobs).
    #[arg(long)]
    pub k_max: Option<u32>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Overrides {
    pub q_max: Option<u32>,
    pub k_max: Option<u32>,
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable file or schema violation.
    Validation(String),
    Module(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Module(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Module(Error::InvariantBreach(_)) => 3,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let (code, message) = match self {
            CliError::Validation(m) => ("validation", m.clone()),
            CliError::Module(e) => (e.code(), e.to_string()),
        };
        json!({ "error": { "code": code, "message": message } })
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub version: u64,
    pub command: String,
    pub payload: Value,
}

/// An integer written as a JSON number or a decimal string.
#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
enum Int {
    Signed(i64),
    Unsigned(u64),
    Text(String),
}

impl Int {
    fn big(&self) -> CliResult<BigInt> {
        match self {
            Int::Signed(x) => Ok(BigInt::from(*x)),
            Int::Unsigned(x) => Ok(BigInt::from(*x)),
            Int::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("not a decimal integer: {s:?}"))),
        }
    }

    fn small<T: TryFrom<u64>>(&self, what: &str) -> CliResult<T> {
        self.big()?
            .to_u64()
            .and_then(|x| T::try_from(x).ok())
            .ok_or_else(|| CliError::Validation(format!("{what} out of range")))
    }
}

type Points = Vec<Vec<Int>>;

fn points(raw: &Points) -> CliResult<Vec<LatticePoint>> {
    raw.iter()
        .map(|p| Ok(LatticePoint::new(p.iter().map(Int::big).collect::<CliResult<_>>()?)))
        .collect()
}

fn subspace(raw: &Points) -> CliResult<MonomialSubspace> {
    Ok(MonomialSubspace::new(points(raw)?)?)
}

fn subspaces(raw: &[Points]) -> CliResult<Vec<MonomialSubspace>> {
    raw.iter().map(subspace).collect()
}

fn polytope(raw: &Points) -> CliResult<LatticePolytope> {
    Ok(LatticePolytope::convex_hull(&points(raw)?)?)
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn point_json(p: &LatticePoint) -> Value {
    Value::Array(p.coords().iter().map(int_json).collect())
}

fn points_json(ps: &[LatticePoint]) -> Value {
    Value::Array(ps.iter().map(point_json).collect())
}

fn parse<T: for<'de> Deserialize<'de>>(payload: &Value) -> CliResult<T> {
    serde_json::from_value(payload.clone()).map_err(|e| CliError::Validation(format!("payload: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SupportsPayload {
    supports: Vec<Points>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SupportPayload {
    support: Points,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassPayload {
    plus: Points,
    minus: Points,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexPayload {
    classes: Vec<ClassPayload>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EquivalentPayload {
    first: Points,
    second: Points,
    k_max: Option<Int>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OraclePayload {
    supports: Vec<Points>,
    p: Int,
    trials: Int,
    #[serde(alias = "K_max")]
    k_max: Int,
    seed: Int,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MultiaddPayload {
    first_a: Points,
    first_b: Points,
    rest: Vec<Points>,
    p: Int,
    trials: Int,
    #[serde(alias = "K_max")]
    k_max: Int,
    seed: Int,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConePayload {
    vertex: Vec<Int>,
    functional: Vec<Int>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorPayload {
    model: Points,
    cones: Vec<ConePayload>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BdivPayload {
    divisors: Vec<DivisorPayload>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RoundtripPayload {
    support: Points,
    #[serde(default)]
    companions: Vec<Points>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpandPayload {
    signature: Vec<u32>,
    merged: usize,
    split: (u32, u32),
    power: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChowPayload {
    max_total: Option<u32>,
    expand: Option<ExpandPayload>,
}

fn divisor(raw: &DivisorPayload) -> CliResult<ToricDivisor> {
    let model = ToricModel::new(polytope(&raw.model)?)?;
    let mut by_vertex: BTreeMap<LatticePoint, LatticePoint> = BTreeMap::new();
    for c in &raw.cones {
        let v = points(&vec![c.vertex.clone()])?.remove(0);
        let a = points(&vec![c.functional.clone()])?.remove(0);
        if by_vertex.insert(v.clone(), a).is_some() {
            return Err(CliError::Validation(format!("cone at {v} listed twice")));
        }
    }
    let functionals = model
        .cones()
        .iter()
        .map(|c| {
            by_vertex
                .remove(&c.vertex)
                .ok_or_else(|| CliError::Validation(format!("no functional for the cone at vertex {}", c.vertex)))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if let Some(v) = by_vertex.keys().next() {
        return Err(CliError::Validation(format!("{v} is not a vertex of the model")));
    }
    Ok(ToricDivisor::new(model, functionals)?)
}

pub fn divisor_json(d: &ToricDivisor) -> Value {
    json!({
        "model": points_json(d.model().base().vertices()),
        "cones": d.model().cones().iter().zip(d.functionals()).map(|(c, a)| json!({
            "vertex": point_json(&c.vertex),
            "functional": point_json(a),
        })).collect::<Vec<_>>(),
    })
}

pub fn count_report_json(r: &CountReport) -> Value {
    json!({
        "supports": r.supports.iter().map(|s| points_json(s.support())).collect::<Vec<_>>(),
        "p": r.p,
        "k_max": r.k_max,
        "trials": r.trials,
        "seed": r.seed,
        "per_extension": r.per_extension.iter().map(|(k, c)| (k.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
        "per_trial": r.per_trial,
        "degenerate_trials": r.degenerate_trials,
        "generic_count": r.generic_count,
        "mv_reference": int_json(&r.mv_reference),
        "saturated": r.saturated(),
    })
}

/// Executes a parsed job and returns the `result` section of the report.
pub fn run(job: &JobFile, overrides: Overrides) -> CliResult<Value> {
    if job.version != JOB_VERSION {
        return Err(CliError::Validation(format!(
            "unsupported job version {} (expected {JOB_VERSION})",
            job.version
        )));
    }
    let payload = &job.payload;
    match job.command.as_str() {
        "mixed-volume" => {
            let p: SupportsPayload = parse(payload)?;
            let polys = p.supports.iter().map(polytope).collect::<CliResult<Vec<_>>>()?;
            Ok(json!({ "mixed_volume": int_json(&mixed_volume(&polys)?) }))
        }
        "index" => {
            let p: IndexPayload = parse(payload)?;
            let classes = p
                .classes
                .iter()
                .map(|c| Ok(VirtualClass::new(polytope(&c.plus)?, polytope(&c.minus)?)?))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(json!({ "index": int_json(&grothendieck::index(&classes)?) }))
        }
        "completion" => {
            let p: SupportPayload = parse(payload)?;
            let l = subspace(&p.support)?;
            let q_max = overrides.q_max.unwrap_or(DEFAULT_Q_MAX);
            let completion = l.completion();
            let mut certificates = Vec::new();
            for b in completion.support().iter().filter(|b| !l.contains(b)) {
                let cert = l.is_integral(b, q_max)?;
                certificates.push(match cert {
                    Some(c) => json!({
                        "exponent": point_json(b),
                        "degree": c.degree,
                        "summands": points_json(&c.summands),
                    }),
                    None => json!({ "exponent": point_json(b), "degree": null }),
                });
            }
            Ok(json!({
                "support": points_json(completion.support()),
                "q_max": q_max,
                "certificates": certificates,
            }))
        }
        "equivalent" => {
            let p: EquivalentPayload = parse(payload)?;
            let k_max = match (overrides.k_max, &p.k_max) {
                (Some(k), _) => k,
                (None, Some(k)) => k.small("k_max")?,
                (None, None) => DEFAULT_K_MAX,
            };
            let e = subspace(&p.first)?.equivalent_with_witness(&subspace(&p.second)?, k_max)?;
            let witness = match e.witness {
                None => Value::Null,
                Some(WitnessSearch::Found { witness, power }) => json!({
                    "found": true,
                    "power": power,
                    "support": points_json(witness.support()),
                }),
                Some(WitnessSearch::Inconclusive { k_max }) => json!({ "found": false, "k_max": k_max }),
            };
            Ok(json!({ "equivalent": e.equivalent, "k_max": k_max, "witness": witness }))
        }
        "degree" => {
            let p: SupportPayload = parse(payload)?;
            let d = subspace(&p.support)?.degree_decomposition()?;
            let lattice_index = match &d.lattice_index {
                LatticeIndex::Finite(x) => int_json(x),
                LatticeIndex::Infinite => json!("infinite"),
            };
            Ok(json!({
                "self_intersection": int_json(&d.index),
                "lattice_index": lattice_index,
                "degree": int_json(&d.degree.to_integer()),
            }))
        }
        "oracle" => {
            let p: OraclePayload = parse(payload)?;
            let k_max = match overrides.k_max {
                Some(k) => k,
                None => p.k_max.small("k_max")?,
            };
            let r = oracle::generic_count(
                &subspaces(&p.supports)?,
                p.p.small("p")?,
                p.trials.small("trials")?,
                k_max,
                p.seed.small("seed")?,
            )?;
            Ok(count_report_json(&r))
        }
        "multiadd" => {
            let p: MultiaddPayload = parse(payload)?;
            let k_max = match overrides.k_max {
                Some(k) => k,
                None => p.k_max.small("k_max")?,
            };
            let r = oracle::verify_multiadditivity(
                &subspace(&p.first_a)?,
                &subspace(&p.first_b)?,
                &subspaces(&p.rest)?,
                p.p.small("p")?,
                p.trials.small("trials")?,
                k_max,
                p.seed.small("seed")?,
            )?;
            Ok(json!({
                "product": count_report_json(&r.product),
                "first": count_report_json(&r.first),
                "second": count_report_json(&r.second),
                "mv_identity": r.mv_identity,
                "saturated": r.saturated,
                "count_identity": r.count_identity,
            }))
        }
        "bdiv-index" => {
            let p: BdivPayload = parse(payload)?;
            let bs = p
                .divisors
                .iter()
                .map(|d| Ok(BDivisor::from(divisor(d)?)))
                .collect::<CliResult<Vec<_>>>()?;
            Ok(json!({ "index": int_json(&toric_bdiv::bdiv_index(&bs)?) }))
        }
        "roundtrip" => {
            let p: RoundtripPayload = parse(payload)?;
            let l = subspace(&p.support)?;
            let companions = subspaces(&p.companions)?;
            let r = toric_bdiv::isomorphism_roundtrip(&l, &companions)?;
            let g = toric_bdiv::divisor_of_subspace(&l)?;
            Ok(json!({
                "divisor": divisor_json(&g),
                "sections_equivalent": r.sections_equivalent,
                "bdiv_index": int_json(&r.bdiv_index),
                "mixed_volume": int_json(&r.mixed_volume),
                "holds": r.holds(),
            }))
        }
        "chow-check" => {
            let p: ChowPayload = parse(payload)?;
            let max_total = p.max_total.unwrap_or(8);
            let rep = verify_splitting(max_total);
            let expansion = match &p.expand {
                None => Value::Null,
                Some(e) => {
                    let ring = MultiProjRing::new(e.signature.clone())?;
                    let x = ring.hyperplane(e.merged)?.pow(e.power);
                    json!({
                        "element": x.to_string(),
                        "pullback": segre_pullback(&x, e.merged, e.split)?.to_string(),
                    })
                }
            };
            Ok(json!({
                "max_total": max_total,
                "signatures": rep.signatures,
                "identities": rep.identities,
                "failures": rep.failures,
                "passed": rep.passed(),
                "expansion": expansion,
            }))
        }
        other => Err(CliError::Validation(format!("unknown command {other:?}"))),
    }
}

/// Reads, validates and runs a job file; returns the report document.
pub fn run_file(path: &std::path::Path, overrides: Overrides) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let job: JobFile = serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("job file: {e}")))?;
    let result = run(&job, overrides)?;
    let mut over = serde_json::Map::new();
    if let Some(q) = overrides.q_max {
        over.insert("q_max".into(), json!(q));
    }
    if let Some(k) = overrides.k_max {
        over.insert("k_max".into(), json!(k));
    }
    Ok(json!({
        "version": env!("CARGO_PKG_VERSION"),
        "job": { "version": job.version, "command": job.command, "payload": job.payload },
        "overrides": over,
        "result": result,
    }))
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(k) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    let overrides = Overrides {
        q_max: args.q_max,
        k_max: args.k_max,
    };
    let start = Instant::now();
    let (doc, code) = match run_file(&args.job, overrides) {
        Ok(doc) => (doc, 0),
        Err(e) => (e.to_json(), e.exit_code()),
    };
    println!("{doc}");
    eprintln!("elapsed_ms: {}", start.elapsed().as_millis());
    code
}

//! Job files: which algebra, which nilpotent, which tasks.

use serde::Deserialize;
use serde_json::Value;
use std::collections::BTreeMap;
use thiserror::Error;
use wsuper_core::algebra_data::{
    build_d21a, build_gl, build_osp12n, build_sl, direct_sum, osp12_regular_nilpotent, toral, AlgebraKind,
    LieSuperalgebra,
};
use wsuper_core::linalg::Vector;
use wsuper_core::scalar::{is_prime, parse_rational, Rational, Scalar};

/// Environment variable overriding the degree cap of every job.
pub const DEGREE_CAP_ENV: &str = "WSUPER_DEGREE_CAP";

/// A malformed or unsupported job file.
#[derive(Debug, Error)]
pub enum SpecError {
    /// The file could not be read.
    #[error("cannot read job file: {0}")]
    Io(#[from] std::io::Error),
    /// The file is not valid JSON for a job.
    #[error("invalid job file: {0}")]
    Json(#[from] serde_json::Error),
    /// A field has an unusable value.
    #[error("{0}")]
    Invalid(String),
    /// The core library rejected the algebra or nilpotent.
    #[error("{0}")]
    Core(#[from] wsuper_core::Error),
}

/// One requested computation.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// Frame data, counters and per-prime dimension formulas.
    Describe,
    /// Generators and the PBW check.
    Wgens,
    /// The commutator table.
    Relations,
    /// One- and two-dimensional representation systems.
    Repsearch,
    /// Reduction mod p: restrictedness, baby Verma modules, Whittaker vectors.
    Modular,
    /// Divisibility bounds.
    Bounds,
    /// The transition-algebra tensor decomposition.
    Tensorcheck,
}

impl Task {
    /// Name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            Task::Describe => "describe",
            Task::Wgens => "wgens",
            Task::Relations => "relations",
            Task::Repsearch => "repsearch",
            Task::Modular => "modular",
            Task::Bounds => "bounds",
            Task::Tensorcheck => "tensorcheck",
        }
    }
}

/// Report format.
#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Canonical JSON.
    #[default]
    Json,
    /// Human-readable text.
    Text,
}

fn default_cap() -> i64 {
    8
}

fn default_limit() -> u64 {
    200_000
}

/// A parsed job file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    /// Algebra specification, e.g. `{"type": "gl", "m": 2, "n": 1}`.
    pub algebra: Value,
    /// Nilpotent specification: `"zero"`, `"regular"`, `{"partition": …}`,
    /// `{"coefficients": {name: "p/q"}}` or `{"vector": ["p/q", …]}`.
    #[serde(default = "default_nilpotent")]
    pub nilpotent: Value,
    /// Optional even element `x` defining the character `ξ = (x, ·)` for `bounds`.
    #[serde(default)]
    pub character: Option<BTreeMap<String, String>>,
    /// Kazhdan degree cap `D`.
    #[serde(default = "default_cap")]
    pub degree_cap: i64,
    /// Primes for the modular tasks.
    #[serde(default)]
    pub primes: Vec<u64>,
    /// Requested tasks.
    pub tasks: Vec<Task>,
    /// Allow a quadratic extension when normalizing the odd frame.
    #[serde(default)]
    pub allow_extension: bool,
    /// Include wall-clock timings (makes reports non-reproducible).
    #[serde(default)]
    pub timing: bool,
    /// Largest number of vectors an exhaustive irreducibility check may test.
    #[serde(default = "default_limit")]
    pub irreducibility_limit: u64,
    /// Default output path.
    #[serde(default)]
    pub output: Option<String>,
    /// Default output format.
    #[serde(default)]
    pub format: Option<Format>,
}

fn default_nilpotent() -> Value {
    Value::String("zero".into())
}

impl JobSpec {
    /// Parses and validates a job from JSON text.
    pub fn parse(text: &str) -> Result<JobSpec, SpecError> {
        let mut job: JobSpec = serde_json::from_str(text)?;
        job.tasks.sort();
        job.tasks.dedup();
        job.validate()?;
        Ok(job)
    }

    /// Applies the degree-cap environment override.
    pub fn apply_env(&mut self) -> Result<(), SpecError> {
        if let Ok(v) = std::env::var(DEGREE_CAP_ENV) {
            self.degree_cap = v
                .trim()
                .parse()
                .map_err(|_| SpecError::Invalid(format!("{DEGREE_CAP_ENV}={v} is not an integer")))?;
        }
        self.validate()
    }

    /// Checks the invariants of a job.
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.degree_cap < 0 {
            return Err(SpecError::Invalid("degree_cap must be non-negative".into()));
        }
        if self.tasks.is_empty() {
            return Err(SpecError::Invalid("task list is empty".into()));
        }
        if let Some(p) = self.primes.iter().find(|&&p| p < 3 || !is_prime(p)) {
            return Err(SpecError::Invalid(format!("{p} is not an odd prime")));
        }
        Ok(())
    }
}

fn usize_field(v: &Value, key: &str) -> Result<usize, SpecError> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| SpecError::Invalid(format!("algebra field `{key}` must be a non-negative integer")))
}

fn rational_field(v: &Value, key: &str) -> Result<Rational, SpecError> {
    match v.get(key) {
        Some(Value::String(s)) => Ok(parse_rational(s)?),
        Some(Value::Number(n)) => Ok(parse_rational(&n.to_string())?),
        _ => Err(SpecError::Invalid(format!("algebra field `{key}` must be a rational string \"p/q\""))),
    }
}

/// Builds the algebra described by a JSON specification.
pub fn build_algebra(v: &Value) -> Result<LieSuperalgebra, SpecError> {
    let ty = v
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| SpecError::Invalid("algebra needs a string field `type`".into()))?;
    Ok(match ty.to_ascii_lowercase().as_str() {
        "gl" => build_gl(usize_field(v, "m")?, usize_field(v, "n")?)?,
        "sl" => build_sl(usize_field(v, "m")?, usize_field(v, "n")?)?,
        "osp" => build_osp12n(usize_field(v, "n")?)?,
        "d21a" => build_d21a(&rational_field(v, "a")?)?,
        "toral" => toral(usize_field(v, "dim")?),
        "direct_sum" => {
            let parts = v
                .get("parts")
                .and_then(Value::as_array)
                .ok_or_else(|| SpecError::Invalid("direct_sum needs an array `parts`".into()))?;
            let parts: Vec<LieSuperalgebra> = parts.iter().map(build_algebra).collect::<Result<_, _>>()?;
            direct_sum(&parts)?
        }
        other => return Err(SpecError::Invalid(format!("unknown algebra type `{other}`"))),
    })
}

fn parse_scalar(s: &str) -> Result<Scalar, SpecError> {
    Ok(Scalar::from_rational(parse_rational(s)?))
}

/// Builds an element from `name → "p/q"` coefficients.
pub fn element_from_map(g: &LieSuperalgebra, m: &BTreeMap<String, String>) -> Result<Vector, SpecError> {
    let mut v = g.zero();
    for (name, c) in m {
        let i = g.index_of(name).ok_or_else(|| SpecError::Invalid(format!("unknown basis element `{name}`")))?;
        v[i] = parse_scalar(c)?;
    }
    Ok(v)
}

fn block_nilpotent(g: &LieSuperalgebra, even: &[usize], odd: &[usize]) -> Result<Vector, SpecError> {
    let (m, n) = match &g.kind {
        AlgebraKind::Gl { m, n } | AlgebraKind::Sl { m, n } => (*m, *n),
        _ => return Err(SpecError::Invalid("partitions are supported for gl and sl only".into())),
    };
    if even.iter().sum::<usize>() != m || odd.iter().sum::<usize>() != n {
        return Err(SpecError::Invalid(format!("partition must have sizes {m} and {n}")));
    }
    let mut v = g.zero();
    let mut start = 0;
    for &b in even.iter().chain(odd) {
        for i in start..start + b.saturating_sub(1) {
            let name = format!("E{}{}", i + 1, i + 2);
            let k = g.index_of(&name).ok_or_else(|| SpecError::Invalid(format!("missing basis element {name}")))?;
            v[k] = Scalar::one();
        }
        start += b;
    }
    Ok(v)
}

/// Builds the nilpotent described by a JSON specification.
pub fn build_nilpotent(g: &LieSuperalgebra, v: &Value) -> Result<Vector, SpecError> {
    match v {
        Value::String(s) if s == "zero" => Ok(g.zero()),
        Value::String(s) if s == "regular" => match &g.kind {
            AlgebraKind::Osp { n: 1 } => Ok(osp12_regular_nilpotent(g)?),
            AlgebraKind::Gl { m, n } | AlgebraKind::Sl { m, n } => block_nilpotent(g, &[*m], &[*n]),
            k => Err(SpecError::Invalid(format!("no regular nilpotent preset for {k}"))),
        },
        Value::Object(o) if o.contains_key("partition") => {
            let p = &o["partition"];
            let list = |key: &str| -> Result<Vec<usize>, SpecError> {
                p.get(key)
                    .and_then(Value::as_array)
                    .map(|a| a.iter().filter_map(Value::as_u64).map(|x| x as usize).collect())
                    .ok_or_else(|| SpecError::Invalid(format!("partition needs an integer array `{key}`")))
            };
            block_nilpotent(g, &list("even")?, &list("odd")?)
        }
        Value::Object(o) if o.contains_key("coefficients") => {
            let m: BTreeMap<String, String> = serde_json::from_value(o["coefficients"].clone())?;
            element_from_map(g, &m)
        }
        Value::Object(o) if o.contains_key("vector") => {
            let xs: Vec<String> = serde_json::from_value(o["vector"].clone())?;
            if xs.len() != g.dim() {
                return Err(SpecError::Invalid(format!("vector has {} entries, algebra has dimension {}", xs.len(), g.dim())));
            }
            xs.iter().map(|s| parse_scalar(s)).collect()
        }
        _ => Err(SpecError::Invalid(format!("unrecognized nilpotent specification {v}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_a_minimal_job() {
        let job = JobSpec::parse(r#"{"algebra": {"type": "gl", "m": 1, "n": 1}, "tasks": ["wgens", "describe"]}"#).unwrap();
        assert_eq!(job.tasks, vec![Task::Describe, Task::Wgens]);
        assert_eq!(job.degree_cap, 8);
    }

    #[test]
    fn rejects_bad_jobs() {
        assert!(JobSpec::parse(r#"{"algebra": {"type": "gl", "m": 1, "n": 1}, "tasks": []}"#).is_err());
        assert!(JobSpec::parse(r#"{"algebra": {}, "tasks": ["describe"], "primes": [4]}"#).is_err());
        assert!(JobSpec::parse(r#"{"algebra": {}, "tasks": ["describe"], "degree_cap": -1}"#).is_err());
        assert!(JobSpec::parse(r#"{"algebra": {}, "tasks": ["frobnicate"]}"#).is_err());
    }

    #[test]
    fn builds_algebras_and_nilpotents() {
        let g = build_algebra(&json!({"type": "D21a", "a": "2"})).unwrap();
        assert_eq!(g.dims(), (9, 8));
        let g = build_algebra(&json!({"type": "gl", "m": 2, "n": 1})).unwrap();
        let e = build_nilpotent(&g, &json!({"partition": {"even": [2], "odd": [1]}})).unwrap();
        assert_eq!(e, build_nilpotent(&g, &json!({"coefficients": {"E12": "1"}})).unwrap());
        assert!(build_nilpotent(&g, &json!({"partition": {"even": [1], "odd": [1]}})).is_err());
        let s = build_algebra(&json!({"type": "direct_sum", "parts": [{"type": "gl", "m": 1, "n": 1}, {"type": "toral", "dim": 1}]})).unwrap();
        assert_eq!(s.dim(), 5);
        assert!(build_algebra(&json!({"type": "G3"})).is_err());
    }
}

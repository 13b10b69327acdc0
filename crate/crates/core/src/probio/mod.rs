//! Versioned problem and result files.
//!
//! Both are JSON objects with a `spec_version`, a `problem_type`
//! discriminator and a type-specific body. Parsing is strict by default:
//! unknown keys are errors, and every instance is validated before it is
//! returned. Writing emits sorted keys, so output is byte-stable.

mod cases;
mod result;
mod text;

use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::assign::AssignmentInstance;
use crate::cluster::{DissimilarityMatrix, Linkage};
use crate::criteria::{CriteriaFrame, OrdinalScale};
use crate::frameworks::{ImprovementSpec, IntegrationTree, Stage, ThreeSetSpec, TrajectorySpec};
use crate::morph::{CompatEntry, MorphSystem};
use crate::rank::{Alternative, RankingInstance};
use crate::route::TspInstance;
use crate::select::{KnapsackInstance, MckpInstance};
use crate::{Error, Result};

pub use cases::{parse_quality_cases, QualityCase, Relation};
pub use result::{
    parse_result, write_result, ClusterSolution, Diagnostics, OracleCheck, OracleReport, OutputFormat, ResultFile, Solution,
};

pub const SPEC_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemType {
    Rank,
    Knapsack,
    Mckp,
    Cluster,
    Assign,
    Tsp,
    Morph,
    Trajectory,
    Integrate,
    Pipeline,
    Improve,
}

impl ProblemType {
    pub const ALL: [ProblemType; 11] = [
        ProblemType::Rank,
        ProblemType::Knapsack,
        ProblemType::Mckp,
        ProblemType::Cluster,
        ProblemType::Assign,
        ProblemType::Tsp,
        ProblemType::Morph,
        ProblemType::Trajectory,
        ProblemType::Integrate,
        ProblemType::Pipeline,
        ProblemType::Improve,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ProblemType::Rank => "rank",
            ProblemType::Knapsack => "knapsack",
            ProblemType::Mckp => "mckp",
            ProblemType::Cluster => "cluster",
            ProblemType::Assign => "assign",
            ProblemType::Tsp => "tsp",
            ProblemType::Morph => "morph",
            ProblemType::Trajectory => "trajectory",
            ProblemType::Integrate => "integrate",
            ProblemType::Pipeline => "pipeline",
            ProblemType::Improve => "improve",
        }
    }

    pub fn from_token(token: &str) -> Result<Self> {
        ProblemType::ALL
            .into_iter()
            .find(|t| t.token() == token)
            .ok_or_else(|| Error::UnknownProblemType(token.to_string()))
    }
}

impl fmt::Display for ProblemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutrankingThresholds {
    /// Concordance threshold.
    pub p: f64,
    /// Discordance threshold.
    pub q: f64,
}

// Payloads with solver options next to the instance fields. Fields are
// spelled out rather than flattened so parse errors keep their paths.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankProblem {
    pub frame: CriteriaFrame,
    pub alternatives: Vec<Alternative>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outranking: Option<OutrankingThresholds>,
}

impl RankProblem {
    pub fn instance(&self) -> RankingInstance {
        RankingInstance {
            frame: self.frame.clone(),
            alternatives: self.alternatives.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterProblem {
    pub ids: Vec<String>,
    pub d: Vec<Vec<f64>>,
    #[serde(default)]
    pub linkage: Linkage,
    /// Cut into this many clusters; the full dendrogram is reported either way.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl ClusterProblem {
    pub fn matrix(&self) -> DissimilarityMatrix {
        DissimilarityMatrix {
            ids: self.ids.clone(),
            d: self.d.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspProblem {
    pub ids: Vec<String>,
    pub dist: Vec<Vec<f64>>,
    /// Start city of the nearest-neighbor tour; defaults to the first id.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
}

impl TspProblem {
    pub fn instance(&self) -> TspInstance {
        TspInstance {
            ids: self.ids.clone(),
            dist: self.dist.clone(),
        }
    }
}

fn three_levels() -> OrdinalScale {
    OrdinalScale::priority(3).expect("valid scale")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryProblem {
    pub stages: Vec<Stage>,
    pub compat: Vec<CompatEntry>,
    #[serde(default = "OrdinalScale::compatibility")]
    pub compat_scale: OrdinalScale,
    #[serde(default = "three_levels")]
    pub priority_scale: OrdinalScale,
    /// Rate compatibility between all stage pairs, not only neighbors.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub all_pairs: bool,
}

impl TrajectoryProblem {
    pub fn spec(&self) -> TrajectorySpec {
        TrajectorySpec {
            stages: self.stages.clone(),
            compat: self.compat.clone(),
            compat_scale: self.compat_scale,
            priority_scale: self.priority_scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Rank(RankProblem),
    Knapsack(KnapsackInstance),
    Mckp(MckpInstance),
    Cluster(ClusterProblem),
    Assign(AssignmentInstance),
    Tsp(TspProblem),
    Morph(MorphSystem),
    Trajectory(TrajectoryProblem),
    Integrate(IntegrationTree),
    Pipeline(ThreeSetSpec),
    Improve(ImprovementSpec),
}

impl Problem {
    pub fn problem_type(&self) -> ProblemType {
        match self {
            Problem::Rank(_) => ProblemType::Rank,
            Problem::Knapsack(_) => ProblemType::Knapsack,
            Problem::Mckp(_) => ProblemType::Mckp,
            Problem::Cluster(_) => ProblemType::Cluster,
            Problem::Assign(_) => ProblemType::Assign,
            Problem::Tsp(_) => ProblemType::Tsp,
            Problem::Morph(_) => ProblemType::Morph,
            Problem::Trajectory(_) => ProblemType::Trajectory,
            Problem::Integrate(_) => ProblemType::Integrate,
            Problem::Pipeline(_) => ProblemType::Pipeline,
            Problem::Improve(_) => ProblemType::Improve,
        }
    }

    /// Module-level invariants, with paths relative to the payload.
    pub fn validate(&self) -> Result<()> {
        match self {
            Problem::Rank(p) => {
                p.instance().validate()?;
                if let Some(t) = p.outranking {
                    for (name, v) in [("p", t.p), ("q", t.q)] {
                        if !(0.0..=1.0).contains(&v) {
                            return Err(Error::invalid(format!("outranking.{name}"), format!("threshold {v} outside [0, 1]")));
                        }
                    }
                }
                Ok(())
            }
            Problem::Knapsack(p) => p.validate(),
            Problem::Mckp(p) => p.validate(),
            Problem::Cluster(p) => {
                let m = p.matrix();
                m.validate()?;
                if m.is_empty() {
                    return Err(Error::invalid("ids", "at least one element required"));
                }
                match p.k {
                    Some(k) if k == 0 || k > m.len() => Err(Error::invalid(
                        "k",
                        format!("cluster count must lie in [1, {}], got {k}", m.len()),
                    )),
                    _ => Ok(()),
                }
            }
            Problem::Assign(p) => p.validate(),
            Problem::Tsp(p) => {
                p.instance().validate()?;
                match &p.start {
                    Some(s) if !p.ids.contains(s) => Err(Error::invalid("start", format!("unknown city `{s}`"))),
                    _ => Ok(()),
                }
            }
            Problem::Morph(p) => p.validate(),
            Problem::Trajectory(p) => p.spec().validate(),
            Problem::Integrate(p) => p.validate(),
            Problem::Pipeline(p) => p.validate(),
            Problem::Improve(p) => p.validate(),
        }
    }

    fn to_value(&self) -> Value {
        let v = match self {
            Problem::Rank(p) => serde_json::to_value(p),
            Problem::Knapsack(p) => serde_json::to_value(p),
            Problem::Mckp(p) => serde_json::to_value(p),
            Problem::Cluster(p) => serde_json::to_value(p),
            Problem::Assign(p) => serde_json::to_value(p),
            Problem::Tsp(p) => serde_json::to_value(p),
            Problem::Morph(p) => serde_json::to_value(p),
            Problem::Trajectory(p) => serde_json::to_value(p),
            Problem::Integrate(p) => serde_json::to_value(p),
            Problem::Pipeline(p) => serde_json::to_value(p),
            Problem::Improve(p) => serde_json::to_value(p),
        };
        v.expect("problem payloads serialize")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub spec_version: u64,
    pub problem: Problem,
}

impl ProblemFile {
    pub fn new(problem: Problem) -> Self {
        ProblemFile {
            spec_version: SPEC_VERSION,
            problem,
        }
    }

    pub fn problem_type(&self) -> ProblemType {
        self.problem.problem_type()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    #[default]
    Strict,
    /// Ignore unknown keys.
    Lenient,
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    parse_problem_with(text, ParseMode::Strict)
}

pub fn parse_problem_with(text: &str, mode: ParseMode) -> Result<ProblemFile> {
    let (version, kind, raw) = read_header(text)?;
    let problem_type = ProblemType::from_token(&kind)?;
    let problem = match problem_type {
        ProblemType::Rank => Problem::Rank(typed_payload(text)?),
        ProblemType::Knapsack => Problem::Knapsack(typed_payload(text)?),
        ProblemType::Mckp => Problem::Mckp(typed_payload(text)?),
        ProblemType::Cluster => Problem::Cluster(typed_payload(text)?),
        ProblemType::Assign => Problem::Assign(typed_payload(text)?),
        ProblemType::Tsp => Problem::Tsp(typed_payload(text)?),
        ProblemType::Morph => Problem::Morph(typed_payload(text)?),
        ProblemType::Trajectory => Problem::Trajectory(typed_payload(text)?),
        ProblemType::Integrate => Problem::Integrate(typed_payload(text)?),
        ProblemType::Pipeline => Problem::Pipeline(typed_payload(text)?),
        ProblemType::Improve => Problem::Improve(typed_payload(text)?),
    };
    if mode == ParseMode::Strict {
        let expected = serde_json::json!({
            "spec_version": version,
            "problem_type": kind,
            "payload": problem.to_value(),
        });
        check_known_keys(&raw, &expected, "")?;
    }
    problem.validate().map_err(|e| e.within("payload"))?;
    Ok(ProblemFile {
        spec_version: version,
        problem,
    })
}

/// Canonical form: sorted keys, two-space indentation, trailing newline.
pub fn write_problem(file: &ProblemFile) -> String {
    let value = serde_json::json!({
        "spec_version": file.spec_version,
        "problem_type": file.problem_type().token(),
        "payload": file.problem.to_value(),
    });
    canonical(&value)
}

pub(crate) fn canonical(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("json values serialize");
    out.push('\n');
    out
}

/// Syntax check plus `spec_version` and `problem_type`.
pub(crate) fn read_header(text: &str) -> Result<(u64, String, Value)> {
    let raw: Value = serde_json::from_str(text).map_err(|e| parse_error("", &e))?;
    let Some(obj) = raw.as_object() else {
        return Err(Error::Parse {
            path: String::new(),
            line: 1,
            column: 1,
            message: "expected a JSON object".into(),
        });
    };
    let field = |name: &str| {
        obj.get(name).ok_or_else(|| Error::Parse {
            path: name.to_string(),
            line: 1,
            column: 1,
            message: format!("missing field `{name}`"),
        })
    };
    let version = field("spec_version")?.as_u64().ok_or_else(|| Error::invalid("spec_version", "expected an unsigned integer"))?;
    if version != SPEC_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let kind = field("problem_type")?
        .as_str()
        .ok_or_else(|| Error::invalid("problem_type", "expected a string"))?
        .to_string();
    Ok((version, kind, raw))
}

#[derive(Deserialize)]
struct Envelope<T> {
    #[allow(dead_code)]
    spec_version: u64,
    #[allow(dead_code)]
    problem_type: String,
    payload: T,
}

fn typed_payload<T: DeserializeOwned>(text: &str) -> Result<T> {
    typed_field(text, |e: Envelope<T>| e.payload)
}

/// Deserializes the whole document again with path tracking.
pub(crate) fn typed_field<E: DeserializeOwned, T>(text: &str, pick: impl FnOnce(E) -> T) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    match serde_path_to_error::deserialize::<_, E>(&mut de) {
        Ok(e) => Ok(pick(e)),
        Err(err) => {
            let path = err.path().to_string();
            Err(parse_error(if path == "." { "" } else { &path }, err.inner()))
        }
    }
}

fn parse_error(path: &str, err: &serde_json::Error) -> Error {
    let text = err.to_string();
    let message = match text.rsplit_once(" at line ") {
        Some((m, _)) => m.to_string(),
        None => text,
    };
    Error::Parse {
        path: if path.is_empty() { "document".to_string() } else { path.to_string() },
        line: err.line(),
        column: err.column(),
        message,
    }
}

/// Every key present in `input` must survive a typed round trip into `expected`.
pub(crate) fn check_known_keys(input: &Value, expected: &Value, path: &str) -> Result<()> {
    match (input, expected) {
        (Value::Object(a), Value::Object(b)) => {
            for (key, value) in a {
                let at = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                match b.get(key) {
                    Some(e) => check_known_keys(value, e, &at)?,
                    None if value.is_null() => {}
                    None => return Err(Error::invalid(at, format!("unknown key `{key}`"))),
                }
            }
            Ok(())
        }
        (Value::Array(a), Value::Array(b)) => {
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                check_known_keys(x, y, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL_RANK: &str = r#"{
        "spec_version": 1,
        "problem_type": "rank",
        "payload": {
            "frame": {"criteria": [{"id": "c1", "direction": "maximize", "weight": 1.0}]},
            "alternatives": [{"id": "a", "estimates": [3]}]
        }
    }"#;

    #[test]
    fn minimal_rank_file() {
        let file = parse_problem(MINIMAL_RANK).unwrap();
        let Problem::Rank(p) = &file.problem else { panic!("rank expected") };
        assert_eq!(p.alternatives.len(), 1);
        assert_eq!(p.frame.len(), 1);
    }

    #[test]
    fn unknown_type() {
        let text = MINIMAL_RANK.replace("\"rank\"", "\"qap\"");
        assert_eq!(parse_problem(&text).unwrap_err(), Error::UnknownProblemType("qap".into()));
    }

    #[test]
    fn unsupported_version() {
        let text = MINIMAL_RANK.replace("\"spec_version\": 1", "\"spec_version\": 2");
        assert_eq!(parse_problem(&text).unwrap_err(), Error::UnsupportedVersion(2));
    }

    #[test]
    fn unknown_key_strict_and_lenient() {
        let text = MINIMAL_RANK.replace("\"estimates\": [3]", "\"estimates\": [3], \"colour\": 1");
        let err = parse_problem(&text).unwrap_err();
        assert_eq!(err, Error::invalid("payload.alternatives[0].colour", "unknown key `colour`"));
        assert!(parse_problem_with(&text, ParseMode::Lenient).is_ok());
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_problem("{\n  \"spec_version\": 1,\n  oops\n}").unwrap_err();
        let Error::Parse { line, .. } = err else { panic!("parse error expected, got {err:?}") };
        assert_eq!(line, 3);
    }

    #[test]
    fn type_error_names_path() {
        let text = MINIMAL_RANK.replace("[3]", "[\"x\"]");
        let Error::Parse { path, line, .. } = parse_problem(&text).unwrap_err() else { panic!() };
        assert_eq!(path, "payload.alternatives[0].estimates[0]");
        assert_eq!(line, 6);
    }

    #[test]
    fn invariant_violation_names_path() {
        let text = r#"{"spec_version": 1, "problem_type": "tsp",
            "payload": {"ids": ["a", "b", "c"], "dist": [[0, 1, 2], [1, 0, 3], [2, 4, 0]]}}"#;
        let err = parse_problem(text).unwrap_err();
        let Error::Invalid { path, .. } = &err else { panic!("{err:?}") };
        assert!(path.starts_with("payload.dist"), "{err}");
    }

    #[test]
    fn write_parse_identity() {
        let once = write_problem(&parse_problem(MINIMAL_RANK).unwrap());
        let twice = write_problem(&parse_problem(&once).unwrap());
        assert_eq!(once, twice);
        assert!(once.find("\"payload\"").unwrap() < once.find("\"problem_type\"").unwrap());
    }
}

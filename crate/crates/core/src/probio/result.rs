use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{canonical, check_known_keys, read_header, text, typed_field, ProblemType, SPEC_VERSION};
use crate::assign::AssignmentSolution;
use crate::cluster::Dendrogram;
use crate::frameworks::{IntegrationEvaluation, ThreeSetReport, Trajectory};
use crate::morph::Synthesis;
use crate::rank::RankingResult;
use crate::route::Tour;
use crate::select::SelectionSolution;
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSolution {
    pub dendrogram: Dendrogram,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<Vec<String>>>,
}

/// Solver output; the variant follows from the problem type.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Rank(RankingResult),
    /// Knapsack, MCKP and improvement plans.
    Selection(SelectionSolution),
    Cluster(ClusterSolution),
    /// One assignment, or the Pareto set.
    Assign(Vec<AssignmentSolution>),
    Tour(Tour),
    Synthesis(Synthesis),
    Trajectory(Vec<Trajectory>),
    Integration(IntegrationEvaluation),
    Pipeline(ThreeSetReport),
}

impl Solution {
    fn fits(&self, problem_type: ProblemType) -> bool {
        use ProblemType as P;
        matches!(
            (self, problem_type),
            (Solution::Rank(_), P::Rank)
                | (Solution::Selection(_), P::Knapsack | P::Mckp | P::Improve)
                | (Solution::Cluster(_), P::Cluster)
                | (Solution::Assign(_), P::Assign)
                | (Solution::Tour(_), P::Tsp)
                | (Solution::Synthesis(_), P::Morph)
                | (Solution::Trajectory(_), P::Trajectory)
                | (Solution::Integration(_), P::Integrate)
                | (Solution::Pipeline(_), P::Pipeline)
        )
    }

    fn to_value(&self) -> Value {
        let v = match self {
            Solution::Rank(s) => serde_json::to_value(s),
            Solution::Selection(s) => serde_json::to_value(s),
            Solution::Cluster(s) => serde_json::to_value(s),
            Solution::Assign(s) => serde_json::to_value(s),
            Solution::Tour(s) => serde_json::to_value(s),
            Solution::Synthesis(s) => serde_json::to_value(s),
            Solution::Trajectory(s) => serde_json::to_value(s),
            Solution::Integration(s) => serde_json::to_value(s),
            Solution::Pipeline(s) => serde_json::to_value(s),
        };
        v.expect("solutions serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
}

/// Comparison of a heuristic answer against its exact counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Name of the exact or brute-force procedure.
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heuristic_objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_objective: Option<f64>,
    pub checks: Vec<OracleCheck>,
    pub passed: bool,
}

impl OracleReport {
    pub fn new(reference: impl Into<String>) -> Self {
        OracleReport {
            reference: reference.into(),
            heuristic_objective: None,
            reference_objective: None,
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) {
        self.passed &= passed;
        self.checks.push(OracleCheck { name: name.into(), passed });
    }
}

/// Deterministic run information. Wall-clock time is left out so that
/// repeated runs produce identical files.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Enumeration guards in force.
    pub limits: Limits,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultFile {
    pub spec_version: u64,
    pub problem_type: ProblemType,
    pub method: String,
    pub solution: Solution,
    pub diagnostics: Diagnostics,
}

impl ResultFile {
    /// Fails when `solution` does not belong to `problem_type`.
    pub fn new(problem_type: ProblemType, method: impl Into<String>, solution: Solution, diagnostics: Diagnostics) -> Result<Self> {
        if !solution.fits(problem_type) {
            return Err(Error::invalid("solution", format!("solution kind does not match problem type `{problem_type}`")));
        }
        Ok(ResultFile {
            spec_version: SPEC_VERSION,
            problem_type,
            method: method.into(),
            solution,
            diagnostics,
        })
    }

    fn to_value(&self) -> Value {
        serde_json::json!({
            "spec_version": self.spec_version,
            "problem_type": self.problem_type.token(),
            "method": self.method,
            "solution": self.solution.to_value(),
            "diagnostics": serde_json::to_value(&self.diagnostics).expect("diagnostics serialize"),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    /// Canonical JSON with sorted keys.
    #[default]
    Structured,
    /// Human-readable report.
    Text,
}

pub fn write_result(result: &ResultFile, format: OutputFormat) -> String {
    match format {
        OutputFormat::Structured => canonical(&result.to_value()),
        OutputFormat::Text => text::render(result),
    }
}

#[derive(Deserialize)]
struct Envelope<T> {
    #[allow(dead_code)]
    spec_version: u64,
    #[allow(dead_code)]
    problem_type: String,
    method: String,
    solution: T,
    #[serde(default)]
    diagnostics: Diagnostics,
}

fn typed<T: serde::de::DeserializeOwned>(text: &str, wrap: fn(T) -> Solution) -> Result<(String, Solution, Diagnostics)> {
    typed_field(text, |e: Envelope<T>| (e.method, wrap(e.solution), e.diagnostics))
}

/// Parses a structured result file.
pub fn parse_result(text: &str) -> Result<ResultFile> {
    let (version, kind, raw) = read_header(text)?;
    let problem_type = ProblemType::from_token(&kind)?;
    use ProblemType as P;
    let (method, solution, diagnostics) = match problem_type {
        P::Rank => typed(text, Solution::Rank)?,
        P::Knapsack | P::Mckp | P::Improve => typed(text, Solution::Selection)?,
        P::Cluster => typed(text, Solution::Cluster)?,
        P::Assign => typed(text, Solution::Assign)?,
        P::Tsp => typed(text, Solution::Tour)?,
        P::Morph => typed(text, Solution::Synthesis)?,
        P::Trajectory => typed(text, Solution::Trajectory)?,
        P::Integrate => typed(text, Solution::Integration)?,
        P::Pipeline => typed(text, Solution::Pipeline)?,
    };
    let file = ResultFile {
        spec_version: version,
        problem_type,
        method,
        solution,
        diagnostics,
    };
    check_known_keys(&raw, &file.to_value(), "")?;
    Ok(file)
}

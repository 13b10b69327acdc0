//! Command-line front end: reads a problem file, solves it with the named
//! method and writes a result report.
//!
//! Exit codes: 0 success, 1 solve failure or oracle mismatch, 2 usage
//! error, 3 input/parse/validation error. Every failure prints one line
//! `error[<kind>]: <explanation>` on standard error.

mod oracle;

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::assign::{assign_exact_with, assign_greedy, assign_pareto_with};
use crate::cluster::{build_dendrogram, cut_dendrogram, Linkage};
use crate::criteria::{CriteriaFrame, Criterion};
use crate::frameworks::{
    design_trajectory, evaluate_integration_tree, plan_improvement_exact, plan_improvement_greedy, plan_improvement_with,
    run_three_set_pipeline_with, SolveMethod,
    TrajectoryOptions,
};
use crate::morph::{rank_leaf_priorities, synthesize, ComposeOptions};
use crate::probio::{
    parse_problem, write_result, ClusterSolution, Diagnostics, OutputFormat, Problem, ProblemType, ResultFile, Solution,
};
use crate::rank::{rank, rank_outranking, RankMethod};
use crate::route::{tsp_brute_force_with, tsp_nearest_neighbor, tsp_two_opt};
use crate::select::{knapsack_exact_with, knapsack_greedy, mckp_exact_dp_with, mckp_greedy};
use crate::{Error, Limits};

#[derive(Debug, Parser)]
#[command(name = "hmmd-kit", version, about = "Structural system design toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank alternatives (methods: utility, pareto, outranking, ideal).
    Rank(Invocation),
    /// Multicriteria knapsack (methods: greedy, exact).
    Knapsack(Invocation),
    /// Multiple-choice knapsack (methods: greedy, exact).
    Mckp(Invocation),
    /// Hierarchical clustering (methods: single, complete, average; default from file).
    Cluster(Invocation),
    /// Assignment (methods: greedy, exact, pareto).
    Assign(Invocation),
    /// Traveling salesman (methods: heuristic, nn, brute).
    Tsp(Invocation),
    /// Hierarchical morphological synthesis (methods: given, or a ranking method applied to leaf estimates first).
    Synth(Invocation),
    /// Multistage trajectory design (method: pareto).
    Trajectory(Invocation),
    /// Hierarchical evaluation with integration tables (method: table).
    Integrate(Invocation),
    /// Three-set four-problem pipeline (method: staged).
    Pipeline(Invocation),
    /// Improvement actions under a budget (methods: auto, exact, greedy).
    Improve(Invocation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, clap::Args)]
pub struct Invocation {
    /// Problem file.
    #[arg(long)]
    pub input: PathBuf,
    /// Result file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the randomized oracle sweep.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cross-check the answer against exact or brute-force counterparts.
    #[arg(long)]
    pub oracle: bool,
    /// Criterion weights replacing those of the file, comma-separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub weights: Option<Vec<f64>>,
}

impl Command {
    fn parts(&self) -> (&'static str, ProblemType, &Invocation) {
        match self {
            Command::Rank(i) => ("rank", ProblemType::Rank, i),
            Command::Knapsack(i) => ("knapsack", ProblemType::Knapsack, i),
            Command::Mckp(i) => ("mckp", ProblemType::Mckp, i),
            Command::Cluster(i) => ("cluster", ProblemType::Cluster, i),
            Command::Assign(i) => ("assign", ProblemType::Assign, i),
            Command::Tsp(i) => ("tsp", ProblemType::Tsp, i),
            Command::Synth(i) => ("synth", ProblemType::Morph, i),
            Command::Trajectory(i) => ("trajectory", ProblemType::Trajectory, i),
            Command::Integrate(i) => ("integrate", ProblemType::Integrate, i),
            Command::Pipeline(i) => ("pipeline", ProblemType::Pipeline, i),
            Command::Improve(i) => ("improve", ProblemType::Improve, i),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Usage,
    Io,
    Parse,
    Invalid,
    Solve,
    Oracle,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Usage => 2,
            FailureKind::Io | FailureKind::Parse | FailureKind::Invalid => 3,
            FailureKind::Solve | FailureKind::Oracle => 1,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            FailureKind::Usage => "usage",
            FailureKind::Io => "io",
            FailureKind::Parse => "parse",
            FailureKind::Invalid => "invalid",
            FailureKind::Solve => "solve",
            FailureKind::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl Failure {
    fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        Failure { kind, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure::new(FailureKind::Usage, message)
    }

    fn solve(e: Error) -> Self {
        Failure::new(FailureKind::Solve, e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Keep the report on one line.
        write!(f, "error[{}]: {}", self.kind.tag(), self.message.replace('\n', " "))
    }
}

/// Runs with the process's standard streams and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{}", Failure::usage(first.trim_start_matches("error: ")));
            return FailureKind::Usage.exit_code();
        }
    };
    let limits = Limits::from_env();
    match execute(&cli.command, &limits) {
        Ok(outcome) => {
            if let Err(f) = emit(&cli.command, &outcome.text, stdout) {
                let _ = writeln!(stderr, "{f}");
                return f.kind.exit_code();
            }
            match outcome.oracle_failure {
                Some(message) => {
                    let f = Failure::new(FailureKind::Oracle, message);
                    let _ = writeln!(stderr, "{f}");
                    f.kind.exit_code()
                }
                None => 0,
            }
        }
        Err(f) => {
            let _ = writeln!(stderr, "{f}");
            f.kind.exit_code()
        }
    }
}

fn emit(command: &Command, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let (_, _, inv) = command.parts();
    match &inv.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::new(FailureKind::Io, format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::new(FailureKind::Io, format!("cannot write output: {e}"))),
    }
}

pub struct Outcome {
    pub result: ResultFile,
    pub text: String,
    /// Set when `--oracle` found a mismatch; the report is still written.
    pub oracle_failure: Option<String>,
}

/// Parses, solves and renders one invocation without touching the output.
pub fn execute(command: &Command, limits: &Limits) -> Result<Outcome, Failure> {
    let (name, expected, inv) = command.parts();
    let text = std::fs::read_to_string(&inv.input)
        .map_err(|e| Failure::new(FailureKind::Io, format!("cannot read {}: {e}", inv.input.display())))?;
    let file = parse_problem(&text).map_err(|e| {
        let kind = match e {
            Error::Invalid { .. } => FailureKind::Invalid,
            _ => FailureKind::Parse,
        };
        Failure::new(kind, format!("{}: {e}", inv.input.display()))
    })?;
    if file.problem_type() != expected {
        return Err(Failure::usage(format!(
            "subcommand `{name}` expects a `{expected}` problem, the file holds `{}`",
            file.problem_type()
        )));
    }
    let mut problem = file.problem;
    if let Some(w) = &inv.weights {
        reweight(&mut problem, w, name)?;
    }
    let (method, solution, mut diagnostics) = solve(&problem, inv.method.as_deref(), name, limits)?;
    diagnostics.limits = *limits;
    let mut oracle_failure = None;
    if inv.oracle {
        let report = oracle::check(&problem, &method, &solution, limits, inv.seed).map_err(Failure::solve)?;
        if !report.passed {
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            oracle_failure = Some(format!("{} failed: {}", report.reference, failed.join("; ")));
        }
        diagnostics.oracle = Some(report);
    }
    let result = ResultFile::new(expected, method, solution, diagnostics).map_err(Failure::solve)?;
    let text = write_result(
        &result,
        match inv.format {
            Format::Json => OutputFormat::Structured,
            Format::Text => OutputFormat::Text,
        },
    );
    Ok(Outcome { result, text, oracle_failure })
}

fn with_weights(frame: &CriteriaFrame, weights: &[f64], what: &str) -> Result<CriteriaFrame, Failure> {
    if weights.len() != frame.len() {
        return Err(Failure::usage(format!(
            "--weights has {} values but the {what} has {} criteria",
            weights.len(),
            frame.len()
        )));
    }
    let criteria: Vec<Criterion> = frame
        .criteria()
        .iter()
        .zip(weights)
        .map(|(c, w)| Criterion { weight: *w, ..c.clone() })
        .collect();
    CriteriaFrame::new(criteria).map_err(|e| Failure::usage(format!("--weights: {e}")))
}

fn reweight(problem: &mut Problem, weights: &[f64], name: &str) -> Result<(), Failure> {
    let frame = match problem {
        Problem::Rank(p) => &mut p.frame,
        Problem::Knapsack(p) => &mut p.frame,
        Problem::Mckp(p) => &mut p.frame,
        Problem::Assign(p) => &mut p.frame,
        Problem::Pipeline(p) => &mut p.frame,
        Problem::Improve(p) => &mut p.frame,
        _ => return Err(Failure::usage(format!("--weights does not apply to `{name}`"))),
    };
    *frame = with_weights(frame, weights, "criteria frame")?;
    Ok(())
}

fn unknown_method(name: &str, method: &str, allowed: &[&str]) -> Failure {
    Failure::usage(format!("unknown method `{method}` for `{name}` (expected one of: {})", allowed.join(", ")))
}

fn pick<'a>(name: &str, method: Option<&'a str>, allowed: &[&'a str]) -> Result<&'a str, Failure> {
    match method {
        None => Ok(allowed[0]),
        Some(m) if allowed.contains(&m) => Ok(allowed.iter().find(|a| **a == m).expect("allowed")),
        Some(m) => Err(unknown_method(name, m, allowed)),
    }
}

fn solve(problem: &Problem, method: Option<&str>, name: &str, limits: &Limits) -> Result<(String, Solution, Diagnostics), Failure> {
    let mut diag = Diagnostics::default();
    let solved = match problem {
        Problem::Rank(p) => {
            let m = pick(name, method, &["pareto", "utility", "outranking", "ideal"])?;
            let rm = RankMethod::from_token(m).expect("listed method");
            let inst = p.instance();
            let result = match (rm, p.outranking) {
                (RankMethod::Outranking, Some(t)) => rank_outranking(&inst, t.p, t.q),
                _ => rank(&inst, rm),
            }
            .map_err(Failure::solve)?;
            (m.to_string(), Solution::Rank(result))
        }
        Problem::Knapsack(p) => {
            let m = pick(name, method, &["greedy", "exact"])?;
            let sol = if m == "exact" { knapsack_exact_with(p, None, limits) } else { knapsack_greedy(p, None) };
            (m.to_string(), Solution::Selection(sol.map_err(Failure::solve)?))
        }
        Problem::Mckp(p) => {
            let m = pick(name, method, &["greedy", "exact"])?;
            let sol = if m == "exact" { mckp_exact_dp_with(p, None, limits) } else { mckp_greedy(p, None) };
            (m.to_string(), Solution::Selection(sol.map_err(Failure::solve)?))
        }
        Problem::Cluster(p) => {
            let linkage = match method {
                None => p.linkage,
                Some("single") => Linkage::Single,
                Some("complete") => Linkage::Complete,
                Some("average") => Linkage::Average,
                Some(m) => return Err(unknown_method(name, m, &["single", "complete", "average"])),
            };
            let dendrogram = build_dendrogram(&p.matrix(), linkage).map_err(Failure::solve)?;
            let clusters = p.k.map(|k| cut_dendrogram(&dendrogram, k)).transpose().map_err(Failure::solve)?;
            let token = match linkage {
                Linkage::Single => "single",
                Linkage::Complete => "complete",
                Linkage::Average => "average",
            };
            (token.to_string(), Solution::Cluster(ClusterSolution { dendrogram, clusters }))
        }
        Problem::Assign(p) => {
            let m = pick(name, method, &["greedy", "exact", "pareto"])?;
            let sols = match m {
                "exact" => assign_exact_with(p, None, limits).map(|s| vec![s]),
                "pareto" => assign_pareto_with(p, limits),
                _ => assign_greedy(p, None).map(|s| vec![s]),
            }
            .map_err(Failure::solve)?;
            (m.to_string(), Solution::Assign(sols))
        }
        Problem::Tsp(p) => {
            let m = pick(name, method, &["heuristic", "nn", "brute"])?;
            let inst = p.instance();
            let start = p.start.clone().unwrap_or_else(|| inst.ids[0].clone());
            let tour = match m {
                "brute" => tsp_brute_force_with(&inst, limits),
                "nn" => tsp_nearest_neighbor(&inst, &start),
                _ => tsp_nearest_neighbor(&inst, &start).and_then(|t| tsp_two_opt(&inst, &t)),
            }
            .map_err(Failure::solve)?;
            (m.to_string(), Solution::Tour(tour))
        }
        Problem::Morph(system) => {
            let m = pick(name, method, &["given", "pareto", "utility", "outranking", "ideal"])?;
            let mut system = system.clone();
            if let Some(rm) = RankMethod::from_token(m) {
                rank_leaf_priorities(&mut system, rm).map_err(Failure::solve)?;
                diag.notes.push(format!("leaf priorities derived from estimates by `{m}` ranking"));
            }
            let synthesis = synthesize(&system, &ComposeOptions::with_limits(limits)).map_err(Failure::solve)?;
            (m.to_string(), Solution::Synthesis(synthesis))
        }
        Problem::Trajectory(p) => {
            let m = pick(name, method, &["pareto"])?;
            let options = TrajectoryOptions {
                all_pairs: p.all_pairs,
                max_combinations: limits.combinations,
            };
            let out = design_trajectory(&p.spec(), &options).map_err(Failure::solve)?;
            (m.to_string(), Solution::Trajectory(out))
        }
        Problem::Integrate(tree) => {
            let m = pick(name, method, &["table"])?;
            (m.to_string(), Solution::Integration(evaluate_integration_tree(tree).map_err(Failure::solve)?))
        }
        Problem::Pipeline(spec) => {
            let m = pick(name, method, &["staged"])?;
            let report = run_three_set_pipeline_with(spec, None, limits).map_err(Failure::solve)?;
            if let Some(method) = report.method {
                diag.notes.push(format!("action selection solved by {}", solve_token(method)));
            }
            (m.to_string(), Solution::Pipeline(report))
        }
        Problem::Improve(spec) => {
            let m = pick(name, method, &["auto", "exact", "greedy"])?;
            let plan = match m {
                "exact" => plan_improvement_exact(spec, None, limits),
                "greedy" => plan_improvement_greedy(spec, None),
                _ => plan_improvement_with(spec, None, limits),
            }
            .map_err(Failure::solve)?;
            (solve_token(plan.method).to_string(), Solution::Selection(plan.solution))
        }
    };
    Ok((solved.0, solved.1, diag))
}

fn solve_token(method: SolveMethod) -> &'static str {
    match method {
        SolveMethod::Exact => "exact",
        SolveMethod::Greedy => "greedy",
    }
}

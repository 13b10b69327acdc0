use std::path::{Path, PathBuf};

use hmmd_kit::cli::run_with;
use hmmd_kit::probio::{parse_result, Solution};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(std::iter::once("hmmd-kit").chain(args.iter().copied()), &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn synth_lists_four_course_composites() {
    let r = run(&["synth", "--input", path(&fixture("course_example.morph"))]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("node S: 4 composites"), "{}", r.stdout);
    assert!(r.stdout.contains("L2*M2*F2*G3  N(S) = (2; 4, 0, 0)"));
    assert!(r.stderr.is_empty());
}

#[test]
fn mckp_oracle_passes_on_worked_example() {
    for method in ["greedy", "exact"] {
        let r = run(&["mckp", "--input", path(&fixture("teaching_levels.mckp")), "--method", method, "--oracle"]);
        assert_eq!(r.code, 0, "{method}: {}", r.stderr);
        assert!(r.stdout.contains("oracle: pass"), "{}", r.stdout);
        assert!(r.stdout.contains("total cost 15"));
    }
}

#[test]
fn missing_input_is_an_io_error() {
    let r = run(&["rank", "--input", "/nonexistent/problem.rank"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.starts_with("error[io]: "), "{}", r.stderr);
    assert_eq!(r.stderr.lines().count(), 1);
}

#[test]
fn wrong_problem_type_is_a_usage_error() {
    let r = run(&["knapsack", "--input", path(&fixture("teaching_levels.mckp"))]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.starts_with("error[usage]: "), "{}", r.stderr);
}

#[test]
fn bad_arguments_are_usage_errors() {
    for args in [
        vec!["frobnicate"],
        vec!["rank"],
        vec!["tsp", "--input", "x.tsp", "--format", "yaml"],
    ] {
        let r = run(&args);
        assert_eq!(r.code, 2, "{args:?}");
        assert!(r.stderr.starts_with("error[usage]: "), "{args:?}: {}", r.stderr);
    }
    let r = run(&["tsp", "--input", path(&fixture("lab_tour.tsp")), "--method", "simplex"]);
    assert_eq!(r.code, 2);
    let r = run(&["knapsack", "--input", path(&fixture("lab_knapsack.knapsack")), "--weights", "1,2,3"]);
    assert_eq!(r.code, 2);
}

#[test]
fn help_exits_zero() {
    let r = run(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("synth"));
}

#[test]
fn malformed_and_invalid_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let syntax = write_temp(&dir, "a.rank", "{\"spec_version\": 1,\n \"problem_type\": \"rank\",\n");
    let r = run(&["rank", "--input", path(&syntax)]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.starts_with("error[parse]: ") && r.stderr.contains("line 3"), "{}", r.stderr);

    let unknown = write_temp(&dir, "b.rank", r#"{"spec_version": 1, "problem_type": "qap", "payload": {}}"#);
    let r = run(&["rank", "--input", path(&unknown)]);
    assert_eq!(r.code, 3, "{}", r.stderr);

    let dup = write_temp(
        &dir,
        "c.rank",
        r#"{"spec_version": 1, "problem_type": "rank", "payload": {
            "frame": {"criteria": [{"id": "a", "direction": "maximize", "weight": 1}]},
            "alternatives": [{"id": "x", "estimates": [1]}, {"id": "x", "estimates": [2]}]}}"#,
    );
    let r = run(&["rank", "--input", path(&dup)]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.starts_with("error[invalid]: "), "{}", r.stderr);
}

#[test]
fn guard_violation_is_a_solve_error() {
    let dir = tempfile::tempdir().unwrap();
    let n = 12;
    let ids: Vec<String> = (0..n).map(|i| format!("\"c{i}\"")).collect();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let row: Vec<String> = (0..n).map(|j| format!("{}", (i as i64 - j as i64).abs())).collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    let text = format!(
        r#"{{"spec_version": 1, "problem_type": "tsp", "payload": {{"ids": [{}], "dist": [{}]}}}}"#,
        ids.join(", "),
        rows.join(", ")
    );
    let p = write_temp(&dir, "big.tsp", &text);
    let r = run(&["tsp", "--input", path(&p), "--method", "brute"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert!(r.stderr.starts_with("error[solve]: "), "{}", r.stderr);
}

#[test]
fn json_output_parses_and_output_file_matches_stdout() {
    let input = fixture("lab_knapsack.knapsack");
    let r = run(&["knapsack", "--input", path(&input), "--format", "json", "--method", "exact"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let parsed = parse_result(&r.stdout).unwrap();
    let Solution::Selection(s) = parsed.solution else { panic!("not a selection") };
    assert!(s.total_cost <= 12.0);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("result.json");
    let r2 = run(&["knapsack", "--input", path(&input), "--format", "json", "--method", "exact", "--output", path(&out)]);
    assert_eq!(r2.code, 0);
    assert!(r2.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), r.stdout);
}

#[test]
fn repeated_runs_are_identical() {
    for (cmd, file, method) in [
        ("tsp", "lab_tour.tsp", "heuristic"),
        ("synth", "student_strategy.morph", "pareto"),
        ("assign", "teaching_assign.assign", "pareto"),
        ("knapsack", "lab_knapsack.knapsack", "greedy"),
    ] {
        let input = fixture(file);
        let args = ["--input", path(&input), "--method", method, "--format", "json", "--oracle", "--seed", "3"];
        let a = run(&[&[cmd][..], &args[..]].concat());
        let b = run(&[&[cmd][..], &args[..]].concat());
        assert_eq!(a.code, 0, "{cmd}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn weights_change_the_scalarization() {
    let input = fixture("lab_knapsack.knapsack");
    let profit = run(&["knapsack", "--input", path(&input), "--method", "exact", "--weights", "1,0"]);
    let risk = run(&["knapsack", "--input", path(&input), "--method", "exact", "--weights", "0,1"]);
    assert_eq!(profit.code, 0, "{}", profit.stderr);
    assert_eq!(risk.code, 0);
    assert_ne!(profit.stdout, risk.stdout);
}

#[test]
fn every_subcommand_solves_its_fixture_with_oracle() {
    for (cmd, file) in [
        ("rank", "lab_ranking.rank"),
        ("knapsack", "lab_knapsack.knapsack"),
        ("mckp", "teaching_levels.mckp"),
        ("cluster", "lab_cluster.cluster"),
        ("assign", "teaching_assign.assign"),
        ("tsp", "lab_tour.tsp"),
        ("synth", "course_example.morph"),
        ("trajectory", "stages.trajectory"),
        ("integrate", "course_quality.integrate"),
        ("pipeline", "teaching_pipeline.pipeline"),
        ("improve", "lab_improvement.improve"),
    ] {
        let r = run(&[cmd, "--input", path(&fixture(file)), "--oracle"]);
        assert_eq!(r.code, 0, "{cmd}: {}", r.stderr);
        assert!(r.stdout.contains("oracle: pass"), "{cmd}: {}", r.stdout);
    }
}

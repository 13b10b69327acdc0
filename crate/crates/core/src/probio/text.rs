use std::fmt::Write;

use super::result::{ResultFile, Solution};
use crate::select::SelectionSolution;

/// Human-readable report. Pareto sets keep the solver's canonical order.
pub(super) fn render(r: &ResultFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "problem: {}", r.problem_type);
    let _ = writeln!(out, "method: {}", r.method);
    // `fmt::Write` for `String` never fails.
    let _ = body(&mut out, &r.solution);
    if let Some(oracle) = &r.diagnostics.oracle {
        let _ = writeln!(out, "oracle: {} ({})", if oracle.passed { "pass" } else { "FAIL" }, oracle.reference);
        if let (Some(h), Some(x)) = (oracle.heuristic_objective, oracle.reference_objective) {
            let _ = writeln!(out, "  heuristic objective {}, reference objective {}", num(h), num(x));
        }
        for c in &oracle.checks {
            let _ = writeln!(out, "  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name);
        }
    }
    for note in &r.diagnostics.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

fn num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.6}").trim_end_matches('0').to_string()
    }
}

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| num(*x)).collect();
    format!("({})", parts.join(", "))
}

fn selection(out: &mut String, s: &SelectionSolution) -> std::fmt::Result {
    writeln!(out, "objective {}", num(s.objective))?;
    writeln!(out, "total cost {}", num(s.total_cost))?;
    if s.chosen.is_empty() {
        return writeln!(out, "selected: no items");
    }
    writeln!(out, "objective vector {}", vector(&s.objective_vector))?;
    if s.groups.is_empty() {
        let ids: Vec<&str> = s.chosen.iter().map(String::as_str).collect();
        writeln!(out, "selected: {}", ids.join(", "))
    } else {
        writeln!(out, "selected:")?;
        for (g, item) in &s.groups {
            writeln!(out, "  {g}: {item}")?;
        }
        Ok(())
    }
}

fn body(out: &mut String, solution: &Solution) -> std::fmt::Result {
    match solution {
        Solution::Rank(r) => {
            writeln!(out, "levels: {}", r.levels())?;
            let mut rows: Vec<(&String, &u32)> = r.priorities.iter().collect();
            rows.sort_by_key(|(id, p)| (**p, *id));
            for (id, p) in rows {
                writeln!(out, "  {p}  {id}  score {}", num(r.scores.get(id).copied().unwrap_or(f64::NAN)))?;
            }
        }
        Solution::Selection(s) => selection(out, s)?,
        Solution::Cluster(c) => {
            writeln!(out, "merges:")?;
            for (step, m) in c.dendrogram.merges.iter().enumerate() {
                let node = c.dendrogram.leaves.len() + step;
                writeln!(out, "  {node} = {} + {} at {}", m.left, m.right, num(m.height))?;
            }
            if let Some(clusters) = &c.clusters {
                writeln!(out, "clusters: {}", clusters.len())?;
                for block in clusters {
                    writeln!(out, "  {{{}}}", block.join(", "))?;
                }
            }
        }
        Solution::Assign(sols) => {
            writeln!(out, "solutions: {}", sols.len())?;
            for (k, s) in sols.iter().enumerate() {
                writeln!(out, "#{} objective {} vector {}", k + 1, num(s.objective), vector(&s.objective_vector))?;
                if s.pairs.is_empty() {
                    writeln!(out, "  no pairs")?;
                }
                for p in &s.pairs {
                    writeln!(out, "  {} -> {}", p.agent, p.position)?;
                }
            }
        }
        Solution::Tour(t) => {
            writeln!(out, "length {}", num(t.length))?;
            writeln!(out, "tour: {}", t.order.join(" -> "))?;
        }
        Solution::Synthesis(s) => {
            for node in &s.nodes {
                writeln!(out, "node {}: {} composites", node.node, node.composites.len())?;
                for c in &node.composites {
                    writeln!(out, "  {}  N(S) = {}", c.id, c.quality)?;
                }
            }
        }
        Solution::Trajectory(ts) => {
            writeln!(out, "trajectories: {}", ts.len())?;
            for t in ts {
                writeln!(out, "  <{}>  N(S) = {}", t.decisions.join(" -> "), t.quality)?;
            }
        }
        Solution::Integration(e) => {
            writeln!(out, "root estimate {}", e.root)?;
            for (id, v) in &e.trace {
                writeln!(out, "  {id} = {v}")?;
            }
        }
        Solution::Pipeline(p) => {
            writeln!(out, "clusters of set 1: {}", p.clusters1.len())?;
            for (i, b) in p.clusters1.iter().enumerate() {
                writeln!(out, "  [{i}] {{{}}}", b.join(", "))?;
            }
            writeln!(out, "clusters of set 2: {}", p.clusters2.len())?;
            for (i, b) in p.clusters2.iter().enumerate() {
                writeln!(out, "  [{i}] {{{}}}", b.join(", "))?;
            }
            writeln!(out, "matches:")?;
            for m in &p.matches {
                writeln!(out, "  [{}] -> [{}]", m.left, m.right)?;
            }
            writeln!(out, "objective {}", num(p.objective))?;
            writeln!(out, "total cost {}", num(p.total_cost))?;
            if p.selections.is_empty() {
                writeln!(out, "actions: no items")?;
            } else {
                writeln!(out, "actions:")?;
                for s in &p.selections {
                    writeln!(out, "  {} / {}: {}", s.left, s.right, s.action)?;
                }
            }
        }
    }
    Ok(())
}

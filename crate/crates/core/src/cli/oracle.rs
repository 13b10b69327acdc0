//! `--oracle` cross-checks. Heuristic answers are compared against the
//! exact solvers and, through a seeded sweep over random instances of the
//! same shape, against their declared approximation expectations.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assign::{assign_exact_with, assign_greedy, AssignmentInstance, AssignmentSolution};
use crate::cluster::{Dendrogram, Linkage};
use crate::criteria::{dominates, orient, CriteriaFrame, EPS};
use crate::frameworks::{plan_improvement_exact, ThreeSetReport};
use crate::morph::{rank_leaf_priorities, MorphNode, MorphSystem, QualityVector, Synthesis};
use crate::probio::{OracleReport, Problem, Solution, TrajectoryProblem};
use crate::rank::{RankMethod, RankingResult};
use crate::route::{tsp_brute_force_with, tsp_nearest_neighbor, tsp_two_opt, Tour, TspInstance};
use crate::select::{
    knapsack_exact_with, knapsack_greedy, mckp_exact_dp_with, mckp_greedy, scalarize, GroupRule, Item, KnapsackInstance,
    MckpInstance, SelectionSolution,
};
use crate::{Error, Limits, Result};

/// Heuristic objective must reach this share of the exact optimum.
const SELECTION_RATIO: f64 = 0.75;
/// Heuristic tour length may exceed the optimum by this factor.
const TOUR_RATIO: f64 = 1.10;
const SWEEP: usize = 100;
const SWEEP_NEEDED: usize = 95;
const TOUR_SWEEP_NEEDED: usize = 90;
/// Largest instance enumerated explicitly.
const ENUMERATION_LIMIT: u128 = 1_000_000;

pub(super) fn check(problem: &Problem, method: &str, solution: &Solution, limits: &Limits, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match (problem, solution) {
        (Problem::Knapsack(p), Solution::Selection(s)) => knapsack(p, method, s, limits, &mut rng),
        (Problem::Mckp(p), Solution::Selection(s)) => mckp(p, method, s, limits, &mut rng),
        (Problem::Assign(p), Solution::Assign(s)) => assign(p, method, s, limits, &mut rng),
        (Problem::Tsp(p), Solution::Tour(t)) => tsp(&p.instance(), method, t, limits, &mut rng),
        (Problem::Rank(_), Solution::Rank(r)) => Ok(rank(problem, method, r)),
        (Problem::Cluster(p), Solution::Cluster(c)) => Ok(cluster(&p.d, method, &c.dendrogram, c.clusters.as_deref())),
        (Problem::Morph(system), Solution::Synthesis(s)) => synth(system, method, s),
        (Problem::Trajectory(p), Solution::Trajectory(ts)) => trajectory(p, ts),
        (Problem::Integrate(tree), Solution::Integration(e)) => {
            let mut report = OracleReport::new("table totality");
            report.check("every integration table is total", tree.validate().is_ok());
            report.check("root estimate closes the trace", e.trace.last().map(|(_, v)| *v) == Some(e.root));
            Ok(report)
        }
        (Problem::Pipeline(spec), Solution::Pipeline(r)) => Ok(pipeline(&spec.set1.ids, &spec.set2.ids, spec.budget, r)),
        (Problem::Improve(spec), Solution::Selection(s)) => {
            let mut report = OracleReport::new("mckp_exact_dp");
            report.check("total cost within budget", s.total_cost <= spec.budget + EPS);
            let parts: BTreeSet<&str> = spec.parts.iter().map(|p| p.id.as_str()).collect();
            report.check(
                "at most one action per part",
                s.groups.len() == s.chosen.len() && s.groups.keys().all(|g| parts.contains(g.as_str())),
            );
            match plan_improvement_exact(spec, None, limits) {
                Ok(exact) => compare_objectives(&mut report, method, s.objective, exact.solution.objective),
                Err(e @ (Error::NonIntegral { .. } | Error::GuardExceeded { .. })) => skipped(&mut report, &e),
                Err(e) => return Err(e),
            }
            Ok(report)
        }
        _ => Err(Error::invalid("solution", "solution kind does not match the problem")),
    }
}

fn skipped(report: &mut OracleReport, why: &Error) {
    report.check(format!("exact reference skipped ({why})"), true);
}

fn compare_objectives(report: &mut OracleReport, method: &str, got: f64, exact: f64) {
    report.heuristic_objective = Some(got);
    report.reference_objective = Some(exact);
    report.check("objective does not exceed the exact optimum", got <= exact + EPS);
    if method == "exact" {
        report.check("objective equals the exact optimum", (got - exact).abs() <= EPS);
    } else {
        report.check(
            format!("objective reaches {SELECTION_RATIO} of the exact optimum"),
            got + EPS >= SELECTION_RATIO * exact,
        );
    }
}

fn sweep_check(report: &mut OracleReport, passed: usize, total: usize, needed: usize, what: &str) {
    report.check(format!("seeded sweep: {passed}/{total} random instances {what} (need {needed})"), passed >= needed);
}

fn within_ratio(heuristic: f64, exact: f64) -> bool {
    heuristic + EPS >= SELECTION_RATIO * exact
}

/// Integral range spanned by `values`, at least `[lo, lo + 1]`.
fn span(values: impl Iterator<Item = f64>) -> (i64, i64) {
    let (lo, hi) = values.fold((f64::MAX, f64::MIN), |(l, h), v| (l.min(v), h.max(v)));
    let (lo, hi) = if lo > hi { (0, 1) } else { (lo.floor() as i64, hi.ceil() as i64) };
    (lo, hi.max(lo + 1))
}

fn random_items(rng: &mut ChaCha8Rng, template: &[Item], frame: &CriteriaFrame, prefix: &str) -> Vec<Item> {
    let ranges: Vec<(i64, i64)> = (0..frame.len()).map(|k| span(template.iter().map(|it| it.value[k]))).collect();
    let (_, cmax) = span(template.iter().map(|it| it.cost));
    template
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let value = ranges.iter().map(|(lo, hi)| rng.gen_range(*lo..=*hi) as f64).collect();
            Item::new(format!("{prefix}{i}"), value, rng.gen_range(1..=cmax.max(1)) as f64)
        })
        .collect()
}

fn knapsack(p: &KnapsackInstance, method: &str, s: &SelectionSolution, limits: &Limits, rng: &mut ChaCha8Rng) -> Result<OracleReport> {
    let mut report = OracleReport::new("knapsack_exact");
    report.check("total cost within budget", s.total_cost <= p.budget + EPS);
    match knapsack_exact_with(p, None, limits) {
        Ok(exact) => compare_objectives(&mut report, method, s.objective, exact.objective),
        Err(e @ (Error::NonIntegral { .. } | Error::GuardExceeded { .. })) => skipped(&mut report, &e),
        Err(e) => return Err(e),
    }
    if method == "exact" && p.items.len() <= 20 {
        let beta = scalarize(&p.frame, &p.items.iter().map(|i| i.value.clone()).collect::<Vec<_>>(), None)?;
        let mut best = 0.0f64;
        for mask in 0u32..(1 << p.items.len()) {
            let (mut cost, mut value) = (0.0, 0.0);
            for (i, item) in p.items.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    cost += item.cost;
                    value += beta[i];
                }
            }
            if cost <= p.budget + EPS {
                best = best.max(value);
            }
        }
        report.check("exact optimum equals subset enumeration", (s.objective - best).abs() <= EPS);
    }
    if method == "greedy" && !p.items.is_empty() {
        let mut passed = 0;
        for _ in 0..SWEEP {
            let inst = KnapsackInstance::new(p.frame.clone(), random_items(rng, &p.items, &p.frame, "i"), p.budget.floor())?;
            let exact = match knapsack_exact_with(&inst, None, limits) {
                Ok(x) => x,
                Err(e @ Error::GuardExceeded { .. }) => {
                    skipped(&mut report, &e);
                    return Ok(report);
                }
                Err(e) => return Err(e),
            };
            passed += within_ratio(knapsack_greedy(&inst, None)?.objective, exact.objective) as usize;
        }
        sweep_check(&mut report, passed, SWEEP, SWEEP_NEEDED, "within ratio");
    }
    Ok(report)
}

fn mckp_enumerate(p: &MckpInstance) -> Result<Option<f64>> {
    let choices: u128 = p.groups.iter().map(|g| g.items.len() as u128 + 1).product();
    if choices > ENUMERATION_LIMIT {
        return Ok(None);
    }
    let all: Vec<Vec<f64>> = p.groups.iter().flat_map(|g| g.items.iter().map(|i| i.value.clone())).collect();
    let flat = scalarize(&p.frame, &all, None)?;
    let mut beta = Vec::new();
    let mut k = 0;
    for g in &p.groups {
        beta.push(flat[k..k + g.items.len()].to_vec());
        k += g.items.len();
    }
    let mut best: Option<f64> = None;
    let mut pick = vec![0usize; p.groups.len()];
    loop {
        let allowed = p.group_rule == GroupRule::AtMostOne || pick.iter().all(|j| *j > 0);
        if allowed {
            let (mut cost, mut value) = (0.0, 0.0);
            for (g, &j) in pick.iter().enumerate() {
                if j > 0 {
                    cost += p.groups[g].items[j - 1].cost;
                    value += beta[g][j - 1];
                }
            }
            if cost <= p.budget + EPS && best.is_none_or(|b| value > b) {
                best = Some(value);
            }
        }
        let mut g = 0;
        loop {
            if g == pick.len() {
                return Ok(best);
            }
            pick[g] += 1;
            if pick[g] <= p.groups[g].items.len() {
                break;
            }
            pick[g] = 0;
            g += 1;
        }
    }
}

fn mckp(p: &MckpInstance, method: &str, s: &SelectionSolution, limits: &Limits, rng: &mut ChaCha8Rng) -> Result<OracleReport> {
    let mut report = OracleReport::new("mckp_exact_dp");
    report.check("total cost within budget", s.total_cost <= p.budget + EPS);
    let ids: BTreeMap<&str, &str> = p
        .groups
        .iter()
        .flat_map(|g| g.items.iter().map(move |i| (i.id.as_str(), g.id.as_str())))
        .collect();
    report.check(
        "at most one item per group",
        s.groups.len() == s.chosen.len() && s.groups.iter().all(|(g, i)| ids.get(i.as_str()) == Some(&g.as_str())),
    );
    if p.group_rule == GroupRule::ExactlyOne {
        report.check("exactly one item per group", s.groups.len() == p.groups.len());
    }
    match mckp_exact_dp_with(p, None, limits) {
        Ok(exact) => compare_objectives(&mut report, method, s.objective, exact.objective),
        Err(e @ (Error::NonIntegral { .. } | Error::GuardExceeded { .. })) => skipped(&mut report, &e),
        Err(e) => return Err(e),
    }
    if method == "exact" {
        if let Some(best) = mckp_enumerate(p)? {
            report.check("exact optimum equals exhaustive enumeration", (s.objective - best).abs() <= EPS);
        }
    }
    if method == "greedy" && p.group_rule == GroupRule::AtMostOne && !p.groups.is_empty() {
        let template: Vec<Item> = p.groups.iter().flat_map(|g| g.items.clone()).collect();
        let mut passed = 0;
        for _ in 0..SWEEP {
            let mut items = random_items(rng, &template, &p.frame, "i").into_iter();
            let groups = p
                .groups
                .iter()
                .map(|g| crate::select::Group { id: g.id.clone(), items: items.by_ref().take(g.items.len()).collect() })
                .collect();
            let inst = MckpInstance::new(p.frame.clone(), groups, p.budget.floor(), GroupRule::AtMostOne)?;
            let exact = match mckp_exact_dp_with(&inst, None, limits) {
                Ok(x) => x,
                Err(e @ Error::GuardExceeded { .. }) => {
                    skipped(&mut report, &e);
                    return Ok(report);
                }
                Err(e) => return Err(e),
            };
            passed += within_ratio(mckp_greedy(&inst, None)?.objective, exact.objective) as usize;
        }
        sweep_check(&mut report, passed, SWEEP, SWEEP_NEEDED, "within ratio");
    }
    Ok(report)
}

fn feasible_assignment(p: &AssignmentInstance, s: &AssignmentSolution) -> bool {
    let caps = p.capacities();
    let mut used = vec![0u32; p.positions.len()];
    let mut agents = BTreeSet::new();
    for pair in &s.pairs {
        let Some(j) = p.positions.iter().position(|x| *x == pair.position) else { return false };
        if !p.agents.contains(&pair.agent) || !agents.insert(&pair.agent) {
            return false;
        }
        used[j] += 1;
    }
    let total: u64 = caps.iter().map(|c| *c as u64).sum();
    used.iter().zip(&caps).all(|(u, c)| u <= c) && s.pairs.len() as u64 == total.min(p.agents.len() as u64)
}

fn assign(p: &AssignmentInstance, method: &str, sols: &[AssignmentSolution], limits: &Limits, rng: &mut ChaCha8Rng) -> Result<OracleReport> {
    let mut report = OracleReport::new("assign_exact");
    report.check("every assignment is feasible and maximal", sols.iter().all(|s| feasible_assignment(p, s)));
    let exact = match assign_exact_with(p, None, limits) {
        Ok(x) => x,
        Err(e @ Error::GuardExceeded { .. }) => {
            skipped(&mut report, &e);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    if method == "pareto" {
        let oriented: Vec<Vec<f64>> = sols.iter().map(|s| orient(&p.frame, &s.objective_vector)).collect();
        let mut mutual = true;
        for a in &oriented {
            for b in &oriented {
                mutual &= !dominates(a, b)?;
            }
        }
        report.check("Pareto set is mutually non-dominated", mutual);
        report.check(
            "Pareto set contains a scalar optimum",
            sols.iter().any(|s| (s.objective - exact.objective).abs() <= EPS),
        );
        return Ok(report);
    }
    let got = sols.first().map_or(0.0, |s| s.objective);
    compare_objectives(&mut report, method, got, exact.objective);
    if method == "greedy" {
        let dims = p.frame.len();
        let ranges: Vec<(i64, i64)> = (0..dims).map(|k| span(p.cells.iter().flatten().map(|c| c[k]))).collect();
        let mut passed = 0;
        for _ in 0..SWEEP {
            let cells = p
                .cells
                .iter()
                .map(|row| row.iter().map(|_| ranges.iter().map(|(lo, hi)| rng.gen_range(*lo..=*hi) as f64).collect()).collect())
                .collect();
            let inst = AssignmentInstance {
                cells,
                ..p.clone()
            };
            let exact = assign_exact_with(&inst, None, limits)?;
            passed += within_ratio(assign_greedy(&inst, None)?.objective, exact.objective) as usize;
        }
        sweep_check(&mut report, passed, SWEEP, SWEEP_NEEDED, "within ratio");
    }
    Ok(report)
}

fn tsp(inst: &TspInstance, method: &str, tour: &Tour, limits: &Limits, rng: &mut ChaCha8Rng) -> Result<OracleReport> {
    let mut report = OracleReport::new("tsp_brute_force");
    let length = inst.tour_length(tour);
    report.check("tour visits every city once", length.is_ok());
    report.check("reported length matches the tour", length.as_ref().is_ok_and(|l| (l - tour.length).abs() <= 1e-6));
    let opt = match tsp_brute_force_with(inst, limits) {
        Ok(t) => t,
        Err(e @ Error::GuardExceeded { .. }) => {
            skipped(&mut report, &e);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.heuristic_objective = Some(tour.length);
    report.reference_objective = Some(opt.length);
    report.check("tour is no shorter than the optimum", tour.length + EPS >= opt.length);
    match method {
        "brute" => report.check("tour length equals the optimum", (tour.length - opt.length).abs() <= EPS),
        "heuristic" => {
            report.check(format!("tour within {TOUR_RATIO} of the optimum"), tour.length <= TOUR_RATIO * opt.length + EPS);
            let n = inst.ids.len();
            let mut passed = 0;
            for _ in 0..SWEEP {
                let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect();
                let random = TspInstance::from_points(inst.ids.clone(), &points)?;
                let nn = tsp_nearest_neighbor(&random, &random.ids[0])?;
                let h = tsp_two_opt(&random, &nn)?;
                let o = tsp_brute_force_with(&random, limits)?;
                passed += (h.length <= TOUR_RATIO * o.length + EPS) as usize;
            }
            sweep_check(&mut report, passed, SWEEP, TOUR_SWEEP_NEEDED, "within ratio");
        }
        _ => {}
    }
    Ok(report)
}

fn rank(problem: &Problem, method: &str, r: &RankingResult) -> OracleReport {
    let mut report = OracleReport::new("dominance consistency");
    let Problem::Rank(p) = problem else { unreachable!("rank problem") };
    let levels = r.levels();
    let used: BTreeSet<u32> = r.priorities.values().copied().collect();
    report.check("priorities are contiguous from 1", used == (1..=levels).collect());
    let oriented: Vec<(String, Vec<f64>)> =
        p.alternatives.iter().map(|a| (a.id.clone(), orient(&p.frame, &a.estimates))).collect();
    let mut consistent = true;
    for (a, x) in &oriented {
        for (b, y) in &oriented {
            if dominates(x, y).unwrap_or(false) {
                let (pa, pb) = (r.priority(a).unwrap_or(0), r.priority(b).unwrap_or(0));
                consistent &= if method == "pareto" { pa < pb } else { pa <= pb };
            }
        }
    }
    report.check("dominating alternatives are never ranked worse", consistent);
    report
}

/// Prim's algorithm; returns the sorted edge weights.
fn mst_weights(d: &[Vec<f64>]) -> Vec<f64> {
    let n = d.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut out = Vec::new();
    best[0] = 0.0;
    for step in 0..n {
        let v = (0..n).filter(|v| !in_tree[*v]).min_by(|a, b| best[*a].total_cmp(&best[*b])).expect("vertex left");
        in_tree[v] = true;
        if step > 0 {
            out.push(best[v]);
        }
        for u in 0..n {
            if !in_tree[u] && d[v][u] < best[u] {
                best[u] = d[v][u];
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

fn cluster(d: &[Vec<f64>], method: &str, dendrogram: &Dendrogram, clusters: Option<&[Vec<String>]>) -> OracleReport {
    let linkage = match method {
        "complete" => Linkage::Complete,
        "average" => Linkage::Average,
        _ => Linkage::Single,
    };
    let mut report = OracleReport::new(if linkage == Linkage::Single { "minimum spanning tree" } else { "merge monotonicity" });
    let heights: Vec<f64> = dendrogram.merges.iter().map(|m| m.height).collect();
    report.check("one merge per non-root node", heights.len() + 1 == dendrogram.leaves.len());
    report.check("merge heights never decrease", heights.windows(2).all(|w| w[0] <= w[1] + EPS));
    if linkage == Linkage::Single {
        let mst = mst_weights(d);
        report.check(
            "merge heights equal sorted MST edge weights",
            mst.len() == heights.len() && mst.iter().zip(&heights).all(|(a, b)| (a - b).abs() <= EPS),
        );
    }
    if let Some(blocks) = clusters {
        let mut seen: Vec<&String> = blocks.iter().flatten().collect();
        seen.sort();
        let mut leaves: Vec<&String> = dendrogram.leaves.iter().collect();
        leaves.sort();
        report.check("clusters partition the elements", seen == leaves && blocks.iter().all(|b| !b.is_empty()));
    }
    report
}

/// Quality dominance on cumulative counts.
fn q_dominates(a: &QualityVector, b: &QualityVector) -> bool {
    let cum = |q: &QualityVector| -> Vec<u32> {
        q.counts.iter().scan(0, |acc, n| { *acc += n; Some(*acc) }).collect()
    };
    let (ca, cb) = (cum(a), cum(b));
    let ge = a.w >= b.w && ca.len() == cb.len() && ca.iter().zip(&cb).all(|(x, y)| x >= y);
    ge && (a.w > b.w || ca != cb)
}

fn nondominated(qualities: &[QualityVector]) -> Vec<bool> {
    qualities.iter().map(|q| !qualities.iter().any(|r| q_dominates(r, q))).collect()
}

/// Layer index by repeated removal of the non-dominated set.
fn layers(qualities: &[QualityVector]) -> Vec<i64> {
    let mut layer = vec![0i64; qualities.len()];
    let mut level = 0;
    while layer.contains(&0) {
        level += 1;
        let open: Vec<usize> = (0..qualities.len()).filter(|i| layer[*i] == 0).collect();
        let front: Vec<usize> = open
            .iter()
            .copied()
            .filter(|i| !open.iter().any(|j| q_dominates(&qualities[*j], &qualities[*i])))
            .collect();
        for i in front {
            layer[i] = level;
        }
    }
    layer
}

/// Brute-force Pareto set of one node given its children's (id, priority) lists.
fn brute_node(system: &MorphSystem, node: &MorphNode, children: &[Vec<(String, i64)>]) -> BTreeSet<(Vec<String>, QualityVector)> {
    let hi = system.compat_scale.hi();
    let mut table: BTreeMap<(&str, &str), i64> = BTreeMap::new();
    for e in system.compat.get(&node.id).into_iter().flatten() {
        table.insert((&e.left, &e.right), e.value);
        table.insert((&e.right, &e.left), e.value);
    }
    let levels = system.priority_scale.hi() as usize;
    let mut combos = Vec::new();
    let mut pick = vec![0usize; children.len()];
    'all: loop {
        let chosen: Vec<&(String, i64)> = pick.iter().enumerate().map(|(c, &i)| &children[c][i]).collect();
        let mut w = hi;
        for a in 0..chosen.len() {
            for b in a + 1..chosen.len() {
                w = w.min(*table.get(&(chosen[a].0.as_str(), chosen[b].0.as_str())).unwrap_or(&hi));
            }
        }
        let mut counts = vec![0u32; levels];
        for (_, p) in &chosen {
            counts[(*p - 1) as usize] += 1;
        }
        if w > 0 {
            combos.push((chosen.iter().map(|c| c.0.clone()).collect::<Vec<_>>(), QualityVector::new(w, counts)));
        }
        for c in (0..pick.len()).rev() {
            pick[c] += 1;
            if pick[c] < children[c].len() {
                continue 'all;
            }
            pick[c] = 0;
        }
        break;
    }
    let qualities: Vec<QualityVector> = combos.iter().map(|c| c.1.clone()).collect();
    let keep = nondominated(&qualities);
    combos.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect()
}

fn synth(system: &MorphSystem, method: &str, s: &Synthesis) -> Result<OracleReport> {
    let mut report = OracleReport::new("brute-force dominance filter");
    let mut system = system.clone();
    if let Some(rm) = RankMethod::from_token(method) {
        rank_leaf_priorities(&mut system, rm)?;
    }
    let hi = system.priority_scale.hi();
    // (id, priority) of the alternatives each node offers its parent.
    fn offered(node: &MorphNode, s: &Synthesis, hi: i64) -> Vec<(String, i64)> {
        if node.is_leaf() {
            return node.alternatives.iter().map(|a| (a.id.clone(), a.priority)).collect();
        }
        let composites = s.node(&node.id).unwrap_or(&[]);
        let qualities: Vec<QualityVector> = composites.iter().map(|c| c.quality.clone()).collect();
        composites.iter().zip(layers(&qualities)).map(|(c, l)| (c.id.clone(), l.min(hi))).collect()
    }
    fn visit(system: &MorphSystem, node: &MorphNode, s: &Synthesis, hi: i64, report: &mut OracleReport) {
        if node.is_leaf() {
            return;
        }
        for c in &node.children {
            visit(system, c, s, hi, report);
        }
        let children: Vec<Vec<(String, i64)>> = node.children.iter().map(|c| offered(c, s, hi)).collect();
        let expected = brute_node(system, node, &children);
        let got: BTreeSet<(Vec<String>, QualityVector)> = s
            .node(&node.id)
            .unwrap_or(&[])
            .iter()
            .map(|c| (c.selection.iter().map(|x| x.alternative.clone()).collect(), c.quality.clone()))
            .collect();
        report.check(format!("node `{}` Pareto set matches enumeration ({} composites)", node.id, expected.len()), got == expected);
    }
    visit(&system, &system.root, s, hi, &mut report);
    Ok(report)
}

fn trajectory(p: &TrajectoryProblem, ts: &[crate::frameworks::Trajectory]) -> Result<OracleReport> {
    let mut report = OracleReport::new("brute-force dominance filter");
    let stages = &p.stages;
    let size: u128 = stages.iter().map(|s| s.decisions.len() as u128).product();
    if size > ENUMERATION_LIMIT {
        skipped(&mut report, &Error::GuardExceeded { what: "trajectory enumeration", size, limit: ENUMERATION_LIMIT as u64 });
        return Ok(report);
    }
    let mut table: BTreeMap<(&str, &str), i64> = BTreeMap::new();
    for e in &p.compat {
        table.insert((&e.left, &e.right), e.value);
        table.insert((&e.right, &e.left), e.value);
    }
    let levels = p.priority_scale.hi() as usize;
    let mut all = Vec::new();
    let mut pick = vec![0usize; stages.len()];
    'all: loop {
        let chosen: Vec<_> = pick.iter().enumerate().map(|(s, &i)| &stages[s].decisions[i]).collect();
        let mut w = p.compat_scale.hi();
        for a in 0..chosen.len() {
            for b in a + 1..chosen.len() {
                if p.all_pairs || b == a + 1 {
                    w = w.min(table[&(chosen[a].id.as_str(), chosen[b].id.as_str())]);
                }
            }
        }
        let mut counts = vec![0u32; levels];
        for d in &chosen {
            counts[(d.priority - 1) as usize] += 1;
        }
        all.push((chosen.iter().map(|d| d.id.clone()).collect::<Vec<_>>(), QualityVector::new(w, counts)));
        for s in (0..pick.len()).rev() {
            pick[s] += 1;
            if pick[s] < stages[s].decisions.len() {
                continue 'all;
            }
            pick[s] = 0;
        }
        break;
    }
    let qualities: Vec<QualityVector> = all.iter().map(|a| a.1.clone()).collect();
    let expected: BTreeSet<(Vec<String>, QualityVector)> =
        all.into_iter().zip(nondominated(&qualities)).filter(|(_, k)| *k).map(|(a, _)| a).collect();
    let got: BTreeSet<(Vec<String>, QualityVector)> = ts.iter().map(|t| (t.decisions.clone(), t.quality.clone())).collect();
    report.check(format!("Pareto set matches enumeration ({} trajectories)", expected.len()), got == expected);
    Ok(report)
}

fn pipeline(set1: &[String], set2: &[String], budget: f64, r: &ThreeSetReport) -> OracleReport {
    let mut report = OracleReport::new("stage consistency");
    let partition = |blocks: &[Vec<String>], ids: &[String]| {
        let mut a: Vec<&String> = blocks.iter().flatten().collect();
        let mut b: Vec<&String> = ids.iter().collect();
        a.sort();
        b.sort();
        a == b
    };
    report.check("clusters partition both sets", partition(&r.clusters1, set1) && partition(&r.clusters2, set2));
    let lefts: BTreeSet<usize> = r.matches.iter().map(|m| m.left).collect();
    let rights: BTreeSet<usize> = r.matches.iter().map(|m| m.right).collect();
    report.check("cluster matching is one-to-one", lefts.len() == r.matches.len() && rights.len() == r.matches.len());
    report.check(
        "every action belongs to a matched cluster pair",
        r.selections.iter().all(|s| {
            r.matches
                .iter()
                .any(|m| r.clusters1[m.left].contains(&s.left) && r.clusters2[m.right].contains(&s.right))
        }),
    );
    report.check("total cost within budget", r.total_cost <= budget + EPS);
    report
}

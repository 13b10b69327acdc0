//! Multicriteria ranking of alternatives into dense ordinal priority groups.
//!
//! Four methods are provided. All of them work on canonical estimates
//! (see [`normalize_estimates`]) and report priority 1 as the best group.

use std::collections::BTreeMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::criteria::{dominates_unchecked, normalize_estimates, CriteriaFrame, EstimateVector, EPS};
use crate::{Error, Result};

/// Default concordance threshold for [`rank_outranking`].
pub const DEFAULT_CONCORDANCE: f64 = 0.6;
/// Default discordance threshold for [`rank_outranking`].
pub const DEFAULT_DISCORDANCE: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alternative {
    pub id: String,
    pub estimates: EstimateVector,
}

impl Alternative {
    pub fn new(id: impl Into<String>, estimates: EstimateVector) -> Self {
        Alternative {
            id: id.into(),
            estimates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingInstance {
    pub frame: CriteriaFrame,
    pub alternatives: Vec<Alternative>,
}

impl RankingInstance {
    pub fn new(frame: CriteriaFrame, alternatives: Vec<Alternative>) -> Result<Self> {
        let inst = RankingInstance { frame, alternatives };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alternatives.is_empty() {
            return Err(Error::invalid("alternatives", "at least one alternative required"));
        }
        for (i, alt) in self.alternatives.iter().enumerate() {
            if self.alternatives[..i].iter().any(|a| a.id == alt.id) {
                return Err(Error::invalid(
                    format!("alternatives[{i}].id"),
                    format!("duplicate alternative id `{}`", alt.id),
                ));
            }
            self.frame
                .check_row(&alt.estimates)
                .map_err(|e| match e {
                    Error::LengthMismatch { expected, found } => Error::invalid(
                        format!("alternatives[{i}].estimates"),
                        format!("expected {expected} estimates, found {found}"),
                    ),
                    e => e.within(&format!("alternatives[{i}].estimates")),
                })?;
        }
        Ok(())
    }

    fn canonical(&self) -> Result<Vec<EstimateVector>> {
        self.validate()?;
        let rows: Vec<_> = self.alternatives.iter().map(|a| a.estimates.clone()).collect();
        normalize_estimates(&self.frame, &rows)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    Utility,
    Pareto,
    Outranking,
    IdealPoint,
}

impl RankMethod {
    pub fn token(&self) -> &'static str {
        match self {
            RankMethod::Utility => "utility",
            RankMethod::Pareto => "pareto",
            RankMethod::Outranking => "outranking",
            RankMethod::IdealPoint => "ideal",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        [RankMethod::Utility, RankMethod::Pareto, RankMethod::Outranking, RankMethod::IdealPoint]
            .into_iter()
            .find(|m| m.token() == token)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    pub method: String,
    /// 1 is best; the set of values is `{1..L}`.
    pub priorities: BTreeMap<String, u32>,
    /// Method-specific score, higher is better.
    pub scores: BTreeMap<String, f64>,
}

impl RankingResult {
    pub fn priority(&self, id: &str) -> Option<u32> {
        self.priorities.get(id).copied()
    }

    /// Number of priority levels.
    pub fn levels(&self) -> u32 {
        self.priorities.values().copied().max().unwrap_or(0)
    }
}

/// Ranks with the named method; `outranking` uses the default thresholds.
pub fn rank(inst: &RankingInstance, method: RankMethod) -> Result<RankingResult> {
    match method {
        RankMethod::Utility => rank_utility(inst),
        RankMethod::Pareto => rank_pareto_layers(inst),
        RankMethod::Outranking => rank_outranking(inst, DEFAULT_CONCORDANCE, DEFAULT_DISCORDANCE),
        RankMethod::IdealPoint => rank_ideal_point(inst),
    }
}

/// Dense priorities by descending score; scores within [`EPS`] of the
/// previous one share its priority.
pub(crate) fn dense_by_score(scores: &[f64]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut priorities = vec![0; scores.len()];
    let mut level = 0;
    let mut prev = f64::INFINITY;
    for i in order {
        if level == 0 || prev - scores[i] > EPS {
            level += 1;
        }
        prev = scores[i];
        priorities[i] = level;
    }
    priorities
}

fn result(inst: &RankingInstance, method: RankMethod, priorities: Vec<u32>, scores: Vec<f64>) -> RankingResult {
    let ids = inst.alternatives.iter().map(|a| a.id.clone());
    RankingResult {
        method: method.token().to_string(),
        priorities: ids.clone().zip(priorities).collect(),
        scores: ids.zip(scores).collect(),
    }
}

/// Weighted sum of canonical estimates.
pub fn rank_utility(inst: &RankingInstance) -> Result<RankingResult> {
    let rows = inst.canonical()?;
    let weights = inst.frame.weights();
    let scores: Vec<f64> = rows
        .iter()
        .map(|r| r.iter().zip(&weights).map(|(v, w)| v * w).sum())
        .collect();
    Ok(result(inst, RankMethod::Utility, dense_by_score(&scores), scores))
}

/// Non-dominated sorting: layer 1 is the non-dominated set, removed before
/// computing layer 2, and so on.
pub fn rank_pareto_layers(inst: &RankingInstance) -> Result<RankingResult> {
    let rows = inst.canonical()?;
    let layers = pareto_layers(&rows);
    let scores = layers.iter().map(|l| -(*l as f64)).collect();
    Ok(result(inst, RankMethod::Pareto, layers, scores))
}

pub(crate) fn pareto_layers(rows: &[EstimateVector]) -> Vec<u32> {
    let mut layer = vec![0u32; rows.len()];
    let mut remaining: Vec<usize> = (0..rows.len()).collect();
    let mut current = 0;
    while !remaining.is_empty() {
        current += 1;
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| dominates_unchecked(&rows[j], &rows[i])))
            .collect();
        for &i in &front {
            layer[i] = current;
        }
        remaining.retain(|i| layer[*i] == 0);
    }
    layer
}

/// Concordance `C(a, b)`: total weight of criteria on which `a >= b`.
pub(crate) fn concordance(a: &[f64], b: &[f64], weights: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(weights)
        .filter(|((x, y), _)| *x >= *y)
        .map(|(_, w)| w)
        .sum()
}

/// Discordance `D(a, b)`: the largest margin by which `b` beats `a`.
pub(crate) fn discordance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (y - x).max(0.0)).fold(0.0, f64::max)
}

/// ELECTRE-I style outranking.
///
/// `a` outranks `b` when `C(a, b) >= concordance_threshold` and
/// `D(a, b) <= discordance_threshold`. The outranking digraph is condensed
/// into strongly connected components and each component gets its longest
/// path depth from the sources as priority.
pub fn rank_outranking(
    inst: &RankingInstance,
    concordance_threshold: f64,
    discordance_threshold: f64,
) -> Result<RankingResult> {
    for (name, v) in [("p", concordance_threshold), ("q", discordance_threshold)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid(name, format!("threshold must lie in [0, 1], got {v}")));
        }
    }
    let rows = inst.canonical()?;
    let weights = inst.frame.weights();
    let n = rows.len();

    let mut graph = DiGraph::<usize, ()>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|i| graph.add_node(i)).collect();
    for a in 0..n {
        for b in 0..n {
            if a != b
                && concordance(&rows[a], &rows[b], &weights) >= concordance_threshold - EPS
                && discordance(&rows[a], &rows[b]) <= discordance_threshold + EPS
            {
                graph.add_edge(nodes[a], nodes[b], ());
            }
        }
    }

    let components = tarjan_scc(&graph);
    let mut component_of = vec![0usize; n];
    for (c, members) in components.iter().enumerate() {
        for node in members {
            component_of[graph[*node]] = c;
        }
    }
    // tarjan_scc yields components in reverse topological order.
    let mut depth = vec![1u32; components.len()];
    for c in (0..components.len()).rev() {
        for node in &components[c] {
            for succ in graph.neighbors(*node) {
                let s = component_of[graph[succ]];
                if s != c {
                    depth[s] = depth[s].max(depth[c] + 1);
                }
            }
        }
    }
    let raw: Vec<u32> = (0..n).map(|i| depth[component_of[i]]).collect();
    let priorities = densify(&raw);
    let scores = priorities.iter().map(|p| -(*p as f64)).collect();
    Ok(result(inst, RankMethod::Outranking, priorities, scores))
}

fn densify(levels: &[u32]) -> Vec<u32> {
    let mut distinct: Vec<u32> = levels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    levels
        .iter()
        .map(|l| distinct.binary_search(l).unwrap() as u32 + 1)
        .collect()
}

/// Closeness to the ideal point: `d- / (d+ + d-)` with Euclidean distances
/// to the componentwise best and worst canonical rows (`0/0` is 0.5).
pub fn rank_ideal_point(inst: &RankingInstance) -> Result<RankingResult> {
    let rows = inst.canonical()?;
    let k = inst.frame.len();
    let ideal: Vec<f64> = (0..k)
        .map(|j| rows.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let anti: Vec<f64> = (0..k)
        .map(|j| rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scores: Vec<f64> = rows
        .iter()
        .map(|r| {
            let plus = dist(r, &ideal);
            let minus = dist(r, &anti);
            if plus + minus <= 0.0 {
                0.5
            } else {
                minus / (plus + minus)
            }
        })
        .collect();
    Ok(result(inst, RankMethod::IdealPoint, dense_by_score(&scores), scores))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{dominates, Criterion};
    use proptest::prelude::*;

    fn instance(weights: &[f64], rows: &[(&str, &[f64])]) -> RankingInstance {
        let frame = CriteriaFrame::new(
            weights
                .iter()
                .enumerate()
                .map(|(i, w)| Criterion::maximize(format!("c{i}"), *w))
                .collect(),
        )
        .unwrap();
        RankingInstance::new(
            frame,
            rows.iter().map(|(id, v)| Alternative::new(*id, v.to_vec())).collect(),
        )
        .unwrap()
    }

    fn prio(r: &RankingResult) -> Vec<(String, u32)> {
        r.priorities.iter().map(|(k, v)| (k.clone(), *v)).collect()
    }

    #[test]
    fn instance_invariants() {
        let frame = CriteriaFrame::uniform(1).unwrap();
        assert!(RankingInstance::new(frame.clone(), vec![]).is_err());
        assert!(RankingInstance::new(
            frame.clone(),
            vec![Alternative::new("a", vec![1.0]), Alternative::new("a", vec![2.0])]
        )
        .is_err());
        let err = RankingInstance::new(frame, vec![Alternative::new("a", vec![1.0, 2.0])]).unwrap_err();
        assert!(err.to_string().contains("alternatives[0].estimates"));
    }

    #[test]
    fn utility_symmetry_tie() {
        let inst = instance(&[0.5, 0.5], &[("a", &[1.0, 1.0]), ("b", &[1.0, 0.0]), ("c", &[0.0, 1.0])]);
        let r = rank_utility(&inst).unwrap();
        assert_eq!(r.priority("a"), Some(1));
        assert_eq!(r.priority("b"), Some(2));
        assert_eq!(r.priority("c"), Some(2));
    }

    #[test]
    fn utility_degenerate_weights() {
        let inst = instance(&[1.0, 0.0], &[("a", &[1.0, 9.0]), ("b", &[3.0, 0.0]), ("c", &[2.0, 5.0])]);
        let r = rank_utility(&inst).unwrap();
        assert_eq!(prio(&r), vec![("a".into(), 3), ("b".into(), 1), ("c".into(), 2)]);
    }

    #[test]
    fn utility_matches_direct_weighted_sums() {
        // Canonical values worked out by hand: c0 over [1, 10], c1 over [0, 9].
        let inst = instance(
            &[0.3, 0.7],
            &[("a", &[1.0, 9.0]), ("b", &[4.0, 4.0]), ("c", &[8.0, 2.0]), ("d", &[10.0, 0.0])],
        );
        let expected = [
            ("a", 0.3 * 0.0 + 0.7 * 1.0),
            ("b", 0.3 * (3.0 / 9.0) + 0.7 * (4.0 / 9.0)),
            ("c", 0.3 * (7.0 / 9.0) + 0.7 * (2.0 / 9.0)),
            ("d", 0.3 * 1.0 + 0.7 * 0.0),
        ];
        let r = rank_utility(&inst).unwrap();
        for (id, s) in expected {
            assert!((r.scores[id] - s).abs() < 1e-12, "{id}");
        }
        assert_eq!(
            prio(&r),
            vec![("a".into(), 1), ("b".into(), 2), ("c".into(), 3), ("d".into(), 4)]
        );
    }

    #[test]
    fn pareto_examples() {
        let single = instance(&[1.0], &[("a", &[4.0])]);
        assert_eq!(rank_pareto_layers(&single).unwrap().priority("a"), Some(1));

        let chain = instance(&[0.5, 0.5], &[("a", &[3.0, 3.0]), ("b", &[3.0, 1.0]), ("c", &[1.0, 1.0])]);
        let r = rank_pareto_layers(&chain).unwrap();
        assert_eq!(prio(&r), vec![("a".into(), 1), ("b".into(), 2), ("c".into(), 3)]);

        let pair = instance(&[0.5, 0.5], &[("a", &[3.0, 1.0]), ("b", &[1.0, 3.0])]);
        let r = rank_pareto_layers(&pair).unwrap();
        assert_eq!(prio(&r), vec![("a".into(), 1), ("b".into(), 1)]);
    }

    #[test]
    fn outranking_dominant_row_first() {
        let inst = instance(
            &[0.2, 0.3, 0.5],
            &[("a", &[5.0, 5.0, 5.0]), ("b", &[1.0, 4.0, 2.0]), ("c", &[4.0, 1.0, 3.0]), ("d", &[2.0, 2.0, 1.0])],
        );
        for (p, q) in [(1.0, 0.0), (0.6, 0.4), (0.0, 1.0), (0.9, 0.1)] {
            let r = rank_outranking(&inst, p, q).unwrap();
            assert_eq!(r.priority("a"), Some(1), "p={p} q={q}");
        }
    }

    #[test]
    fn outranking_identical_alternatives_share_priority() {
        let inst = instance(&[0.5, 0.5], &[("a", &[2.0, 3.0]), ("b", &[2.0, 3.0]), ("c", &[1.0, 1.0])]);
        let r = rank_outranking(&inst, 0.6, 0.4).unwrap();
        assert_eq!(r.priority("a"), r.priority("b"));
        assert_eq!(r.priority("a"), Some(1));
        assert_eq!(r.priority("c"), Some(2));
    }

    #[test]
    fn outranking_threshold_range() {
        let inst = instance(&[1.0], &[("a", &[1.0])]);
        assert!(rank_outranking(&inst, 1.5, 0.4).is_err());
        assert!(rank_outranking(&inst, 0.5, -0.1).is_err());
    }

    /// Independent layering: explicit C/D matrices, transitive closure for the
    /// components, then longest-path relaxation over the component order.
    fn outranking_oracle(rows: &[Vec<f64>], weights: &[f64], p: f64, q: f64) -> Vec<u32> {
        let n = rows.len();
        let mut c = vec![vec![0.0; n]; n];
        let mut d = vec![vec![0.0; n]; n];
        for a in 0..n {
            for b in 0..n {
                for k in 0..weights.len() {
                    if rows[a][k] >= rows[b][k] {
                        c[a][b] += weights[k];
                    }
                    d[a][b] = f64::max(d[a][b], rows[b][k] - rows[a][k]);
                }
            }
        }
        let mut reach = vec![vec![false; n]; n];
        for a in 0..n {
            reach[a][a] = true;
            for b in 0..n {
                if a != b && c[a][b] >= p - 1e-12 && d[a][b] <= q + 1e-12 {
                    reach[a][b] = true;
                }
            }
        }
        let edge = reach.clone();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        let mut layer = vec![1u32; n];
        for _ in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let same = reach[a][b] && reach[b][a];
                    if edge[a][b] && !same {
                        layer[b] = layer[b].max(layer[a] + 1);
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    if reach[a][b] && reach[b][a] {
                        layer[a] = layer[a].max(layer[b]);
                    }
                }
            }
        }
        let mut distinct = layer.clone();
        distinct.sort_unstable();
        distinct.dedup();
        layer.iter().map(|l| distinct.binary_search(l).unwrap() as u32 + 1).collect()
    }

    #[test]
    fn outranking_matches_explicit_matrices() {
        let inst = instance(
            &[0.4, 0.35, 0.25],
            &[
                ("a", &[8.0, 3.0, 6.0]),
                ("b", &[6.0, 7.0, 2.0]),
                ("c", &[3.0, 5.0, 9.0]),
                ("d", &[2.0, 2.0, 4.0]),
            ],
        );
        let rows = normalize_estimates(
            &inst.frame,
            &inst.alternatives.iter().map(|a| a.estimates.clone()).collect::<Vec<_>>(),
        )
        .unwrap();
        let expected = outranking_oracle(&rows, &inst.frame.weights(), 0.6, 0.4);
        let r = rank_outranking(&inst, 0.6, 0.4).unwrap();
        let got: Vec<u32> = ["a", "b", "c", "d"].iter().map(|id| r.priorities[*id]).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn ideal_point_extremes() {
        let inst = instance(&[0.5, 0.5], &[("best", &[5.0, 5.0]), ("mid", &[3.0, 4.0]), ("worst", &[1.0, 1.0])]);
        let r = rank_ideal_point(&inst).unwrap();
        assert!((r.scores["best"] - 1.0).abs() < EPS);
        assert_eq!(r.priority("best"), Some(1));
        assert!(r.scores["worst"].abs() < EPS);
    }

    #[test]
    fn ideal_point_asymmetric_triangle() {
        // Raw rows normalize to (0, 0), (1, 0.4), (0.3, 1); ideal (1, 1), anti-ideal (0, 0).
        let inst = instance(&[0.5, 0.5], &[("a", &[0.0, 0.0]), ("b", &[10.0, 4.0]), ("c", &[3.0, 10.0])]);
        let closeness = |p: (f64, f64)| {
            let plus = ((1.0 - p.0).powi(2) + (1.0 - p.1).powi(2)).sqrt();
            let minus = (p.0 * p.0 + p.1 * p.1).sqrt();
            minus / (plus + minus)
        };
        let r = rank_ideal_point(&inst).unwrap();
        assert!((r.scores["a"] - closeness((0.0, 0.0))).abs() < 1e-9);
        assert!((r.scores["b"] - closeness((1.0, 0.4))).abs() < 1e-9);
        assert!((r.scores["c"] - closeness((0.3, 1.0))).abs() < 1e-9);
        assert_eq!(prio(&r), vec![("a".into(), 3), ("b".into(), 1), ("c".into(), 2)]);
    }

    #[test]
    fn ideal_point_single_alternative() {
        let inst = instance(&[1.0], &[("a", &[2.0])]);
        let r = rank_ideal_point(&inst).unwrap();
        assert_eq!(r.scores["a"], 0.5);
        assert_eq!(r.priority("a"), Some(1));
    }

    fn random_instance() -> impl Strategy<Value = RankingInstance> {
        (1usize..4, 1usize..9).prop_flat_map(|(k, n)| {
            (
                prop::collection::vec(1u8..5, k),
                prop::collection::vec(prop::collection::vec(0u8..4, k), n),
            )
                .prop_map(|(w, rows)| {
                    let frame = CriteriaFrame::new(
                        w.iter()
                            .enumerate()
                            .map(|(i, w)| Criterion::maximize(format!("c{i}"), *w as f64))
                            .collect(),
                    )
                    .unwrap();
                    let alts = rows
                        .into_iter()
                        .enumerate()
                        .map(|(i, r)| Alternative::new(format!("a{i}"), r.into_iter().map(f64::from).collect()))
                        .collect();
                    RankingInstance::new(frame, alts).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn dominance_respected_by_every_method(inst in random_instance()) {
            let results = [
                rank_utility(&inst).unwrap(),
                rank_pareto_layers(&inst).unwrap(),
                rank_outranking(&inst, 0.6, 0.4).unwrap(),
                rank_ideal_point(&inst).unwrap(),
            ];
            for r in &results {
                let levels = r.levels();
                let mut seen: Vec<u32> = r.priorities.values().copied().collect();
                seen.sort_unstable();
                seen.dedup();
                prop_assert_eq!(seen, (1..=levels).collect::<Vec<_>>());
            }
            for a in &inst.alternatives {
                for b in &inst.alternatives {
                    if dominates(&a.estimates, &b.estimates).unwrap() {
                        for r in &results {
                            prop_assert!(r.priorities[&a.id] <= r.priorities[&b.id], "{}", r.method);
                        }
                        prop_assert!(results[1].priorities[&a.id] < results[1].priorities[&b.id]);
                    }
                }
            }
        }

        #[test]
        fn permutation_invariance(inst in random_instance(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut shuffled = inst.clone();
            shuffled.alternatives.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            for method in [RankMethod::Utility, RankMethod::Pareto, RankMethod::Outranking, RankMethod::IdealPoint] {
                prop_assert_eq!(
                    rank(&inst, method).unwrap().priorities,
                    rank(&shuffled, method).unwrap().priorities
                );
            }
        }

        #[test]
        fn utility_equal_weights_ignore_criterion_order(inst in random_instance()) {
            let k = inst.frame.len();
            let frame = CriteriaFrame::uniform(k).unwrap();
            let forward = RankingInstance::new(frame.clone(), inst.alternatives.clone()).unwrap();
            let reversed = RankingInstance::new(
                frame,
                inst.alternatives
                    .iter()
                    .map(|a| Alternative::new(a.id.clone(), a.estimates.iter().rev().copied().collect()))
                    .collect(),
            )
            .unwrap();
            prop_assert_eq!(
                rank_utility(&forward).unwrap().priorities,
                rank_utility(&reversed).unwrap().priorities
            );
        }
    }
}

//! Three-set / four-problem scheme: cluster two sets, match the clusters,
//! then pick one action per matched element pair under a shared budget.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::improve::{solve_mckp, SolveMethod};
use crate::assign::{assign_greedy, AssignmentInstance};
use crate::cluster::{build_dendrogram, cut_dendrogram, DissimilarityMatrix, Linkage};
use crate::criteria::{CriteriaFrame, EstimateVector};
use crate::select::{Group, GroupRule, Item, MckpInstance};
use crate::{Error, Limits, Result};

/// Candidate actions for one (set1 element, set2 element) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionGroup {
    pub left: String,
    pub right: String,
    pub actions: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeSetSpec {
    pub set1: DissimilarityMatrix,
    pub set2: DissimilarityMatrix,
    pub k1: usize,
    pub k2: usize,
    #[serde(default)]
    pub linkage: Linkage,
    /// Criteria of the element-level correspondence.
    pub frame: CriteriaFrame,
    /// `correspondence[i][j]`: set1 element `i` against set2 element `j`.
    pub correspondence: Vec<Vec<EstimateVector>>,
    /// Criteria of the action values.
    pub action_frame: CriteriaFrame,
    pub actions: Vec<ActionGroup>,
    pub budget: f64,
    #[serde(default)]
    pub group_rule: GroupRule,
}

/// Cluster `left` of set1 matched to cluster `right` of set2 (indices into
/// the report's cluster lists).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterMatch {
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairAction {
    pub left: String,
    pub right: String,
    pub action: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreeSetReport {
    pub clusters1: Vec<Vec<String>>,
    pub clusters2: Vec<Vec<String>>,
    pub matches: Vec<ClusterMatch>,
    pub selections: Vec<PairAction>,
    pub total_cost: f64,
    pub objective: f64,
    /// How the action selection was solved; `None` when no pair had actions.
    pub method: Option<SolveMethod>,
}

impl ThreeSetSpec {
    pub fn validate(&self) -> Result<()> {
        self.set1.validate().map_err(|e| e.within("set1"))?;
        self.set2.validate().map_err(|e| e.within("set2"))?;
        for (name, k, n) in [("k1", self.k1, self.set1.len()), ("k2", self.k2, self.set2.len())] {
            if k == 0 || k > n {
                return Err(Error::invalid(name, format!("cluster count must lie in [1, {n}], got {k}")));
            }
        }
        if self.correspondence.len() != self.set1.len() {
            return Err(Error::invalid(
                "correspondence",
                format!("expected {} rows, found {}", self.set1.len(), self.correspondence.len()),
            ));
        }
        for (i, row) in self.correspondence.iter().enumerate() {
            if row.len() != self.set2.len() {
                return Err(Error::invalid(
                    format!("correspondence[{i}]"),
                    format!("expected {} cells, found {}", self.set2.len(), row.len()),
                ));
            }
            for (j, cell) in row.iter().enumerate() {
                self.frame.check_row(cell).map_err(|e| e.within(&format!("correspondence[{i}][{j}]")))?;
            }
        }
        let mut pairs = BTreeSet::new();
        for (g, group) in self.actions.iter().enumerate() {
            let at = format!("actions[{g}]");
            if !self.set1.ids.contains(&group.left) {
                return Err(Error::invalid(format!("{at}.left"), format!("unknown set1 element `{}`", group.left)));
            }
            if !self.set2.ids.contains(&group.right) {
                return Err(Error::invalid(format!("{at}.right"), format!("unknown set2 element `{}`", group.right)));
            }
            if !pairs.insert((&group.left, &group.right)) {
                return Err(Error::invalid(at, format!("duplicate pair `{}`-`{}`", group.left, group.right)));
            }
            // Checked as a one-group MCKP so paths point at the action.
            if !group.actions.is_empty() {
                MckpInstance::new(
                    self.action_frame.clone(),
                    vec![Group { id: String::new(), items: group.actions.clone() }],
                    self.budget,
                    self.group_rule,
                )
                .map_err(|e| match e {
                    Error::Invalid { path, message } => {
                        Error::invalid(path.replacen("groups[0].items", &format!("{at}.actions"), 1), message)
                    }
                    e => e,
                })?;
            }
        }
        Ok(())
    }
}

pub fn run_three_set_pipeline(spec: &ThreeSetSpec, weights: Option<&[f64]>) -> Result<ThreeSetReport> {
    run_three_set_pipeline_with(spec, weights, &Limits::default())
}

/// Runs the four stages in order. `weights` apply to the correspondence
/// criteria; action values use the action frame's own weights.
pub fn run_three_set_pipeline_with(spec: &ThreeSetSpec, weights: Option<&[f64]>, limits: &Limits) -> Result<ThreeSetReport> {
    spec.validate()?;
    let clusters1 = cut_dendrogram(&build_dendrogram(&spec.set1, spec.linkage)?, spec.k1)?;
    let clusters2 = cut_dendrogram(&build_dendrogram(&spec.set2, spec.linkage)?, spec.k2)?;

    let index = |m: &DissimilarityMatrix, blocks: &[Vec<String>]| -> Vec<Vec<usize>> {
        blocks
            .iter()
            .map(|b| b.iter().map(|id| m.ids.iter().position(|x| x == id).expect("member of set")).collect())
            .collect()
    };
    let members1 = index(&spec.set1, &clusters1);
    let members2 = index(&spec.set2, &clusters2);

    let cells: Vec<Vec<EstimateVector>> = members1
        .iter()
        .map(|a| members2.iter().map(|b| mean_cell(&spec.correspondence, a, b, spec.frame.len())).collect())
        .collect();
    let cluster_level = AssignmentInstance::new(
        spec.frame.clone(),
        (0..clusters1.len()).map(|i| format!("set1:{i}")).collect(),
        (0..clusters2.len()).map(|j| format!("set2:{j}")).collect(),
        cells,
    )?;
    let assignment = assign_greedy(&cluster_level, weights)?;
    let matches: Vec<ClusterMatch> = assignment
        .pairs
        .iter()
        .map(|p| ClusterMatch {
            left: p.agent["set1:".len()..].parse().expect("cluster label"),
            right: p.position["set2:".len()..].parse().expect("cluster label"),
        })
        .collect();

    let by_pair: BTreeMap<(&str, &str), &ActionGroup> =
        spec.actions.iter().map(|g| ((g.left.as_str(), g.right.as_str()), g)).collect();
    let mut groups = Vec::new();
    let mut sources = Vec::new();
    for m in &matches {
        for &a in &members1[m.left] {
            for &b in &members2[m.right] {
                let key = (spec.set1.ids[a].as_str(), spec.set2.ids[b].as_str());
                let Some(group) = by_pair.get(&key).filter(|g| !g.actions.is_empty()) else { continue };
                let id = format!("{}/{}", key.0, key.1);
                groups.push(Group {
                    items: group.actions.iter().map(|it| Item { id: format!("{id}/{}", it.id), ..it.clone() }).collect(),
                    id,
                });
                sources.push(*group);
            }
        }
    }

    let mut report = ThreeSetReport {
        clusters1,
        clusters2,
        matches,
        selections: Vec::new(),
        total_cost: 0.0,
        objective: 0.0,
        method: None,
    };
    if groups.is_empty() {
        return Ok(report);
    }
    let mckp = MckpInstance::new(spec.action_frame.clone(), groups, spec.budget, spec.group_rule)?;
    let (method, solution) = solve_mckp(&mckp, None, limits)?;
    for (group, source) in mckp.groups.iter().zip(&sources) {
        if let Some(item) = solution.groups.get(&group.id) {
            let j = group.items.iter().position(|it| &it.id == item).expect("chosen item in group");
            report.selections.push(PairAction {
                left: source.left.clone(),
                right: source.right.clone(),
                action: source.actions[j].id.clone(),
            });
        }
    }
    report.total_cost = solution.total_cost;
    report.objective = solution.objective;
    report.method = Some(method);
    Ok(report)
}

fn mean_cell(corr: &[Vec<EstimateVector>], rows: &[usize], cols: &[usize], dims: usize) -> EstimateVector {
    let mut acc = vec![0.0; dims];
    for &i in rows {
        for &j in cols {
            for (a, v) in acc.iter_mut().zip(&corr[i][j]) {
                *a += v;
            }
        }
    }
    let n = (rows.len() * cols.len()) as f64;
    acc.into_iter().map(|v| v / n).collect()
}

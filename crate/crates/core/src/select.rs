//! Multicriteria knapsack and multiple-choice knapsack (MCKP).
//!
//! Item values are estimate vectors; solvers reduce them to scalar
//! profits with [`scalarize`] and then maximize the profit sum under a
//! single budget. Each heuristic has an exact dynamic-programming
//! counterpart used as an oracle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::criteria::{normalize_estimates, CriteriaFrame, EstimateVector, EPS};
use crate::{Error, Limits, Result};

/// A selectable item: knapsack item, MCKP group member, or improvement action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    pub value: EstimateVector,
    pub cost: f64,
}

impl Item {
    pub fn new(id: impl Into<String>, value: EstimateVector, cost: f64) -> Self {
        Item {
            id: id.into(),
            value,
            cost,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    pub frame: CriteriaFrame,
    pub items: Vec<Item>,
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Group {
    pub id: String,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupRule {
    #[default]
    AtMostOne,
    ExactlyOne,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MckpInstance {
    pub frame: CriteriaFrame,
    pub groups: Vec<Group>,
    pub budget: f64,
    #[serde(default)]
    pub group_rule: GroupRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionSolution {
    pub chosen: BTreeSet<String>,
    /// Group id to chosen item id; empty for plain knapsack.
    pub groups: BTreeMap<String, String>,
    pub total_cost: f64,
    /// Sum of the scalarized profits of the chosen items.
    pub objective: f64,
    /// Componentwise sum of the raw values of the chosen items.
    pub objective_vector: EstimateVector,
}

fn check_items(frame: &CriteriaFrame, items: &[Item], path: &str, seen: &mut BTreeSet<String>) -> Result<()> {
    for (i, item) in items.iter().enumerate() {
        let at = format!("{path}[{i}]");
        if !seen.insert(item.id.clone()) {
            return Err(Error::invalid(format!("{at}.id"), format!("duplicate item id `{}`", item.id)));
        }
        if !(item.cost.is_finite() && item.cost >= 0.0) {
            return Err(Error::invalid(format!("{at}.cost"), "cost must be finite and nonnegative"));
        }
        frame.check_row(&item.value).map_err(|e| match e {
            Error::LengthMismatch { expected, found } => {
                Error::invalid(format!("{at}.value"), format!("expected {expected} values, found {found}"))
            }
            e => e.within(&format!("{at}.value")),
        })?;
    }
    Ok(())
}

fn check_budget(budget: f64) -> Result<()> {
    if budget.is_finite() && budget >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("budget", "budget must be finite and nonnegative"))
    }
}

impl KnapsackInstance {
    pub fn new(frame: CriteriaFrame, items: Vec<Item>, budget: f64) -> Result<Self> {
        let inst = KnapsackInstance { frame, items, budget };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        check_budget(self.budget)?;
        check_items(&self.frame, &self.items, "items", &mut BTreeSet::new())
    }
}

impl MckpInstance {
    pub fn new(frame: CriteriaFrame, groups: Vec<Group>, budget: f64, group_rule: GroupRule) -> Result<Self> {
        let inst = MckpInstance {
            frame,
            groups,
            budget,
            group_rule,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        check_budget(self.budget)?;
        let mut items = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for (g, group) in self.groups.iter().enumerate() {
            if !ids.insert(group.id.as_str()) {
                return Err(Error::invalid(
                    format!("groups[{g}].id"),
                    format!("duplicate group id `{}`", group.id),
                ));
            }
            if group.items.is_empty() {
                return Err(Error::invalid(format!("groups[{g}].items"), "group has no items"));
            }
            check_items(&self.frame, &group.items, &format!("groups[{g}].items"), &mut items)?;
        }
        Ok(())
    }

    fn all_items(&self) -> impl Iterator<Item = &Item> {
        self.groups.iter().flat_map(|g| &g.items)
    }
}

/// Scalar profit `β_i = Σ_k λ_k · v̂_ik` on estimates normalized over the
/// given item set. `weights` default to the frame weights.
pub fn scalarize(frame: &CriteriaFrame, values: &[EstimateVector], weights: Option<&[f64]>) -> Result<Vec<f64>> {
    let lambda = frame.resolve_weights(weights)?;
    if values.is_empty() {
        return Ok(Vec::new());
    }
    Ok(normalize_estimates(frame, values)?
        .iter()
        .map(|row| row.iter().zip(&lambda).map(|(v, w)| v * w).sum())
        .collect())
}

fn build_solution<'a>(
    frame: &CriteriaFrame,
    picked: impl IntoIterator<Item = (Option<&'a str>, &'a Item, f64)>,
) -> SelectionSolution {
    let mut sol = SelectionSolution {
        chosen: BTreeSet::new(),
        groups: BTreeMap::new(),
        total_cost: 0.0,
        objective: 0.0,
        objective_vector: vec![0.0; frame.len()],
    };
    for (group, item, beta) in picked {
        sol.chosen.insert(item.id.clone());
        if let Some(g) = group {
            sol.groups.insert(g.to_string(), item.id.clone());
        }
        sol.total_cost += item.cost;
        sol.objective += beta;
        for (acc, v) in sol.objective_vector.iter_mut().zip(&item.value) {
            *acc += v;
        }
    }
    sol
}

fn integral(value: f64, what: impl FnOnce() -> String) -> Result<u64> {
    if value.fract() != 0.0 || value < 0.0 || value > u64::MAX as f64 {
        return Err(Error::NonIntegral { what: what(), value });
    }
    Ok(value as u64)
}

/// Ratio-greedy knapsack with one pass of single-item swaps.
///
/// Zero-cost items go first (by profit), the rest by profit/cost; ties go
/// by item id. Items that no longer fit are skipped.
pub fn knapsack_greedy(inst: &KnapsackInstance, weights: Option<&[f64]>) -> Result<SelectionSolution> {
    inst.validate()?;
    let items = &inst.items;
    let beta = scalarize(&inst.frame, &items.iter().map(|i| i.value.clone()).collect::<Vec<_>>(), weights)?;

    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let key = |i: usize| {
            if items[i].cost == 0.0 {
                (0, -beta[i])
            } else {
                (1, -beta[i] / items[i].cost)
            }
        };
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then_with(|| items[a].id.cmp(&items[b].id))
    });

    let mut chosen = vec![false; items.len()];
    let mut spent = 0.0;
    for &i in &order {
        if spent + items[i].cost <= inst.budget {
            chosen[i] = true;
            spent += items[i].cost;
        }
    }

    // One pass of profitable swaps: each outside item may replace the chosen
    // item that yields the largest gain while keeping the budget.
    for &out in &order {
        if chosen[out] {
            continue;
        }
        let best = (0..items.len())
            .filter(|&i| chosen[i] && spent - items[i].cost + items[out].cost <= inst.budget)
            .map(|i| (i, beta[out] - beta[i]))
            .filter(|(_, gain)| *gain > EPS)
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        if let Some((i, _)) = best {
            chosen[i] = false;
            chosen[out] = true;
            spent += items[out].cost - items[i].cost;
        }
    }
    for &i in &order {
        if !chosen[i] && spent + items[i].cost <= inst.budget {
            chosen[i] = true;
            spent += items[i].cost;
        }
    }

    Ok(build_solution(
        &inst.frame,
        (0..items.len()).filter(|i| chosen[*i]).map(|i| (None, &items[i], beta[i])),
    ))
}

pub fn knapsack_exact(inst: &KnapsackInstance, weights: Option<&[f64]>) -> Result<SelectionSolution> {
    knapsack_exact_with(inst, weights, &Limits::default())
}

/// 0/1 knapsack DP over integral costs, optimal for the scalarized profit.
pub fn knapsack_exact_with(
    inst: &KnapsackInstance,
    weights: Option<&[f64]>,
    limits: &Limits,
) -> Result<SelectionSolution> {
    inst.validate()?;
    let items = &inst.items;
    let costs = items
        .iter()
        .enumerate()
        .map(|(i, it)| integral(it.cost, || format!("items[{i}].cost")))
        .collect::<Result<Vec<u64>>>()?;
    let budget = integral(inst.budget, || "budget".to_string())?;
    let total: u128 = costs.iter().map(|c| *c as u128).sum();
    if total > limits.knapsack_table as u128 {
        return Err(Error::GuardExceeded {
            what: "knapsack cost total",
            size: total,
            limit: limits.knapsack_table,
        });
    }
    let beta = scalarize(&inst.frame, &items.iter().map(|i| i.value.clone()).collect::<Vec<_>>(), weights)?;
    let cap = budget.min(total as u64) as usize;

    // best[i][c]: best profit from the first i items with cost at most c.
    let n = items.len();
    let mut best = vec![vec![0.0f64; cap + 1]; n + 1];
    for i in 0..n {
        let cost = costs[i] as usize;
        for c in 0..=cap {
            let skip = best[i][c];
            best[i + 1][c] = if cost <= c && best[i][c - cost] + beta[i] > skip + EPS {
                best[i][c - cost] + beta[i]
            } else {
                skip
            };
        }
    }
    let mut picked = Vec::new();
    let mut c = cap;
    for i in (0..n).rev() {
        if best[i + 1][c] != best[i][c] {
            picked.push(i);
            c -= costs[i] as usize;
        }
    }
    picked.reverse();
    Ok(build_solution(&inst.frame, picked.into_iter().map(|i| (None, &items[i], beta[i]))))
}

/// Per-item profits aligned with `inst.groups`.
fn group_profits(inst: &MckpInstance, weights: Option<&[f64]>) -> Result<Vec<Vec<f64>>> {
    let values: Vec<_> = inst.all_items().map(|i| i.value.clone()).collect();
    let flat = scalarize(&inst.frame, &values, weights)?;
    let mut it = flat.into_iter();
    Ok(inst
        .groups
        .iter()
        .map(|g| it.by_ref().take(g.items.len()).collect())
        .collect())
}

/// Index order of groups and their items by id, used for tie-breaking.
fn id_order(inst: &MckpInstance) -> Vec<(usize, usize)> {
    let mut keys: Vec<(usize, usize)> = inst
        .groups
        .iter()
        .enumerate()
        .flat_map(|(g, grp)| (0..grp.items.len()).map(move |j| (g, j)))
        .collect();
    keys.sort_by(|a, b| {
        let ga = &inst.groups[a.0];
        let gb = &inst.groups[b.0];
        ga.id.cmp(&gb.id).then(ga.items[a.1].id.cmp(&gb.items[b.1].id))
    });
    keys
}

fn exactly_one_start(inst: &MckpInstance, beta: &[Vec<f64>]) -> Result<Vec<Option<usize>>> {
    let start: Vec<Option<usize>> = inst
        .groups
        .iter()
        .enumerate()
        .map(|(g, grp)| {
            (0..grp.items.len()).min_by(|&a, &b| {
                grp.items[a]
                    .cost
                    .total_cmp(&grp.items[b].cost)
                    .then(beta[g][b].total_cmp(&beta[g][a]))
                    .then(grp.items[a].id.cmp(&grp.items[b].id))
            })
        })
        .collect();
    let cost: f64 = start
        .iter()
        .enumerate()
        .map(|(g, j)| inst.groups[g].items[j.unwrap()].cost)
        .sum();
    if cost > inst.budget {
        return Err(Error::Infeasible(format!(
            "cheapest item per group costs {cost}, budget is {}",
            inst.budget
        )));
    }
    Ok(start)
}

fn mckp_solution(inst: &MckpInstance, beta: &[Vec<f64>], choice: &[Option<usize>]) -> SelectionSolution {
    build_solution(
        &inst.frame,
        choice.iter().enumerate().filter_map(|(g, j)| {
            j.map(|j| {
                let grp = &inst.groups[g];
                (Some(grp.id.as_str()), &grp.items[j], beta[g][j])
            })
        }),
    )
}

/// Add-or-upgrade MCKP heuristic.
///
/// Starts empty (`AtMostOne`) or at each group's cheapest item
/// (`ExactlyOne`). Each step moves one group to another item with a profit
/// gain, picking the move with the largest gain per extra cost that still
/// fits the budget; moves that gain profit without extra cost rank above
/// all others. Ties go to the smallest `(group id, item id)`.
pub fn mckp_greedy(inst: &MckpInstance, weights: Option<&[f64]>) -> Result<SelectionSolution> {
    inst.validate()?;
    let beta = group_profits(inst, weights)?;
    let mut choice = match inst.group_rule {
        GroupRule::AtMostOne => vec![None; inst.groups.len()],
        GroupRule::ExactlyOne => exactly_one_start(inst, &beta)?,
    };
    let mut spent: f64 = choice
        .iter()
        .enumerate()
        .filter_map(|(g, j)| j.map(|j| inst.groups[g].items[j].cost))
        .sum();
    let order = id_order(inst);

    loop {
        // (free move?, ratio or gain, group, item)
        let mut best: Option<(bool, f64, usize, usize)> = None;
        for &(g, j) in &order {
            if choice[g] == Some(j) {
                continue;
            }
            let item = &inst.groups[g].items[j];
            let (cur_beta, cur_cost) = match choice[g] {
                Some(c) => (beta[g][c], inst.groups[g].items[c].cost),
                None => (0.0, 0.0),
            };
            let gain = beta[g][j] - cur_beta;
            let extra = item.cost - cur_cost;
            if gain <= EPS || spent + extra > inst.budget {
                continue;
            }
            let candidate = if extra <= 0.0 {
                (true, gain, g, j)
            } else {
                (false, gain / extra, g, j)
            };
            let better = match best {
                None => true,
                Some((free, score, _, _)) => {
                    (candidate.0 && !free) || (candidate.0 == free && candidate.1 > score + EPS)
                }
            };
            if better {
                best = Some(candidate);
            }
        }
        let Some((_, _, g, j)) = best else { break };
        let cur_cost = choice[g].map_or(0.0, |c| inst.groups[g].items[c].cost);
        spent += inst.groups[g].items[j].cost - cur_cost;
        choice[g] = Some(j);
    }
    Ok(mckp_solution(inst, &beta, &choice))
}

pub fn mckp_exact_dp(inst: &MckpInstance, weights: Option<&[f64]>) -> Result<SelectionSolution> {
    mckp_exact_dp_with(inst, weights, &Limits::default())
}

/// Group-wise DP over integral costs, optimal for the scalarized profit.
pub fn mckp_exact_dp_with(inst: &MckpInstance, weights: Option<&[f64]>, limits: &Limits) -> Result<SelectionSolution> {
    inst.validate()?;
    let costs = inst
        .groups
        .iter()
        .enumerate()
        .map(|(g, grp)| {
            grp.items
                .iter()
                .enumerate()
                .map(|(j, it)| integral(it.cost, || format!("groups[{g}].items[{j}].cost")))
                .collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let budget = integral(inst.budget, || "budget".to_string())?;
    let max_total: u128 = costs
        .iter()
        .map(|g| g.iter().copied().max().unwrap_or(0) as u128)
        .sum();
    let cap = (budget as u128).min(max_total) as usize;
    let table = inst.groups.len() as u128 * (cap as u128 + 1);
    if table > limits.mckp_table as u128 {
        return Err(Error::GuardExceeded {
            what: "MCKP table",
            size: table,
            limit: limits.mckp_table,
        });
    }
    let beta = group_profits(inst, weights)?;
    let exactly = inst.group_rule == GroupRule::ExactlyOne;

    // best[g][c]: best profit over the first g groups with total cost exactly c.
    let n = inst.groups.len();
    let mut best = vec![vec![f64::NEG_INFINITY; cap + 1]; n + 1];
    let mut pick = vec![vec![None; cap + 1]; n];
    best[0][0] = 0.0;
    for g in 0..n {
        for c in 0..=cap {
            let mut value = if exactly { f64::NEG_INFINITY } else { best[g][c] };
            let mut chosen = None;
            for (j, &cost) in costs[g].iter().enumerate() {
                let cost = cost as usize;
                if cost <= c && best[g][c - cost].is_finite() {
                    let v = best[g][c - cost] + beta[g][j];
                    if !value.is_finite() || v > value + EPS {
                        value = v;
                        chosen = Some(j);
                    }
                }
            }
            best[g + 1][c] = value;
            pick[g][c] = chosen;
        }
    }
    let mut end = None;
    for c in 0..=cap {
        if best[n][c].is_finite() && end.is_none_or(|e: usize| best[n][c] > best[n][e] + EPS) {
            end = Some(c);
        }
    }
    let Some(mut c) = end else {
        return Err(Error::Infeasible(format!(
            "no selection with one item per group fits budget {}",
            inst.budget
        )));
    };
    let mut choice = vec![None; n];
    for g in (0..n).rev() {
        if let Some(j) = pick[g][c] {
            choice[g] = Some(j);
            c -= costs[g][j] as usize;
        }
    }
    Ok(mckp_solution(inst, &beta, &choice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::Criterion;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single() -> CriteriaFrame {
        CriteriaFrame::new(vec![Criterion::maximize("beta", 1.0)]).unwrap()
    }

    fn knap(values: &[f64], costs: &[f64], budget: f64) -> KnapsackInstance {
        KnapsackInstance::new(
            single(),
            values
                .iter()
                .zip(costs)
                .enumerate()
                .map(|(i, (v, c))| Item::new(format!("i{i}"), vec![*v], *c))
                .collect(),
            budget,
        )
        .unwrap()
    }

    #[test]
    fn scalarize_examples() {
        let b = scalarize(&single(), &[vec![2.0], vec![4.0]], None).unwrap();
        assert!(b[1] > b[0]);
        let frame = CriteriaFrame::uniform(2).unwrap();
        let b = scalarize(&frame, &[vec![3.0, 5.0], vec![1.0, 2.0], vec![2.0, 4.0]], None).unwrap();
        assert!((b[0] - 1.0).abs() < EPS);
        assert!(scalarize(&frame, &[vec![1.0, 1.0]], Some(&[0.0, 0.0])).is_err());
        assert!(scalarize(&frame, &[vec![1.0, 1.0]], Some(&[1.0])).is_err());
    }

    #[test]
    fn scalarize_teaching_pairs() {
        // Equal weights over the four assigned teaching triples. Each criterion
        // is min-max rescaled over these four rows before the weighted sum.
        let rows = vec![vec![2.0, 4.0, 6.0], vec![2.0, 3.0, 7.0], vec![4.0, 1.0, 6.0], vec![1.0, 7.0, 2.0]];
        let frame = CriteriaFrame::uniform(3).unwrap();
        let b = scalarize(&frame, &rows, None).unwrap();
        let oracle = [
            (1.0 / 3.0 + 3.0 / 6.0 + 4.0 / 5.0) / 3.0,
            (1.0 / 3.0 + 2.0 / 6.0 + 5.0 / 5.0) / 3.0,
            (3.0 / 3.0 + 0.0 / 6.0 + 4.0 / 5.0) / 3.0,
            (0.0 / 3.0 + 6.0 / 6.0 + 0.0 / 5.0) / 3.0,
        ];
        for (got, want) in b.iter().zip(oracle) {
            assert!((got - want).abs() < 1e-12);
        }
        // A3V12 > A2V10 > A1V6 > A5V1 once ranges are taken into account.
        assert!(b[2] > b[1] && b[1] > b[0] && b[0] > b[3]);
    }

    #[test]
    fn knapsack_trivial_cases() {
        let inst = knap(&[3.0, 5.0], &[2.0, 4.0], 0.0);
        let g = knapsack_greedy(&inst, None).unwrap();
        assert!(g.chosen.is_empty());
        assert_eq!(g.objective, 0.0);

        let inst = knap(&[3.0, 5.0, 1.0], &[2.0, 4.0, 1.0], 7.0);
        let all = knapsack_greedy(&inst, None).unwrap();
        assert_eq!(all.chosen.len(), 3);
        assert!((knapsack_exact(&inst, None).unwrap().objective - all.objective).abs() < EPS);

        let inst = knap(&[2.0], &[3.0], 3.0);
        assert_eq!(knapsack_exact(&inst, None).unwrap().chosen.len(), 1);
    }

    #[test]
    fn knapsack_exact_prefers_larger_profit() {
        // Zero-profit anchor item keeps normalization from flattening 5 vs 3.
        let inst = knap(&[5.0, 3.0, 0.0], &[4.0, 4.0, 9.0], 5.0);
        let sol = knapsack_exact(&inst, None).unwrap();
        assert_eq!(sol.chosen, BTreeSet::from(["i0".to_string()]));
    }

    #[test]
    fn knapsack_exact_rejects_fractional_and_guard() {
        let inst = knap(&[1.0], &[1.5], 3.0);
        assert!(matches!(knapsack_exact(&inst, None), Err(Error::NonIntegral { .. })));
        let inst = knap(&[1.0, 2.0], &[600.0, 600.0], 3.0);
        assert!(matches!(
            knapsack_exact_with(&inst, None, &Limits::uniform(1000)),
            Err(Error::GuardExceeded { .. })
        ));
    }

    fn brute_knapsack(inst: &KnapsackInstance) -> f64 {
        let beta = scalarize(&inst.frame, &inst.items.iter().map(|i| i.value.clone()).collect::<Vec<_>>(), None).unwrap();
        let n = inst.items.len();
        (0u32..1 << n)
            .filter_map(|mask| {
                let members = (0..n).filter(|i| mask >> i & 1 == 1);
                let cost: f64 = members.clone().map(|i| inst.items[i].cost).sum();
                (cost <= inst.budget).then(|| members.map(|i| beta[i]).sum::<f64>())
            })
            .fold(0.0, f64::max)
    }

    fn random_knapsack(rng: &mut ChaCha8Rng, n: usize, budget: f64) -> KnapsackInstance {
        KnapsackInstance::new(
            CriteriaFrame::uniform(2).unwrap(),
            (0..n)
                .map(|i| {
                    Item::new(
                        format!("i{i:02}"),
                        vec![rng.gen_range(0..10) as f64, rng.gen_range(0..10) as f64],
                        rng.gen_range(1..=9) as f64,
                    )
                })
                .collect(),
            budget,
        )
        .unwrap()
    }

    #[test]
    fn knapsack_exact_equals_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let inst = random_knapsack(&mut rng, 12, 25.0);
            let exact = knapsack_exact(&inst, None).unwrap();
            assert!((exact.objective - brute_knapsack(&inst)).abs() < 1e-9);
            assert!(exact.total_cost <= inst.budget);
        }
    }

    #[test]
    fn knapsack_greedy_close_to_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut good = 0;
        for _ in 0..100 {
            let inst = random_knapsack(&mut rng, 10, 20.0);
            let g = knapsack_greedy(&inst, None).unwrap();
            let e = knapsack_exact(&inst, None).unwrap();
            assert!(g.total_cost <= inst.budget);
            assert!(e.objective + EPS >= g.objective);
            if g.objective >= 0.75 * e.objective - EPS {
                good += 1;
            }
        }
        assert!(good >= 95, "{good}");
    }

    fn levels_group(id: &str, sums: f64) -> Group {
        Group {
            id: id.to_string(),
            items: (1..=3)
                .map(|j| Item::new(format!("{id}:T{j}"), vec![sums * j as f64], (j + 1) as f64))
                .collect(),
        }
    }

    #[test]
    fn mckp_single_group_upgrades_to_top_level() {
        let inst = MckpInstance::new(single(), vec![levels_group("g", 1.0)], 4.0, GroupRule::AtMostOne).unwrap();
        let sol = mckp_greedy(&inst, None).unwrap();
        assert_eq!(sol.groups["g"], "g:T3");
        assert_eq!(sol.total_cost, 4.0);
    }

    #[test]
    fn mckp_zero_budget() {
        let inst = MckpInstance::new(single(), vec![levels_group("g", 1.0)], 0.0, GroupRule::AtMostOne).unwrap();
        assert!(mckp_greedy(&inst, None).unwrap().chosen.is_empty());
        assert!(mckp_exact_dp(&inst, None).unwrap().chosen.is_empty());
        let exactly = MckpInstance {
            group_rule: GroupRule::ExactlyOne,
            ..inst
        };
        assert!(matches!(mckp_greedy(&exactly, None), Err(Error::Infeasible(_))));
        assert!(matches!(mckp_exact_dp(&exactly, None), Err(Error::Infeasible(_))));
    }

    #[test]
    fn mckp_null_options_pick_best_per_group() {
        let frame = CriteriaFrame::uniform(2).unwrap();
        let groups = (0..3)
            .map(|g| Group {
                id: format!("g{g}"),
                items: vec![
                    Item::new(format!("g{g}:none"), vec![0.0, 0.0], 0.0),
                    Item::new(format!("g{g}:mid"), vec![2.0, 1.0], 3.0),
                    Item::new(format!("g{g}:top"), vec![3.0, 3.0], 5.0),
                ],
            })
            .collect();
        let inst = MckpInstance::new(frame, groups, 1e5, GroupRule::AtMostOne).unwrap();
        let sol = mckp_exact_dp(&inst, None).unwrap();
        for g in 0..3 {
            assert_eq!(sol.groups[&format!("g{g}")], format!("g{g}:top"));
        }
    }

    fn brute_mckp(inst: &MckpInstance) -> Option<f64> {
        let beta = group_profits(inst, None).unwrap();
        let mut best: Option<f64> = None;
        let sizes: Vec<usize> = inst.groups.iter().map(|g| g.items.len() + 1).collect();
        let total: usize = sizes.iter().product();
        for mut code in 0..total {
            let mut cost = 0.0;
            let mut value = 0.0;
            let mut ok = true;
            for (g, size) in sizes.iter().enumerate() {
                let pick = code % size;
                code /= size;
                if pick == 0 {
                    ok &= inst.group_rule == GroupRule::AtMostOne;
                } else {
                    cost += inst.groups[g].items[pick - 1].cost;
                    value += beta[g][pick - 1];
                }
            }
            if ok && cost <= inst.budget {
                best = Some(best.map_or(value, |b: f64| b.max(value)));
            }
        }
        best
    }

    fn random_mckp(rng: &mut ChaCha8Rng, groups: usize, per: usize, budget: f64, rule: GroupRule) -> MckpInstance {
        MckpInstance::new(
            CriteriaFrame::uniform(2).unwrap(),
            (0..groups)
                .map(|g| Group {
                    id: format!("g{g}"),
                    items: (0..per)
                        .map(|j| {
                            Item::new(
                                format!("g{g}i{j}"),
                                vec![rng.gen_range(0..8) as f64, rng.gen_range(0..8) as f64],
                                rng.gen_range(0..=5) as f64,
                            )
                        })
                        .collect(),
                })
                .collect(),
            budget,
            rule,
        )
        .unwrap()
    }

    #[test]
    fn mckp_exact_equals_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for rule in [GroupRule::AtMostOne, GroupRule::ExactlyOne] {
            for _ in 0..40 {
                let inst = random_mckp(&mut rng, 3, 3, 6.0, rule);
                match (brute_mckp(&inst), mckp_exact_dp(&inst, None)) {
                    (Some(b), Ok(sol)) => {
                        assert!((sol.objective - b).abs() < 1e-9);
                        assert!(sol.total_cost <= inst.budget);
                        let g = mckp_greedy(&inst, None).unwrap();
                        assert!(g.total_cost <= inst.budget);
                        assert!(sol.objective + EPS >= g.objective);
                        if rule == GroupRule::ExactlyOne {
                            assert_eq!(sol.groups.len(), 3);
                            assert_eq!(g.groups.len(), 3);
                        }
                    }
                    (None, Err(Error::Infeasible(_))) => {}
                    (b, s) => panic!("oracle {b:?} vs dp {s:?}"),
                }
            }
        }
    }

    #[test]
    fn mckp_guard_and_integrality() {
        let mut inst = MckpInstance::new(single(), vec![levels_group("g", 1.0)], 100.0, GroupRule::AtMostOne).unwrap();
        assert!(matches!(
            mckp_exact_dp_with(&inst, None, &Limits::uniform(2)),
            Err(Error::GuardExceeded { .. })
        ));
        inst.budget = 3.5;
        assert!(matches!(mckp_exact_dp(&inst, None), Err(Error::NonIntegral { .. })));
    }

    #[test]
    fn instance_validation() {
        let dup = KnapsackInstance::new(
            single(),
            vec![Item::new("a", vec![1.0], 1.0), Item::new("a", vec![1.0], 1.0)],
            1.0,
        );
        assert!(dup.is_err());
        let neg = KnapsackInstance::new(single(), vec![Item::new("a", vec![1.0], -1.0)], 1.0);
        assert!(neg.unwrap_err().to_string().contains("items[0].cost"));
        let empty_group = MckpInstance::new(
            single(),
            vec![Group {
                id: "g".into(),
                items: vec![],
            }],
            1.0,
            GroupRule::AtMostOne,
        );
        assert!(empty_group.is_err());
    }
}

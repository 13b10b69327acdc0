use serde::{Deserialize, Serialize};

use crate::criteria::CriteriaFrame;
use crate::select::{mckp_exact_dp_with, mckp_greedy, Group, GroupRule, Item, MckpInstance, SelectionSolution};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementPart {
    pub id: String,
    pub actions: Vec<Item>,
}

/// Candidate improvement actions per system part under one budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementSpec {
    pub frame: CriteriaFrame,
    pub parts: Vec<ImprovementPart>,
    pub budget: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementPlan {
    pub method: SolveMethod,
    pub solution: SelectionSolution,
}

impl ImprovementSpec {
    pub fn validate(&self) -> Result<()> {
        if self.parts.is_empty() {
            return Err(Error::invalid("parts", "at least one part required"));
        }
        self.to_mckp().map(|_| ())
    }

    fn to_mckp(&self) -> Result<MckpInstance> {
        // Parts without actions contribute nothing and are left out of the MCKP.
        let groups = self
            .parts
            .iter()
            .filter(|p| !p.actions.is_empty())
            .map(|p| Group {
                id: p.id.clone(),
                items: p.actions.clone(),
            })
            .collect();
        MckpInstance::new(self.frame.clone(), groups, self.budget, GroupRule::AtMostOne).map_err(|e| match e {
            Error::Invalid { path, message } => Error::invalid(path.replacen("groups", "parts", 1).replacen(".items", ".actions", 1), message),
            e => e,
        })
    }
}

pub fn plan_improvement(spec: &ImprovementSpec, weights: Option<&[f64]>) -> Result<ImprovementPlan> {
    plan_improvement_with(spec, weights, &Limits::default())
}

/// At most one action per part within the budget.
pub fn plan_improvement_with(spec: &ImprovementSpec, weights: Option<&[f64]>, limits: &Limits) -> Result<ImprovementPlan> {
    spec.validate()?;
    let (method, solution) = solve_mckp(&spec.to_mckp()?, weights, limits)?;
    Ok(ImprovementPlan { method, solution })
}

pub fn plan_improvement_exact(spec: &ImprovementSpec, weights: Option<&[f64]>, limits: &Limits) -> Result<ImprovementPlan> {
    spec.validate()?;
    Ok(ImprovementPlan {
        method: SolveMethod::Exact,
        solution: mckp_exact_dp_with(&spec.to_mckp()?, weights, limits)?,
    })
}

pub fn plan_improvement_greedy(spec: &ImprovementSpec, weights: Option<&[f64]>) -> Result<ImprovementPlan> {
    spec.validate()?;
    Ok(ImprovementPlan {
        method: SolveMethod::Greedy,
        solution: mckp_greedy(&spec.to_mckp()?, weights)?,
    })
}

/// Exact DP when the data are integral and the table fits, greedy otherwise.
pub(crate) fn solve_mckp(inst: &MckpInstance, weights: Option<&[f64]>, limits: &Limits) -> Result<(SolveMethod, SelectionSolution)> {
    match mckp_exact_dp_with(inst, weights, limits) {
        Ok(solution) => Ok((SolveMethod::Exact, solution)),
        Err(Error::NonIntegral { .. } | Error::GuardExceeded { .. }) => Ok((SolveMethod::Greedy, mckp_greedy(inst, weights)?)),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(parts: Vec<Vec<(f64, f64)>>, budget: f64) -> ImprovementSpec {
        ImprovementSpec {
            frame: CriteriaFrame::uniform(1).unwrap(),
            parts: parts
                .into_iter()
                .enumerate()
                .map(|(p, acts)| ImprovementPart {
                    id: format!("P{p}"),
                    actions: acts
                        .into_iter()
                        .enumerate()
                        .map(|(a, (v, c))| Item::new(format!("P{p}a{a}"), vec![v], c))
                        .collect(),
                })
                .collect(),
            budget,
        }
    }

    #[test]
    fn zero_budget_no_actions() {
        let plan = plan_improvement(&spec(vec![vec![(3.0, 1.0), (5.0, 2.0)]], 0.0), None).unwrap();
        assert!(plan.solution.chosen.is_empty());
    }

    #[test]
    fn picks_better_affordable_action() {
        let plan = plan_improvement(&spec(vec![vec![(3.0, 1.0), (5.0, 2.0)]], 10.0), None).unwrap();
        assert_eq!(plan.solution.groups["P0"], "P0a1");
        assert_eq!(plan.method, SolveMethod::Exact);
    }

    #[test]
    fn fractional_costs_fall_back_to_greedy() {
        let plan = plan_improvement(&spec(vec![vec![(3.0, 1.5), (5.0, 2.5), (1.0, 0.5)]], 2.0), None).unwrap();
        assert_eq!(plan.method, SolveMethod::Greedy);
        assert_eq!(plan.solution.groups["P0"], "P0a0");
    }

    #[test]
    fn equals_enumeration_over_action_combinations() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let parts: Vec<Vec<(f64, f64)>> = (0..4)
                .map(|_| (0..3).map(|_| (rng.gen_range(0..10) as f64, rng.gen_range(1..=5) as f64)).collect())
                .collect();
            let s = spec(parts.clone(), 10.0);
            let plan = plan_improvement(&s, None).unwrap();
            // Profits are min-max normalized over all 12 actions.
            let all: Vec<f64> = parts.iter().flatten().map(|(v, _)| *v).collect();
            let (lo, hi) = all.iter().fold((f64::MAX, f64::MIN), |(l, h), v| (l.min(*v), h.max(*v)));
            let beta = |v: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
            let mut best = 0.0f64;
            for code in 0..4usize.pow(4) {
                let (mut cost, mut value, mut c) = (0.0, 0.0, code);
                for part in &parts {
                    let pick = c % 4;
                    c /= 4;
                    if pick > 0 {
                        cost += part[pick - 1].1;
                        value += beta(part[pick - 1].0);
                    }
                }
                if cost <= 10.0 {
                    best = best.max(value);
                }
            }
            assert!((plan.solution.objective - best).abs() < 1e-9);
            assert!(plan.solution.total_cost <= 10.0);
            assert!(plan.solution.groups.len() == plan.solution.chosen.len());
        }
    }
}

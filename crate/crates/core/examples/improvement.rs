//! Improvement planning: at most one action per system part within a budget.

use hmmd_kit::criteria::{CriteriaFrame, Criterion};
use hmmd_kit::frameworks::{plan_improvement, plan_improvement_greedy, ImprovementPart, ImprovementSpec};
use hmmd_kit::select::Item;

fn part(id: &str, actions: &[(&str, f64, f64, f64)]) -> ImprovementPart {
    ImprovementPart {
        id: id.into(),
        actions: actions.iter().map(|(a, gain, risk, cost)| Item::new(*a, vec![*gain, *risk], *cost)).collect(),
    }
}

fn main() -> hmmd_kit::Result<()> {
    let frame = CriteriaFrame::new(vec![Criterion::maximize("gain", 2.0), Criterion::minimize("risk", 1.0)])?;
    let spec = ImprovementSpec {
        frame,
        parts: vec![
            part("hardware", &[("upgrade", 5.0, 2.0, 4.0), ("replace", 8.0, 3.0, 7.0)]),
            part("software", &[("patch", 3.0, 0.0, 1.0), ("rewrite", 7.0, 3.0, 6.0)]),
            part("training", &[("course", 4.0, 1.0, 2.0)]),
        ],
        budget: 9.0,
    };

    let plan = plan_improvement(&spec, None)?;
    println!("{:?}: {:?} cost {} objective {:.4}", plan.method, plan.solution.groups, plan.solution.total_cost, plan.solution.objective);
    let greedy = plan_improvement_greedy(&spec, None)?;
    println!("{:?}: {:?} cost {} objective {:.4}", greedy.method, greedy.solution.groups, greedy.solution.total_cost, greedy.solution.objective);
    Ok(())
}

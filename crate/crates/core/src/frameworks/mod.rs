//! Composite schemes that chain the basic solvers.

mod improve;
mod integrate;
mod pipeline;
mod trajectory;

pub use improve::{
    plan_improvement, plan_improvement_exact, plan_improvement_greedy, plan_improvement_with, ImprovementPart, ImprovementPlan,
    ImprovementSpec, SolveMethod,
};
pub use integrate::{evaluate_integration_tree, IntegrationEvaluation, IntegrationNode, IntegrationTree, TableRow};
pub use pipeline::{
    run_three_set_pipeline, run_three_set_pipeline_with, ActionGroup, ClusterMatch, PairAction, ThreeSetReport,
    ThreeSetSpec,
};
pub use trajectory::{covers_all_stages, design_trajectory, Stage, StageDecision, Trajectory, TrajectoryOptions, TrajectorySpec};

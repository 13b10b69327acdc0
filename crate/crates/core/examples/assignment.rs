//! Students to laboratory works: greedy, exact and Pareto-efficient assignments.

use hmmd_kit::assign::{assign_exact, assign_greedy, assign_pareto, AssignmentInstance};
use hmmd_kit::criteria::{CriteriaFrame, Criterion};

fn main() -> hmmd_kit::Result<()> {
    let frame = CriteriaFrame::new(vec![Criterion::maximize("theory", 1.0), Criterion::maximize("practice", 1.0)])?;
    let agents = vec!["S1".into(), "S2".into(), "S3".into(), "S4".into()];
    let positions = vec!["W1".into(), "W2".into(), "W3".into()];
    let cells = vec![
        vec![vec![5.0, 2.0], vec![3.0, 3.0], vec![1.0, 6.0]],
        vec![vec![4.0, 4.0], vec![6.0, 1.0], vec![2.0, 2.0]],
        vec![vec![1.0, 1.0], vec![2.0, 5.0], vec![5.0, 5.0]],
        vec![vec![3.0, 3.0], vec![3.0, 3.0], vec![3.0, 3.0]],
    ];
    let inst = AssignmentInstance::new(frame, agents, positions, cells)?;

    let show = |name: &str, s: &hmmd_kit::assign::AssignmentSolution| {
        let pairs: Vec<String> = s.pairs.iter().map(|p| format!("{}->{}", p.agent, p.position)).collect();
        println!("{name:<8} {} objective {:.4} vector {:?}", pairs.join(" "), s.objective, s.objective_vector);
    };
    show("greedy", &assign_greedy(&inst, None)?);
    show("exact", &assign_exact(&inst, None)?);
    for s in assign_pareto(&inst)? {
        show("pareto", &s);
    }

    // Two seats in the first work.
    let wide = inst.with_capacity(vec![2, 1, 1])?;
    show("cap 2", &assign_exact(&wide, None)?);
    Ok(())
}

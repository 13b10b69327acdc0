//! Teaching-level selection: one level per assigned pair under a budget.

use std::path::Path;

use hmmd_kit::probio::{parse_problem, Problem};
use hmmd_kit::select::{mckp_exact_dp, mckp_greedy, MckpInstance};

fn main() -> hmmd_kit::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/teaching_levels.mckp");
    let text = std::fs::read_to_string(path).expect("fixture");
    let Problem::Mckp(base) = parse_problem(&text)?.problem else {
        unreachable!("fixture holds an mckp problem")
    };

    for budget in [8.0, 10.0, 12.0, 15.0] {
        let inst = MckpInstance { budget, ..base.clone() };
        let greedy = mckp_greedy(&inst, None)?;
        let exact = mckp_exact_dp(&inst, None)?;
        println!("b = {budget}");
        println!("  greedy {:?} cost {} objective {:.4}", greedy.groups, greedy.total_cost, greedy.objective);
        println!("  exact  {:?} cost {} objective {:.4}", exact.groups, exact.total_cost, exact.objective);
    }
    Ok(())
}

//! Student strategy: leaf priorities come from ranking the alternatives'
//! estimates, then the tree is synthesized bottom-up.

use std::path::Path;

use hmmd_kit::morph::{rank_leaf_priorities, synthesize, ComposeOptions};
use hmmd_kit::probio::{parse_problem, Problem};
use hmmd_kit::rank::RankMethod;

fn main() -> hmmd_kit::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/student_strategy.morph");
    let Problem::Morph(base) = parse_problem(&std::fs::read_to_string(path).expect("fixture"))?.problem else {
        unreachable!("fixture holds a morph problem")
    };

    for method in [RankMethod::Utility, RankMethod::Pareto] {
        let mut system = base.clone();
        rank_leaf_priorities(&mut system, method)?;
        let synthesis = synthesize(&system, &ComposeOptions::default())?;
        println!("leaf priorities by {}:", method.token());
        for node in &synthesis.nodes {
            println!("  {:<10} {} composites", node.node, node.composites.len());
        }
        for c in synthesis.root().iter().take(5) {
            println!("  {}  N = {}", c.id, c.quality);
        }
    }
    Ok(())
}

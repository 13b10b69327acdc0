//! Hierarchical synthesis of the course structure: Pareto sets per part and
//! the root composites.

use std::path::Path;

use hmmd_kit::morph::{synthesize, ComposeOptions};
use hmmd_kit::probio::{parse_problem, Problem};

fn main() -> hmmd_kit::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/course_example.morph");
    let Problem::Morph(system) = parse_problem(&std::fs::read_to_string(path).expect("fixture"))?.problem else {
        unreachable!("fixture holds a morph problem")
    };

    let synthesis = synthesize(&system, &ComposeOptions::default())?;
    for node in &synthesis.nodes {
        println!("{}:", node.node);
        for c in &node.composites {
            println!("  {:<40} N = {}", c.id, c.quality);
        }
    }
    Ok(())
}

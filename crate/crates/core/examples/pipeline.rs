//! Three-set scheme: cluster students and works, match the clusters, then
//! pick teaching levels for the matched pairs under a budget.

use std::path::Path;

use hmmd_kit::frameworks::run_three_set_pipeline;
use hmmd_kit::probio::{parse_problem, Problem};

fn main() -> hmmd_kit::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/teaching_pipeline.pipeline");
    let Problem::Pipeline(spec) = parse_problem(&std::fs::read_to_string(path).expect("fixture"))?.problem else {
        unreachable!("fixture holds a pipeline problem")
    };

    let report = run_three_set_pipeline(&spec, None)?;
    println!("set 1 clusters: {:?}", report.clusters1);
    println!("set 2 clusters: {:?}", report.clusters2);
    for m in &report.matches {
        println!("match {:?} -> {:?}", report.clusters1[m.left], report.clusters2[m.right]);
    }
    for s in &report.selections {
        println!("{} / {}: {}", s.left, s.right, s.action);
    }
    println!("cost {} of {}, objective {:.4}, solved by {:?}", report.total_cost, spec.budget, report.objective, report.method);
    Ok(())
}

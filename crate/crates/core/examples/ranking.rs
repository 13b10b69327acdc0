//! Ranks six alternatives by every method and prints the priority levels.

use hmmd_kit::criteria::{CriteriaFrame, Criterion};
use hmmd_kit::rank::{rank, rank_outranking, Alternative, RankMethod, RankingInstance};

fn main() -> hmmd_kit::Result<()> {
    let frame = CriteriaFrame::new(vec![
        Criterion::maximize("quality", 2.0),
        Criterion::minimize("cost", 1.0),
        Criterion::maximize("reliability", 1.0),
    ])?;
    let alternatives = vec![
        Alternative::new("A", vec![8.0, 5.0, 3.0]),
        Alternative::new("B", vec![6.0, 2.0, 4.0]),
        Alternative::new("C", vec![9.0, 7.0, 2.0]),
        Alternative::new("D", vec![5.0, 6.0, 2.0]),
        Alternative::new("E", vec![7.0, 3.0, 5.0]),
        Alternative::new("F", vec![4.0, 8.0, 1.0]),
    ];
    let inst = RankingInstance::new(frame, alternatives)?;

    for method in [RankMethod::Utility, RankMethod::Pareto, RankMethod::IdealPoint] {
        let r = rank(&inst, method)?;
        println!("{:<10} {:?}", method.token(), r.priorities);
    }
    let strict = rank_outranking(&inst, 0.7, 0.3)?;
    println!("{:<10} {:?} (p = 0.7, q = 0.3)", "outrank", strict.priorities);
    Ok(())
}

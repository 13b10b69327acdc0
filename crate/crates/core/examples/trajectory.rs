//! Three-stage strategy: one decision per stage, rated by neighboring
//! compatibility and decision priorities.

use hmmd_kit::criteria::OrdinalScale;
use hmmd_kit::frameworks::{design_trajectory, Stage, StageDecision, TrajectoryOptions, TrajectorySpec};
use hmmd_kit::morph::CompatEntry;

fn stage(id: &str, time: f64, decisions: &[(&str, i64)]) -> Stage {
    Stage {
        id: id.into(),
        time,
        decisions: decisions.iter().map(|(d, p)| StageDecision { id: (*d).into(), priority: *p }).collect(),
    }
}

fn main() -> hmmd_kit::Result<()> {
    let stages = vec![
        stage("year1", 1.0, &[("basic", 1), ("applied", 2)]),
        stage("year2", 2.0, &[("research", 2), ("industry", 1), ("teaching", 3)]),
        stage("year3", 3.0, &[("thesis", 1), ("startup", 2)]),
    ];
    let compat = [
        ("basic", "research", 3), ("basic", "industry", 1), ("basic", "teaching", 2),
        ("applied", "research", 2), ("applied", "industry", 3), ("applied", "teaching", 2),
        ("research", "thesis", 3), ("research", "startup", 1),
        ("industry", "thesis", 1), ("industry", "startup", 3),
        ("teaching", "thesis", 2), ("teaching", "startup", 2),
        ("basic", "thesis", 3), ("basic", "startup", 1), ("applied", "thesis", 2), ("applied", "startup", 3),
    ];
    let spec = TrajectorySpec {
        stages,
        compat: compat.iter().map(|(a, b, v)| CompatEntry::new(*a, *b, *v)).collect(),
        compat_scale: OrdinalScale::compatibility(),
        priority_scale: OrdinalScale::priority(3)?,
    };

    for all_pairs in [false, true] {
        let options = TrajectoryOptions { all_pairs, ..Default::default() };
        println!("{}:", if all_pairs { "all stage pairs" } else { "neighboring stages" });
        for t in design_trajectory(&spec, &options)? {
            println!("  {:<32} N = {}", t.decisions.join(" -> "), t.quality);
        }
    }
    Ok(())
}

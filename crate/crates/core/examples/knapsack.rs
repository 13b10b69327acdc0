//! Multicriteria knapsack: greedy answer next to the exact optimum.

use hmmd_kit::criteria::{CriteriaFrame, Criterion};
use hmmd_kit::select::{knapsack_exact, knapsack_greedy, Item, KnapsackInstance};

fn main() -> hmmd_kit::Result<()> {
    let frame = CriteriaFrame::new(vec![Criterion::maximize("profit", 1.0), Criterion::minimize("risk", 1.0)])?;
    let items = vec![
        Item::new("I1", vec![10.0, 2.0], 5.0),
        Item::new("I2", vec![7.0, 1.0], 3.0),
        Item::new("I3", vec![4.0, 1.0], 2.0),
        Item::new("I4", vec![9.0, 3.0], 6.0),
        Item::new("I5", vec![3.0, 0.0], 1.0),
        Item::new("I6", vec![6.0, 2.0], 4.0),
    ];
    let inst = KnapsackInstance::new(frame, items, 10.0)?;

    let greedy = knapsack_greedy(&inst, None)?;
    let exact = knapsack_exact(&inst, None)?;
    for (name, s) in [("greedy", &greedy), ("exact", &exact)] {
        println!("{name:<7} {:?} cost {} objective {:.4}", s.chosen, s.total_cost, s.objective);
    }
    println!("ratio {:.3}", greedy.objective / exact.objective);

    // Caller weights override the frame: profit only.
    let profit_only = knapsack_exact(&inst, Some(&[1.0, 0.0]))?;
    println!("profit-only optimum {:?}", profit_only.chosen);
    Ok(())
}

//! Tour through eight cities: nearest neighbor, 2-opt and the optimum.

use hmmd_kit::route::{tsp_brute_force, tsp_nearest_neighbor, tsp_two_opt, TspInstance};

fn main() -> hmmd_kit::Result<()> {
    let points = [(0.0, 0.0), (2.0, 7.0), (5.0, 9.0), (9.0, 6.0), (8.0, 1.0), (4.0, 3.0), (1.0, 4.0), (6.0, 5.0)];
    let ids = (1..=points.len()).map(|i| format!("c{i}")).collect();
    let inst = TspInstance::from_points(ids, &points)?;

    let nn = tsp_nearest_neighbor(&inst, "c1")?;
    let improved = tsp_two_opt(&inst, &nn)?;
    let best = tsp_brute_force(&inst)?;
    for (name, t) in [("nearest", &nn), ("2-opt", &improved), ("optimum", &best)] {
        println!("{name:<8} {:>7.3}  {}", t.length, t.order.join(" -> "));
    }
    Ok(())
}

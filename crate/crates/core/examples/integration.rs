//! Ordinal course evaluation through integration tables.

use hmmd_kit::criteria::{OrdinalScale, ScaleDirection};
use hmmd_kit::frameworks::{evaluate_integration_tree, IntegrationNode, IntegrationTree, TableRow};

/// Parent estimate is the rounded-down mean of the children.
fn mean_table(arity: usize) -> Vec<TableRow> {
    let mut rows = Vec::new();
    let mut tuple = vec![1i64; arity];
    loop {
        let sum: i64 = tuple.iter().sum();
        rows.push(TableRow { inputs: tuple.clone(), output: sum / arity as i64 });
        let mut i = 0;
        while i < arity && tuple[i] == 3 {
            tuple[i] = 1;
            i += 1;
        }
        if i == arity {
            return rows;
        }
        tuple[i] += 1;
    }
}

fn main() -> hmmd_kit::Result<()> {
    let scale = OrdinalScale::new(1, 3, ScaleDirection::HighIsBest)?;
    let content = IntegrationNode::internal(
        "content",
        scale,
        vec![IntegrationNode::leaf("theory", scale, 3), IntegrationNode::leaf("practice", scale, 2)],
        mean_table(2),
    );
    let delivery = IntegrationNode::internal(
        "delivery",
        scale,
        vec![IntegrationNode::leaf("lectures", scale, 2), IntegrationNode::leaf("labs", scale, 3)],
        mean_table(2),
    );
    let tree = IntegrationTree {
        root: IntegrationNode::internal("course", scale, vec![content, delivery], mean_table(2)),
    };
    tree.validate()?;

    let eval = evaluate_integration_tree(&tree)?;
    for (id, v) in &eval.trace {
        println!("{id:<10} {v}");
    }
    println!("root estimate {}", eval.root);
    Ok(())
}

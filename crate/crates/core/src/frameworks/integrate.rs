//! Hierarchical ordinal evaluation with integration tables.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::criteria::OrdinalScale;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub inputs: Vec<i64>,
    pub output: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationNode {
    pub id: String,
    /// Scale of this node's estimate.
    pub scale: OrdinalScale,
    /// Leaf estimate; internal nodes derive theirs from `table`.
    #[serde(default)]
    pub estimate: Option<i64>,
    #[serde(default)]
    pub children: Vec<IntegrationNode>,
    /// Child estimates (in child order) to this node's estimate.
    #[serde(default)]
    pub table: Vec<TableRow>,
}

impl IntegrationNode {
    pub fn leaf(id: impl Into<String>, scale: OrdinalScale, estimate: i64) -> Self {
        IntegrationNode {
            id: id.into(),
            scale,
            estimate: Some(estimate),
            children: Vec::new(),
            table: Vec::new(),
        }
    }

    pub fn internal(id: impl Into<String>, scale: OrdinalScale, children: Vec<IntegrationNode>, table: Vec<TableRow>) -> Self {
        IntegrationNode {
            id: id.into(),
            scale,
            estimate: None,
            children,
            table,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationTree {
    pub root: IntegrationNode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationEvaluation {
    pub root: i64,
    /// Estimate of every node, bottom-up.
    pub trace: Vec<(String, i64)>,
}

impl IntegrationTree {
    /// Checks ids, leaf estimates, and that every table is total over the
    /// product of its children's scales.
    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        validate_node(&self.root, &mut ids)
    }
}

fn validate_node<'a>(node: &'a IntegrationNode, ids: &mut BTreeSet<&'a str>) -> Result<()> {
    let at = format!("node `{}`", node.id);
    if !ids.insert(&node.id) {
        return Err(Error::invalid(at, "duplicate node id"));
    }
    if node.children.is_empty() {
        match node.estimate {
            Some(e) if node.scale.contains(e) => {}
            Some(e) => return Err(Error::invalid(format!("{at}.estimate"), format!("{e} outside [{}, {}]", node.scale.lo(), node.scale.hi()))),
            None => return Err(Error::invalid(at, "leaf needs an estimate")),
        }
        return Ok(());
    }
    if node.estimate.is_some() {
        return Err(Error::invalid(at, "internal node estimate comes from its table"));
    }
    let mut rows: BTreeMap<&[i64], i64> = BTreeMap::new();
    for (r, row) in node.table.iter().enumerate() {
        let row_at = format!("{at}.table[{r}]");
        if row.inputs.len() != node.children.len() {
            return Err(Error::invalid(row_at, format!("expected {} inputs", node.children.len())));
        }
        for (c, v) in row.inputs.iter().enumerate() {
            if !node.children[c].scale.contains(*v) {
                return Err(Error::invalid(row_at, format!("input {v} outside the scale of `{}`", node.children[c].id)));
            }
        }
        if !node.scale.contains(row.output) {
            return Err(Error::invalid(row_at, format!("output {} outside the node scale", row.output)));
        }
        if rows.insert(&row.inputs, row.output).is_some_and(|prev| prev != row.output) {
            return Err(Error::invalid(row_at, format!("conflicting rows for {:?}", row.inputs)));
        }
    }
    let combinations: usize = node.children.iter().map(|c| c.scale.len()).product();
    if rows.len() != combinations {
        let missing = first_missing(node, &rows).unwrap_or_default();
        return Err(Error::invalid(
            format!("{at}.table"),
            format!("table covers {} of {combinations} tuples; missing {missing:?}", rows.len()),
        ));
    }
    for child in &node.children {
        validate_node(child, ids)?;
    }
    Ok(())
}

fn first_missing(node: &IntegrationNode, rows: &BTreeMap<&[i64], i64>) -> Option<Vec<i64>> {
    let mut tuple: Vec<i64> = node.children.iter().map(|c| c.scale.lo()).collect();
    loop {
        if !rows.contains_key(tuple.as_slice()) {
            return Some(tuple);
        }
        let mut c = tuple.len();
        loop {
            if c == 0 {
                return None;
            }
            c -= 1;
            if tuple[c] < node.children[c].scale.hi() {
                tuple[c] += 1;
                break;
            }
            tuple[c] = node.children[c].scale.lo();
        }
    }
}

/// Bottom-up table lookups from the leaf estimates to the root.
pub fn evaluate_integration_tree(tree: &IntegrationTree) -> Result<IntegrationEvaluation> {
    let mut trace = Vec::new();
    let root = evaluate(&tree.root, &mut trace)?;
    Ok(IntegrationEvaluation { root, trace })
}

fn evaluate(node: &IntegrationNode, trace: &mut Vec<(String, i64)>) -> Result<i64> {
    let value = if node.children.is_empty() {
        let e = node
            .estimate
            .ok_or_else(|| Error::invalid(format!("node `{}`", node.id), "leaf needs an estimate"))?;
        if !node.scale.contains(e) {
            return Err(Error::invalid(
                format!("node `{}`.estimate", node.id),
                format!("{e} outside [{}, {}]", node.scale.lo(), node.scale.hi()),
            ));
        }
        e
    } else {
        let inputs = node
            .children
            .iter()
            .map(|c| evaluate(c, trace))
            .collect::<Result<Vec<_>>>()?;
        node.table
            .iter()
            .find(|row| row.inputs == inputs)
            .map(|row| row.output)
            .ok_or_else(|| Error::MissingTableEntry {
                node: node.id.clone(),
                tuple: inputs,
            })?
    };
    trace.push((node.id.clone(), value));
    Ok(value)
}

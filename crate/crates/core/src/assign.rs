//! Multicriteria assignment of agents to positions.
//!
//! Each agent takes at most one position; a position accepts up to its
//! capacity. Solutions are *maximal*: no agent stays unassigned while a
//! position still has room.

use serde::{Deserialize, Serialize};

use crate::criteria::{dominates_unchecked, normalize_estimates, orient, CriteriaFrame, EstimateVector, EPS};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentInstance {
    pub frame: CriteriaFrame,
    pub agents: Vec<String>,
    pub positions: Vec<String>,
    /// `cells[i][j]`: correspondence of agent `i` to position `j`.
    pub cells: Vec<Vec<EstimateVector>>,
    /// Per-position capacity, aligned with `positions`; empty means all 1.
    #[serde(default)]
    pub capacity: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pair {
    pub agent: String,
    pub position: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentSolution {
    /// Ordered by agent as listed in the instance.
    pub pairs: Vec<Pair>,
    pub objective_vector: EstimateVector,
    pub objective: f64,
}

impl AssignmentSolution {
    pub fn position_of(&self, agent: &str) -> Option<&str> {
        self.pairs.iter().find(|p| p.agent == agent).map(|p| p.position.as_str())
    }
}

impl AssignmentInstance {
    pub fn new(
        frame: CriteriaFrame,
        agents: Vec<String>,
        positions: Vec<String>,
        cells: Vec<Vec<EstimateVector>>,
    ) -> Result<Self> {
        let inst = AssignmentInstance {
            frame,
            agents,
            positions,
            cells,
            capacity: Vec::new(),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_capacity(mut self, capacity: Vec<u32>) -> Result<Self> {
        self.capacity = capacity;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, list) in [("agents", &self.agents), ("positions", &self.positions)] {
            for (i, id) in list.iter().enumerate() {
                if list[..i].contains(id) {
                    return Err(Error::invalid(format!("{name}[{i}]"), format!("duplicate id `{id}`")));
                }
            }
        }
        if self.cells.len() != self.agents.len() {
            return Err(Error::invalid(
                "cells",
                format!("expected {} rows, found {}", self.agents.len(), self.cells.len()),
            ));
        }
        for (i, row) in self.cells.iter().enumerate() {
            if row.len() != self.positions.len() {
                return Err(Error::invalid(
                    format!("cells[{i}]"),
                    format!("expected {} columns, found {}", self.positions.len(), row.len()),
                ));
            }
            for (j, cell) in row.iter().enumerate() {
                self.frame.check_row(cell).map_err(|e| match e {
                    Error::LengthMismatch { expected, found } => Error::invalid(
                        format!("cells[{i}][{j}]"),
                        format!("expected {expected} values, found {found}"),
                    ),
                    e => e.within(&format!("cells[{i}][{j}]")),
                })?;
            }
        }
        if !self.capacity.is_empty() {
            if self.capacity.len() != self.positions.len() {
                return Err(Error::invalid(
                    "capacity",
                    format!("expected {} capacities, found {}", self.positions.len(), self.capacity.len()),
                ));
            }
            if let Some(j) = self.capacity.iter().position(|c| *c == 0) {
                return Err(Error::invalid(format!("capacity[{j}]"), "capacity must be positive"));
            }
        }
        Ok(())
    }

    pub fn capacities(&self) -> Vec<u32> {
        if self.capacity.is_empty() {
            vec![1; self.positions.len()]
        } else {
            self.capacity.clone()
        }
    }

    /// Number of pairs in every maximal assignment.
    pub fn slots(&self) -> u64 {
        let cap: u64 = self.capacities().iter().map(|c| *c as u64).sum();
        cap.min(self.agents.len() as u64)
    }

    /// Scalarized cell values; normalization runs over the whole matrix.
    pub fn scalar_cells(&self, weights: Option<&[f64]>) -> Result<Vec<Vec<f64>>> {
        let lambda = self.frame.resolve_weights(weights)?;
        let flat: Vec<EstimateVector> = self.cells.iter().flatten().cloned().collect();
        if flat.is_empty() {
            return Ok(vec![Vec::new(); self.agents.len()]);
        }
        let norm = normalize_estimates(&self.frame, &flat)?;
        let scalar: Vec<f64> = norm
            .iter()
            .map(|r| r.iter().zip(&lambda).map(|(v, w)| v * w).sum())
            .collect();
        Ok(scalar.chunks(self.positions.len()).map(<[f64]>::to_vec).collect())
    }

    fn solution(&self, scalar: &[Vec<f64>], assignment: &[Option<usize>]) -> AssignmentSolution {
        let mut sol = AssignmentSolution {
            pairs: Vec::new(),
            objective_vector: vec![0.0; self.frame.len()],
            objective: 0.0,
        };
        for (i, slot) in assignment.iter().enumerate() {
            if let Some(j) = *slot {
                sol.pairs.push(Pair {
                    agent: self.agents[i].clone(),
                    position: self.positions[j].clone(),
                });
                sol.objective += scalar[i][j];
                for (acc, v) in sol.objective_vector.iter_mut().zip(&self.cells[i][j]) {
                    *acc += v;
                }
            }
        }
        sol
    }
}

/// Fixes the best remaining cell until agents or capacity run out.
pub fn assign_greedy(inst: &AssignmentInstance, weights: Option<&[f64]>) -> Result<AssignmentSolution> {
    inst.validate()?;
    let scalar = inst.scalar_cells(weights)?;
    let mut capacity = inst.capacities();
    let mut assignment = vec![None; inst.agents.len()];
    loop {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in scalar.iter().enumerate() {
            if assignment[i].is_some() {
                continue;
            }
            for (j, v) in row.iter().enumerate() {
                if capacity[j] > 0 && best.is_none_or(|(bi, bj)| *v > scalar[bi][bj] + EPS) {
                    best = Some((i, j));
                }
            }
        }
        let Some((i, j)) = best else { break };
        assignment[i] = Some(j);
        capacity[j] -= 1;
    }
    Ok(inst.solution(&scalar, &assignment))
}

/// Visits every maximal assignment in lexicographic order of
/// `(agent 0 choice, agent 1 choice, ...)`, positions before "unassigned".
fn for_each_maximal(inst: &AssignmentInstance, limits: &Limits, mut visit: impl FnMut(&[Option<usize>])) -> Result<()> {
    let slots = inst.slots();
    if slots > limits.assign_slots {
        return Err(Error::GuardExceeded {
            what: "assignment slots",
            size: slots as u128,
            limit: limits.assign_slots,
        });
    }

    struct Walk<'a, F> {
        positions: usize,
        capacity: Vec<u32>,
        current: Vec<Option<usize>>,
        target: u64,
        visit: &'a mut F,
    }

    impl<F: FnMut(&[Option<usize>])> Walk<'_, F> {
        fn go(&mut self, agent: usize, assigned: u64) {
            let left = (self.current.len() - agent) as u64;
            if assigned + left < self.target {
                return;
            }
            if agent == self.current.len() {
                (self.visit)(&self.current);
                return;
            }
            if assigned < self.target {
                for j in 0..self.positions {
                    if self.capacity[j] > 0 {
                        self.capacity[j] -= 1;
                        self.current[agent] = Some(j);
                        self.go(agent + 1, assigned + 1);
                        self.current[agent] = None;
                        self.capacity[j] += 1;
                    }
                }
            }
            self.go(agent + 1, assigned);
        }
    }

    let mut walk = Walk {
        positions: inst.positions.len(),
        capacity: inst.capacities(),
        current: vec![None; inst.agents.len()],
        target: slots,
        visit: &mut visit,
    };
    walk.go(0, 0);
    Ok(())
}

pub fn assign_exact(inst: &AssignmentInstance, weights: Option<&[f64]>) -> Result<AssignmentSolution> {
    assign_exact_with(inst, weights, &Limits::default())
}

/// Maximal assignment with the largest scalarized objective; the first one
/// in enumeration order wins ties.
pub fn assign_exact_with(inst: &AssignmentInstance, weights: Option<&[f64]>, limits: &Limits) -> Result<AssignmentSolution> {
    inst.validate()?;
    let scalar = inst.scalar_cells(weights)?;
    let mut best: Option<(f64, Vec<Option<usize>>)> = None;
    for_each_maximal(inst, limits, |a| {
        let value: f64 = a
            .iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| scalar[i][j]))
            .sum();
        if best.as_ref().is_none_or(|(b, _)| value > b + EPS) {
            best = Some((value, a.to_vec()));
        }
    })?;
    let (_, assignment) = best.expect("the empty assignment is always enumerated");
    Ok(inst.solution(&scalar, &assignment))
}

pub fn assign_pareto(inst: &AssignmentInstance) -> Result<Vec<AssignmentSolution>> {
    assign_pareto_with(inst, &Limits::default())
}

/// All maximal assignments whose summed objective vectors are
/// non-dominated, in enumeration order.
pub fn assign_pareto_with(inst: &AssignmentInstance, limits: &Limits) -> Result<Vec<AssignmentSolution>> {
    inst.validate()?;
    let scalar = inst.scalar_cells(None)?;
    let mut all = Vec::new();
    for_each_maximal(inst, limits, |a| all.push(inst.solution(&scalar, a)))?;
    let oriented: Vec<EstimateVector> = all.iter().map(|s| orient(&inst.frame, &s.objective_vector)).collect();
    Ok(all
        .iter()
        .enumerate()
        .filter(|(i, _)| !oriented.iter().any(|o| dominates_unchecked(o, &oriented[*i])))
        .map(|(_, s)| s.clone())
        .collect())
}

//! Symmetric TSP: nearest-neighbor construction, first-improvement 2-opt and
//! a brute-force oracle for small instances.

use serde::{Deserialize, Serialize};

use crate::cluster::validate_square;
use crate::criteria::EPS;
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspInstance {
    pub ids: Vec<String>,
    pub dist: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<String>,
    pub length: f64,
}

impl TspInstance {
    pub fn new(ids: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self> {
        let inst = TspInstance { ids, dist };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_points(ids: Vec<String>, points: &[(f64, f64)]) -> Result<Self> {
        let dist = points
            .iter()
            .map(|a| points.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
            .collect();
        TspInstance::new(ids, dist)
    }

    pub fn validate(&self) -> Result<()> {
        validate_square(&self.ids, &self.dist, "dist")?;
        if self.ids.len() < 3 {
            return Err(Error::invalid("ids", "a tour needs at least 3 cities"));
        }
        Ok(())
    }

    fn length(&self, order: &[usize]) -> f64 {
        let n = order.len();
        (0..n).map(|i| self.dist[order[i]][order[(i + 1) % n]]).sum()
    }

    fn tour(&self, order: &[usize]) -> Tour {
        Tour {
            order: order.iter().map(|i| self.ids[*i].clone()).collect(),
            length: self.length(order),
        }
    }

    fn index(&self, id: &str) -> Result<usize> {
        self.ids.iter().position(|x| x == id).ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    /// Checks that a tour visits every city once and returns its city indices.
    pub fn check_tour(&self, tour: &Tour) -> Result<Vec<usize>> {
        if tour.order.len() != self.ids.len() {
            return Err(Error::invalid(
                "order",
                format!("tour visits {} cities, instance has {}", tour.order.len(), self.ids.len()),
            ));
        }
        let order = tour.order.iter().map(|id| self.index(id)).collect::<Result<Vec<_>>>()?;
        let mut seen = vec![false; self.ids.len()];
        for &i in &order {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::invalid("order", format!("city `{}` visited twice", self.ids[i])));
            }
        }
        Ok(order)
    }

    /// Recomputed length of a tour.
    pub fn tour_length(&self, tour: &Tour) -> Result<f64> {
        Ok(self.length(&self.check_tour(tour)?))
    }
}

/// Greedy nearest unvisited city from `start`; ties go to the earlier city.
pub fn tsp_nearest_neighbor(inst: &TspInstance, start: &str) -> Result<Tour> {
    inst.validate()?;
    let n = inst.ids.len();
    let mut current = inst.index(start)?;
    let mut visited = vec![false; n];
    visited[current] = true;
    let mut order = vec![current];
    while order.len() < n {
        let next = (0..n)
            .filter(|j| !visited[*j])
            .min_by(|a, b| inst.dist[current][*a].total_cmp(&inst.dist[current][*b]).then(a.cmp(b)))
            .expect("unvisited city remains");
        visited[next] = true;
        order.push(next);
        current = next;
    }
    Ok(inst.tour(&order))
}

/// First-improvement 2-opt: scans `(i, j)` by position, applies the first
/// improving edge exchange and restarts, until no move improves.
pub fn tsp_two_opt(inst: &TspInstance, initial: &Tour) -> Result<Tour> {
    inst.validate()?;
    let mut order = inst.check_tour(initial)?;
    let n = order.len();
    let d = &inst.dist;
    'scan: loop {
        for i in 0..n - 1 {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b, c, e) = (order[i], order[i + 1], order[j], order[(j + 1) % n]);
                let delta = d[a][c] + d[b][e] - d[a][b] - d[c][e];
                if delta < -EPS {
                    order[i + 1..=j].reverse();
                    continue 'scan;
                }
            }
        }
        break;
    }
    Ok(inst.tour(&order))
}

/// Nearest neighbor from the first city followed by 2-opt.
pub fn tsp_heuristic(inst: &TspInstance) -> Result<Tour> {
    let nn = tsp_nearest_neighbor(inst, &inst.ids[0])?;
    tsp_two_opt(inst, &nn)
}

pub fn tsp_brute_force(inst: &TspInstance) -> Result<Tour> {
    tsp_brute_force_with(inst, &Limits::default())
}

/// Exact optimum over the `(n-1)!/2` distinct tours starting at the first city.
pub fn tsp_brute_force_with(inst: &TspInstance, limits: &Limits) -> Result<Tour> {
    inst.validate()?;
    let n = inst.ids.len();
    if n as u64 > limits.tsp_cities {
        return Err(Error::GuardExceeded {
            what: "brute-force TSP cities",
            size: n as u128,
            limit: limits.tsp_cities,
        });
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    permute(&mut rest, 0, &mut |perm| {
        // Each undirected cycle appears twice; keep the orientation with the
        // smaller second city.
        if perm[0] > perm[perm.len() - 1] {
            return;
        }
        let mut order = Vec::with_capacity(n);
        order.push(0);
        order.extend_from_slice(perm);
        let len = inst.length(&order);
        if best.as_ref().is_none_or(|(b, _)| len < b - EPS) {
            best = Some((len, order));
        }
    });
    let (_, order) = best.expect("n >= 3 yields at least one tour");
    Ok(inst.tour(&order))
}

/// Visits permutations of `items[k..]` in lexicographic order.
fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items[k..=i].rotate_right(1);
        permute(items, k + 1, visit);
        items[k..=i].rotate_left(1);
    }
}

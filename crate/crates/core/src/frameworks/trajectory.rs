//! Multistage design: one decision per stage, rated like a composite system
//! whose parts are the stages.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::criteria::OrdinalScale;
use crate::morph::{pareto_indices, CompatEntry, QualityVector};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageDecision {
    pub id: String,
    pub priority: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub id: String,
    pub time: f64,
    pub decisions: Vec<StageDecision>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySpec {
    pub stages: Vec<Stage>,
    /// Compatibility between decisions of different stages.
    pub compat: Vec<CompatEntry>,
    #[serde(default = "OrdinalScale::compatibility")]
    pub compat_scale: OrdinalScale,
    #[serde(default = "three_levels")]
    pub priority_scale: OrdinalScale,
}

fn three_levels() -> OrdinalScale {
    OrdinalScale::priority(3).expect("valid scale")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectoryOptions {
    /// Rate every pair of stages instead of neighbors only.
    pub all_pairs: bool,
    pub max_combinations: u64,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        TrajectoryOptions {
            all_pairs: false,
            max_combinations: Limits::default().combinations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// One decision id per stage, in stage order.
    pub decisions: Vec<String>,
    pub quality: QualityVector,
}

impl TrajectorySpec {
    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::invalid("stages", "at least one stage required"));
        }
        let mut stage_of: BTreeMap<&str, usize> = BTreeMap::new();
        for (s, stage) in self.stages.iter().enumerate() {
            if self.stages[..s].iter().any(|x| x.id == stage.id) {
                return Err(Error::invalid(format!("stages[{s}].id"), format!("duplicate stage id `{}`", stage.id)));
            }
            if stage.decisions.is_empty() {
                return Err(Error::invalid(format!("stages[{s}].decisions"), "stage has no decisions"));
            }
            if !stage.time.is_finite() {
                return Err(Error::invalid(format!("stages[{s}].time"), "stage time must be finite"));
            }
            if s > 0 && stage.time < self.stages[s - 1].time {
                return Err(Error::invalid(format!("stages[{s}].time"), "stage times must not decrease"));
            }
            for (d, dec) in stage.decisions.iter().enumerate() {
                let at = format!("stages[{s}].decisions[{d}]");
                if stage_of.insert(&dec.id, s).is_some() {
                    return Err(Error::invalid(at, format!("duplicate decision id `{}`", dec.id)));
                }
                if !self.priority_scale.contains(dec.priority) {
                    return Err(Error::invalid(format!("{at}.priority"), format!("priority {} outside scale", dec.priority)));
                }
            }
        }
        for (i, e) in self.compat.iter().enumerate() {
            let at = format!("compat[{i}]");
            let (Some(a), Some(b)) = (stage_of.get(e.left.as_str()), stage_of.get(e.right.as_str())) else {
                return Err(Error::invalid(at, format!("unknown decision in `{}`-`{}`", e.left, e.right)));
            };
            if a == b {
                return Err(Error::invalid(at, "both decisions belong to the same stage"));
            }
            if !self.compat_scale.contains(e.value) {
                return Err(Error::invalid(format!("{at}.value"), format!("compatibility {} outside scale", e.value)));
            }
        }
        Ok(())
    }
}

/// Pareto-efficient trajectories.
///
/// Quality: `w` is the worst compatibility over consecutive stages (every
/// stage pair with `all_pairs`), counts are over decision priorities. Every
/// rated pair needs a table entry.
pub fn design_trajectory(spec: &TrajectorySpec, options: &TrajectoryOptions) -> Result<Vec<Trajectory>> {
    spec.validate()?;
    let stages = &spec.stages;
    let size = stages.iter().fold(1u128, |acc, s| acc.saturating_mul(s.decisions.len() as u128));
    if size > options.max_combinations as u128 {
        return Err(Error::GuardExceeded {
            what: "trajectory combinations",
            size,
            limit: options.max_combinations,
        });
    }

    let mut table: BTreeMap<(&str, &str), i64> = BTreeMap::new();
    for e in &spec.compat {
        table.insert((&e.left, &e.right), e.value);
        table.insert((&e.right, &e.left), e.value);
    }
    let rated: Vec<(usize, usize)> = (0..stages.len())
        .flat_map(|a| (a + 1..stages.len()).map(move |b| (a, b)))
        .filter(|(a, b)| options.all_pairs || b - a == 1)
        .collect();
    // compat[r][i][j] for rated stage pair r.
    let mut compat = Vec::with_capacity(rated.len());
    for &(a, b) in &rated {
        let mut m = Vec::with_capacity(stages[a].decisions.len());
        for x in &stages[a].decisions {
            let mut row = Vec::with_capacity(stages[b].decisions.len());
            for y in &stages[b].decisions {
                let v = table.get(&(x.id.as_str(), y.id.as_str())).copied().ok_or_else(|| {
                    Error::invalid("compat", format!("missing compatibility for `{}`-`{}`", x.id, y.id))
                })?;
                row.push(v);
            }
            m.push(row);
        }
        compat.push(m);
    }

    let levels = spec.priority_scale.len();
    let mut combos = Vec::new();
    let mut qualities = Vec::new();
    let mut index = vec![0usize; stages.len()];
    'outer: loop {
        let w = rated
            .iter()
            .zip(&compat)
            .map(|(&(a, b), m)| m[index[a]][index[b]])
            .fold(spec.compat_scale.hi(), i64::min);
        let mut counts = vec![0u32; levels];
        for (s, &i) in index.iter().enumerate() {
            counts[(stages[s].decisions[i].priority - 1) as usize] += 1;
        }
        combos.push(index.clone());
        qualities.push(QualityVector::new(w, counts));
        for s in (0..stages.len()).rev() {
            index[s] += 1;
            if index[s] < stages[s].decisions.len() {
                continue 'outer;
            }
            index[s] = 0;
        }
        break;
    }

    let mut out: Vec<Trajectory> = pareto_indices(&qualities)
        .into_iter()
        .map(|k| Trajectory {
            decisions: combos[k]
                .iter()
                .enumerate()
                .map(|(s, &i)| stages[s].decisions[i].id.clone())
                .collect(),
            quality: qualities[k].clone(),
        })
        .collect();
    out.sort_by(|a, b| {
        let cum = |q: &QualityVector| {
            let mut acc = 0;
            q.counts.iter().map(|n| { acc += n; acc }).collect::<Vec<u32>>()
        };
        b.quality
            .w
            .cmp(&a.quality.w)
            .then_with(|| cum(&b.quality).cmp(&cum(&a.quality)))
            .then_with(|| a.decisions.cmp(&b.decisions))
    });
    Ok(out)
}

/// Whether `trajectory` names one distinct decision of every stage, in order.
pub fn covers_all_stages(spec: &TrajectorySpec, trajectory: &[String]) -> bool {
    trajectory.len() == spec.stages.len()
        && spec
            .stages
            .iter()
            .zip(trajectory)
            .all(|(s, d)| s.decisions.iter().any(|x| &x.id == d))
        && trajectory.iter().collect::<BTreeSet<_>>().len() == trajectory.len()
}

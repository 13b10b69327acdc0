//! Criteria frames, ordinal scales and the canonical vector dominance relation.
//!
//! Every solver works on *canonical* estimates: one value per criterion,
//! larger is better, rescaled into `[0, 1]` by [`normalize_estimates`].

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Comparison tolerance for real-valued scores.
pub const EPS: f64 = 1e-9;

/// One value per criterion of the governing [`CriteriaFrame`].
pub type EstimateVector = Vec<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleDirection {
    HighIsBest,
    LowIsBest,
}

/// Closed integer scale `[lo, hi]` for ordinal judgments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawScale")]
pub struct OrdinalScale {
    lo: i64,
    hi: i64,
    best: ScaleDirection,
}

#[derive(Deserialize)]
struct RawScale {
    lo: i64,
    hi: i64,
    best: ScaleDirection,
}

impl TryFrom<RawScale> for OrdinalScale {
    type Error = Error;

    fn try_from(raw: RawScale) -> Result<Self> {
        OrdinalScale::new(raw.lo, raw.hi, raw.best)
    }
}

impl OrdinalScale {
    pub fn new(lo: i64, hi: i64, best: ScaleDirection) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid("scale", format!("lo {lo} exceeds hi {hi}")));
        }
        Ok(OrdinalScale { lo, hi, best })
    }

    /// Compatibility scale `[0, 3]`, 3 best.
    pub fn compatibility() -> Self {
        OrdinalScale {
            lo: 0,
            hi: 3,
            best: ScaleDirection::HighIsBest,
        }
    }

    /// Priority scale `[1, levels]`, 1 best.
    pub fn priority(levels: i64) -> Result<Self> {
        OrdinalScale::new(1, levels, ScaleDirection::LowIsBest)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn best(&self) -> ScaleDirection {
        self.best
    }

    pub fn contains(&self, value: i64) -> bool {
        (self.lo..=self.hi).contains(&value)
    }

    /// Number of levels on the scale.
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Every value of the scale, ascending.
    pub fn values(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: String,
    pub direction: Direction,
    pub weight: f64,
}

impl Criterion {
    pub fn maximize(id: impl Into<String>, weight: f64) -> Self {
        Criterion {
            id: id.into(),
            direction: Direction::Maximize,
            weight,
        }
    }

    pub fn minimize(id: impl Into<String>, weight: f64) -> Self {
        Criterion {
            id: id.into(),
            direction: Direction::Minimize,
            weight,
        }
    }
}

/// Ordered, non-empty list of criteria whose weights sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFrame")]
pub struct CriteriaFrame {
    criteria: Vec<Criterion>,
}

#[derive(Deserialize)]
struct RawFrame {
    criteria: Vec<Criterion>,
}

impl TryFrom<RawFrame> for CriteriaFrame {
    type Error = Error;

    fn try_from(raw: RawFrame) -> Result<Self> {
        CriteriaFrame::new(raw.criteria)
    }
}

impl CriteriaFrame {
    /// Validates ids and normalizes weights to sum to one.
    pub fn new(mut criteria: Vec<Criterion>) -> Result<Self> {
        if criteria.is_empty() {
            return Err(Error::invalid("criteria", "at least one criterion required"));
        }
        for (i, c) in criteria.iter().enumerate() {
            if criteria[..i].iter().any(|p| p.id == c.id) {
                return Err(Error::invalid(
                    format!("criteria[{i}].id"),
                    format!("duplicate criterion id `{}`", c.id),
                ));
            }
            if !(c.weight.is_finite() && c.weight >= 0.0) {
                return Err(Error::invalid(
                    format!("criteria[{i}].weight"),
                    format!("weight must be finite and nonnegative, got {}", c.weight),
                ));
            }
        }
        let total: f64 = criteria.iter().map(|c| c.weight).sum();
        if total <= 0.0 {
            return Err(Error::invalid("criteria", "weights are all zero"));
        }
        // Already-normalized weights are kept bit-for-bit so frames round-trip.
        if (total - 1.0).abs() > 1e-12 {
            for c in &mut criteria {
                c.weight /= total;
            }
        }
        Ok(CriteriaFrame { criteria })
    }

    /// `n` maximized criteria `c1..cn` with equal weights.
    pub fn uniform(n: usize) -> Result<Self> {
        CriteriaFrame::new(
            (1..=n)
                .map(|i| Criterion::maximize(format!("c{i}"), 1.0))
                .collect(),
        )
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    pub fn len(&self) -> usize {
        self.criteria.len()
    }

    pub fn is_empty(&self) -> bool {
        self.criteria.is_empty()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.criteria.iter().map(|c| c.weight).collect()
    }

    /// Resolves optional caller weights against the frame: length-checked,
    /// nonnegative, not all zero, normalized to sum to one.
    pub fn resolve_weights(&self, weights: Option<&[f64]>) -> Result<Vec<f64>> {
        let Some(w) = weights else {
            return Ok(self.weights());
        };
        if w.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: w.len(),
            });
        }
        if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::invalid("weights", "weights must be finite and nonnegative"));
        }
        let total: f64 = w.iter().sum();
        if total <= 0.0 {
            return Err(Error::invalid("weights", "weights are all zero"));
        }
        Ok(w.iter().map(|x| x / total).collect())
    }

    /// Checks that a row has one finite value per criterion.
    pub fn check_row(&self, row: &[f64]) -> Result<()> {
        if row.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: row.len(),
            });
        }
        if let Some(k) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("[{k}]"), "estimate is not finite"));
        }
        Ok(())
    }
}

/// Per-criterion min-max rescaling into canonical form (larger is better,
/// every value in `[0, 1]`).
///
/// Minimize criteria are flipped so that 1 is best. A criterion that is
/// constant over all rows maps to 0.5.
pub fn normalize_estimates(frame: &CriteriaFrame, rows: &[EstimateVector]) -> Result<Vec<EstimateVector>> {
    if rows.is_empty() {
        return Err(Error::Empty("estimate rows"));
    }
    for (i, row) in rows.iter().enumerate() {
        frame
            .check_row(row)
            .map_err(|e| e.within(&format!("rows[{i}]")))?;
    }
    let mut out = vec![vec![0.0; frame.len()]; rows.len()];
    for (k, criterion) in frame.criteria().iter().enumerate() {
        let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r[k]), hi.max(r[k]))
        });
        let span = hi - lo;
        for (i, row) in rows.iter().enumerate() {
            out[i][k] = if span <= 0.0 {
                0.5
            } else {
                let t = ((row[k] - lo) / span).clamp(0.0, 1.0);
                match criterion.direction {
                    Direction::Maximize => t,
                    Direction::Minimize => 1.0 - t,
                }
            };
        }
    }
    Ok(out)
}

/// Canonical Pareto dominance: `a >= b` componentwise with at least one
/// strict component.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        if x > y {
            strict = true;
        }
    }
    strict
}

/// Converts raw values into larger-is-better orientation without rescaling.
pub fn orient(frame: &CriteriaFrame, row: &[f64]) -> EstimateVector {
    row.iter()
        .zip(frame.criteria())
        .map(|(v, c)| match c.direction {
            Direction::Maximize => *v,
            Direction::Minimize => -*v,
        })
        .collect()
}

//! Hierarchical morphological synthesis.
//!
//! A system is a tree of parts. Each leaf part has design alternatives (DAs)
//! with ordinal priorities (1 is best); internal nodes carry sparse
//! compatibility tables between the DAs of their children on a `[0, 3]`
//! scale (3 is best). Composing a node picks one DA per child and rates the
//! result with the quality vector `N(S) = (w; n_1, ..., n_l)`: `w` is the
//! worst pairwise compatibility and `n_k` counts the chosen DAs at priority
//! `k`. Only Pareto-efficient composites under [`n_dominates`] are kept, and
//! they become the DAs of the node one level up.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::criteria::{CriteriaFrame, EstimateVector, OrdinalScale, ScaleDirection};
use crate::rank::{rank, Alternative, RankMethod, RankingInstance};
use crate::{Error, Limits, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignAlternative {
    pub id: String,
    pub priority: i64,
    /// Multicriteria estimates from which the priority can be derived.
    #[serde(default)]
    pub estimates: Option<EstimateVector>,
}

impl DesignAlternative {
    pub fn new(id: impl Into<String>, priority: i64) -> Self {
        DesignAlternative {
            id: id.into(),
            priority,
            estimates: None,
        }
    }
}

/// A part of the system. Leaves carry alternatives, internal nodes children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphNode {
    pub id: String,
    #[serde(default)]
    pub children: Vec<MorphNode>,
    #[serde(default)]
    pub alternatives: Vec<DesignAlternative>,
    /// Criteria for ranking the alternatives of a leaf.
    #[serde(default)]
    pub criteria: Option<CriteriaFrame>,
}

impl MorphNode {
    pub fn leaf(id: impl Into<String>, alternatives: Vec<DesignAlternative>) -> Self {
        MorphNode {
            id: id.into(),
            children: Vec::new(),
            alternatives,
            criteria: None,
        }
    }

    pub fn composite(id: impl Into<String>, children: Vec<MorphNode>) -> Self {
        MorphNode {
            id: id.into(),
            children,
            alternatives: Vec::new(),
            criteria: None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn find(&self, id: &str) -> Option<&MorphNode> {
        if self.id == id {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(id))
    }

    fn walk<'a>(&'a self, out: &mut Vec<&'a MorphNode>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }

    fn walk_mut(&mut self, f: &mut impl FnMut(&mut MorphNode) -> Result<()>) -> Result<()> {
        f(self)?;
        for c in &mut self.children {
            c.walk_mut(f)?;
        }
        Ok(())
    }
}

/// One sparse compatibility estimate between DAs of two different children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatEntry {
    pub left: String,
    pub right: String,
    pub value: i64,
}

impl CompatEntry {
    pub fn new(left: impl Into<String>, right: impl Into<String>, value: i64) -> Self {
        CompatEntry {
            left: left.into(),
            right: right.into(),
            value,
        }
    }
}

fn default_compat_scale() -> OrdinalScale {
    OrdinalScale::compatibility()
}

fn default_priority_scale() -> OrdinalScale {
    OrdinalScale::priority(3).expect("valid scale")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MorphSystem {
    pub root: MorphNode,
    /// Internal node id to the compatibility entries between its children's DAs.
    /// Omitted pairs count as fully compatible (scale maximum).
    #[serde(default)]
    pub compat: BTreeMap<String, Vec<CompatEntry>>,
    #[serde(default = "default_compat_scale")]
    pub compat_scale: OrdinalScale,
    #[serde(default = "default_priority_scale")]
    pub priority_scale: OrdinalScale,
}

impl MorphSystem {
    pub fn new(root: MorphNode, compat: BTreeMap<String, Vec<CompatEntry>>) -> Result<Self> {
        let system = MorphSystem {
            root,
            compat,
            compat_scale: default_compat_scale(),
            priority_scale: default_priority_scale(),
        };
        system.validate()?;
        Ok(system)
    }

    pub fn node(&self, id: &str) -> Result<&MorphNode> {
        self.root.find(id).ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.compat_scale.best() != ScaleDirection::HighIsBest {
            return Err(Error::invalid("compat_scale", "compatibility scale must be `high_is_best`"));
        }
        if self.priority_scale.best() != ScaleDirection::LowIsBest || self.priority_scale.lo() != 1 {
            return Err(Error::invalid("priority_scale", "priority scale must be `low_is_best` starting at 1"));
        }
        let mut nodes = Vec::new();
        self.root.walk(&mut nodes);
        let mut node_ids = BTreeSet::new();
        let mut da_owner: HashMap<&str, &str> = HashMap::new();
        for node in &nodes {
            if !node_ids.insert(node.id.as_str()) {
                return Err(Error::invalid(format!("node `{}`", node.id), "duplicate node id"));
            }
            if node.is_leaf() {
                if node.alternatives.is_empty() {
                    return Err(Error::invalid(format!("node `{}`", node.id), "leaf has no design alternatives"));
                }
            } else if !node.alternatives.is_empty() {
                return Err(Error::invalid(
                    format!("node `{}`", node.id),
                    "internal node must not list design alternatives",
                ));
            }
            for (i, da) in node.alternatives.iter().enumerate() {
                let at = format!("node `{}`.alternatives[{i}]", node.id);
                if da_owner.insert(da.id.as_str(), node.id.as_str()).is_some() {
                    return Err(Error::invalid(at, format!("duplicate design alternative id `{}`", da.id)));
                }
                if !self.priority_scale.contains(da.priority) {
                    return Err(Error::invalid(
                        format!("{at}.priority"),
                        format!("priority {} outside [1, {}]", da.priority, self.priority_scale.hi()),
                    ));
                }
                if let (Some(frame), Some(est)) = (&node.criteria, &da.estimates) {
                    frame.check_row(est).map_err(|e| match e {
                        Error::LengthMismatch { expected, found } => {
                            Error::invalid(format!("{at}.estimates"), format!("expected {expected} values, found {found}"))
                        }
                        e => e.within(&format!("{at}.estimates")),
                    })?;
                }
            }
        }
        for (node_id, entries) in &self.compat {
            let node = self
                .root
                .find(node_id)
                .ok_or_else(|| Error::invalid(format!("compat.{node_id}"), "no such node"))?;
            if node.is_leaf() {
                return Err(Error::invalid(format!("compat.{node_id}"), "leaf nodes carry no compatibility table"));
            }
            // DA id -> child index, for leaf children; composite children are
            // only known after synthesis.
            let mut child_of: HashMap<&str, usize> = HashMap::new();
            for (c, child) in node.children.iter().enumerate() {
                for da in &child.alternatives {
                    child_of.insert(da.id.as_str(), c);
                }
            }
            let open = node.children.iter().any(|c| !c.is_leaf());
            let mut seen: HashMap<(&str, &str), i64> = HashMap::new();
            for (i, e) in entries.iter().enumerate() {
                let at = format!("compat.{node_id}[{i}]");
                if !self.compat_scale.contains(e.value) {
                    return Err(Error::invalid(
                        format!("{at}.value"),
                        format!("compatibility {} outside [{}, {}]", e.value, self.compat_scale.lo(), self.compat_scale.hi()),
                    ));
                }
                match (child_of.get(e.left.as_str()), child_of.get(e.right.as_str())) {
                    (Some(a), Some(b)) if a == b => {
                        return Err(Error::invalid(at, format!("`{}` and `{}` belong to the same part", e.left, e.right)));
                    }
                    (Some(_), Some(_)) => {}
                    (l, _) if !open => {
                        let missing = if l.is_none() { &e.left } else { &e.right };
                        return Err(Error::invalid(at, format!("unknown design alternative `{missing}`")));
                    }
                    _ => {}
                }
                let key = if e.left <= e.right {
                    (e.left.as_str(), e.right.as_str())
                } else {
                    (e.right.as_str(), e.left.as_str())
                };
                if let Some(prev) = seen.insert(key, e.value) {
                    if prev != e.value {
                        return Err(Error::invalid(at, format!("conflicting entries for `{}`-`{}`", e.left, e.right)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Compatibility lookup for one node; absent pairs read as the scale maximum.
    fn table(&self, node_id: &str) -> CompatTable<'_> {
        let mut map = HashMap::new();
        if let Some(entries) = self.compat.get(node_id) {
            for e in entries {
                map.insert((e.left.as_str(), e.right.as_str()), e.value);
                map.insert((e.right.as_str(), e.left.as_str()), e.value);
            }
        }
        CompatTable {
            map,
            default: self.compat_scale.hi(),
        }
    }
}

struct CompatTable<'a> {
    map: HashMap<(&'a str, &'a str), i64>,
    default: i64,
}

impl CompatTable<'_> {
    fn get(&self, a: &str, b: &str) -> i64 {
        self.map.get(&(a, b)).copied().unwrap_or(self.default)
    }
}

/// `N(S) = (w; n_1, ..., n_l)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QualityVector {
    pub w: i64,
    pub counts: Vec<u32>,
}

impl QualityVector {
    pub fn new(w: i64, counts: Vec<u32>) -> Self {
        QualityVector { w, counts }
    }

    /// Number of parts.
    pub fn m(&self) -> u32 {
        self.counts.iter().sum()
    }

    fn cumulative(&self, len: usize) -> Vec<u32> {
        let mut acc = 0;
        (0..len)
            .map(|k| {
                acc += self.counts.get(k).copied().unwrap_or(0);
                acc
            })
            .collect()
    }
}

impl fmt::Display for QualityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.w)?;
        for (i, n) in self.counts.iter().enumerate() {
            write!(f, "{}{n}", if i == 0 { " " } else { ", " })?;
        }
        write!(f, ")")
    }
}

/// Parses `(w; n1, n2, ...)`; whitespace is optional.
impl std::str::FromStr for QualityVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid("quality", format!("expected `(w; n1, n2, ...)`, got `{s}`"));
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (w, counts) = inner.split_once(';').ok_or_else(bad)?;
        let w = w.trim().parse().map_err(|_| bad())?;
        let counts = counts
            .split(',')
            .map(|n| n.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Ok(QualityVector { w, counts })
    }
}

/// Dominance in the discrete quality space.
///
/// `a` dominates `b` when `a.w >= b.w` and every prefix sum of `a.counts` is
/// at least the corresponding prefix sum of `b.counts` (mass shifted toward
/// better priorities), with at least one strict inequality.
pub fn n_dominates(a: &QualityVector, b: &QualityVector) -> Result<bool> {
    if a.m() != b.m() {
        return Err(Error::invalid(
            "quality",
            format!("part counts differ ({} vs {})", a.m(), b.m()),
        ));
    }
    Ok(n_dominates_unchecked(a, b))
}

fn n_dominates_unchecked(a: &QualityVector, b: &QualityVector) -> bool {
    if a.w < b.w {
        return false;
    }
    let len = a.counts.len().max(b.counts.len());
    let (ca, cb) = (a.cumulative(len), b.cumulative(len));
    let mut strict = a.w > b.w;
    for (x, y) in ca.iter().zip(&cb) {
        if x < y {
            return false;
        }
        strict |= x > y;
    }
    strict
}

/// Canonical order: larger `w` first, then larger prefix sums, lexicographically.
fn quality_order(a: &QualityVector, b: &QualityVector) -> Ordering {
    let len = a.counts.len().max(b.counts.len());
    b.w.cmp(&a.w).then_with(|| b.cumulative(len).cmp(&a.cumulative(len)))
}

/// Indices of the non-dominated qualities, in input order.
pub(crate) fn pareto_indices(qualities: &[QualityVector]) -> Vec<usize> {
    let distinct: BTreeSet<&QualityVector> = qualities.iter().collect::<BTreeSet<_>>();
    let distinct: Vec<&QualityVector> = distinct.into_iter().collect();
    let efficient: BTreeSet<&QualityVector> = distinct
        .iter()
        .filter(|q| !distinct.iter().any(|o| n_dominates_unchecked(o, q)))
        .copied()
        .collect();
    (0..qualities.len()).filter(|i| efficient.contains(&qualities[*i])).collect()
}

impl PartialOrd for QualityVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QualityVector {
    /// Total order used for deduplication only; see [`n_dominates`] for dominance.
    fn cmp(&self, other: &Self) -> Ordering {
        self.w.cmp(&other.w).then_with(|| self.counts.cmp(&other.counts))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Choice {
    pub part: String,
    pub alternative: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeDecision {
    /// Chosen DA ids joined by `*` in child order.
    pub id: String,
    pub selection: Vec<Choice>,
    pub quality: QualityVector,
}

impl CompositeDecision {
    pub fn alternative(&self, part: &str) -> Option<&str> {
        self.selection.iter().find(|c| c.part == part).map(|c| c.alternative.as_str())
    }

    pub fn alternatives(&self) -> Vec<&str> {
        self.selection.iter().map(|c| c.alternative.as_str()).collect()
    }
}

/// Joins DA ids with `*`, parenthesizing ids that are themselves composites.
pub fn composite_id<'a>(ids: impl IntoIterator<Item = &'a str>) -> String {
    ids.into_iter()
        .map(|id| if id.contains('*') { format!("({id})") } else { id.to_string() })
        .collect::<Vec<_>>()
        .join("*")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComposeOptions {
    /// Keep composites containing a pair with compatibility 0.
    pub allow_zero_w: bool,
    pub max_combinations: u64,
}

impl Default for ComposeOptions {
    fn default() -> Self {
        ComposeOptions {
            allow_zero_w: false,
            max_combinations: Limits::default().combinations,
        }
    }
}

impl ComposeOptions {
    pub fn with_limits(limits: &Limits) -> Self {
        ComposeOptions {
            max_combinations: limits.combinations,
            ..Default::default()
        }
    }
}

fn check_priority(system: &MorphSystem, da: &DesignAlternative) -> Result<usize> {
    if !system.priority_scale.contains(da.priority) {
        return Err(Error::invalid(
            format!("alternative `{}`", da.id),
            format!("priority {} outside [1, {}]", da.priority, system.priority_scale.hi()),
        ));
    }
    Ok((da.priority - 1) as usize)
}

/// Quality of one composite of `node`; `chosen` lists one DA per child, in
/// child order.
pub fn quality_vector(system: &MorphSystem, node_id: &str, chosen: &[DesignAlternative]) -> Result<QualityVector> {
    let node = system.node(node_id)?;
    if chosen.len() != node.children.len() {
        return Err(Error::invalid(
            "selection",
            format!("node `{node_id}` has {} parts, selection covers {}", node.children.len(), chosen.len()),
        ));
    }
    let table = system.table(node_id);
    let mut counts = vec![0u32; system.priority_scale.len()];
    for da in chosen {
        counts[check_priority(system, da)?] += 1;
    }
    let mut w = system.compat_scale.hi();
    for a in 0..chosen.len() {
        for b in a + 1..chosen.len() {
            w = w.min(table.get(&chosen[a].id, &chosen[b].id));
        }
    }
    Ok(QualityVector { w, counts })
}

/// Pareto-efficient composites of one node.
///
/// `child_sets[c]` holds the candidate DAs of child `c`. The Cartesian
/// product is enumerated; composites with a zero-compatibility pair are
/// dropped unless `allow_zero_w`. The result is ordered by descending `w`,
/// then descending prefix sums of the counts, then selection ids.
pub fn compose_node(
    system: &MorphSystem,
    node_id: &str,
    child_sets: &[Vec<DesignAlternative>],
    options: &ComposeOptions,
) -> Result<Vec<CompositeDecision>> {
    let node = system.node(node_id)?;
    if child_sets.len() != node.children.len() {
        return Err(Error::invalid(
            format!("node `{node_id}`"),
            format!("{} parts but {} candidate sets", node.children.len(), child_sets.len()),
        ));
    }
    if child_sets.is_empty() {
        return Err(Error::invalid(format!("node `{node_id}`"), "node has no parts"));
    }
    for (c, set) in child_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::invalid(
                format!("node `{node_id}`.children[{c}]"),
                format!("part `{}` has no design alternatives", node.children[c].id),
            ));
        }
    }
    let size = child_sets.iter().fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128));
    if size > options.max_combinations as u128 {
        return Err(Error::GuardExceeded {
            what: "morphological combinations",
            size,
            limit: options.max_combinations,
        });
    }

    let table = system.table(node_id);
    let levels = system.priority_scale.len();
    let prio: Vec<Vec<usize>> = child_sets
        .iter()
        .map(|set| set.iter().map(|da| check_priority(system, da)).collect())
        .collect::<Result<_>>()?;
    let parts = child_sets.len();
    // compat[a][b][i][j] for child pairs a < b.
    let compat: Vec<Vec<Vec<Vec<i64>>>> = (0..parts)
        .map(|a| {
            (0..parts)
                .map(|b| {
                    if b <= a {
                        return Vec::new();
                    }
                    child_sets[a]
                        .iter()
                        .map(|x| child_sets[b].iter().map(|y| table.get(&x.id, &y.id)).collect())
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut combos: Vec<Vec<usize>> = Vec::new();
    let mut qualities: Vec<QualityVector> = Vec::new();
    let mut index = vec![0usize; parts];
    'outer: loop {
        let mut w = system.compat_scale.hi();
        for a in 0..parts {
            for b in a + 1..parts {
                w = w.min(compat[a][b][index[a]][index[b]]);
            }
        }
        if w > 0 || options.allow_zero_w {
            let mut counts = vec![0u32; levels];
            for (c, &i) in index.iter().enumerate() {
                counts[prio[c][i]] += 1;
            }
            combos.push(index.clone());
            qualities.push(QualityVector { w, counts });
        }
        for c in (0..parts).rev() {
            index[c] += 1;
            if index[c] < child_sets[c].len() {
                continue 'outer;
            }
            index[c] = 0;
        }
        break;
    }

    let mut out: Vec<CompositeDecision> = pareto_indices(&qualities)
        .into_iter()
        .map(|k| {
            let combo = &combos[k];
            let selection: Vec<Choice> = combo
                .iter()
                .enumerate()
                .map(|(c, &i)| Choice {
                    part: node.children[c].id.clone(),
                    alternative: child_sets[c][i].id.clone(),
                })
                .collect();
            CompositeDecision {
                id: composite_id(selection.iter().map(|s| s.alternative.as_str())),
                selection,
                quality: qualities[k].clone(),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        quality_order(&a.quality, &b.quality).then_with(|| a.alternatives().cmp(&b.alternatives()))
    });
    Ok(out)
}

/// Priority of each decision: its Pareto layer under [`n_dominates`].
pub fn priorities_from_quality(decisions: &[CompositeDecision]) -> Result<Vec<u32>> {
    let qualities: Vec<QualityVector> = decisions.iter().map(|d| d.quality.clone()).collect();
    quality_layers(&qualities)
}

pub(crate) fn quality_layers(qualities: &[QualityVector]) -> Result<Vec<u32>> {
    let Some(first) = qualities.first() else {
        return Err(Error::Empty("decisions"));
    };
    if let Some(q) = qualities.iter().find(|q| q.m() != first.m()) {
        return Err(Error::invalid(
            "decisions",
            format!("mixed part counts ({} vs {})", first.m(), q.m()),
        ));
    }
    let mut layer = vec![0u32; qualities.len()];
    let mut current = 0;
    while layer.contains(&0) {
        current += 1;
        let remaining: Vec<usize> = (0..qualities.len()).filter(|i| layer[*i] == 0).collect();
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| n_dominates_unchecked(&qualities[j], &qualities[i])))
            .collect();
        for i in front {
            layer[i] = current;
        }
    }
    Ok(layer)
}

/// Pareto set of one internal node of a synthesis run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSynthesis {
    pub node: String,
    pub composites: Vec<CompositeDecision>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Synthesis {
    /// Internal nodes in bottom-up (post-)order; the root comes last.
    pub nodes: Vec<NodeSynthesis>,
}

impl Synthesis {
    pub fn root(&self) -> &[CompositeDecision] {
        self.nodes.last().map_or(&[], |n| &n.composites)
    }

    pub fn node(&self, id: &str) -> Option<&[CompositeDecision]> {
        self.nodes.iter().find(|n| n.node == id).map(|n| n.composites.as_slice())
    }
}

/// Bottom-up synthesis over the whole tree, keeping every node's Pareto set.
pub fn synthesize(system: &MorphSystem, options: &ComposeOptions) -> Result<Synthesis> {
    system.validate()?;
    if system.root.is_leaf() {
        return Err(Error::invalid(format!("node `{}`", system.root.id), "root must have parts"));
    }
    let mut nodes = Vec::new();
    synthesize_node(system, &system.root, options, &mut nodes)?;
    Ok(Synthesis { nodes })
}

/// Pareto-efficient composites of the root.
pub fn synthesize_tree(system: &MorphSystem, options: &ComposeOptions) -> Result<Vec<CompositeDecision>> {
    let mut synthesis = synthesize(system, options)?;
    Ok(synthesis.nodes.pop().map(|n| n.composites).unwrap_or_default())
}

fn synthesize_node(
    system: &MorphSystem,
    node: &MorphNode,
    options: &ComposeOptions,
    trace: &mut Vec<NodeSynthesis>,
) -> Result<Vec<DesignAlternative>> {
    if node.is_leaf() {
        return Ok(node.alternatives.clone());
    }
    let child_sets = node
        .children
        .iter()
        .map(|c| synthesize_node(system, c, options, trace))
        .collect::<Result<Vec<_>>>()?;
    let composites = compose_node(system, &node.id, &child_sets, options)?;
    let alternatives = if composites.is_empty() {
        Vec::new()
    } else {
        let hi = system.priority_scale.hi();
        priorities_from_quality(&composites)?
            .into_iter()
            .zip(&composites)
            .map(|(p, c)| DesignAlternative::new(c.id.clone(), (p as i64).min(hi)))
            .collect()
    };
    trace.push(NodeSynthesis {
        node: node.id.clone(),
        composites,
    });
    Ok(alternatives)
}

/// Replaces leaf DA priorities by ranking their estimates with `method`.
///
/// Applies to every leaf with a criteria frame whose DAs all carry
/// estimates. Rank levels deeper than the priority scale are clamped to its
/// worst level.
pub fn rank_leaf_priorities(system: &mut MorphSystem, method: RankMethod) -> Result<()> {
    let hi = system.priority_scale.hi();
    system.root.walk_mut(&mut |node| {
        let Some(frame) = node.criteria.clone() else {
            return Ok(());
        };
        if !node.is_leaf() || node.alternatives.iter().any(|da| da.estimates.is_none()) {
            return Ok(());
        }
        let inst = RankingInstance::new(
            frame,
            node.alternatives
                .iter()
                .map(|da| Alternative::new(da.id.clone(), da.estimates.clone().unwrap_or_default()))
                .collect(),
        )
        .map_err(|e| e.within(&format!("node `{}`", node.id)))?;
        let ranking = rank(&inst, method)?;
        for da in &mut node.alternatives {
            da.priority = (ranking.priorities[&da.id] as i64).min(hi);
        }
        Ok(())
    })?;
    system.validate()
}

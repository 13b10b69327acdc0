//! Agglomerative hierarchical clustering over a dissimilarity matrix.

use serde::{Deserialize, Serialize};

use crate::criteria::EPS;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissimilarityMatrix {
    pub ids: Vec<String>,
    pub d: Vec<Vec<f64>>,
}

impl DissimilarityMatrix {
    pub fn new(ids: Vec<String>, d: Vec<Vec<f64>>) -> Result<Self> {
        let m = DissimilarityMatrix { ids, d };
        m.validate()?;
        Ok(m)
    }

    /// Euclidean distances between feature vectors.
    pub fn from_points(ids: Vec<String>, points: &[Vec<f64>]) -> Result<Self> {
        if ids.len() != points.len() {
            return Err(Error::LengthMismatch {
                expected: ids.len(),
                found: points.len(),
            });
        }
        let d = points
            .iter()
            .map(|a| {
                points
                    .iter()
                    .map(|b| a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt())
                    .collect()
            })
            .collect();
        DissimilarityMatrix::new(ids, d)
    }

    pub fn validate(&self) -> Result<()> {
        validate_square(&self.ids, &self.d, "d")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Square, symmetric, nonnegative, zero diagonal, unique ids.
pub(crate) fn validate_square(ids: &[String], d: &[Vec<f64>], name: &str) -> Result<()> {
    let n = ids.len();
    for (i, id) in ids.iter().enumerate() {
        if ids[..i].contains(id) {
            return Err(Error::invalid(format!("ids[{i}]"), format!("duplicate id `{id}`")));
        }
    }
    if d.len() != n {
        return Err(Error::invalid(name, format!("expected {n} rows, found {}", d.len())));
    }
    for (i, row) in d.iter().enumerate() {
        if row.len() != n {
            return Err(Error::invalid(
                format!("{name}[{i}]"),
                format!("expected {n} columns, found {}", row.len()),
            ));
        }
        for (j, v) in row.iter().enumerate() {
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::invalid(format!("{name}[{i}][{j}]"), "entry must be finite and nonnegative"));
            }
            if i == j && *v != 0.0 {
                return Err(Error::invalid(format!("{name}[{i}][{i}]"), "diagonal must be zero"));
            }
            if (v - d[j][i]).abs() > EPS {
                return Err(Error::invalid(
                    format!("{name}[{i}][{j}]"),
                    format!("matrix is not symmetric ({v} vs {})", d[j][i]),
                ));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    #[default]
    Single,
    Complete,
    Average,
}

/// One agglomeration step. Nodes `0..n` are leaves; merge `k` creates node `n + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: Vec<String>,
    pub merges: Vec<Merge>,
}

impl Dendrogram {
    /// Leaf ids under a node, sorted.
    pub fn members(&self, node: usize) -> Vec<String> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            if x < self.leaves.len() {
                out.push(self.leaves[x].clone());
            } else {
                let m = &self.merges[x - self.leaves.len()];
                stack.push(m.left);
                stack.push(m.right);
            }
        }
        out.sort();
        out
    }
}

fn linkage_distance(m: &DissimilarityMatrix, a: &[usize], b: &[usize], linkage: Linkage) -> f64 {
    let pairs = a.iter().flat_map(|&i| b.iter().map(move |&j| m.d[i][j]));
    match linkage {
        Linkage::Single => pairs.fold(f64::INFINITY, f64::min),
        Linkage::Complete => pairs.fold(f64::NEG_INFINITY, f64::max),
        Linkage::Average => pairs.sum::<f64>() / (a.len() * b.len()) as f64,
    }
}

/// Repeatedly merges the two active clusters at minimal linkage distance.
///
/// Equal distances (within [`EPS`]) are broken by the sorted member-id lists
/// of the two clusters, lexicographically; the smaller cluster key becomes
/// the left child.
pub fn build_dendrogram(m: &DissimilarityMatrix, linkage: Linkage) -> Result<Dendrogram> {
    m.validate()?;
    if m.is_empty() {
        return Err(Error::Empty("dissimilarity matrix"));
    }
    let n = m.len();
    // (node id, member indices, sorted member ids)
    let mut active: Vec<(usize, Vec<usize>, Vec<&str>)> =
        (0..n).map(|i| (i, vec![i], vec![m.ids[i].as_str()])).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    while active.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..active.len() {
            for b in a + 1..active.len() {
                let (x, y) = if active[a].2 <= active[b].2 { (a, b) } else { (b, a) };
                let dist = linkage_distance(m, &active[x].1, &active[y].1, linkage);
                let take = match best {
                    None => true,
                    Some((bd, bx, by)) => {
                        dist < bd - EPS
                            || (dist <= bd + EPS
                                && (&active[x].2, &active[y].2) < (&active[bx].2, &active[by].2))
                    }
                };
                if take {
                    best = Some((dist, x, y));
                }
            }
        }
        let (height, x, y) = best.expect("at least two active clusters");
        let node = n + merges.len();
        merges.push(Merge {
            left: active[x].0,
            right: active[y].0,
            height,
        });
        let (hi, lo) = if x > y { (x, y) } else { (y, x) };
        let (_, right_members, right_ids) = active.swap_remove(hi);
        let (_, mut members, mut ids) = active.swap_remove(lo);
        members.extend(right_members);
        ids.extend(right_ids);
        ids.sort();
        active.push((node, members, ids));
    }
    Ok(Dendrogram {
        leaves: m.ids.clone(),
        merges,
    })
}

/// Undoes the last `k - 1` merges: exactly `k` blocks covering every leaf.
///
/// Blocks are sorted internally and ordered by their first member.
pub fn cut_dendrogram(dend: &Dendrogram, k: usize) -> Result<Vec<Vec<String>>> {
    let n = dend.leaves.len();
    if k == 0 || k > n {
        return Err(Error::invalid("k", format!("cluster count must lie in [1, {n}], got {k}")));
    }
    if dend.merges.len() + 1 != n {
        return Err(Error::invalid(
            "merges",
            format!("{n} leaves need {} merges, found {}", n - 1, dend.merges.len()),
        ));
    }
    let mut blocks: Vec<usize> = (0..n).collect();
    for (step, m) in dend.merges[..n - k].iter().enumerate() {
        blocks.retain(|b| *b != m.left && *b != m.right);
        blocks.push(n + step);
    }
    let mut out: Vec<Vec<String>> = blocks.iter().map(|b| dend.members(*b)).collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn three() -> DissimilarityMatrix {
        DissimilarityMatrix::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 4.0], vec![5.0, 4.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn single_point() {
        let m = DissimilarityMatrix::new(vec!["a".into()], vec![vec![0.0]]).unwrap();
        let d = build_dendrogram(&m, Linkage::Single).unwrap();
        assert!(d.merges.is_empty());
        assert_eq!(cut_dendrogram(&d, 1).unwrap(), vec![vec!["a".to_string()]]);
    }

    #[test]
    fn three_points_single_and_complete() {
        let d = build_dendrogram(&three(), Linkage::Single).unwrap();
        assert_eq!(
            d.merges,
            vec![
                Merge { left: 0, right: 1, height: 1.0 },
                Merge { left: 3, right: 2, height: 4.0 }
            ]
        );
        let d = build_dendrogram(&three(), Linkage::Complete).unwrap();
        assert_eq!(d.merges[1].height, 5.0);
        let d = build_dendrogram(&three(), Linkage::Average).unwrap();
        assert_eq!(d.merges[1].height, 4.5);
    }

    #[test]
    fn cuts() {
        let d = build_dendrogram(&three(), Linkage::Single).unwrap();
        assert_eq!(cut_dendrogram(&d, 1).unwrap(), vec![vec!["1", "2", "3"]]);
        assert_eq!(cut_dendrogram(&d, 2).unwrap(), vec![vec!["1", "2"], vec!["3"]]);
        assert_eq!(cut_dendrogram(&d, 3).unwrap(), vec![vec!["1"], vec!["2"], vec!["3"]]);
        assert!(cut_dendrogram(&d, 0).is_err());
        assert!(cut_dendrogram(&d, 4).is_err());
    }

    #[test]
    fn rejects_bad_matrices() {
        let ids = vec!["a".to_string(), "b".to_string()];
        let asym = DissimilarityMatrix::new(ids.clone(), vec![vec![0.0, 1.0], vec![2.0, 0.0]]);
        assert!(asym.unwrap_err().to_string().contains("not symmetric"));
        let neg = DissimilarityMatrix::new(ids.clone(), vec![vec![0.0, -1.0], vec![-1.0, 0.0]]);
        assert!(neg.is_err());
        let diag = DissimilarityMatrix::new(ids, vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
        assert!(diag.is_err());
    }

    #[test]
    fn ties_break_by_member_ids() {
        let m = DissimilarityMatrix::new(
            vec!["c".into(), "a".into(), "b".into()],
            vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]],
        )
        .unwrap();
        let d = build_dendrogram(&m, Linkage::Single).unwrap();
        assert_eq!((d.merges[0].left, d.merges[0].right), (1, 2));
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DissimilarityMatrix {
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = rng.gen_range(1..50) as f64;
                d[i][j] = v;
                d[j][i] = v;
            }
        }
        DissimilarityMatrix::new((0..n).map(|i| format!("p{i}")).collect(), d).unwrap()
    }

    #[test]
    fn monotone_heights_and_partitions() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let n = rng.gen_range(1..=9);
            let m = random_matrix(&mut rng, n);
            for linkage in [Linkage::Single, Linkage::Complete, Linkage::Average] {
                let d = build_dendrogram(&m, linkage).unwrap();
                assert_eq!(d.merges.len(), n - 1);
                assert!(d.merges.windows(2).all(|w| w[0].height <= w[1].height + EPS));
                for k in 1..=n {
                    let blocks = cut_dendrogram(&d, k).unwrap();
                    assert_eq!(blocks.len(), k);
                    let mut all: Vec<String> = blocks.concat();
                    all.sort();
                    let mut ids = m.ids.clone();
                    ids.sort();
                    assert_eq!(all, ids);
                }
            }
        }
    }

    #[test]
    fn relabeling_keeps_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 7);
            let relabeled = DissimilarityMatrix::new(m.ids.iter().map(|s| format!("q{s}")).collect(), m.d.clone()).unwrap();
            let a = build_dendrogram(&m, Linkage::Average).unwrap();
            let b = build_dendrogram(&relabeled, Linkage::Average).unwrap();
            assert_eq!(a.merges, b.merges);
        }
    }
}

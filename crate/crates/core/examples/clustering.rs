//! Agglomerative clustering of points with three linkages.

use hmmd_kit::cluster::{build_dendrogram, cut_dendrogram, DissimilarityMatrix, Linkage};

fn main() -> hmmd_kit::Result<()> {
    let points = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [6.0, 5.0], [7.0, 5.0], [6.0, 6.0], [0.0, 9.0], [1.0, 10.0]];
    let ids = (1..=points.len()).map(|i| format!("e{i}")).collect();
    let rows: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
    let m = DissimilarityMatrix::from_points(ids, &rows)?;

    for linkage in [Linkage::Single, Linkage::Complete, Linkage::Average] {
        let dend = build_dendrogram(&m, linkage)?;
        let heights: Vec<String> = dend.merges.iter().map(|x| format!("{:.2}", x.height)).collect();
        println!("{linkage:?}: heights [{}]", heights.join(", "));
        println!("  k = 3: {:?}", cut_dendrogram(&dend, 3)?);
    }
    Ok(())
}

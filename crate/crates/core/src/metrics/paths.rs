use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `2m / (n(n-1))`.
pub fn density(graph: &Graph) -> Result<f64> {
    density_from_counts(graph.n(), graph.m())
}

pub fn density_from_counts(n: usize, m: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("density needs n >= 2, got {n}")));
    }
    Ok(2.0 * m as f64 / (n as f64 * (n as f64 - 1.0)))
}

/// Median over vertices of the mean hop distance to every other vertex.
///
/// With an even number of vertices the two middle values are averaged.
pub fn characteristic_path_length(graph: &Graph) -> Result<f64> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::Domain(format!("path length needs n >= 2, got {n}")));
    }
    let means = (0..n)
        .into_par_iter()
        .map(|v| {
            let dist = graph.bfs_distances(v);
            let mut total: u64 = 0;
            for d in dist {
                total += u64::from(d.ok_or_else(|| {
                    Error::Domain("characteristic path length of a disconnected graph".into())
                })?);
            }
            Ok(total as f64 / (n - 1) as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(median(means))
}

pub(crate) fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

/// Treatment of vertices with fewer than two neighbors, whose
/// neighborhood density is undefined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LowDegreePolicy {
    /// Leave them out of the mean.
    #[default]
    Exclude,
    /// Count them as 0.
    Zero,
}

/// Density of each vertex's neighborhood; `None` below degree 2.
pub fn local_clustering(graph: &Graph) -> Vec<Option<f64>> {
    (0..graph.n())
        .map(|v| {
            let nbrs = graph.neighbors(v);
            let k = nbrs.len();
            if k < 2 {
                return None;
            }
            let mut links = 0usize;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if graph.has_edge(a, b) {
                        links += 1;
                    }
                }
            }
            Some(2.0 * links as f64 / (k * (k - 1)) as f64)
        })
        .collect()
}

/// Mean neighborhood density.
pub fn clustering_coefficient(graph: &Graph, policy: LowDegreePolicy) -> Result<f64> {
    if graph.n() == 0 {
        return Err(Error::Domain("clustering of an empty graph".into()));
    }
    let local = local_clustering(graph);
    let values: Vec<f64> = match policy {
        LowDegreePolicy::Exclude => local.into_iter().flatten().collect(),
        LowDegreePolicy::Zero => local.into_iter().map(|c| c.unwrap_or(0.0)).collect(),
    };
    if values.is_empty() {
        return Err(Error::Domain(
            "clustering undefined: no vertex has degree >= 2".into(),
        ));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

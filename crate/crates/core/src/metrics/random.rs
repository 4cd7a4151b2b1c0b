//! Erdős–Rényi G(n, m) sampling and the random-graph baseline.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::paths::{characteristic_path_length, clustering_coefficient, LowDegreePolicy};
use crate::error::{Error, Result};
use crate::graph::{greatest_component, Graph};
use crate::seed;

/// A graph drawn uniformly among simple graphs with `n` vertices and `m` edges.
///
/// Deterministic for a given seed on every platform (ChaCha8 stream, 64-bit draws).
pub fn sample_gnm(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let max = n * n.saturating_sub(1) / 2;
    if m > max {
        return Err(Error::Domain(format!(
            "G({n}, {m}) impossible: at most {max} edges"
        )));
    }
    let mut rng = seed::rng(seed);
    // Dense requests draw the complement instead.
    let complement = m > max / 2;
    let wanted = if complement { max - m } else { m };
    let mut chosen = BTreeSet::new();
    while chosen.len() < wanted {
        let u = rng.gen_range(0..n as u64) as usize;
        let v = rng.gen_range(0..n as u64) as usize;
        if u != v {
            chosen.insert((u.min(v), u.max(v)));
        }
    }
    let edges: Vec<(usize, usize)> = if complement {
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|e| !chosen.contains(e))
            .collect()
    } else {
        chosen.into_iter().collect()
    };
    Graph::from_edges(n, &edges)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineStats {
    pub n: usize,
    pub m: usize,
    pub samples: usize,
    pub seed: u64,
    pub l_mean: f64,
    pub l_sd: f64,
    pub c_mean: f64,
    pub c_sd: f64,
}

/// Path length and clustering over `samples` independent G(n, m) draws.
///
/// Path length is taken on each sample's greatest component; clustering
/// excludes vertices of degree < 2. A sample whose greatest component is a
/// single vertex contributes L = 0, and one without any vertex of degree >= 2
/// contributes C = 0.
pub fn random_baseline(n: usize, m: usize, samples: usize, seed: u64) -> Result<BaselineStats> {
    if samples == 0 {
        return Err(Error::Domain("baseline needs at least one sample".into()));
    }
    let per_sample = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let g = sample_gnm(n, m, seed::sub_seed(seed, i))?;
            let core = greatest_component(&g)?;
            let l = if core.n() >= 2 {
                characteristic_path_length(&core)?
            } else {
                0.0
            };
            let c = clustering_coefficient(&g, LowDegreePolicy::Exclude).unwrap_or(0.0);
            Ok((l, c))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let (l_mean, l_sd) = mean_sd(per_sample.iter().map(|s| s.0));
    let (c_mean, c_sd) = mean_sd(per_sample.iter().map(|s| s.1));
    Ok(BaselineStats {
        n,
        m,
        samples,
        seed,
        l_mean,
        l_sd,
        c_mean,
        c_sd,
    })
}

/// Mean and sample standard deviation (0 for a single value).
fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let count = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / count;
    if count < 2.0 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
    (mean, var.sqrt())
}

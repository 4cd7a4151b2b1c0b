//! Seeded k-means with farthest-point initialization and restarts.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::seed;

const MAX_ITERATIONS: usize = 300;
/// Fresh initializations tried by one restart that ends with an empty cluster.
const MAX_RESEEDS: u64 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansOutcome {
    /// Cluster index per point, in `0..k`.
    pub labels: Vec<usize>,
    /// Within-cluster sum of squared distances.
    pub wcss: f64,
    /// Which restart produced this result.
    pub restart: usize,
}

/// Best of `restarts` k-means runs by within-cluster sum of squares; ties go
/// to the earlier restart, so the choice is independent of scheduling.
pub fn kmeans(points: &[Vec<f64>], k: usize, restarts: usize, seed: u64) -> Result<KMeansOutcome> {
    if k < 2 {
        return Err(Error::Domain(format!("k-means needs k >= 2, got {k}")));
    }
    if points.len() < k {
        return Err(Error::Domain(format!(
            "cannot form {k} clusters from {} points",
            points.len()
        )));
    }
    let restarts = restarts.max(1);
    let runs: Vec<Option<KMeansOutcome>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            (0..MAX_RESEEDS).find_map(|attempt| {
                let mut rng = seed::rng(seed::sub_seed(seed::sub_seed(seed, r as u64), attempt));
                let first = rng.gen_range(0..points.len() as u64) as usize;
                let centers = farthest_point_init(points, k, first);
                lloyd(points, centers).map(|(labels, wcss)| KMeansOutcome {
                    labels,
                    wcss,
                    restart: r,
                })
            })
        })
        .collect();
    runs.into_iter()
        .flatten()
        .min_by(|a, b| a.wcss.total_cmp(&b.wcss).then(a.restart.cmp(&b.restart)))
        .ok_or_else(|| {
            Error::Numerical(format!(
                "k-means left an empty cluster in every restart (k = {k})"
            ))
        })
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// `first`, then repeatedly the point farthest from all chosen centers
/// (smallest index on ties).
fn farthest_point_init(points: &[Vec<f64>], k: usize, first: usize) -> Vec<Vec<f64>> {
    let mut centers = vec![points[first].clone()];
    let mut nearest: Vec<f64> = points.iter().map(|p| sq_dist(p, &points[first])).collect();
    while centers.len() < k {
        let mut pick = 0;
        for i in 1..points.len() {
            if nearest[i] > nearest[pick] {
                pick = i;
            }
        }
        let c = points[pick].clone();
        for (i, p) in points.iter().enumerate() {
            nearest[i] = nearest[i].min(sq_dist(p, &c));
        }
        centers.push(c);
    }
    centers
}

/// Lloyd iterations until assignments stop changing. `None` if a cluster
/// ends up empty.
fn lloyd(points: &[Vec<f64>], mut centers: Vec<Vec<f64>>) -> Option<(Vec<usize>, f64)> {
    let k = centers.len();
    let dim = points[0].len();
    let mut labels = vec![usize::MAX; points.len()];
    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best = 0;
            let mut best_d = sq_dist(p, &centers[0]);
            for (c, center) in centers.iter().enumerate().skip(1) {
                let d = sq_dist(p, center);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l].iter_mut().zip(p) {
                *s += x;
            }
        }
        if counts.contains(&0) {
            return None;
        }
        for ((center, sum), &count) in centers.iter_mut().zip(sums).zip(&counts) {
            *center = sum.into_iter().map(|s| s / count as f64).collect();
        }
        if !changed {
            break;
        }
    }
    let wcss = points
        .iter()
        .zip(&labels)
        .map(|(p, &l)| sq_dist(p, &centers[l]))
        .sum();
    Some((labels, wcss))
}

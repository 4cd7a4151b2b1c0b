use serde::{Deserialize, Serialize};

use super::paths::{characteristic_path_length, clustering_coefficient, LowDegreePolicy};
use super::random::BaselineStats;
use crate::error::Result;
use crate::graph::Graph;

/// Cutoffs for calling a graph small-world against its random baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallWorldThresholds {
    /// Largest acceptable `L / L_random`.
    pub l_ratio_max: f64,
    /// Smallest acceptable `C / C_random`.
    pub c_ratio_min: f64,
}

impl Default for SmallWorldThresholds {
    fn default() -> Self {
        SmallWorldThresholds {
            l_ratio_max: 2.0,
            c_ratio_min: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallWorldVerdict {
    pub l_ratio: f64,
    /// `+inf` (serialized as `null`) when the baseline clustering is 0.
    pub c_ratio: f64,
    pub thresholds: SmallWorldThresholds,
    pub is_small_world: bool,
}

/// Verdict from already computed indices.
pub fn small_world_verdict(
    l: f64,
    c: f64,
    l_random: f64,
    c_random: f64,
    thresholds: SmallWorldThresholds,
) -> SmallWorldVerdict {
    let l_ratio = l / l_random;
    let (c_ratio, clustered) = if c_random == 0.0 {
        (f64::INFINITY, c > 0.0)
    } else {
        let r = c / c_random;
        (r, r >= thresholds.c_ratio_min)
    };
    SmallWorldVerdict {
        l_ratio,
        c_ratio,
        thresholds,
        is_small_world: l_ratio <= thresholds.l_ratio_max && clustered,
    }
}

/// Computes L and C of a connected `graph` and compares them to `baseline`.
pub fn small_world_report(
    graph: &Graph,
    baseline: &BaselineStats,
    policy: LowDegreePolicy,
    thresholds: SmallWorldThresholds,
) -> Result<SmallWorldVerdict> {
    let l = characteristic_path_length(graph)?;
    let c = clustering_coefficient(graph, policy)?;
    Ok(small_world_verdict(
        l,
        c,
        baseline.l_mean,
        baseline.c_mean,
        thresholds,
    ))
}

//! Structural indices of the reference network: density, characteristic
//! path length, clustering, degree distribution, betweenness, rich-club
//! test, and the G(n, m) random baseline.

mod betweenness;
mod degree;
mod paths;
mod random;
mod small_world;

pub use betweenness::{betweenness, betweenness_table, BetweennessRow, BetweennessScores};
pub use degree::{
    degree_distribution, rich_club_check, DegreeDistribution, DegreePoint, FitWindow, RichClub,
};
pub use paths::{
    characteristic_path_length, clustering_coefficient, density, density_from_counts,
    local_clustering, LowDegreePolicy,
};
pub use random::{random_baseline, sample_gnm, BaselineStats};
pub use small_world::{
    small_world_report, small_world_verdict, SmallWorldThresholds, SmallWorldVerdict,
};

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;

/// The indices of one graph, as reported side by side with its baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphIndices {
    pub n: usize,
    pub m: usize,
    pub density: f64,
    pub char_path_length: f64,
    pub clustering: f64,
}

impl GraphIndices {
    /// Requires a connected graph with at least two vertices.
    pub fn compute(graph: &Graph, policy: LowDegreePolicy) -> Result<GraphIndices> {
        Ok(GraphIndices {
            n: graph.n(),
            m: graph.m(),
            density: density(graph)?,
            char_path_length: characteristic_path_length(graph)?,
            clustering: clustering_coefficient(graph, policy)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    #[serde(flatten)]
    pub indices: GraphIndices,
    pub baseline: BaselineStats,
    pub small_world: SmallWorldVerdict,
    pub degree_distribution: DegreeDistribution,
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{top_by_degree, Graph};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreePoint {
    pub k: usize,
    pub count: usize,
    /// Fraction of vertices with degree >= k.
    pub cum_prob: f64,
}

/// Degree range `[k_min, k_max]` used for the log-log slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FitWindow {
    pub k_min: usize,
    /// `None` means up to the largest degree.
    pub k_max: Option<usize>,
}

impl Default for FitWindow {
    fn default() -> Self {
        FitWindow {
            k_min: 1,
            k_max: None,
        }
    }
}

/// Empirical cumulative degree distribution `P(deg >= k)`, one point per
/// integer k between the smallest and largest degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeDistribution {
    pub points: Vec<DegreePoint>,
    /// `(log10 k, log10 P(deg >= k))` for k >= 1.
    pub loglog_points: Vec<(f64, f64)>,
    pub fit_window: FitWindow,
    /// Least-squares slope of the log-log points inside the window; descriptive only.
    pub tail_slope: Option<f64>,
}

impl DegreeDistribution {
    /// CSV with header `k,count,cum_prob`, six significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,count,cum_prob\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{}\n",
                p.k,
                p.count,
                crate::export::sig6(p.cum_prob)
            ));
        }
        out
    }
}

pub fn degree_distribution(graph: &Graph, window: FitWindow) -> Result<DegreeDistribution> {
    let n = graph.n();
    if n == 0 {
        return Err(Error::Domain(
            "degree distribution of an empty graph".into(),
        ));
    }
    let degrees = graph.degrees();
    let min = *degrees.iter().min().unwrap();
    let max = *degrees.iter().max().unwrap();
    let mut counts = vec![0usize; max + 1];
    for d in degrees {
        counts[d] += 1;
    }
    let mut points = Vec::with_capacity(max - min + 1);
    let mut at_least = n;
    for (k, &count) in counts.iter().enumerate().skip(min) {
        points.push(DegreePoint {
            k,
            count,
            cum_prob: at_least as f64 / n as f64,
        });
        at_least -= count;
    }
    let loglog_points: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.k >= 1)
        .map(|p| ((p.k as f64).log10(), p.cum_prob.log10()))
        .collect();
    let k_max = window.k_max.unwrap_or(usize::MAX);
    let fit: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.k >= 1 && p.k >= window.k_min && p.k <= k_max)
        .map(|p| ((p.k as f64).log10(), p.cum_prob.log10()))
        .collect();
    Ok(DegreeDistribution {
        points,
        loglog_points,
        fit_window: window,
        tail_slope: least_squares_slope(&fit),
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RichClub {
    pub members: Vec<String>,
    pub internal_edges: usize,
    pub internal_density: f64,
    pub threshold: f64,
    pub is_rich_club: bool,
}

/// Whether the `k` highest-degree vertices are densely tied to each other.
pub fn rich_club_check(graph: &Graph, k: usize, threshold: f64) -> Result<RichClub> {
    if k < 2 || k > graph.n() {
        return Err(Error::Domain(format!(
            "rich-club size must be in 2..={}, got {k}",
            graph.n()
        )));
    }
    let members = top_by_degree(graph, k);
    let mut internal_edges = 0;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if graph.has_edge(a, b) {
                internal_edges += 1;
            }
        }
    }
    let internal_density = 2.0 * internal_edges as f64 / (k * (k - 1)) as f64;
    Ok(RichClub {
        members: members
            .iter()
            .map(|&v| graph.label(v).to_string())
            .collect(),
        internal_edges,
        internal_density,
        threshold,
        is_rich_club: internal_density >= threshold,
    })
}

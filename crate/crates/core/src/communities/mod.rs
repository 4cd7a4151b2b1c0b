//! Spectral community detection on the reference network.
//!
//! The highest-betweenness vertices are removed first so that groups they
//! bridge are not merged, the remainder is partitioned in the embedding of
//! the symmetric normalized Laplacian, and the removed vertices are then
//! reattached as annotations.

mod kmeans;
mod partition;
mod spectral;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use kmeans::{kmeans, KMeansOutcome};
pub use partition::{
    book_profile, community_graph_export, reinsert_centrals, remove_centrals, BookProfile,
    CentralAnnotation, Community, InterEdge, Partition, Removal, COLOR_THRESHOLD, NO_BOOK,
};
pub use spectral::{
    choose_k, laplacian_spectrum, normalized_laplacian, spectral_embedding, SpectralEmbedding,
    Spectrum, RESIDUAL_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::BetweennessScores;
use crate::seed;

/// Name of the Laplacian variant, echoed in reports.
pub const LAPLACIAN: &str = "symmetric-normalized";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KChoice {
    #[default]
    Auto,
    Fixed(usize),
}

impl fmt::Display for KChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KChoice::Auto => f.write_str("auto"),
            KChoice::Fixed(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for KChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<KChoice> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(KChoice::Auto);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 2 => Ok(KChoice::Fixed(k)),
            _ => Err(Error::Usage(format!(
                "k must be `auto` or an integer >= 2, got `{s}`"
            ))),
        }
    }
}

impl Serialize for KChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KChoice::Auto => s.serialize_str("auto"),
            KChoice::Fixed(k) => s.serialize_u64(*k as u64),
        }
    }
}

impl<'de> Deserialize<'de> for KChoice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<KChoice, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(k) => k.to_string().parse(),
            Raw::Word(w) => w.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    pub centrals_removed: usize,
    pub k: KChoice,
    pub eigengap_max_k: usize,
    pub kmeans_restarts: usize,
    pub seed: u64,
    /// Use citation multiplicities as Laplacian weights.
    pub weighted: bool,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            centrals_removed: 8,
            k: KChoice::Auto,
            eigengap_max_k: 40,
            kmeans_restarts: 10,
            seed: 0,
            weighted: false,
        }
    }
}

impl SpectralConfig {
    pub fn validate(&self) -> Result<()> {
        if let KChoice::Fixed(k) = self.k {
            if k < 2 {
                return Err(Error::Usage(format!("k must be >= 2, got {k}")));
            }
        }
        if self.eigengap_max_k < 2 {
            return Err(Error::Usage("eigengap_max_k must be >= 2".into()));
        }
        if self.kmeans_restarts == 0 {
            return Err(Error::Usage("kmeans_restarts must be >= 1".into()));
        }
        Ok(())
    }
}

/// Cluster labels for the rows of `embedding`.
pub fn cluster(
    embedding: &SpectralEmbedding,
    k: usize,
    config: &SpectralConfig,
) -> Result<Vec<usize>> {
    let rng_seed = seed::stage_seed(config.seed, seed::CLUSTERING);
    Ok(kmeans(&embedding.coordinates, k, config.kmeans_restarts, rng_seed)?.labels)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityDetection {
    pub config: SpectralConfig,
    pub laplacian: &'static str,
    /// Community count used by k-means on the non-isolated remainder.
    /// Zero when nothing was left to cluster.
    pub k: usize,
    /// Ascending spectrum of the non-isolated remainder.
    pub eigenvalues: Vec<f64>,
    pub max_residual: f64,
    pub partition: Partition,
}

/// Removal, spectral clustering, and reinsertion on `graph`.
pub fn detect_communities(
    graph: &Graph,
    scores: &BetweennessScores,
    config: &SpectralConfig,
) -> Result<CommunityDetection> {
    config.validate()?;
    let removal = remove_centrals(graph, scores, config.centrals_removed)?;
    let spectrum = laplacian_spectrum(&removal.reduced, config.weighted)?;
    let size = spectrum.vertices.len();
    let k = match config.k {
        KChoice::Fixed(k) if k > size => {
            return Err(Error::Domain(format!(
                "k = {k} exceeds the {size} non-isolated vertices left after removal"
            )))
        }
        KChoice::Fixed(k) => k,
        KChoice::Auto if size >= 3 => choose_k(&spectrum.eigenvalues, config.eigengap_max_k)?,
        KChoice::Auto => size.min(1),
    };
    let mut raw = vec![0; removal.reduced.n()];
    let mut max_residual = 0.0f64;
    if k >= 2 {
        let embedding = spectrum.embedding(k)?;
        max_residual = embedding.residuals.iter().copied().fold(0.0, f64::max);
        let labels = cluster(&embedding, k, config)?;
        for (&v, &l) in embedding.vertices.iter().zip(&labels) {
            raw[v] = l;
        }
    }
    for (i, &v) in spectrum.isolated.iter().enumerate() {
        raw[v] = k.max(1) + i;
    }
    let partition = reinsert_centrals(&raw, &removal, graph)?;
    Ok(CommunityDetection {
        config: config.clone(),
        laplacian: LAPLACIAN,
        k,
        eigenvalues: spectrum.eigenvalues,
        max_residual,
        partition,
    })
}

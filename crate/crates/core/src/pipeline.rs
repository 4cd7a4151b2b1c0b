//! End-to-end analysis: extraction, graph, metrics, baseline, communities.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::citations::{extract_all, ExtractionReport};
use crate::communities::{detect_communities, CommunityDetection, SpectralConfig};
use crate::corpus::{Corpus, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{
    build_graph, components, degree_table, greatest_component, isolated_census, DegreeRow, Graph,
    IsolatedCensus,
};
use crate::metrics::{
    betweenness, betweenness_table, degree_distribution, random_baseline, rich_club_check,
    small_world_verdict, BaselineStats, BetweennessRow, DegreeDistribution, FitWindow,
    GraphIndices, LowDegreePolicy, RichClub, SmallWorldThresholds, SmallWorldVerdict,
};
use crate::seed;

pub const TOOL_NAME: &str = "codexgraph";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_SCHEMA: &str = "codexgraph-report-v1";

/// Every parameter that can influence a reported number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    pub baseline_samples: usize,
    pub low_degree_policy: LowDegreePolicy,
    pub small_world: SmallWorldThresholds,
    pub fit_window: FitWindow,
    pub table_size: usize,
    pub rich_club_k: usize,
    pub rich_club_threshold: f64,
    /// Its `seed` field is overwritten by the pipeline seed.
    pub communities: SpectralConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            baseline_samples: 30,
            low_degree_policy: LowDegreePolicy::Exclude,
            small_world: SmallWorldThresholds::default(),
            fit_window: FitWindow::default(),
            table_size: 10,
            rich_club_k: 8,
            rich_club_threshold: 0.5,
            communities: SpectralConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.baseline_samples == 0 {
            return Err(Error::Usage("baseline_samples must be >= 1".into()));
        }
        if self.table_size == 0 {
            return Err(Error::Usage("table_size must be >= 1".into()));
        }
        if self.rich_club_k < 2 {
            return Err(Error::Usage("rich_club_k must be >= 2".into()));
        }
        self.communities.validate()
    }

    /// Hex SHA-256 of the canonical JSON of the effective configuration.
    pub fn hash(&self) -> String {
        hex_sha256(
            serde_json::to_string(&self.effective())
                .expect("config serializes")
                .as_bytes(),
        )
    }

    fn effective(&self) -> PipelineConfig {
        let mut c = self.clone();
        c.communities.seed = c.seed;
        c
    }
}

fn hex_sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Hex SHA-256 of the corpus in canonical form.
pub fn corpus_fingerprint(corpus: &Corpus) -> String {
    hex_sha256(
        serde_json::to_string(&corpus.to_value())
            .expect("corpus serializes")
            .as_bytes(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtractionCounts {
    pub resolved: usize,
    pub external_dropped: usize,
    pub unparsed: usize,
    pub self_refs: usize,
}

impl From<&ExtractionReport> for ExtractionCounts {
    fn from(r: &ExtractionReport) -> Self {
        ExtractionCounts {
            resolved: r.resolved.len(),
            external_dropped: r.external_dropped.len(),
            unparsed: r.unparsed.len(),
            self_refs: r.self_ref_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub isolated: IsolatedCensus,
    pub component_sizes: Vec<usize>,
}

/// Deterministic structure of the greatest component; no seed enters here.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsSection {
    #[serde(flatten)]
    pub indices: GraphIndices,
    pub degree_distribution: DegreeDistribution,
    pub degree_table: Vec<DegreeRow>,
    pub betweenness_table: Vec<BetweennessRow>,
    /// Absent when the component has fewer than `rich_club_k` vertices.
    pub rich_club: Option<RichClub>,
}

/// Published indices of the original network, for side-by-side reading.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceValues {
    pub n: usize,
    pub m: usize,
    pub density: f64,
    pub char_path_length: f64,
    pub clustering: f64,
    pub random_char_path_length: f64,
    pub random_clustering: f64,
}

pub const REFERENCE_VALUES: ReferenceValues = ReferenceValues {
    n: 980,
    m: 2186,
    density: 0.0046,
    char_path_length: 6.78,
    clustering: 0.49,
    random_char_path_length: 4.61,
    random_clustering: 0.0046,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub tool: Tool,
    pub config: PipelineConfig,
    pub config_hash: String,
    pub corpus_fingerprint: String,
    pub census: BTreeMap<NodeKind, usize>,
    pub extraction: ExtractionCounts,
    pub graph: GraphSummary,
    pub greatest_component: GraphSummary,
    pub status: String,
    pub metrics: Option<MetricsSection>,
    pub baseline: Option<BaselineStats>,
    pub small_world: Option<SmallWorldVerdict>,
    pub communities: Option<CommunityDetection>,
    pub reference_values: ReferenceValues,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn graph_summary(graph: &Graph, corpus: &Corpus) -> Result<GraphSummary> {
    Ok(GraphSummary {
        n: graph.n(),
        m: graph.m(),
        isolated: isolated_census(graph, corpus)?,
        component_sizes: components(graph).sizes,
    })
}

pub fn run_pipeline(corpus: &Corpus, config: &PipelineConfig) -> Result<AnalysisReport> {
    config.validate()?;
    let config = config.effective();

    let (refs, graph, core) = build_stage(corpus)?;
    let mut report = AnalysisReport {
        schema: REPORT_SCHEMA,
        tool: Tool {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        config_hash: config.hash(),
        corpus_fingerprint: corpus_fingerprint(corpus),
        census: corpus.census(),
        extraction: ExtractionCounts::from(&refs),
        graph: graph_summary(&graph, corpus).map_err(|e| e.in_stage("graph"))?,
        greatest_component: graph_summary(&core, corpus).map_err(|e| e.in_stage("graph"))?,
        status: "ok".into(),
        metrics: None,
        baseline: None,
        small_world: None,
        communities: None,
        reference_values: REFERENCE_VALUES,
        config,
    };
    let config = &report.config;
    if core.m() == 0 {
        report.status = format!(
            "degenerate: greatest component has {} vertex and no edge; metrics skipped",
            core.n()
        );
        return Ok(report);
    }

    let metrics = metrics_stage(&core, config)?;
    let (baseline, small_world) = baseline_stage(&core, &metrics.indices, config)?;
    let communities = communities_stage(&core, corpus, config)?;

    report.metrics = Some(metrics);
    report.baseline = Some(baseline);
    report.small_world = Some(small_world);
    report.communities = Some(communities);
    Ok(report)
}

/// Deterministic indices and tables of a connected graph.
pub fn metrics_stage(core: &Graph, config: &PipelineConfig) -> Result<MetricsSection> {
    (|| -> Result<MetricsSection> {
        let scores = betweenness(core);
        let k = config.table_size.min(core.n());
        Ok(MetricsSection {
            indices: GraphIndices::compute(core, config.low_degree_policy)?,
            degree_distribution: degree_distribution(core, config.fit_window)?,
            degree_table: degree_table(core, k)?,
            betweenness_table: betweenness_table(core, &scores, k)?,
            rich_club: if core.n() >= config.rich_club_k {
                Some(rich_club_check(
                    core,
                    config.rich_club_k,
                    config.rich_club_threshold,
                )?)
            } else {
                None
            },
        })
    })()
    .map_err(|e| e.in_stage("metrics"))
}

/// G(n, m) baseline matching `core` and the small-world verdict against it.
pub fn baseline_stage(
    core: &Graph,
    indices: &GraphIndices,
    config: &PipelineConfig,
) -> Result<(BaselineStats, SmallWorldVerdict)> {
    let baseline = random_baseline(
        core.n(),
        core.m(),
        config.baseline_samples,
        seed::stage_seed(config.seed, seed::BASELINE),
    )
    .map_err(|e| e.in_stage("baseline"))?;
    let verdict = small_world_verdict(
        indices.char_path_length,
        indices.clustering,
        baseline.l_mean,
        baseline.c_mean,
        config.small_world,
    );
    Ok((baseline, verdict))
}

/// Spectral communities of `core` with book profiles. The clustering seed
/// is the pipeline seed.
pub fn communities_stage(
    core: &Graph,
    corpus: &Corpus,
    config: &PipelineConfig,
) -> Result<CommunityDetection> {
    (|| -> Result<CommunityDetection> {
        let spectral = SpectralConfig {
            seed: config.seed,
            ..config.communities.clone()
        };
        let mut detection = detect_communities(core, &betweenness(core), &spectral)?;
        detection.partition = detection.partition.with_profiles(corpus)?;
        Ok(detection)
    })()
    .map_err(|e| e.in_stage("communities"))
}

/// Extraction, the full graph, and its greatest component.
pub fn build_stage(corpus: &Corpus) -> Result<(ExtractionReport, Graph, Graph)> {
    let refs = extract_all(corpus);
    let graph = build_graph(corpus, &refs).map_err(|e| e.in_stage("graph"))?;
    let core = greatest_component(&graph).map_err(|e| e.in_stage("graph"))?;
    Ok((refs, graph, core))
}

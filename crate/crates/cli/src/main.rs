use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use codexgraph::citations::write_csv;
use codexgraph::communities::{community_graph_export, KChoice};
use codexgraph::corpus::{load_corpus, Corpus};
use codexgraph::export::{export_graph, export_partition, ExportFormat};
use codexgraph::graph::degree_table;
use codexgraph::metrics::{FitWindow, LowDegreePolicy};
use codexgraph::pipeline::{
    baseline_stage, build_stage, communities_stage, graph_summary, metrics_stage, run_pipeline,
    PipelineConfig,
};
use codexgraph::synth::{synth_corpus, SynthSpec};
use codexgraph::{Error, Result};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "codexgraph",
    version,
    about = "Citation-network analysis of structured legal codes"
)]
struct Cli {
    /// Seed for every randomized stage.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress progress messages on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract citations as CSV (or JSON).
    Citations {
        corpus: PathBuf,
        #[arg(long, value_enum, default_value_t = CitationFormat::Csv)]
        format: CitationFormat,
    },
    /// Summarize the citation graph and its greatest component.
    Graph {
        corpus: PathBuf,
        /// Rows of the degree table.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Indices, tables and random baseline of the greatest component.
    Metrics {
        corpus: PathBuf,
        #[command(flatten)]
        metrics: MetricsArgs,
        /// Also write the cumulative degree distribution as CSV.
        #[arg(long)]
        degree_csv: Option<PathBuf>,
    },
    /// Spectral communities of the greatest component.
    Communities {
        corpus: PathBuf,
        #[command(flatten)]
        spectral: SpectralArgs,
        /// Also write the community graph as DOT.
        #[arg(long)]
        community_graph: Option<PathBuf>,
    },
    /// Full pipeline report.
    Analyze {
        corpus: PathBuf,
        /// JSON configuration; defaults apply to missing fields.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Generate a synthetic corpus with planted blocks.
    Synth {
        /// JSON synthesis spec; flags override its fields.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        books: Option<usize>,
        #[arg(long)]
        chapters_per_book: Option<usize>,
        #[arg(long)]
        articles_per_chapter: Option<usize>,
        #[arg(long)]
        p_in: Option<f64>,
        #[arg(long)]
        p_out: Option<f64>,
        #[arg(long)]
        hub_count: Option<usize>,
        #[arg(long)]
        hub_degree: Option<usize>,
        /// Ground-truth sidecar; defaults to `<out stem>.truth.json` when `--out` is set.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Serialize the graph or the community partition.
    Export {
        corpus: PathBuf,
        /// graphml, dot, json or csv.
        #[arg(long)]
        format: String,
        #[arg(long, value_enum, default_value_t = ExportTarget::Graph)]
        what: ExportTarget,
        #[command(flatten)]
        spectral: SpectralArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CitationFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportTarget {
    /// Every corpus node except the root.
    Graph,
    /// The greatest connected component.
    Greatest,
    /// The community partition of the greatest component.
    Communities,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long, default_value_t = 30)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Policy::Exclude)]
    policy: Policy,
    /// Lower end of the log-log fit window.
    #[arg(long, default_value_t = 1)]
    fit_min: usize,
    #[arg(long)]
    fit_max: Option<usize>,
    #[arg(long, default_value_t = 10)]
    top: usize,
    #[arg(long, default_value_t = 8)]
    rich_club_k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    Exclude,
    Zero,
}

#[derive(Args)]
struct SpectralArgs {
    #[arg(long, default_value_t = 8)]
    centrals: usize,
    /// Community count, or `auto` for the eigengap choice.
    #[arg(long, default_value = "auto")]
    k: String,
    #[arg(long, default_value_t = 40)]
    max_k: usize,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    /// Weight the Laplacian by citation multiplicity.
    #[arg(long)]
    weighted: bool,
}

impl SpectralArgs {
    fn apply(&self, config: &mut PipelineConfig) -> Result<()> {
        config.communities.centrals_removed = self.centrals;
        config.communities.k = self.k.parse::<KChoice>()?;
        config.communities.eigengap_max_k = self.max_k;
        config.communities.kmeans_restarts = self.restarts;
        config.communities.weighted = self.weighted;
        Ok(())
    }
}

struct Ctx {
    seed: Option<u64>,
    out: Option<PathBuf>,
    quiet: bool,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn emit(&self, content: &str) -> Result<()> {
        match &self.out {
            Some(path) => write_file(path, content),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(content.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }

    fn config(&self) -> PipelineConfig {
        PipelineConfig {
            seed: self.seed.unwrap_or(0),
            ..PipelineConfig::default()
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn read_corpus(path: &Path) -> Result<Corpus> {
    load_corpus(&read_file(path)?)
}

fn pretty(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx {
        seed: cli.seed,
        out: cli.out,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Citations { corpus, format } => {
            let corpus = read_corpus(&corpus)?;
            let (refs, _, _) = build_stage(&corpus)?;
            ctx.note(format!(
                "{} resolved, {} external, {} unparsed, {} self references",
                refs.resolved.len(),
                refs.external_dropped.len(),
                refs.unparsed.len(),
                refs.self_ref_count()
            ));
            match format {
                CitationFormat::Csv => {
                    let mut buf = Vec::new();
                    write_csv(&refs, &mut buf)?;
                    ctx.emit(&String::from_utf8_lossy(&buf))
                }
                CitationFormat::Json => ctx.emit(&pretty(&refs)?),
            }
        }
        Command::Graph { corpus, top } => {
            if top == 0 {
                return Err(Error::Usage("--top must be >= 1".into()));
            }
            let corpus = read_corpus(&corpus)?;
            let (_, graph, core) = build_stage(&corpus)?;
            ctx.note(format!(
                "n = {}, m = {}; greatest component n = {}, m = {}",
                graph.n(),
                graph.m(),
                core.n(),
                core.m()
            ));
            let table = if core.n() > 0 {
                degree_table(&core, top.min(core.n()))?
            } else {
                Vec::new()
            };
            ctx.emit(&pretty(&json!({
                "graph": graph_summary(&graph, &corpus)?,
                "greatest_component": graph_summary(&core, &corpus)?,
                "degree_table": table,
            }))?)
        }
        Command::Metrics {
            corpus,
            metrics,
            degree_csv,
        } => {
            let corpus = read_corpus(&corpus)?;
            let mut config = ctx.config();
            config.baseline_samples = metrics.samples;
            config.low_degree_policy = match metrics.policy {
                Policy::Exclude => LowDegreePolicy::Exclude,
                Policy::Zero => LowDegreePolicy::Zero,
            };
            config.fit_window = FitWindow {
                k_min: metrics.fit_min,
                k_max: metrics.fit_max,
            };
            config.table_size = metrics.top;
            config.rich_club_k = metrics.rich_club_k;
            config.validate()?;
            let (_, _, core) = build_stage(&corpus)?;
            if core.m() == 0 {
                return Err(Error::Domain("greatest component has no edge".into()));
            }
            let section = metrics_stage(&core, &config)?;
            let (baseline, small_world) = baseline_stage(&core, &section.indices, &config)?;
            if let Some(path) = degree_csv {
                write_file(&path, &section.degree_distribution.to_csv())?;
            }
            ctx.note(format!(
                "L = {:.4}, C = {:.4} vs random L = {:.4}, C = {:.4}; small world: {}",
                section.indices.char_path_length,
                section.indices.clustering,
                baseline.l_mean,
                baseline.c_mean,
                small_world.is_small_world
            ));
            ctx.emit(&pretty(&json!({
                "config": config,
                "metrics": section,
                "baseline": baseline,
                "small_world": small_world,
            }))?)
        }
        Command::Communities {
            corpus,
            spectral,
            community_graph,
        } => {
            let corpus = read_corpus(&corpus)?;
            let mut config = ctx.config();
            spectral.apply(&mut config)?;
            config.validate()?;
            let (_, _, core) = build_stage(&corpus)?;
            let detection = communities_stage(&core, &corpus, &config)?;
            if let Some(path) = community_graph {
                write_file(&path, &community_graph_export(&detection.partition))?;
            }
            ctx.note(format!(
                "k = {}, {} communities ({} singletons), {} centrals",
                detection.k,
                detection.partition.community_count(),
                detection.partition.singleton_count(),
                detection.partition.central_vertices.len()
            ));
            ctx.emit(&pretty(&detection)?)
        }
        Command::Analyze { corpus, config } => {
            let corpus = read_corpus(&corpus)?;
            let mut cfg: PipelineConfig = match config {
                Some(path) => {
                    serde_json::from_str(&read_file(&path)?).map_err(|e| Error::Schema {
                        path: path.display().to_string(),
                        message: e.to_string(),
                    })?
                }
                None => PipelineConfig::default(),
            };
            if let Some(seed) = ctx.seed {
                cfg.seed = seed;
            }
            let report = run_pipeline(&corpus, &cfg)?;
            ctx.note(format!("status: {}", report.status));
            ctx.emit(&report.to_json())
        }
        Command::Synth {
            spec,
            books,
            chapters_per_book,
            articles_per_chapter,
            p_in,
            p_out,
            hub_count,
            hub_degree,
            truth,
        } => {
            let mut s: SynthSpec = match spec {
                Some(path) => {
                    serde_json::from_str(&read_file(&path)?).map_err(|e| Error::Schema {
                        path: path.display().to_string(),
                        message: e.to_string(),
                    })?
                }
                None => SynthSpec::default(),
            };
            macro_rules! set {
                ($($field:ident),*) => { $(if let Some(v) = $field { s.$field = v; })* };
            }
            set!(
                books,
                chapters_per_book,
                articles_per_chapter,
                p_in,
                p_out,
                hub_count,
                hub_degree
            );
            if let Some(seed) = ctx.seed {
                s.seed = seed;
            }
            let generated = synth_corpus(&s)?;
            let truth_path =
                truth.or_else(|| ctx.out.as_ref().map(|o| o.with_extension("truth.json")));
            if let Some(path) = truth_path {
                write_file(&path, &pretty(&generated.truth)?)?;
            }
            ctx.note(format!(
                "{} articles in {} blocks",
                s.article_count(),
                s.books * s.chapters_per_book
            ));
            ctx.emit(&pretty(&generated.document)?)
        }
        Command::Export {
            corpus,
            format,
            what,
            spectral,
        } => {
            let format: ExportFormat = format.parse()?;
            let corpus = read_corpus(&corpus)?;
            let (_, graph, core) = build_stage(&corpus)?;
            let doc = match what {
                ExportTarget::Graph => export_graph(&graph, Some(&corpus), format)?,
                ExportTarget::Greatest => export_graph(&core, Some(&corpus), format)?,
                ExportTarget::Communities => {
                    let mut config = ctx.config();
                    spectral.apply(&mut config)?;
                    config.validate()?;
                    export_partition(
                        &communities_stage(&core, &corpus, &config)?.partition,
                        format,
                    )?
                }
            };
            ctx.emit(&doc)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

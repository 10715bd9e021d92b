//! Stage orchestration. Every stage reads the artifacts of earlier stages
//! from the output directory and writes its own next to them, so stages can
//! be run one at a time or all together.

pub mod artifacts;
mod stages;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::cascades::{DiffusionReport, MetricSummary, ParentStrategy, DEFAULT_MIN_CLASSIFIED};
use crate::community::{BlockSummary, CommunitySummary, Validation};
use crate::graph::GraphStats;
use crate::ingest::IngestReport;
use crate::nullmodels::DEFAULT_REPLICATES;
use crate::{Error, Result};

use artifacts::*;
pub use stages::{
    cascades, communities, graph, ingest, load_component, load_sides, nulltest, nulltest_tolerant,
    score, CascadeReport, CommunityReport, GraphReport, KMeansSummary, LexiconReport,
    LinkFractionSummary, NullKind, NullReport, NullSummary, RescaleReport,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub out: PathBuf,
    pub tweets: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    pub followers: Option<PathBuf>,
    pub hashtags: Vec<String>,
    pub start: Option<DateTime<Utc>>,
    pub end: Option<DateTime<Utc>>,
    pub seed: u64,
    pub replicates: usize,
    pub min_community_size: usize,
    pub top_k: usize,
    pub strategy: ParentStrategy,
    pub min_classified: usize,
    pub strict: bool,
}

impl RunConfig {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        RunConfig {
            out: out.into(),
            tweets: None,
            lexicon: None,
            annotations: None,
            followers: None,
            hashtags: Vec::new(),
            start: None,
            end: None,
            seed: 42,
            replicates: DEFAULT_REPLICATES,
            min_community_size: 20,
            top_k: 2,
            strategy: ParentStrategy::Mention,
            min_classified: DEFAULT_MIN_CLASSIFIED,
            strict: false,
        }
    }

    /// Resolves a required input, naming the flag when it is absent.
    pub(crate) fn input<'a>(&self, flag: &str, path: Option<&'a Path>) -> Result<&'a Path> {
        match path {
            None => Err(Error::Config(format!("{flag} is required"))),
            Some(p) if !p.is_file() => Err(Error::Config(format!("{flag}: no such file {}", p.display()))),
            Some(p) => Ok(p),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::Config("--replicates must be positive".into()));
        }
        if self.top_k == 0 {
            return Err(Error::Config("--top-k must be positive".into()));
        }
        if let (Some(s), Some(e)) = (self.start, self.end) {
            if s > e {
                return Err(Error::Config("--start is after --end".into()));
            }
        }
        std::fs::create_dir_all(&self.out).map_err(|e| {
            Error::Config(format!("--out: cannot create {}: {e}", self.out.display()))
        })
    }
}

/// Process exit code for a failed stage.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Data { .. } => 3,
        _ => 2,
    }
}

// ---------------------------------------------------------------- summary

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub replicates: usize,
    pub hashtags: Vec<String>,
    pub start: Option<DateTime<Utc>>,
    pub end: Option<DateTime<Utc>>,
    pub min_community_size: usize,
    pub top_k: usize,
    pub strategy: ParentStrategy,
    pub min_classified: usize,
    pub strict: bool,
}

/// Graph statistics without the CCDF point lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphTable {
    pub nodes: usize,
    pub links: usize,
    pub mentions: u64,
    pub reciprocal_pairs: usize,
    pub avg_out_degree: f64,
    pub avg_out_mentions: f64,
    pub density: f64,
    pub avg_clustering: f64,
    pub transitivity: f64,
    pub avg_geodesic: f64,
}

impl From<&GraphStats> for GraphTable {
    fn from(s: &GraphStats) -> Self {
        GraphTable {
            nodes: s.nodes,
            links: s.links,
            mentions: s.mentions,
            reciprocal_pairs: s.reciprocal_pairs,
            avg_out_degree: s.avg_out_degree,
            avg_out_mentions: s.avg_out_mentions,
            density: s.density,
            avg_clustering: s.avg_clustering,
            transitivity: s.transitivity,
            avg_geodesic: s.avg_geodesic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub full: GraphTable,
    pub mutual: GraphTable,
    pub scc: GraphTable,
    pub network_tweets: usize,
    pub rescale: RescaleReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub method: String,
    pub modularity: f64,
    pub communities: usize,
    pub retained: Vec<CommunitySummary>,
    pub blocks: Vec<BlockSummary>,
    pub link_fractions: LinkFractionSummary,
    pub validation: Option<Validation>,
    pub kmeans: Option<KMeansSummary>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDigest {
    pub mode: Option<f64>,
    pub median: Option<f64>,
    pub mean: Option<f64>,
}

impl From<&MetricSummary> for MetricDigest {
    fn from(m: &MetricSummary) -> Self {
        MetricDigest { mode: m.mode, median: m.median, mean: m.mean }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeSummary {
    pub strategy: ParentStrategy,
    pub buckets: usize,
    pub never_retweeted: usize,
    pub cascades: usize,
    pub duplicates_dropped: usize,
    pub scored_cascades: usize,
    pub max_depth: MetricDigest,
    pub avg_depth: MetricDigest,
    pub virality: MetricDigest,
    pub corr_max_avg: Option<f64>,
    pub corr_max_virality: Option<f64>,
    pub corr_avg_virality: Option<f64>,
    pub diffusion: DiffusionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub tweets: IngestReport,
    pub sentiment: LexiconReport,
    pub graph: GraphSummary,
    pub partition: PartitionSummary,
    pub nulls: BTreeMap<String, NullReport>,
    pub cascades: CascadeSummary,
}

/// Collects the stage reports into `summary.json`. Null tests that were not
/// run are simply absent.
pub fn report(cfg: &RunConfig) -> Result<Summary> {
    let dir = &cfg.out;
    let tweets: IngestReport = read_json(dir, INGEST_REPORT)?;
    let sentiment: LexiconReport = read_json(dir, LEXICON_REPORT)?;
    let g: GraphReport = read_json(dir, GRAPH_STATS)?;
    let c: CommunityReport = read_json(dir, COMMUNITIES)?;
    let k: CascadeReport = read_json(dir, DIFFUSION)?;
    let mut nulls = BTreeMap::new();
    for kind in NullKind::ALL {
        if dir.join(null_json(kind.as_str())).is_file() {
            nulls.insert(kind.as_str().to_string(), read_json(dir, &null_json(kind.as_str()))?);
        }
    }
    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            seed: cfg.seed,
            replicates: cfg.replicates,
            hashtags: cfg.hashtags.clone(),
            start: cfg.start,
            end: cfg.end,
            min_community_size: cfg.min_community_size,
            top_k: cfg.top_k,
            strategy: cfg.strategy,
            min_classified: cfg.min_classified,
            strict: cfg.strict,
        },
        tweets,
        sentiment,
        graph: GraphSummary {
            full: (&g.full).into(),
            mutual: (&g.mutual).into(),
            scc: (&g.scc).into(),
            network_tweets: g.network_tweets,
            rescale: g.rescale,
        },
        partition: PartitionSummary {
            method: c.method,
            modularity: c.modularity,
            communities: c.communities,
            retained: c
                .summaries
                .into_iter()
                .filter(|s| c.retained.communities.contains(&s.community))
                .collect(),
            blocks: c.blocks,
            link_fractions: c.link_fractions,
            validation: c.validation,
            kmeans: c.kmeans,
            warnings: c.warnings,
        },
        nulls,
        cascades: CascadeSummary {
            strategy: k.strategy,
            buckets: k.buckets,
            never_retweeted: k.never_retweeted,
            cascades: k.cascades,
            duplicates_dropped: k.duplicates_dropped,
            scored_cascades: k.scores.cascades,
            max_depth: (&k.scores.max_depth).into(),
            avg_depth: (&k.scores.avg_depth).into(),
            virality: (&k.scores.virality).into(),
            corr_max_avg: k.scores.corr_max_avg,
            corr_max_virality: k.scores.corr_max_virality,
            corr_avg_virality: k.scores.corr_avg_virality,
            diffusion: k.diffusion,
        },
    };
    write_json(&dir.join(SUMMARY), &summary)?;
    Ok(summary)
}

// ---------------------------------------------------------------- stages

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Score,
    Graph,
    Communities,
    Null(NullKind),
    Cascades,
    Report,
}

impl Stage {
    pub fn name(self) -> String {
        match self {
            Stage::Ingest => "ingest".into(),
            Stage::Score => "score".into(),
            Stage::Graph => "graph".into(),
            Stage::Communities => "communities".into(),
            Stage::Null(k) => format!("nulltest {}", k.as_str()),
            Stage::Cascades => "cascades".into(),
            Stage::Report => "report".into(),
        }
    }
}

/// Runs a single stage. Null tests fail on undefined statistics here.
pub fn run_stage(cfg: &RunConfig, stage: Stage) -> Result<()> {
    cfg.validate()?;
    match stage {
        Stage::Ingest => ingest(cfg).map(drop),
        Stage::Score => score(cfg).map(drop),
        Stage::Graph => graph(cfg).map(drop),
        Stage::Communities => communities(cfg).map(drop),
        Stage::Null(k) => nulltest(cfg, k).map(drop),
        Stage::Cascades => cascades(cfg).map(drop),
        Stage::Report => report(cfg).map(drop),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStatus {
    pub completed: Vec<String>,
    pub failed: Option<String>,
    pub error: Option<String>,
}

/// Every stage in order, then the summary. A null statistic that is
/// undefined on the data is recorded rather than fatal. On failure
/// `run_status.json` names the failed stage; artifacts of completed stages
/// stay in place.
pub fn run_pipeline(cfg: &RunConfig) -> Result<Summary> {
    cfg.validate()?;
    let mut status = RunStatus { completed: Vec::new(), failed: None, error: None };
    let mut plan = vec![Stage::Ingest, Stage::Score, Stage::Graph, Stage::Communities];
    plan.extend(NullKind::ALL.map(Stage::Null));
    plan.push(Stage::Cascades);
    for stage in plan {
        let result = match stage {
            Stage::Null(k) => nulltest_tolerant(cfg, k).map(drop),
            s => run_stage(cfg, s),
        };
        if let Err(e) = result {
            status.failed = Some(stage.name());
            status.error = Some(e.to_string());
            write_json(&cfg.out.join(RUN_STATUS), &status)?;
            return Err(e);
        }
        log::info!("stage {} done", stage.name());
        status.completed.push(stage.name());
    }
    let summary = report(cfg)?;
    status.completed.push(Stage::Report.name());
    write_json(&cfg.out.join(RUN_STATUS), &status)?;
    Ok(summary)
}

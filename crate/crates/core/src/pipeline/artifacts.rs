//! File names and row shapes of the stage artifacts, plus small CSV/JSON helpers.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const TWEETS: &str = "tweets.jsonl";
pub const INGEST_REPORT: &str = "ingest_report.json";
pub const RAW_SCORES: &str = "raw_scores.csv";
pub const LEXICON_REPORT: &str = "lexicon_report.json";
pub const EDGES_FULL: &str = "edges_full.csv";
pub const EDGES: &str = "edges.csv";
pub const TWEET_SCORES: &str = "tweet_scores.csv";
pub const MESSAGES: &str = "messages.csv";
pub const USERS: &str = "users.csv";
pub const NODE_STATS: &str = "node_stats.csv";
pub const DEGREE_CCDF: &str = "degree_ccdf.csv";
pub const GRAPH_STATS: &str = "graph_stats.json";
pub const PARTITION: &str = "partition.csv";
pub const COMMUNITIES: &str = "communities.json";
pub const ACTIVITY: &str = "activity.csv";
pub const LINK_FRACTIONS: &str = "link_fractions.csv";
pub const CASCADES: &str = "cascades.csv";
pub const CASCADE_EDGES: &str = "cascade_edges.csv";
pub const SCORE_CCDF: &str = "score_ccdf.csv";
pub const DIFFUSION: &str = "diffusion.json";
pub const SUMMARY: &str = "summary.json";
pub const RUN_STATUS: &str = "run_status.json";

pub fn null_json(test: &str) -> String {
    format!("null_{test}.json")
}

pub fn null_replicates(test: &str) -> String {
    format!("null_{test}_replicates.csv")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawScoreRow {
    pub tweet_id: String,
    pub raw_pos: i64,
    pub raw_neg: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullEdgeRow {
    pub src: String,
    pub dst: String,
    pub mention_count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub src: String,
    pub dst: String,
    pub mention_count: u32,
    pub sentiment_weight: f64,
}

/// `receivers` is space separated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageRow {
    pub tweet_id: String,
    pub sender: String,
    pub receivers: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRow {
    pub user_id: String,
    pub community: usize,
    pub side: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeRow {
    pub cascade_id: usize,
    pub bucket_id: usize,
    pub root_user: String,
    pub n: usize,
    pub max_depth: u32,
    pub avg_depth: f64,
    pub virality: Option<f64>,
    pub seed_side: String,
    pub prop_yes: Option<f64>,
    pub n_classified: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeEdgeRow {
    pub cascade_id: usize,
    pub child_user: String,
    pub parent_user: String,
    pub child_time: String,
}

pub fn artifact(dir: &Path, name: &str) -> Result<PathBuf> {
    let p = dir.join(name);
    if p.is_file() {
        Ok(p)
    } else {
        Err(Error::MissingArtifact(p))
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

/// Writes `header` and then every row; the header is written even with no rows.
pub fn write_csv<T: Serialize>(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = T>,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(create(path)?);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_csv<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<Vec<T>> {
    let path = artifact(dir, name)?;
    let mut rdr = csv::Reader::from_path(&path)?;
    rdr.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| Error::data(path.display().to_string(), i + 2, e.to_string())))
        .collect()
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<T> {
    let path = artifact(dir, name)?;
    let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}

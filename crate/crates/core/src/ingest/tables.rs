use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Mode;
use crate::types::Side;
use crate::{Error, Result};

/// Row accounting shared by the small tabular inputs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub rows: usize,
    pub entries: usize,
    /// Repeated keys; the last occurrence wins.
    pub duplicates: usize,
    /// Lexicon scores pulled back into [-5, 5].
    pub clamped: usize,
    /// Rows dropped (self edges, unparseable rows in lenient mode).
    pub skipped: usize,
}

pub const MIN_SCORE: i32 = -5;
pub const MAX_SCORE: i32 = 5;

/// Unigram valence lexicon: lowercase token -> integer score in [-5, 5].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    scores: HashMap<String, i32>,
}

impl Lexicon {
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i32)>) -> Self {
        Lexicon {
            scores: pairs
                .into_iter()
                .map(|(w, s)| (w.to_lowercase(), s.clamp(MIN_SCORE, MAX_SCORE)))
                .collect(),
        }
    }

    pub fn get(&self, token: &str) -> Option<i32> {
        self.scores.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Entries sorted by word.
    pub fn entries(&self) -> Vec<(&str, i32)> {
        let mut v: Vec<_> = self.scores.iter().map(|(w, s)| (w.as_str(), *s)).collect();
        v.sort_unstable();
        v
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

pub fn load_lexicon(path: &Path, mode: Mode) -> Result<(Lexicon, TableReport)> {
    read_lexicon(open(path)?, &path.display().to_string(), mode)
}

pub fn read_lexicon<R: BufRead>(reader: R, source: &str, mode: Mode) -> Result<(Lexicon, TableReport)> {
    let mut report = TableReport::default();
    let mut scores = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        report.rows += 1;
        let parsed = line
            .rsplit_once('\t')
            .ok_or_else(|| "expected word<TAB>score".to_string())
            .and_then(|(w, s)| {
                let word = w.trim().to_lowercase();
                if word.is_empty() {
                    return Err("empty word".to_string());
                }
                s.trim()
                    .parse::<i32>()
                    .map(|score| (word, score))
                    .map_err(|e| format!("bad score {s:?}: {e}"))
            });
        let (word, mut score) = match parsed {
            Ok(p) => p,
            Err(reason) if mode == Mode::Strict => return Err(Error::data(source, lineno, reason)),
            Err(reason) => {
                log::warn!("{source}:{lineno}: skipped ({reason})");
                report.skipped += 1;
                continue;
            }
        };
        if !(MIN_SCORE..=MAX_SCORE).contains(&score) {
            if mode == Mode::Strict {
                return Err(Error::data(
                    source,
                    lineno,
                    format!("score {score} for {word:?} outside [-5, 5]"),
                ));
            }
            log::warn!("{source}:{lineno}: score {score} for {word:?} clamped");
            score = score.clamp(MIN_SCORE, MAX_SCORE);
            report.clamped += 1;
        }
        if scores.insert(word, score).is_some() {
            report.duplicates += 1;
        }
    }
    report.entries = scores.len();
    if report.duplicates > 0 {
        log::warn!("{source}: {} duplicate words (last wins)", report.duplicates);
    }
    Ok((Lexicon { scores }, report))
}

/// Hand labels keyed by user id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Annotations {
    pub labels: BTreeMap<String, Side>,
}

#[derive(Deserialize)]
struct AnnotationRow {
    user_id: String,
    label: String,
}

pub fn load_annotations(path: &Path) -> Result<(Annotations, TableReport)> {
    read_annotations(open(path)?, &path.display().to_string())
}

pub fn read_annotations<R: Read>(reader: R, source: &str) -> Result<(Annotations, TableReport)> {
    let mut report = TableReport::default();
    let mut labels = BTreeMap::new();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    for (idx, row) in rdr.deserialize::<AnnotationRow>().enumerate() {
        // header is line 1
        let lineno = idx + 2;
        let row = row.map_err(|e| Error::data(source, lineno, e.to_string()))?;
        report.rows += 1;
        let side: Side = row
            .label
            .parse()
            .map_err(|e: String| Error::data(source, lineno, e))?;
        if labels.insert(row.user_id, side).is_some() {
            report.duplicates += 1;
        }
    }
    report.entries = labels.len();
    if report.duplicates > 0 {
        log::warn!("{source}: {} duplicate users (last wins)", report.duplicates);
    }
    Ok((Annotations { labels }, report))
}

/// Who follows whom: follower -> set of followed accounts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FollowerGraph {
    pub follows: BTreeMap<String, BTreeSet<String>>,
}

impl FollowerGraph {
    pub fn follows(&self, follower: &str, followed: &str) -> bool {
        self.follows
            .get(follower)
            .is_some_and(|s| s.contains(followed))
    }

    pub fn edge_count(&self) -> usize {
        self.follows.values().map(BTreeSet::len).sum()
    }
}

#[derive(Deserialize)]
struct FollowerRow {
    follower: String,
    followed: String,
}

pub fn load_followers(path: &Path) -> Result<(FollowerGraph, TableReport)> {
    read_followers(open(path)?, &path.display().to_string())
}

pub fn read_followers<R: Read>(reader: R, source: &str) -> Result<(FollowerGraph, TableReport)> {
    let mut report = TableReport::default();
    let mut graph = FollowerGraph::default();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    for (idx, row) in rdr.deserialize::<FollowerRow>().enumerate() {
        let row = row.map_err(|e| Error::data(source, idx + 2, e.to_string()))?;
        report.rows += 1;
        if row.follower == row.followed {
            report.skipped += 1;
            continue;
        }
        if !graph
            .follows
            .entry(row.follower)
            .or_default()
            .insert(row.followed)
        {
            report.duplicates += 1;
        }
    }
    report.entries = graph.edge_count();
    Ok((graph, report))
}

//! Python bindings for the `polarnet` crate.

use std::collections::HashMap;
use std::path::PathBuf;

use chrono::{TimeZone, Utc};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError, PyValueError};
use pyo3::prelude::*;

use polarnet::cascades::{self, BucketMember, LinkSet, ParentStrategy, RetweetBucket};
use polarnet::community::{self, Louvain, WeightedGraph};
use polarnet::graph::MentionGraph;
use polarnet::ingest::Lexicon as CoreLexicon;
use polarnet::nullmodels::{self, NullTestResult, Verdict};
use polarnet::pipeline::{self, RunConfig};
use polarnet::sentiment::{self, RawScore};
use polarnet::synth::{self, SynthConfig};
use polarnet::Error;

create_exception!(polarnet_py, PolarnetError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::Config(_) | Error::Data { .. } => PyValueError::new_err(e.to_string()),
        other => PolarnetError::new_err(other.to_string()),
    }
}

#[pyfunction]
fn tokenize(text: &str) -> Vec<String> {
    sentiment::tokenize(text)
}

/// Word scores in [-5, 5].
#[pyclass(frozen)]
struct Lexicon {
    inner: CoreLexicon,
}

#[pymethods]
impl Lexicon {
    #[new]
    fn new(scores: HashMap<String, i32>) -> Self {
        Lexicon { inner: CoreLexicon::from_pairs(scores.iter().map(|(w, s)| (w.as_str(), *s))) }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn get(&self, word: &str) -> Option<i32> {
        self.inner.get(word)
    }

    /// `(raw_pos, raw_neg)` for one text.
    fn score_text(&self, text: &str) -> (i64, i64) {
        let r = sentiment::score_text(text, &self.inner);
        (r.pos, r.neg)
    }
}

/// Rescales `(tweet_id, raw_pos, raw_neg)` rows into
/// `(tweet_id, scaled_pos, scaled_neg, score)`.
#[pyfunction]
fn rescale(rows: Vec<(String, i64, i64)>) -> Vec<(String, f64, f64, f64)> {
    let raws: Vec<(String, RawScore)> = rows
        .into_iter()
        .map(|(id, pos, neg)| (id, RawScore { pos, neg }))
        .collect();
    sentiment::rescale_corpus(&raws)
        .1
        .into_iter()
        .map(|s| (s.tweet_id, s.scaled_pos, s.scaled_neg, s.score))
        .collect()
}

#[pyclass(frozen, get_all)]
struct CascadeScores {
    n: usize,
    max_depth: u32,
    avg_depth: f64,
    virality: Option<f64>,
    wiener: u64,
}

#[pymethods]
impl CascadeScores {
    fn __repr__(&self) -> String {
        format!(
            "CascadeScores(n={}, max_depth={}, avg_depth={}, virality={:?})",
            self.n, self.max_depth, self.avg_depth, self.virality
        )
    }
}

/// Scores a tree given as one parent index per node (`None` for the root).
#[pyfunction]
fn score_cascade(parents: Vec<Option<usize>>) -> PyResult<CascadeScores> {
    let s = cascades::score_parents(&parents).map_err(to_py)?;
    Ok(CascadeScores {
        n: s.n,
        max_depth: s.max_depth,
        avg_depth: s.avg_depth,
        virality: s.virality,
        wiener: s.wiener,
    })
}

/// Splits one bucket of `(tweet_id, user_id, unix_seconds)` into cascades.
/// `links` holds `(child, parent)` user pairs. Each cascade is a list of
/// `(user_id, parent_user_id or None)` with the seed first.
#[pyfunction]
fn attribute_parents(
    members: Vec<(String, String, i64)>,
    links: Vec<(String, String)>,
) -> PyResult<Vec<Vec<(String, Option<String>)>>> {
    let mut bucket_members = Vec::with_capacity(members.len());
    for (tweet_id, user_id, secs) in members {
        let created_at = Utc
            .timestamp_opt(secs, 0)
            .single()
            .ok_or_else(|| PyValueError::new_err(format!("bad timestamp {secs}")))?;
        bucket_members.push(BucketMember { tweet_id, user_id, created_at });
    }
    bucket_members.sort_by(|a, b| (a.created_at, &a.tweet_id).cmp(&(b.created_at, &b.tweet_id)));
    let bucket = RetweetBucket { bucket_id: 0, normalized_text: String::new(), members: bucket_members };
    let (trees, _) = cascades::attribute_parents(&bucket, &LinkSet::new(links));
    Ok(trees
        .iter()
        .map(|t| {
            t.nodes
                .iter()
                .map(|n| (n.user_id.clone(), n.parent.map(|p| t.nodes[p].user_id.clone())))
                .collect()
        })
        .collect())
}

/// Louvain on an undirected weighted edge list over nodes `0..n`.
/// Returns `(assignment, modularity)`.
#[pyfunction]
#[pyo3(signature = (n, edges, seed = 42))]
fn louvain(py: Python<'_>, n: usize, edges: Vec<(usize, usize, f64)>, seed: u64) -> PyResult<(Vec<usize>, f64)> {
    if let Some(&(a, b, _)) = edges.iter().find(|(a, b, _)| *a >= n || *b >= n) {
        return Err(PyValueError::new_err(format!("edge ({a}, {b}) out of range for {n} nodes")));
    }
    Ok(py.allow_threads(|| {
        let g = WeightedGraph::from_edges(n, edges);
        let assignment = Louvain::new(seed).run(&g);
        let q = community::modularity(&g, &assignment);
        (assignment, q)
    }))
}

#[pyclass(frozen, get_all)]
struct NullResult {
    statistic: String,
    observed: f64,
    q025: f64,
    q50: f64,
    q975: f64,
    outside: bool,
    replicates: Vec<f64>,
}

#[pymethods]
impl NullResult {
    fn __repr__(&self) -> String {
        format!(
            "NullResult({}: observed={}, q025={}, q975={}, outside={})",
            self.statistic, self.observed, self.q025, self.q975, self.outside
        )
    }
}

impl From<NullTestResult> for NullResult {
    fn from(r: NullTestResult) -> Self {
        NullResult {
            statistic: r.statistic,
            observed: r.observed,
            q025: r.q025,
            q50: r.q50,
            q975: r.q975,
            outside: r.verdict == Verdict::Outside,
            replicates: r.replicates,
        }
    }
}

fn directed_graph(edges: &[(String, String)]) -> MentionGraph {
    MentionGraph::from_edges(edges.iter().map(|(a, b)| (a.clone(), b.clone(), 1, Vec::new())), &[])
}

fn memberships(g: &MentionGraph, groups: &HashMap<String, usize>) -> Vec<Option<usize>> {
    g.nodes().iter().map(|u| groups.get(u).copied()).collect()
}

/// Assortativity of a directed `(src, dst)` edge list under `groups`.
#[pyfunction]
fn assortativity(edges: Vec<(String, String)>, groups: HashMap<String, usize>) -> PyResult<f64> {
    let g = directed_graph(&edges);
    nullmodels::assortativity(&g, &memberships(&g, &groups)).map_err(to_py)
}

/// Assortativity against memberships resampled with replacement.
#[pyfunction]
#[pyo3(signature = (edges, groups, replicates = 1000, seed = 42))]
fn assortativity_test(
    py: Python<'_>,
    edges: Vec<(String, String)>,
    groups: HashMap<String, usize>,
    replicates: usize,
    seed: u64,
) -> PyResult<NullResult> {
    let g = directed_graph(&edges);
    let m = memberships(&g, &groups);
    py.allow_threads(|| nullmodels::assortativity_test(&g, &m, replicates, seed))
        .map(NullResult::from)
        .map_err(to_py)
}

/// Writes a planted two-sided corpus into `out_dir`.
#[pyfunction]
#[pyo3(signature = (out_dir, seed = 1, n_yes = 100, n_no = 100, p_in = 0.2, p_out = 0.01, cascades = 200, cross_side_retweet_prob = 0.02))]
#[allow(clippy::too_many_arguments)]
fn generate_synth(
    py: Python<'_>,
    out_dir: PathBuf,
    seed: u64,
    n_yes: usize,
    n_no: usize,
    p_in: f64,
    p_out: f64,
    cascades: usize,
    cross_side_retweet_prob: f64,
) -> PyResult<()> {
    let cfg = SynthConfig { seed, n_yes, n_no, p_in, p_out, cascades, cross_side_retweet_prob, ..SynthConfig::default() };
    py.allow_threads(|| synth::generate(&cfg)?.write_to(&out_dir)).map_err(to_py)
}

/// Runs every stage into `out_dir` and returns summary.json as a string.
#[pyfunction]
#[pyo3(signature = (out_dir, tweets, lexicon, annotations = None, followers = None, seed = 42, replicates = 1000, strategy = "mention", min_community_size = 20))]
#[allow(clippy::too_many_arguments)]
fn run_pipeline(
    py: Python<'_>,
    out_dir: PathBuf,
    tweets: PathBuf,
    lexicon: PathBuf,
    annotations: Option<PathBuf>,
    followers: Option<PathBuf>,
    seed: u64,
    replicates: usize,
    strategy: &str,
    min_community_size: usize,
) -> PyResult<String> {
    let strategy: ParentStrategy = strategy.parse().map_err(to_py)?;
    let cfg = RunConfig {
        tweets: Some(tweets),
        lexicon: Some(lexicon),
        annotations,
        followers,
        seed,
        replicates,
        strategy,
        min_community_size,
        ..RunConfig::new(out_dir)
    };
    let summary = py.allow_threads(|| pipeline::run_pipeline(&cfg)).map_err(to_py)?;
    serde_json::to_string_pretty(&summary).map_err(|e| PolarnetError::new_err(e.to_string()))
}

#[pymodule]
fn polarnet_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PolarnetError", m.py().get_type::<PolarnetError>())?;
    m.add_class::<Lexicon>()?;
    m.add_class::<CascadeScores>()?;
    m.add_class::<NullResult>()?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(rescale, m)?)?;
    m.add_function(wrap_pyfunction!(score_cascade, m)?)?;
    m.add_function(wrap_pyfunction!(attribute_parents, m)?)?;
    m.add_function(wrap_pyfunction!(louvain, m)?)?;
    m.add_function(wrap_pyfunction!(assortativity, m)?)?;
    m.add_function(wrap_pyfunction!(assortativity_test, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synth, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    Ok(())
}

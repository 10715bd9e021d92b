//! Monte Carlo randomization tests that keep the network topology fixed and
//! resample attributes: message scores, polarity classes or community
//! memberships.
//!
//! Replicate `i` draws only from stream `(seed, i)`, and replicates are
//! collected in index order, so results are identical for any thread count.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::MentionGraph;
use crate::rng;
use crate::sentiment::MessageTable;
use crate::stats::{pearson, quantile_sorted};
use crate::types::Polarity;
use crate::{Error, Result};

pub const DEFAULT_REPLICATES: usize = 1000;
pub const LOWER_Q: f64 = 0.025;
pub const UPPER_Q: f64 = 0.975;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Observed value lies strictly outside (q2.5, q97.5).
    Outside,
    Inside,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullTestResult {
    pub statistic: String,
    pub observed: f64,
    pub replicates: Vec<f64>,
    pub q025: f64,
    pub q50: f64,
    pub q975: f64,
    pub verdict: Verdict,
    pub seed: u64,
    /// Replicates whose statistic was undefined (recorded as 0.0).
    pub undefined_replicates: usize,
}

impl NullTestResult {
    pub fn new(statistic: &str, observed: f64, replicates: Vec<f64>, seed: u64, undefined: usize) -> Self {
        assert!(!replicates.is_empty(), "null test needs at least one replicate");
        let mut sorted = replicates.clone();
        sorted.sort_by(f64::total_cmp);
        let q025 = quantile_sorted(&sorted, LOWER_Q);
        let q975 = quantile_sorted(&sorted, UPPER_Q);
        let verdict = if observed < q025 || observed > q975 {
            Verdict::Outside
        } else {
            Verdict::Inside
        };
        NullTestResult {
            statistic: statistic.to_string(),
            observed,
            q025,
            q50: quantile_sorted(&sorted, 0.5),
            q975,
            verdict,
            seed,
            undefined_replicates: undefined,
            replicates,
        }
    }

    pub fn replicate_count(&self) -> usize {
        self.replicates.len()
    }

    pub fn replicate_mean(&self) -> f64 {
        self.replicates.iter().sum::<f64>() / self.replicates.len() as f64
    }
}

fn check_replicates(r: usize) -> Result<()> {
    if r == 0 {
        Err(Error::Config("replicate count must be positive".into()))
    } else {
        Ok(())
    }
}

/// Runs `r` replicates in parallel; `None` results are counted and stored as 0.0.
fn replicate<T, F>(r: usize, seed: u64, f: F) -> Vec<Option<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Option<T> + Sync,
{
    (0..r as u64)
        .into_par_iter()
        .map(|i| f(&mut rng::stream(seed, i)))
        .collect()
}

fn flatten(values: Vec<Option<f64>>) -> (Vec<f64>, usize) {
    let undefined = values.iter().filter(|v| v.is_none()).count();
    (values.into_iter().map(|v| v.unwrap_or(0.0)).collect(), undefined)
}

/// Pearson correlation of (sent_in, sent_out) over users with both defined.
/// Returns the number of such users alongside.
pub fn in_out_correlation(table: &MessageTable, scores: &[f64]) -> (usize, Option<f64>) {
    let (outs, ins) = table.means(scores);
    let (xs, ys): (Vec<f64>, Vec<f64>) = ins
        .iter()
        .zip(&outs)
        .filter_map(|(i, o)| Some(((*i)?, (*o)?)))
        .unzip();
    (xs.len(), pearson(&xs, &ys))
}

/// Resamples every message's score with replacement from the pool of all
/// message scores, re-aggregates per-user means, and recomputes the
/// in/out correlation.
pub fn sentiment_correlation_test(table: &MessageTable, r: usize, seed: u64) -> Result<NullTestResult> {
    check_replicates(r)?;
    let (users, observed) = in_out_correlation(table, &table.scores);
    if users < 3 {
        return Err(Error::Invalid(format!(
            "correlation needs at least 3 users with both sentiment-in and -out, found {users}"
        )));
    }
    let observed = observed.ok_or(Error::Undefined("in/out sentiment correlation"))?;
    let m = table.len();
    let reps = replicate(r, seed, |rng| {
        let scores: Vec<f64> = (0..m).map(|_| table.scores[rng.random_range(0..m)]).collect();
        in_out_correlation(table, &scores).1
    });
    let (reps, undefined) = flatten(reps);
    Ok(NullTestResult::new("sentiment_correlation", observed, reps, seed, undefined))
}

/// Fraction of directed edges for each ordered (source class, target class)
/// pair, indexed `src * 3 + dst` in [`Polarity::ALL`] order.
pub fn link_class_fractions(g: &MentionGraph, classes: &[Polarity]) -> [f64; 9] {
    let mut counts = [0u64; 9];
    for e in g.edges() {
        counts[classes[e.src].index() * 3 + classes[e.dst].index()] += 1;
    }
    let total = g.edge_count().max(1) as f64;
    counts.map(|c| c as f64 / total)
}

pub fn link_class_name(idx: usize) -> String {
    format!(
        "f{}{}",
        Polarity::ALL[idx / 3].letter(),
        Polarity::ALL[idx % 3].letter()
    )
}

/// One test per ordered class pair (`fuu`, `fup`, ... `fnn`). Each replicate
/// relabels every node with a class drawn with replacement from the observed
/// labels.
pub fn link_class_fraction_test(
    g: &MentionGraph,
    classes: &[Polarity],
    r: usize,
    seed: u64,
) -> Result<Vec<NullTestResult>> {
    check_replicates(r)?;
    if g.edge_count() == 0 {
        return Err(Error::Invalid("link fractions need at least one edge".into()));
    }
    assert_eq!(classes.len(), g.node_count(), "one class per node");
    let observed = link_class_fractions(g, classes);
    let n = classes.len();
    let reps = replicate(r, seed, |rng| {
        let shuffled: Vec<Polarity> = (0..n).map(|_| classes[rng.random_range(0..n)]).collect();
        Some(link_class_fractions(g, &shuffled))
    });
    Ok((0..9)
        .map(|k| {
            let values = reps.iter().map(|rep| rep.expect("always defined")[k]).collect();
            NullTestResult::new(&link_class_name(k), observed[k], values, seed, 0)
        })
        .collect())
}

/// Mixing counts `c[i][j]` = edges from a node in group i to a node in group
/// j, over edges whose endpoints both have a group.
pub fn mixing_counts(g: &MentionGraph, membership: &[Option<usize>]) -> Vec<Vec<u64>> {
    let k = membership.iter().flatten().max().map_or(0, |m| m + 1);
    let mut counts = vec![vec![0u64; k]; k];
    for e in g.edges() {
        if let (Some(a), Some(b)) = (membership[e.src], membership[e.dst]) {
            counts[a][b] += 1;
        }
    }
    counts
}

/// Assortativity `r = (sum e_ii - sum a_i b_i) / (1 - sum a_i b_i)` with
/// `a_i` the share of edges leaving group i and `b_i` the share entering it.
/// Evaluated in integer arithmetic and divided once.
pub fn assortativity_from_counts(counts: &[Vec<u64>]) -> Result<f64> {
    let k = counts.len();
    let total: i128 = counts.iter().flatten().map(|&c| i128::from(c)).sum();
    if total == 0 {
        return Err(Error::Undefined("assortativity (no edges)"));
    }
    let trace: i128 = (0..k).map(|i| i128::from(counts[i][i])).sum();
    let ab: i128 = (0..k)
        .map(|i| {
            let a: i128 = counts[i].iter().map(|&c| i128::from(c)).sum();
            let b: i128 = counts.iter().map(|row| i128::from(row[i])).sum();
            a * b
        })
        .sum();
    let den = total * total - ab;
    if den == 0 {
        return Err(Error::Undefined("assortativity (a single group)"));
    }
    Ok((total * trace - ab) as f64 / den as f64)
}

pub fn assortativity(g: &MentionGraph, membership: &[Option<usize>]) -> Result<f64> {
    assortativity_from_counts(&mixing_counts(g, membership))
}

/// Each replicate draws a new membership for every grouped node, with
/// replacement, from the observed memberships.
pub fn assortativity_test(
    g: &MentionGraph,
    membership: &[Option<usize>],
    r: usize,
    seed: u64,
) -> Result<NullTestResult> {
    check_replicates(r)?;
    assert_eq!(membership.len(), g.node_count(), "one membership slot per node");
    let groups: std::collections::BTreeSet<usize> = membership.iter().flatten().copied().collect();
    if groups.len() < 2 {
        return Err(Error::Invalid("assortativity needs at least two communities".into()));
    }
    let observed = assortativity(g, membership)?;
    let pool: Vec<usize> = membership.iter().flatten().copied().collect();
    let reps = replicate(r, seed, |rng| {
        let drawn: Vec<Option<usize>> = membership
            .iter()
            .map(|m| m.map(|_| pool[rng.random_range(0..pool.len())]))
            .collect();
        assortativity(g, &drawn).ok()
    });
    let (reps, undefined) = flatten(reps);
    Ok(NullTestResult::new("assortativity", observed, reps, seed, undefined))
}

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::CascadeTree;
use crate::stats::{self, CcdfPoint};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeScores {
    pub n: usize,
    pub max_depth: u32,
    pub avg_depth: f64,
    /// Mean distance over ordered pairs; `None` for a lone seed.
    pub virality: Option<f64>,
    /// Sum of distances over unordered pairs.
    pub wiener: u64,
    pub depth_sum: u64,
}

/// Scores a tree given as a parent array (exactly one `None`). Nodes may be
/// listed in any order.
pub fn score_parents(parents: &[Option<usize>]) -> Result<CascadeScores> {
    let n = parents.len();
    if n == 0 {
        return Err(Error::Invalid("empty cascade".into()));
    }
    let mut children = vec![Vec::new(); n];
    let mut root = None;
    for (v, p) in parents.iter().enumerate() {
        match *p {
            None if root.is_some() => return Err(Error::Invalid("more than one root".into())),
            None => root = Some(v),
            Some(p) if p >= n || p == v => {
                return Err(Error::Invalid(format!("bad parent {p} for node {v}")))
            }
            Some(p) => children[p].push(v),
        }
    }
    let root = root.ok_or_else(|| Error::Invalid("no root".into()))?;

    let mut depth = vec![0u32; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &c in &children[v] {
            depth[c] = depth[v] + 1;
            queue.push_back(c);
        }
    }
    if order.len() != n {
        return Err(Error::Invalid("cascade is not connected".into()));
    }

    // each edge (v, parent) is crossed by size(v) * (n - size(v)) pairs
    let mut size = vec![1u64; n];
    let mut wiener = 0u64;
    for &v in order.iter().rev() {
        if let Some(p) = parents[v] {
            wiener += size[v] * (n as u64 - size[v]);
            size[p] += size[v];
        }
    }
    let depth_sum: u64 = depth.iter().map(|&d| d as u64).sum();
    let n64 = n as u64;
    Ok(CascadeScores {
        n,
        max_depth: depth.iter().copied().max().unwrap_or(0),
        avg_depth: depth_sum as f64 / n as f64,
        virality: (n >= 2).then(|| (2 * wiener) as f64 / (n64 * (n64 - 1)) as f64),
        wiener,
        depth_sum,
    })
}

pub fn score_cascade(tree: &CascadeTree) -> Result<CascadeScores> {
    score_parents(&tree.parents())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mode: Option<f64>,
    pub median: Option<f64>,
    pub mean: Option<f64>,
    pub ccdf: Vec<CcdfPoint>,
}

impl MetricSummary {
    fn of(values: &[f64]) -> Self {
        MetricSummary {
            mode: stats::mode(values),
            median: stats::median(values),
            mean: stats::mean(values),
            ccdf: stats::ccdf(values),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSummary {
    pub cascades: usize,
    pub max_depth: MetricSummary,
    pub avg_depth: MetricSummary,
    pub virality: MetricSummary,
    pub corr_max_avg: Option<f64>,
    pub corr_max_virality: Option<f64>,
    pub corr_avg_virality: Option<f64>,
}

/// Distribution summary over cascades with at least two nodes.
pub fn score_distributions(scores: &[CascadeScores]) -> ScoreSummary {
    let multi: Vec<&CascadeScores> = scores.iter().filter(|s| s.n >= 2).collect();
    let m: Vec<f64> = multi.iter().map(|s| s.max_depth as f64).collect();
    let a: Vec<f64> = multi.iter().map(|s| s.avg_depth).collect();
    let v: Vec<f64> = multi.iter().filter_map(|s| s.virality).collect();
    ScoreSummary {
        cascades: multi.len(),
        max_depth: MetricSummary::of(&m),
        avg_depth: MetricSummary::of(&a),
        virality: MetricSummary::of(&v),
        corr_max_avg: stats::pearson(&m, &a),
        corr_max_virality: stats::pearson(&m, &v),
        corr_avg_virality: stats::pearson(&a, &v),
    }
}

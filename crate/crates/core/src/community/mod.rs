//! Community detection on the sentiment-weighted mutual graph, side
//! classification, k-means merging of communities and validation.

mod kmeans;
mod labeling;
mod louvain;

use serde::{Deserialize, Serialize};

use crate::graph::MentionGraph;
use crate::Result;

pub use kmeans::{kmeans, kmeans_merge, silhouette, KMeansResult};
pub use labeling::{
    activity_series, block_summaries, classify_sides, community_summaries, filter_significant,
    link_fractions_by_community, validate, ActivityPoint, BlockSummary, CommunitySummary,
    LinkFractions, Retained, SideLabeling, UserLinkFractions, Validation,
};
pub use louvain::Louvain;

/// Undirected weighted graph used for modularity optimisation. Self loops
/// are kept apart from the neighbor lists; a loop of weight `w` adds `2w`
/// to its node's strength.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    /// Sorted `(neighbor, weight)` lists without self loops.
    pub adj: Vec<Vec<(usize, f64)>>,
    pub loops: Vec<f64>,
}

/// Which directed edge weight to symmetrise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Sentiment,
    MentionCount,
    Unit,
}

impl WeightedGraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut loops = vec![0.0; n];
        for (a, b, w) in edges {
            if a == b {
                loops[a] += w;
            } else {
                adj[a].push((b, w));
                adj[b].push((a, w));
            }
        }
        for list in &mut adj {
            list.sort_by_key(|x| x.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(list.len());
            for &(v, w) in list.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == v => last.1 += w,
                    _ => merged.push((v, w)),
                }
            }
            *list = merged;
        }
        WeightedGraph { adj, loops }
    }

    /// Symmetrised projection of a directed mention graph: the weight of
    /// `{a, b}` is `w(a->b) + w(b->a)`.
    pub fn from_mention_graph(g: &MentionGraph, kind: WeightKind) -> Self {
        WeightedGraph::from_edges(
            g.node_count(),
            g.edges().iter().map(|e| {
                let w = match kind {
                    WeightKind::Sentiment => e.sentiment_weight,
                    WeightKind::MentionCount => f64::from(e.mention_count),
                    WeightKind::Unit => 1.0,
                };
                (e.src, e.dst, w)
            }),
        )
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn strength(&self, node: usize) -> f64 {
        self.adj[node].iter().map(|x| x.1).sum::<f64>() + 2.0 * self.loops[node]
    }

    /// Twice the total edge weight.
    pub fn total_strength(&self) -> f64 {
        (0..self.node_count()).map(|u| self.strength(u)).sum()
    }

    pub fn is_weightless(&self) -> bool {
        self.total_strength() <= 0.0
    }

    pub fn scaled(&self, factor: f64) -> WeightedGraph {
        WeightedGraph {
            adj: self
                .adj
                .iter()
                .map(|l| l.iter().map(|&(v, w)| (v, w * factor)).collect())
                .collect(),
            loops: self.loops.iter().map(|w| w * factor).collect(),
        }
    }
}

/// Newman modularity `sum_c [ e_c / m - (d_c / 2m)^2 ]` of a node labelling.
pub fn modularity(g: &WeightedGraph, assignment: &[usize]) -> f64 {
    let two_m = g.total_strength();
    if two_m <= 0.0 {
        return 0.0;
    }
    let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for u in 0..g.node_count() {
        let c = assignment[u];
        degree[c] += g.strength(u);
        internal[c] += 2.0 * g.loops[u];
        for &(v, w) in &g.adj[u] {
            if assignment[v] == c {
                internal[c] += w;
            }
        }
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(i, d)| i / two_m - (d / two_m).powi(2))
        .sum()
}

/// A community detection method over the symmetrised weighted graph.
/// Returns one community label per node.
pub trait CommunityDetector {
    fn name(&self) -> &str;
    fn detect(&self, graph: &WeightedGraph) -> Result<Vec<usize>>;
}

/// Node -> community map over a graph's nodes. Community ids are ordered by
/// size (largest first), ties by smallest member index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityPartition {
    pub users: Vec<String>,
    pub assignment: Vec<usize>,
    pub sizes: Vec<usize>,
    pub modularity: f64,
    pub method: String,
    /// Set when the weights were all zero and unit weights were used.
    pub unit_weight_fallback: bool,
}

impl CommunityPartition {
    pub fn community_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn members(&self, community: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&u| self.assignment[u] == community)
            .collect()
    }

    pub fn community_of(&self, user: &str) -> Option<usize> {
        self.users
            .binary_search_by(|u| u.as_str().cmp(user))
            .ok()
            .map(|i| self.assignment[i])
    }
}

/// Relabels communities by size (descending), ties by smallest member.
pub fn canonical_labels(assignment: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
    let mut size = vec![0usize; k];
    let mut first = vec![usize::MAX; k];
    for (u, &c) in assignment.iter().enumerate() {
        size[c] += 1;
        first[c] = first[c].min(u);
    }
    let mut order: Vec<usize> = (0..k).filter(|&c| size[c] > 0).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(size[c]), first[c]));
    let mut relabel = vec![usize::MAX; k];
    for (new, &old) in order.iter().enumerate() {
        relabel[old] = new;
    }
    (
        assignment.iter().map(|&c| relabel[c]).collect(),
        order.iter().map(|&c| size[c]).collect(),
    )
}

/// Runs a detector on the sentiment-weighted symmetrised graph. When every
/// weight is zero the graph is re-weighted with unit weights.
pub fn detect_communities(
    g: &MentionGraph,
    detector: &dyn CommunityDetector,
) -> Result<CommunityPartition> {
    let mut wg = WeightedGraph::from_mention_graph(g, WeightKind::Sentiment);
    let mut fallback = false;
    if wg.is_weightless() && g.edge_count() > 0 {
        log::warn!("all sentiment weights are zero; using unit weights");
        wg = WeightedGraph::from_mention_graph(g, WeightKind::Unit);
        fallback = true;
    }
    let raw = detector.detect(&wg)?;
    let (assignment, sizes) = canonical_labels(&raw);
    Ok(CommunityPartition {
        users: g.nodes().to_vec(),
        modularity: modularity(&wg, &assignment),
        assignment,
        sizes,
        method: detector.name().to_string(),
        unit_weight_fallback: fallback,
    })
}

/// One row of a method comparison: modularity, number of communities and
/// number with at least `min_size` members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: String,
    pub modularity: f64,
    pub communities: usize,
    pub significant: usize,
}

pub fn compare_methods(
    g: &MentionGraph,
    detectors: &[&dyn CommunityDetector],
    min_size: usize,
) -> Result<Vec<MethodReport>> {
    detectors
        .iter()
        .map(|d| {
            let p = detect_communities(g, *d)?;
            Ok(MethodReport {
                method: p.method.clone(),
                modularity: p.modularity,
                communities: p.community_count(),
                significant: p.sizes.iter().filter(|&&s| s >= min_size).count(),
            })
        })
        .collect()
}

//! Directed mention graph and its reductions.
//!
//! Nodes are kept sorted by user id and edges sorted by `(src, dst)`, so
//! node index order is lexicographic id order and every derived structure is
//! deterministic.

mod scc;
mod stats;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::ingest::TweetRecord;

pub use scc::strongly_connected_components;
pub use stats::{compute_stats, local_clustering, GraphStats, NodeStats};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    /// Number of tweets by `src` mentioning `dst`.
    pub mention_count: u32,
    /// Absolute mean sentiment of those tweets; zero until scored.
    pub sentiment_weight: f64,
    pub tweet_ids: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MentionGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    out_start: Vec<usize>,
}

/// `(src, dst, mention_count, tweet_ids)` keyed by user ids.
pub type EdgeSpec = (String, String, u32, Vec<String>);

impl MentionGraph {
    /// Builds a graph from id-keyed edges. Self loops are dropped and
    /// parallel entries merged. `extra_nodes` adds isolated nodes.
    pub fn from_edges(edges: impl IntoIterator<Item = EdgeSpec>, extra_nodes: &[String]) -> Self {
        let mut merged: BTreeMap<(String, String), (u32, Vec<String>)> = BTreeMap::new();
        for (src, dst, count, ids) in edges {
            if src == dst {
                continue;
            }
            let slot = merged.entry((src, dst)).or_default();
            slot.0 += count;
            slot.1.extend(ids);
        }
        let mut nodes: Vec<String> = merged
            .keys()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .chain(extra_nodes.iter().cloned())
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        let index: HashMap<String, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((s, d), (count, mut ids))| {
                ids.sort_unstable();
                Edge {
                    src: index[&s],
                    dst: index[&d],
                    mention_count: count,
                    sentiment_weight: 0.0,
                    tweet_ids: ids,
                }
            })
            .collect();
        Self::assemble(nodes, index, edges)
    }

    fn assemble(nodes: Vec<String>, index: HashMap<String, usize>, mut edges: Vec<Edge>) -> Self {
        edges.sort_by_key(|e| (e.src, e.dst));
        let mut out_start = vec![0; nodes.len() + 1];
        for e in &edges {
            out_start[e.src + 1] += 1;
        }
        for i in 0..nodes.len() {
            out_start[i + 1] += out_start[i];
        }
        MentionGraph {
            nodes,
            index,
            edges,
            out_start,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_id(&self, idx: usize) -> &str {
        &self.nodes[idx]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, node: usize) -> &[Edge] {
        &self.edges[self.out_start[node]..self.out_start[node + 1]]
    }

    pub fn out_neighbors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_edges(node).iter().map(|e| e.dst)
    }

    pub fn edge(&self, src: usize, dst: usize) -> Option<&Edge> {
        let out = self.out_edges(src);
        out.binary_search_by_key(&dst, |e| e.dst).ok().map(|i| &out[i])
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.edge(src, dst).is_some()
    }

    /// Edge lookup by user ids.
    pub fn mentions(&self, src: &str, dst: &str) -> bool {
        match (self.index_of(src), self.index_of(dst)) {
            (Some(s), Some(d)) => self.has_edge(s, d),
            _ => false,
        }
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|u| self.out_edges(u).len()).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.node_count()];
        for e in &self.edges {
            d[e.dst] += 1;
        }
        d
    }

    pub fn total_mentions(&self) -> u64 {
        self.edges.iter().map(|e| u64::from(e.mention_count)).sum()
    }

    /// Sets every edge's sentiment weight from a callback.
    pub fn set_sentiment_weights(&mut self, mut weight: impl FnMut(&Edge) -> f64) {
        for e in &mut self.edges {
            e.sentiment_weight = weight(e);
        }
    }

    /// Subgraph induced by the nodes with `keep[i]`, optionally dropping
    /// nodes left without any edge.
    pub fn induced(&self, keep: &[bool], drop_isolated: bool) -> MentionGraph {
        let kept_edges: Vec<&Edge> = self
            .edges
            .iter()
            .filter(|e| keep[e.src] && keep[e.dst])
            .collect();
        let mut used = keep.to_vec();
        if drop_isolated {
            used = vec![false; self.node_count()];
            for e in &kept_edges {
                used[e.src] = true;
                used[e.dst] = true;
            }
        }
        let mut remap = vec![usize::MAX; self.node_count()];
        let mut nodes = Vec::new();
        for (i, id) in self.nodes.iter().enumerate() {
            if used[i] {
                remap[i] = nodes.len();
                nodes.push(id.clone());
            }
        }
        let index = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let edges = kept_edges
            .into_iter()
            .map(|e| Edge {
                src: remap[e.src],
                dst: remap[e.dst],
                ..e.clone()
            })
            .collect();
        Self::assemble(nodes, index, edges)
    }

    /// Same node set, only the edges accepted by `keep`.
    pub fn filter_edges(&self, keep: impl Fn(&Edge) -> bool) -> MentionGraph {
        let edges = self.edges.iter().filter(|e| keep(e)).cloned().collect();
        Self::assemble(self.nodes.clone(), self.index.clone(), edges)
    }

    /// Undirected simple projection: sorted neighbor lists without self loops.
    pub fn undirected_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count()];
        for e in &self.edges {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Unordered pairs `{a, b}` with edges in both directions.
    pub fn reciprocal_pairs(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.src < e.dst && self.has_edge(e.dst, e.src))
            .count()
    }
}

/// One edge per (sender, mentioned user) pair over all tweets; repeated
/// mentions are merged into the count and tweet index. Self mentions are
/// dropped.
pub fn build_mention_graph(tweets: &[TweetRecord]) -> MentionGraph {
    let edges = tweets.iter().flat_map(|t| {
        let mut targets: Vec<&String> = t.mentions.iter().collect();
        targets.sort_unstable();
        targets.dedup();
        targets
            .into_iter()
            .map(move |m| (t.user_id.clone(), m.clone(), 1, vec![t.tweet_id.clone()]))
    });
    MentionGraph::from_edges(edges, &[])
}

/// Keeps both directions of every reciprocated pair and drops the rest,
/// including nodes left isolated.
pub fn mutual_reduce(g: &MentionGraph) -> MentionGraph {
    let reduced = g.filter_edges(|e| g.has_edge(e.dst, e.src));
    reduced.induced(&vec![true; reduced.node_count()], true)
}

/// Subgraph induced on the largest strongly connected component. Equal
/// sizes go to the component holding the lexicographically smallest id.
pub fn largest_scc(g: &MentionGraph) -> MentionGraph {
    let comps = strongly_connected_components(g);
    let best = comps
        .iter()
        .max_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| b.iter().min().cmp(&a.iter().min()))
        });
    let mut keep = vec![false; g.node_count()];
    if let Some(c) = best {
        for &u in c {
            keep[u] = true;
        }
    }
    g.induced(&keep, false)
}

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MentionGraph;
use crate::stats::{ccdf, CcdfPoint};

/// Per-node descriptive values, indexed like the graph's nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeStats {
    pub user_id: String,
    pub in_degree: usize,
    pub out_degree: usize,
    /// Sum of mention counts over out-edges.
    pub out_mentions: u64,
    pub clustering: f64,
    /// Mean BFS distance to every other reachable node; `None` if isolated.
    pub mean_geodesic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub links: usize,
    pub mentions: u64,
    pub reciprocal_pairs: usize,
    /// links / nodes (merged edges).
    pub avg_out_degree: f64,
    /// mentions / nodes (every mention counted).
    pub avg_out_mentions: f64,
    pub density: f64,
    pub avg_clustering: f64,
    pub transitivity: f64,
    pub avg_geodesic: f64,
    pub in_degree_ccdf: Vec<CcdfPoint>,
    pub out_degree_ccdf: Vec<CcdfPoint>,
    #[serde(skip)]
    pub per_node: Vec<NodeStats>,
}

/// Local clustering on an undirected simple adjacency (sorted lists).
/// Nodes with fewer than two neighbors get 0.
pub fn local_clustering(adj: &[Vec<usize>]) -> Vec<(f64, u64, u64)> {
    adj.par_iter()
        .map(|nbrs| {
            let k = nbrs.len() as u64;
            if k < 2 {
                return (0.0, 0, 0);
            }
            let mut links = 0u64;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if adj[a].binary_search(&b).is_ok() {
                        links += 1;
                    }
                }
            }
            let triples = k * (k - 1) / 2;
            (links as f64 / triples as f64, links, triples)
        })
        .collect()
}

fn mean_geodesic(adj: &[Vec<usize>], source: usize) -> Option<f64> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    let (mut total, mut reached) = (0u64, 0u64);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                total += dist[v] as u64;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    (reached > 0).then(|| total as f64 / reached as f64)
}

/// Degree distributions on the directed graph; clustering, transitivity and
/// geodesic distances on its undirected projection.
pub fn compute_stats(g: &MentionGraph) -> GraphStats {
    let n = g.node_count();
    let adj = g.undirected_neighbors();
    let clustering = local_clustering(&adj);
    let geodesic: Vec<Option<f64>> = (0..n)
        .into_par_iter()
        .map(|u| mean_geodesic(&adj, u))
        .collect();
    let ins = g.in_degrees();
    let outs = g.out_degrees();

    let per_node: Vec<NodeStats> = (0..n)
        .map(|u| NodeStats {
            user_id: g.node_id(u).to_string(),
            in_degree: ins[u],
            out_degree: outs[u],
            out_mentions: g.out_edges(u).iter().map(|e| u64::from(e.mention_count)).sum(),
            clustering: clustering[u].0,
            mean_geodesic: geodesic[u],
        })
        .collect();

    let (links, triples) = clustering
        .iter()
        .fold((0u64, 0u64), |(l, t), c| (l + c.1, t + c.2));
    let nf = n.max(1) as f64;
    let defined_geo: Vec<f64> = geodesic.iter().flatten().copied().collect();
    let as_f64 = |v: &[usize]| v.iter().map(|&d| d as f64).collect::<Vec<_>>();

    GraphStats {
        nodes: n,
        links: g.edge_count(),
        mentions: g.total_mentions(),
        reciprocal_pairs: g.reciprocal_pairs(),
        avg_out_degree: g.edge_count() as f64 / nf,
        avg_out_mentions: g.total_mentions() as f64 / nf,
        density: if n > 1 {
            g.edge_count() as f64 / (n as f64 * (n - 1) as f64)
        } else {
            0.0
        },
        avg_clustering: clustering.iter().map(|c| c.0).sum::<f64>() / nf,
        transitivity: if triples > 0 {
            links as f64 / triples as f64
        } else {
            0.0
        },
        avg_geodesic: if defined_geo.is_empty() {
            0.0
        } else {
            defined_geo.iter().sum::<f64>() / defined_geo.len() as f64
        },
        in_degree_ccdf: ccdf(&as_f64(&ins)),
        out_degree_ccdf: ccdf(&as_f64(&outs)),
        per_node,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(edges: &[(&str, &str)]) -> MentionGraph {
        MentionGraph::from_edges(
            edges.iter().flat_map(|(a, b)| {
                [
                    (a.to_string(), b.to_string(), 1, vec![]),
                    (b.to_string(), a.to_string(), 1, vec![]),
                ]
            }),
            &[],
        )
    }

    #[test]
    fn triangle() {
        let s = compute_stats(&undirected(&[("a", "b"), ("b", "c"), ("c", "a")]));
        assert!(s.per_node.iter().all(|n| n.clustering == 1.0));
        assert_eq!(s.transitivity, 1.0);
        assert!(s.per_node.iter().all(|n| n.mean_geodesic == Some(1.0)));
        assert_eq!(s.reciprocal_pairs, 3);
        assert_eq!(s.density, 1.0);
    }

    /// Counts closed pairs among each node's neighbors by brute force over
    /// all node triples.
    fn brute_clustering(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
        let linked = |a: usize, b: usize| edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a));
        (0..n)
            .map(|v| {
                let nb: Vec<usize> = (0..n).filter(|&u| u != v && linked(u, v)).collect();
                if nb.len() < 2 {
                    return 0.0;
                }
                let mut closed = 0;
                let mut total = 0;
                for i in 0..nb.len() {
                    for j in i + 1..nb.len() {
                        total += 1;
                        if linked(nb[i], nb[j]) {
                            closed += 1;
                        }
                    }
                }
                closed as f64 / total as f64
            })
            .collect()
    }

    #[test]
    fn star_and_path() {
        // center "a"
        let star = compute_stats(&undirected(&[("a", "b"), ("a", "c"), ("a", "d")]));
        let expect = brute_clustering(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(expect, [0.0; 4]);
        assert_eq!(star.per_node.iter().map(|n| n.clustering).collect::<Vec<_>>(), expect);
        assert_eq!(star.transitivity, 0.0);

        let path = compute_stats(&undirected(&[("a", "b"), ("b", "c")]));
        assert_eq!(path.transitivity, 0.0);
        assert_eq!(path.per_node[1].mean_geodesic, Some(1.0));
        assert_eq!(path.per_node[0].mean_geodesic, Some(1.5));
    }

    #[test]
    fn clustering_matches_triple_enumeration() {
        let edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2), (0, 4), (5, 0)];
        let names = ["a", "b", "c", "d", "e", "f"];
        let named: Vec<(&str, &str)> = edges.iter().map(|&(x, y)| (names[x], names[y])).collect();
        let s = compute_stats(&undirected(&named));
        let got: Vec<f64> = s.per_node.iter().map(|n| n.clustering).collect();
        assert_eq!(got, brute_clustering(6, &edges));
    }

    #[test]
    fn directed_degrees_and_ccdf() {
        let g = MentionGraph::from_edges(
            [("a", "b", 3), ("b", "a", 1), ("a", "c", 1), ("c", "a", 2)]
                .iter()
                .map(|&(s, d, c)| (s.to_string(), d.to_string(), c, vec![])),
            &[],
        );
        let s = compute_stats(&g);
        assert_eq!(s.mentions, 7);
        assert_eq!(s.avg_out_degree, 4.0 / 3.0);
        assert_eq!(s.avg_out_mentions, 7.0 / 3.0);
        assert_eq!(s.per_node[0].out_mentions, 4);
        assert_eq!(s.out_degree_ccdf[0].fraction, 1.0);
        assert_eq!(s.out_degree_ccdf.last().unwrap().value, 2.0);
        assert_eq!(s.out_degree_ccdf.last().unwrap().fraction, 1.0 / 3.0);
    }
}

use rand::seq::SliceRandom;

use super::{CommunityDetector, WeightedGraph};
use crate::rng;
use crate::Result;

/// Multi-level Louvain modularity optimisation.
///
/// Each level visits nodes in an order shuffled from `(seed, level)`, moves
/// every node to the neighboring community with the largest strictly
/// positive modularity gain (ties to the smallest community id) until a full
/// pass makes no move, then collapses communities into super-nodes.
#[derive(Debug, Clone)]
pub struct Louvain {
    pub seed: u64,
    /// Cap on local-moving passes per level.
    pub max_passes: usize,
}

impl Louvain {
    pub fn new(seed: u64) -> Self {
        Louvain {
            seed,
            max_passes: 1000,
        }
    }

    /// Returns a community label per node of `g`.
    pub fn run(&self, g: &WeightedGraph) -> Vec<usize> {
        let n = g.node_count();
        let mut membership: Vec<usize> = (0..n).collect();
        let mut level_graph = g.clone();
        let mut level = 0u64;
        loop {
            let (moved, local) = self.local_moving(&level_graph, level);
            if !moved {
                break;
            }
            let (renumbered, k) = renumber(&local);
            for c in &mut membership {
                *c = renumbered[*c];
            }
            if k == level_graph.node_count() {
                break;
            }
            level_graph = aggregate(&level_graph, &renumbered, k);
            level += 1;
        }
        membership
    }

    fn local_moving(&self, g: &WeightedGraph, level: u64) -> (bool, Vec<usize>) {
        let n = g.node_count();
        let strength: Vec<f64> = (0..n).map(|u| g.strength(u)).collect();
        let two_m: f64 = strength.iter().sum();
        let mut comm: Vec<usize> = (0..n).collect();
        if two_m <= 0.0 {
            return (false, comm);
        }
        let mut tot = strength.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng::stream(self.seed, level));

        let mut link = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut is_touched = vec![false; n];
        let mut any_move = false;
        for _ in 0..self.max_passes {
            let mut moved = false;
            for &u in &order {
                let old = comm[u];
                let k = strength[u];
                for &(v, w) in &g.adj[u] {
                    let c = comm[v];
                    if !is_touched[c] {
                        is_touched[c] = true;
                        touched.push(c);
                    }
                    link[c] += w;
                }
                tot[old] -= k;
                let gain = |c: usize, link_c: f64, tot: &[f64]| link_c - tot[c] * k / two_m;

                let mut best = old;
                let mut best_gain = gain(old, link[old], &tot);
                touched.sort_unstable();
                for &c in &touched {
                    let g_c = gain(c, link[c], &tot);
                    if g_c > best_gain {
                        best = c;
                        best_gain = g_c;
                    }
                }
                tot[best] += k;
                comm[u] = best;
                if best != old {
                    moved = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                    is_touched[c] = false;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        (any_move, comm)
    }
}

fn renumber(comm: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; comm.len()];
    let mut next = 0;
    let out = comm
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect();
    (out, next)
}

fn aggregate(g: &WeightedGraph, comm: &[usize], k: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut loops = vec![0.0; k];
    for u in 0..g.node_count() {
        loops[comm[u]] += g.loops[u];
        for &(v, w) in &g.adj[u] {
            // each undirected edge appears twice in adj
            if u < v {
                edges.push((comm[u], comm[v], w));
            }
        }
    }
    let mut agg = WeightedGraph::from_edges(k, edges);
    for (c, w) in loops.into_iter().enumerate() {
        agg.loops[c] += w;
    }
    agg
}

impl CommunityDetector for Louvain {
    fn name(&self) -> &str {
        "louvain"
    }

    fn detect(&self, graph: &WeightedGraph) -> Result<Vec<usize>> {
        Ok(self.run(graph))
    }
}

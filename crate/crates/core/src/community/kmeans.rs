use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng;
use crate::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 100;
pub const DEFAULT_MAX_ITER: usize = 300;
pub const MAX_AUTO_K: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult {
    pub k: usize,
    /// Cluster per point; clusters numbered by first appearance.
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub sse: f64,
    pub iterations: usize,
    /// SSE after every Lloyd iteration of the winning restart.
    pub sse_trace: Vec<f64>,
    pub silhouette: Option<f64>,
    pub warnings: Vec<String>,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, cen) in centroids.iter().enumerate() {
        let d = dist2(p, cen);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_seed<R: Rng>(points: &[Vec<f64>], k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut centroids = vec![points[rng.random_range(0..points.len())].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = points.len() - 1;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 && target < d {
                    chosen = i;
                    break;
                }
                target -= d;
            }
            chosen
        } else {
            rng.random_range(0..points.len())
        };
        centroids.push(points[pick].clone());
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(dist2(p, &centroids[centroids.len() - 1]));
        }
    }
    centroids
}

struct Run {
    assignment: Vec<usize>,
    centroids: Vec<Vec<f64>>,
    sse: f64,
    trace: Vec<f64>,
}

fn lloyd(points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>, max_iter: usize) -> Run {
    let dim = points[0].len();
    let k = centroids.len();
    let mut assignment = vec![usize::MAX; points.len()];
    let mut trace = Vec::new();
    for _ in 0..max_iter {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let (c, _) = nearest(p, &centroids);
            if assignment[i] != c {
                assignment[i] = c;
                changed = true;
            }
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            for (s, x) in sums[c].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            // empty clusters keep their previous centroid
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        trace.push(sse(points, &assignment, &centroids));
        if !changed {
            break;
        }
    }
    Run {
        sse: *trace.last().unwrap_or(&0.0),
        assignment,
        centroids,
        trace,
    }
}

fn sse(points: &[Vec<f64>], assignment: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .zip(assignment)
        .map(|(p, &c)| dist2(p, &centroids[c]))
        .sum()
}

fn distinct_count(points: &[Vec<f64>]) -> usize {
    let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
    sorted.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    sorted.dedup();
    sorted.len()
}

/// Lloyd's k-means with k-means++ seeding; keeps the lowest-SSE restart
/// (earliest on ties). Restart `r` draws from stream `(seed, r)`.
pub fn kmeans(
    points: &[Vec<f64>],
    k: usize,
    seed: u64,
    restarts: usize,
    max_iter: usize,
) -> Result<KMeansResult> {
    if points.is_empty() {
        return Err(Error::Invalid("k-means needs at least one point".into()));
    }
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    if points.iter().any(|p| p.iter().any(|x| !x.is_finite())) {
        return Err(Error::Invalid("k-means features must be finite".into()));
    }
    let mut warnings = Vec::new();
    let distinct = distinct_count(points);
    let k = if distinct < k {
        let msg = format!("only {distinct} distinct points; k reduced from {k} to {distinct}");
        log::warn!("{msg}");
        warnings.push(msg);
        distinct
    } else {
        k
    };

    let mut best: Option<Run> = None;
    for r in 0..restarts.max(1) {
        let mut rng = rng::stream(seed, r as u64);
        let run = lloyd(points, plus_plus_seed(points, k, &mut rng), max_iter);
        if best.as_ref().is_none_or(|b| run.sse < b.sse) {
            best = Some(run);
        }
    }
    let run = best.expect("at least one restart");

    // number clusters by first appearance
    let mut relabel = vec![usize::MAX; k];
    let mut next = 0;
    for &c in &run.assignment {
        if relabel[c] == usize::MAX {
            relabel[c] = next;
            next += 1;
        }
    }
    let mut centroids = vec![Vec::new(); next];
    for (old, &new) in relabel.iter().enumerate() {
        if new != usize::MAX {
            centroids[new] = run.centroids[old].clone();
        }
    }
    let assignment: Vec<usize> = run.assignment.iter().map(|&c| relabel[c]).collect();
    Ok(KMeansResult {
        k: next,
        silhouette: (next >= 2).then(|| silhouette(points, &assignment)),
        iterations: run.trace.len(),
        sse: run.sse,
        sse_trace: run.trace,
        assignment,
        centroids,
        warnings,
    })
}

/// Mean silhouette width; points alone in their cluster score 0.
pub fn silhouette(points: &[Vec<f64>], assignment: &[usize]) -> f64 {
    let k = assignment.iter().copied().max().map_or(0, |m| m + 1);
    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut sum = vec![0.0; k];
        let mut count = vec![0usize; k];
        for j in 0..n {
            if i != j {
                sum[assignment[j]] += dist2(&points[i], &points[j]).sqrt();
                count[assignment[j]] += 1;
            }
        }
        let own = assignment[i];
        if count[own] == 0 {
            continue;
        }
        let a = sum[own] / count[own] as f64;
        let b = (0..k)
            .filter(|&c| c != own && count[c] > 0)
            .map(|c| sum[c] / count[c] as f64)
            .fold(f64::INFINITY, f64::min);
        if !b.is_finite() {
            continue;
        }
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}

/// Clusters community feature vectors. With `k = None`, tries every k in
/// `2..=min(8, distinct points)` and keeps the best mean silhouette
/// (smallest k on ties).
pub fn kmeans_merge(points: &[Vec<f64>], k: Option<usize>, seed: u64) -> Result<KMeansResult> {
    if let Some(k) = k {
        return kmeans(points, k, seed, DEFAULT_RESTARTS, DEFAULT_MAX_ITER);
    }
    let kmax = MAX_AUTO_K.min(distinct_count(points));
    if kmax < 2 {
        return kmeans(points, 1, seed, DEFAULT_RESTARTS, DEFAULT_MAX_ITER);
    }
    let mut best: Option<KMeansResult> = None;
    for k in 2..=kmax {
        let r = kmeans(points, k, seed, DEFAULT_RESTARTS, DEFAULT_MAX_ITER)?;
        let s = r.silhouette.unwrap_or(f64::NEG_INFINITY);
        if best
            .as_ref()
            .is_none_or(|b| s > b.silhouette.unwrap_or(f64::NEG_INFINITY))
        {
            best = Some(r);
        }
    }
    Ok(best.expect("k range is non-empty"))
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::CascadeTree;
use crate::types::Side;

pub const DEFAULT_MIN_CLASSIFIED: usize = 10;
const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeSideStats {
    pub cascade_id: usize,
    pub n: usize,
    pub seed_side: Option<Side>,
    pub n_classified: usize,
    pub n_yes: usize,
    pub n_no: usize,
    pub prop_yes: Option<f64>,
    /// Fraction of classified nodes on the seed's side.
    pub seed_side_fraction: Option<f64>,
}

pub fn cascade_side_stats(tree: &CascadeTree) -> CascadeSideStats {
    let n_yes = tree.nodes.iter().filter(|n| n.side == Some(Side::Yes)).count();
    let n_no = tree.nodes.iter().filter(|n| n.side == Some(Side::No)).count();
    let n_classified = n_yes + n_no;
    let frac = |k: usize| (n_classified > 0).then(|| k as f64 / n_classified as f64);
    let seed_side = tree.seed_side();
    CascadeSideStats {
        cascade_id: tree.cascade_id,
        n: tree.size(),
        seed_side,
        n_classified,
        n_yes,
        n_no,
        prop_yes: frac(n_yes),
        seed_side_fraction: seed_side.and_then(|s| match s {
            Side::Yes => frac(n_yes),
            Side::No => frac(n_no),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeBin {
    /// Under half of the classified users share the seed's side.
    Changed,
    From50To60,
    From60To100,
    Unchanged,
}

impl ChangeBin {
    pub fn of(seed_side_fraction: f64) -> ChangeBin {
        if seed_side_fraction < 0.5 {
            ChangeBin::Changed
        } else if seed_side_fraction < 0.6 {
            ChangeBin::From50To60
        } else if seed_side_fraction < 1.0 {
            ChangeBin::From60To100
        } else {
            ChangeBin::Unchanged
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinCounts {
    pub total: usize,
    pub changed: usize,
    pub from_50_to_60: usize,
    pub from_60_to_100: usize,
    pub unchanged: usize,
}

impl BinCounts {
    fn add(&mut self, bin: ChangeBin) {
        self.total += 1;
        match bin {
            ChangeBin::Changed => self.changed += 1,
            ChangeBin::From50To60 => self.from_50_to_60 += 1,
            ChangeBin::From60To100 => self.from_60_to_100 += 1,
            ChangeBin::Unchanged => self.unchanged += 1,
        }
    }

    fn merge(&mut self, o: &BinCounts) {
        self.total += o.total;
        self.changed += o.changed;
        self.from_50_to_60 += o.from_50_to_60;
        self.from_60_to_100 += o.from_60_to_100;
        self.unchanged += o.unchanged;
    }

    fn share(&self, k: usize) -> Option<f64> {
        (self.total > 0).then(|| k as f64 / self.total as f64)
    }

    pub fn unchanged_fraction(&self) -> Option<f64> {
        self.share(self.unchanged)
    }

    /// Cascades that stayed on the seed's side: unchanged or at least 60%.
    pub fn retained_fraction(&self) -> Option<f64> {
        self.share(self.unchanged + self.from_60_to_100)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SeedTallies {
    pub yes: usize,
    pub no: usize,
    pub unknown: usize,
    pub yes_fraction: Option<f64>,
    pub no_fraction: Option<f64>,
    pub largest_yes: usize,
    pub largest_no: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffusionReport {
    pub cascades: usize,
    pub multi_node: usize,
    /// Seed sides over multi-node cascades.
    pub seeds: SeedTallies,
    /// Multi-node cascades with a classified seed, by seed side.
    pub bins: BTreeMap<String, BinCounts>,
    pub bins_overall: BinCounts,
    pub unchanged_fraction: Option<f64>,
    pub retained_fraction: Option<f64>,
    pub min_classified: usize,
    /// Cascades with at least `min_classified` classified users.
    pub histogram_cascades: usize,
    /// Counts of `prop_yes` in ten equal-width bins over [0, 1].
    pub prop_yes_histogram: Vec<usize>,
    /// Histogram cascades with `prop_yes` strictly inside (0.25, 0.75).
    pub mixed: usize,
}

pub fn diffusion_analysis(trees: &[CascadeTree], min_classified: usize) -> DiffusionReport {
    let stats: Vec<CascadeSideStats> = trees.iter().map(cascade_side_stats).collect();
    let mut seeds = SeedTallies::default();
    let mut bins: BTreeMap<String, BinCounts> = [Side::Yes, Side::No]
        .iter()
        .map(|s| (s.as_str().to_string(), BinCounts::default()))
        .collect();
    let mut histogram = vec![0usize; HISTOGRAM_BINS];
    let mut histogram_cascades = 0;
    let mut mixed = 0;

    let multi: Vec<&CascadeSideStats> = stats.iter().filter(|s| s.n >= 2).collect();
    for s in &multi {
        match s.seed_side {
            Some(Side::Yes) => {
                seeds.yes += 1;
                seeds.largest_yes = seeds.largest_yes.max(s.n);
            }
            Some(Side::No) => {
                seeds.no += 1;
                seeds.largest_no = seeds.largest_no.max(s.n);
            }
            None => seeds.unknown += 1,
        }
        if let (Some(side), Some(f)) = (s.seed_side, s.seed_side_fraction) {
            bins.get_mut(side.as_str()).unwrap().add(ChangeBin::of(f));
        }
    }
    if !multi.is_empty() {
        seeds.yes_fraction = Some(seeds.yes as f64 / multi.len() as f64);
        seeds.no_fraction = Some(seeds.no as f64 / multi.len() as f64);
    }
    for s in &stats {
        if s.n_classified < min_classified.max(1) {
            continue;
        }
        let p = s.prop_yes.expect("classified users present");
        histogram_cascades += 1;
        histogram[((p * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1)] += 1;
        if p > 0.25 && p < 0.75 {
            mixed += 1;
        }
    }
    let mut overall = BinCounts::default();
    for b in bins.values() {
        overall.merge(b);
    }
    DiffusionReport {
        cascades: trees.len(),
        multi_node: multi.len(),
        seeds,
        unchanged_fraction: overall.unchanged_fraction(),
        retained_fraction: overall.retained_fraction(),
        bins,
        bins_overall: overall,
        min_classified,
        histogram_cascades,
        prop_yes_histogram: histogram,
        mixed,
    }
}

//! Retweet cascades: group tweets by normalised text, attribute every
//! retweet to the most recent earlier sharer it is linked to, and score and
//! summarise the resulting trees.

mod bucket;
mod diffusion;
mod reconstruct;
mod scores;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::types::Side;

pub use bucket::{bucket_retweets, normalize_text, BucketMember, RetweetBucket};
pub use diffusion::{
    cascade_side_stats, diffusion_analysis, BinCounts, CascadeSideStats, ChangeBin,
    DiffusionReport, SeedTallies, DEFAULT_MIN_CLASSIFIED,
};
pub use reconstruct::{
    attribute_parents, choose_parent, reconstruct_all, EdgeOracle, LinkSet, ParentStrategy,
    Reconstruction,
};
pub use scores::{
    score_cascade, score_distributions, score_parents, CascadeScores, MetricSummary,
    ScoreSummary,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeNode {
    pub user_id: String,
    pub tweet_id: String,
    pub created_at: DateTime<Utc>,
    /// Index of the parent node in the same tree; `None` for the seed.
    pub parent: Option<usize>,
    pub side: Option<Side>,
}

/// A rooted cascade. `nodes[0]` is the seed and every parent precedes its
/// children in `nodes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeTree {
    pub cascade_id: usize,
    pub bucket_id: usize,
    pub nodes: Vec<CascadeNode>,
}

impl CascadeTree {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> &CascadeNode {
        &self.nodes[0]
    }

    pub fn seed_side(&self) -> Option<Side> {
        self.nodes[0].side
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        self.nodes.iter().map(|n| n.parent).collect()
    }

    /// Tags every node with a side from a lookup on user id.
    pub fn tag_sides(&mut self, side_of: impl Fn(&str) -> Option<Side>) {
        for n in &mut self.nodes {
            n.side = side_of(&n.user_id);
        }
    }
}

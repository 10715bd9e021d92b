//! Sentiment-scored mention networks, polarised community detection,
//! randomization null models and retweet cascade reconstruction.
//!
//! The crate is organised as a batch pipeline. Each stage is usable on its
//! own from Rust (and from Python through the companion bindings crate):
//!
//! - [`ingest`]: tweet archives, lexicons, annotations and follower lists.
//! - [`sentiment`]: unigram scoring, corpus rescaling, per-user aggregation.
//! - [`graph`]: mention graph, mutual reduction, largest SCC, descriptive statistics.
//! - [`community`]: weighted Louvain, side classification, k-means merging, validation.
//! - [`nullmodels`]: the three label/score resampling tests.
//! - [`cascades`]: bucketing, parent attribution, cascade scores, diffusion summaries.
//! - [`synth`]: planted polarised corpora with ground truth.
//! - [`pipeline`]: stage orchestration and artifact files used by the CLI.

pub mod cascades;
pub mod community;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod nullmodels;
pub mod pipeline;
pub mod rng;
pub mod sentiment;
pub mod stats;
pub mod synth;
pub mod types;

pub use error::{Error, Result};
pub use types::{Polarity, Side};

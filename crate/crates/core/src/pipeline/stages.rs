use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::artifacts::{self as art, *};
use super::RunConfig;
use crate::cascades::{
    bucket_retweets, cascade_side_stats, diffusion_analysis, reconstruct_all, score_cascade,
    score_distributions, CascadeScores, DiffusionReport, EdgeOracle, ParentStrategy, ScoreSummary,
};
use crate::community::{
    activity_series, block_summaries, classify_sides, community_summaries, detect_communities,
    filter_significant, kmeans_merge, link_fractions_by_community, validate, BlockSummary,
    CommunitySummary, Louvain, Retained, SideLabeling, Validation,
};
use crate::graph::{build_mention_graph, compute_stats, largest_scc, mutual_reduce, GraphStats, MentionGraph};
use crate::ingest::{
    load_annotations, load_followers, load_lexicon, load_tweets, HashtagTimeFilter, IngestReport,
    Mode, TableReport, TweetRecord,
};
use crate::nullmodels::{
    assortativity_test, link_class_fraction_test, sentiment_correlation_test, NullTestResult, Verdict,
};
use crate::rng::subseed;
use crate::sentiment::{aggregate_users, score_text, Message, MessageTable, RawScore, Rescaler, UserSentiment};
use crate::stats::ordered_sum;
use crate::types::{parse_side_label, side_label, Polarity, Side};
use crate::{Error, Result};

fn load_tweet_artifact(cfg: &RunConfig) -> Result<Vec<TweetRecord>> {
    let path = art::artifact(&cfg.out, TWEETS)?;
    let (tweets, _) = load_tweets(&path, &HashtagTimeFilter::default(), Mode::Strict)?;
    Ok(tweets)
}

// ---------------------------------------------------------------- ingest

pub fn ingest(cfg: &RunConfig) -> Result<IngestReport> {
    let path = cfg.input("--tweets", cfg.tweets.as_deref())?;
    let tags: Vec<&str> = cfg.hashtags.iter().map(String::as_str).collect();
    let filter = HashtagTimeFilter::new(&tags, cfg.start, cfg.end);
    let (tweets, report) = load_tweets(path, &filter, Mode::strict(cfg.strict))?;
    crate::ingest::write_tweets(
        std::io::BufWriter::new(
            std::fs::File::create(cfg.out.join(TWEETS)).map_err(|e| Error::io(cfg.out.join(TWEETS), e))?,
        ),
        &tweets,
    )?;
    write_json(&cfg.out.join(INGEST_REPORT), &report)?;
    Ok(report)
}

// ---------------------------------------------------------------- score

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconReport {
    pub lexicon: TableReport,
    pub tweets: usize,
    pub tweets_with_hits: usize,
    pub max_pos: i64,
    pub min_neg: i64,
}

pub fn score(cfg: &RunConfig) -> Result<LexiconReport> {
    let lex_path = cfg.input("--lexicon", cfg.lexicon.as_deref())?;
    let tweets = load_tweet_artifact(cfg)?;
    let (lexicon, table) = load_lexicon(lex_path, Mode::strict(cfg.strict))?;
    let raws: Vec<RawScoreRow> = tweets
        .iter()
        .map(|t| {
            let r = score_text(&t.text, &lexicon);
            RawScoreRow { tweet_id: t.tweet_id.clone(), raw_pos: r.pos, raw_neg: r.neg }
        })
        .collect();
    let report = LexiconReport {
        lexicon: table,
        tweets: raws.len(),
        tweets_with_hits: raws.iter().filter(|r| r.raw_pos != 0 || r.raw_neg != 0).count(),
        max_pos: raws.iter().map(|r| r.raw_pos).max().unwrap_or(0),
        min_neg: raws.iter().map(|r| r.raw_neg).min().unwrap_or(0),
    };
    write_csv(&cfg.out.join(RAW_SCORES), &["tweet_id", "raw_pos", "raw_neg"], &raws)?;
    write_json(&cfg.out.join(LEXICON_REPORT), &report)?;
    Ok(report)
}

// ---------------------------------------------------------------- graph

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescaleReport {
    pub max_pos: i64,
    pub min_neg: i64,
    pub pos_divisor: f64,
    pub neg_divisor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphReport {
    pub full: GraphStats,
    pub mutual: GraphStats,
    pub scc: GraphStats,
    /// Tweets carrying at least one mention that survives in the component.
    pub network_tweets: usize,
    pub rescale: RescaleReport,
}

/// Tweets whose sender mentions someone along a component edge, with those
/// receivers.
fn network_messages(tweets: &[TweetRecord], scc: &MentionGraph) -> Vec<(String, String, Vec<String>)> {
    tweets
        .iter()
        .filter_map(|t| {
            let mut recv: Vec<String> = t
                .mentions
                .iter()
                .filter(|m| scc.mentions(&t.user_id, m))
                .cloned()
                .collect();
            recv.sort();
            recv.dedup();
            (!recv.is_empty()).then(|| (t.tweet_id.clone(), t.user_id.clone(), recv))
        })
        .collect()
}

pub fn graph(cfg: &RunConfig) -> Result<GraphReport> {
    let tweets = load_tweet_artifact(cfg)?;
    let raw_rows: Vec<RawScoreRow> = read_csv(&cfg.out, RAW_SCORES)?;
    let raws: HashMap<&str, RawScore> = raw_rows
        .iter()
        .map(|r| (r.tweet_id.as_str(), RawScore { pos: r.raw_pos, neg: r.raw_neg }))
        .collect();

    let full = build_mention_graph(&tweets);
    let mutual = mutual_reduce(&full);
    let mut scc = largest_scc(&mutual);

    let network = network_messages(&tweets, &scc);
    let raw_of = |id: &str| -> Result<RawScore> {
        raws.get(id)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("{RAW_SCORES} has no score for tweet {id}; rerun score")))
    };
    let net_raws: Vec<RawScore> = network.iter().map(|(id, _, _)| raw_of(id)).collect::<Result<_>>()?;
    let rescaler = Rescaler::fit(&net_raws);
    let scored: Vec<_> = network
        .iter()
        .zip(&net_raws)
        .map(|((id, _, _), raw)| rescaler.apply(id, *raw))
        .collect();
    let score_of: HashMap<&str, f64> = scored.iter().map(|s| (s.tweet_id.as_str(), s.score)).collect();
    scc.set_sentiment_weights(|e| {
        let v: Vec<f64> = e.tweet_ids.iter().map(|id| score_of[id.as_str()]).collect();
        (ordered_sum(&v) / v.len() as f64).abs()
    });
    let messages: Vec<Message> = network
        .iter()
        .zip(&scored)
        .map(|((id, sender, recv), s)| Message {
            tweet_id: id.clone(),
            sender: sender.clone(),
            receivers: recv.clone(),
            score: s.score,
        })
        .collect();
    let users = aggregate_users(&messages);

    let report = GraphReport {
        full: compute_stats(&full),
        mutual: compute_stats(&mutual),
        scc: compute_stats(&scc),
        network_tweets: network.len(),
        rescale: RescaleReport {
            max_pos: rescaler.max_pos,
            min_neg: rescaler.min_neg,
            pos_divisor: rescaler.pos_divisor(),
            neg_divisor: rescaler.neg_divisor(),
        },
    };

    let out = &cfg.out;
    write_csv(
        &out.join(EDGES_FULL),
        &["src", "dst", "mention_count"],
        full.edges().iter().map(|e| FullEdgeRow {
            src: full.node_id(e.src).to_string(),
            dst: full.node_id(e.dst).to_string(),
            mention_count: e.mention_count,
        }),
    )?;
    write_csv(
        &out.join(EDGES),
        &["src", "dst", "mention_count", "sentiment_weight"],
        scc.edges().iter().map(|e| EdgeRow {
            src: scc.node_id(e.src).to_string(),
            dst: scc.node_id(e.dst).to_string(),
            mention_count: e.mention_count,
            sentiment_weight: e.sentiment_weight,
        }),
    )?;
    write_csv(
        &out.join(TWEET_SCORES),
        &["tweet_id", "raw_pos", "raw_neg", "scaled_pos", "scaled_neg", "score"],
        &scored,
    )?;
    write_csv(
        &out.join(MESSAGES),
        &["tweet_id", "sender", "receivers", "score"],
        messages.iter().map(|m| MessageRow {
            tweet_id: m.tweet_id.clone(),
            sender: m.sender.clone(),
            receivers: m.receivers.join(" "),
            score: m.score,
        }),
    )?;
    write_csv(
        &out.join(USERS),
        &["user_id", "sent_out", "sent_in", "n_out", "n_in", "polarity"],
        users.values(),
    )?;
    write_csv(
        &out.join(NODE_STATS),
        &["user_id", "in_degree", "out_degree", "out_mentions", "clustering", "mean_geodesic"],
        &report.scc.per_node,
    )?;
    let mut ccdf_rows = Vec::new();
    for (name, s) in [("full", &report.full), ("mutual", &report.mutual), ("scc", &report.scc)] {
        for (dir, pts) in [("in", &s.in_degree_ccdf), ("out", &s.out_degree_ccdf)] {
            for p in pts {
                ccdf_rows.push((name, dir, p.value, p.fraction));
            }
        }
    }
    write_csv(&out.join(DEGREE_CCDF), &["graph", "direction", "degree", "fraction"], ccdf_rows)?;
    write_json(&out.join(GRAPH_STATS), &report)?;
    Ok(report)
}

/// Rebuilds the analysed component from `edges.csv`.
pub fn load_component(cfg: &RunConfig) -> Result<MentionGraph> {
    let rows: Vec<EdgeRow> = read_csv(&cfg.out, EDGES)?;
    let weights: HashMap<(String, String), f64> = rows
        .iter()
        .map(|r| ((r.src.clone(), r.dst.clone()), r.sentiment_weight))
        .collect();
    let mut g = MentionGraph::from_edges(
        rows.into_iter().map(|r| (r.src, r.dst, r.mention_count, Vec::new())),
        &[],
    );
    let ids: Vec<String> = g.nodes().to_vec();
    g.set_sentiment_weights(|e| weights[&(ids[e.src].clone(), ids[e.dst].clone())]);
    Ok(g)
}

fn load_users(cfg: &RunConfig) -> Result<BTreeMap<String, UserSentiment>> {
    let rows: Vec<UserSentiment> = read_csv(&cfg.out, USERS)?;
    Ok(rows.into_iter().map(|u| (u.user_id.clone(), u)).collect())
}

// ---------------------------------------------------------------- communities

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansSummary {
    pub k: usize,
    pub silhouette: Option<f64>,
    pub sse: f64,
    /// (community, cluster) for every significant community with both means.
    pub clusters: Vec<(usize, usize)>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkFractionSummary {
    pub users: usize,
    pub yes_yes: Option<f64>,
    pub yes_no: Option<f64>,
    pub no_yes: Option<f64>,
    pub no_no: Option<f64>,
    pub same_side_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityReport {
    pub method: String,
    pub modularity: f64,
    pub unit_weight_fallback: bool,
    pub communities: usize,
    pub sizes: Vec<usize>,
    pub retained: Retained,
    pub labeling: Option<SideLabeling>,
    pub summaries: Vec<CommunitySummary>,
    pub blocks: Vec<BlockSummary>,
    pub link_fractions: LinkFractionSummary,
    pub validation: Option<Validation>,
    pub kmeans: Option<KMeansSummary>,
    pub warnings: Vec<String>,
}

pub fn communities(cfg: &RunConfig) -> Result<CommunityReport> {
    let g = load_component(cfg)?;
    let users = load_users(cfg)?;
    let tweets = load_tweet_artifact(cfg)?;
    if g.is_empty() {
        return Err(Error::Invalid("the analysed component is empty; nothing to partition".into()));
    }
    let mut warnings = Vec::new();

    let partition = detect_communities(&g, &Louvain::new(subseed(cfg.seed, "louvain")))?;
    let retained = filter_significant(&partition, cfg.min_community_size, Some(cfg.top_k));
    warnings.extend(retained.warnings.iter().cloned());
    let labeling = if retained.communities.len() == 2 {
        Some(classify_sides(&partition, &retained, &users)?)
    } else {
        warnings.push(format!(
            "side classification needs two retained communities, found {}; sides left unknown",
            retained.communities.len()
        ));
        None
    };
    if let Some(l) = &labeling {
        warnings.extend(l.warnings.iter().cloned());
    }
    let sides: Vec<Option<Side>> = match &labeling {
        Some(l) => l.user_sides(&partition),
        None => vec![None; partition.users.len()],
    };

    let validation = match cfg.annotations.as_deref() {
        Some(_) => {
            let path = cfg.input("--annotations", cfg.annotations.as_deref())?;
            let (ann, _) = load_annotations(path)?;
            let predicted = labeling
                .as_ref()
                .map(|l| l.user_side_map(&partition))
                .unwrap_or_default();
            match validate(&predicted, &ann) {
                Ok(v) => Some(v),
                Err(e) => {
                    warnings.push(format!("validation skipped: {e}"));
                    None
                }
            }
        }
        None => None,
    };

    let fractions = link_fractions_by_community(&g, &sides);
    let summaries = community_summaries(&partition, &users, labeling.as_ref());
    let blocks = block_summaries(&g, &partition, &retained.communities);
    let activity = activity_series(&partition, &retained.communities, &tweets);

    let significant: Vec<&CommunitySummary> = summaries
        .iter()
        .filter(|s| s.size >= cfg.min_community_size)
        .filter(|s| s.mean_sent_in.is_some() && s.mean_sent_out.is_some())
        .collect();
    let kmeans = if significant.len() >= 3 {
        let points: Vec<Vec<f64>> = significant
            .iter()
            .map(|s| vec![s.mean_sent_in.unwrap(), s.mean_sent_out.unwrap()])
            .collect();
        let r = kmeans_merge(&points, None, subseed(cfg.seed, "kmeans"))?;
        Some(KMeansSummary {
            k: r.k,
            silhouette: r.silhouette,
            sse: r.sse,
            clusters: significant.iter().zip(&r.assignment).map(|(s, &c)| (s.community, c)).collect(),
            warnings: r.warnings,
        })
    } else {
        None
    };

    let report = CommunityReport {
        method: partition.method.clone(),
        modularity: partition.modularity,
        unit_weight_fallback: partition.unit_weight_fallback,
        communities: partition.community_count(),
        sizes: partition.sizes.clone(),
        retained,
        labeling,
        summaries,
        blocks,
        link_fractions: LinkFractionSummary {
            users: fractions.per_user.len(),
            yes_yes: fractions.yes_yes,
            yes_no: fractions.yes_no,
            no_yes: fractions.no_yes,
            no_no: fractions.no_no,
            same_side_mean: fractions.same_side_mean(),
        },
        validation,
        kmeans,
        warnings,
    };

    let out = &cfg.out;
    write_csv(
        &out.join(PARTITION),
        &["user_id", "community", "side"],
        partition.users.iter().zip(&partition.assignment).zip(&sides).map(|((u, &c), &s)| PartitionRow {
            user_id: u.clone(),
            community: c,
            side: side_label(s).to_string(),
        }),
    )?;
    write_csv(
        &out.join(ACTIVITY),
        &["community", "date", "tweets", "tweets_per_user"],
        &activity,
    )?;
    write_csv(
        &out.join(LINK_FRACTIONS),
        &["user_id", "side", "out_links", "to_yes", "to_no"],
        &fractions.per_user,
    )?;
    write_json(&out.join(COMMUNITIES), &report)?;
    Ok(report)
}

/// `user -> side` from `partition.csv`.
pub fn load_sides(cfg: &RunConfig) -> Result<BTreeMap<String, Option<Side>>> {
    let rows: Vec<PartitionRow> = read_csv(&cfg.out, PARTITION)?;
    rows.into_iter()
        .map(|r| {
            let side = parse_side_label(&r.side).map_err(Error::Invalid)?;
            Ok((r.user_id, side))
        })
        .collect()
}

// ---------------------------------------------------------------- null models

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NullKind {
    Correlation,
    Linkclass,
    Assortativity,
}

impl NullKind {
    pub const ALL: [NullKind; 3] = [NullKind::Correlation, NullKind::Linkclass, NullKind::Assortativity];

    pub fn as_str(self) -> &'static str {
        match self {
            NullKind::Correlation => "correlation",
            NullKind::Linkclass => "linkclass",
            NullKind::Assortativity => "assortativity",
        }
    }
}

impl std::str::FromStr for NullKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NullKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown null test {s:?}")))
    }
}

/// A null test result without the replicate vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSummary {
    pub statistic: String,
    pub observed: f64,
    pub q025: f64,
    pub q50: f64,
    pub q975: f64,
    pub verdict: Verdict,
    pub replicates: usize,
    pub replicate_mean: f64,
    pub undefined_replicates: usize,
    pub seed: u64,
}

impl From<&NullTestResult> for NullSummary {
    fn from(r: &NullTestResult) -> Self {
        NullSummary {
            statistic: r.statistic.clone(),
            observed: r.observed,
            q025: r.q025,
            q50: r.q50,
            q975: r.q975,
            verdict: r.verdict,
            replicates: r.replicate_count(),
            replicate_mean: r.replicate_mean(),
            undefined_replicates: r.undefined_replicates,
            seed: r.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullReport {
    pub test: NullKind,
    pub results: Vec<NullSummary>,
    /// Set when the statistic could not be computed on this data.
    pub error: Option<String>,
}

fn run_null(cfg: &RunConfig, kind: NullKind) -> Result<Vec<NullTestResult>> {
    let seed = subseed(cfg.seed, kind.as_str());
    match kind {
        NullKind::Correlation => {
            let rows: Vec<MessageRow> = read_csv(&cfg.out, MESSAGES)?;
            let messages: Vec<Message> = rows
                .into_iter()
                .map(|r| Message {
                    tweet_id: r.tweet_id,
                    sender: r.sender,
                    receivers: r.receivers.split_whitespace().map(str::to_owned).collect(),
                    score: r.score,
                })
                .collect();
            let table = MessageTable::new(&messages);
            Ok(vec![sentiment_correlation_test(&table, cfg.replicates, seed)?])
        }
        NullKind::Linkclass => {
            let g = load_component(cfg)?;
            let users = load_users(cfg)?;
            let classes: Vec<Polarity> = g
                .nodes()
                .iter()
                .map(|u| users.get(u).map_or(Polarity::Unknown, |s| s.polarity))
                .collect();
            link_class_fraction_test(&g, &classes, cfg.replicates, seed)
        }
        NullKind::Assortativity => {
            let g = load_component(cfg)?;
            let report: CommunityReport = read_json(&cfg.out, COMMUNITIES)?;
            let rows: Vec<PartitionRow> = read_csv(&cfg.out, PARTITION)?;
            let community: HashMap<&str, usize> =
                rows.iter().map(|r| (r.user_id.as_str(), r.community)).collect();
            let retained = &report.retained.communities;
            let membership: Vec<Option<usize>> = g
                .nodes()
                .iter()
                .map(|u| {
                    community
                        .get(u.as_str())
                        .and_then(|c| retained.iter().position(|r| r == c))
                })
                .collect();
            Ok(vec![assortativity_test(&g, &membership, cfg.replicates, seed)?])
        }
    }
}

/// Runs one null test and writes its summary and replicate table.
pub fn nulltest(cfg: &RunConfig, kind: NullKind) -> Result<NullReport> {
    let results = run_null(cfg, kind)?;
    let header: Vec<&str> = std::iter::once("replicate")
        .chain(results.iter().map(|r| r.statistic.as_str()))
        .collect();
    let rows = (0..cfg.replicates).map(|i| {
        std::iter::once(i.to_string())
            .chain(results.iter().map(|r| r.replicates[i].to_string()))
            .collect::<Vec<String>>()
    });
    write_csv(&cfg.out.join(null_replicates(kind.as_str())), &header, rows)?;
    let report = NullReport {
        test: kind,
        results: results.iter().map(NullSummary::from).collect(),
        error: None,
    };
    write_json(&cfg.out.join(null_json(kind.as_str())), &report)?;
    Ok(report)
}

/// Like [`nulltest`], but a statistic that is undefined on this data is
/// recorded in the report instead of failing.
pub fn nulltest_tolerant(cfg: &RunConfig, kind: NullKind) -> Result<NullReport> {
    match nulltest(cfg, kind) {
        Err(e @ (Error::Undefined(_) | Error::Invalid(_))) => {
            log::warn!("{} null test skipped: {e}", kind.as_str());
            let report = NullReport { test: kind, results: Vec::new(), error: Some(e.to_string()) };
            write_json(&cfg.out.join(null_json(kind.as_str())), &report)?;
            Ok(report)
        }
        other => other,
    }
}

// ---------------------------------------------------------------- cascades

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeReport {
    pub strategy: ParentStrategy,
    pub buckets: usize,
    pub never_retweeted: usize,
    pub cascades: usize,
    pub duplicates_dropped: usize,
    pub diffusion: DiffusionReport,
    pub scores: ScoreSummary,
}

pub fn cascades(cfg: &RunConfig) -> Result<CascadeReport> {
    let sides = load_sides(cfg)?;
    let tweets = load_tweet_artifact(cfg)?;
    let oracle: Box<dyn EdgeOracle> = match cfg.strategy {
        ParentStrategy::Mention => Box::new(build_mention_graph(&tweets)),
        ParentStrategy::Follower => {
            let path = cfg.input("--followers", cfg.followers.as_deref()).map_err(|_| {
                Error::Config("--followers is required for the follower strategy".into())
            })?;
            Box::new(load_followers(path)?.0)
        }
    };
    let buckets = bucket_retweets(&tweets);
    let mut recon = reconstruct_all(&buckets, oracle.as_ref());
    for t in &mut recon.trees {
        t.tag_sides(|u| sides.get(u).copied().flatten());
    }
    let scores: Vec<CascadeScores> = recon.trees.iter().map(score_cascade).collect::<Result<_>>()?;
    let diffusion = diffusion_analysis(&recon.trees, cfg.min_classified);
    let summary = score_distributions(&scores);

    let out = &cfg.out;
    write_csv(
        &out.join(CASCADES),
        &[
            "cascade_id", "bucket_id", "root_user", "n", "max_depth", "avg_depth", "virality",
            "seed_side", "prop_yes", "n_classified",
        ],
        recon.trees.iter().zip(&scores).map(|(t, s)| {
            let st = cascade_side_stats(t);
            CascadeRow {
                cascade_id: t.cascade_id,
                bucket_id: t.bucket_id,
                root_user: t.root().user_id.clone(),
                n: s.n,
                max_depth: s.max_depth,
                avg_depth: s.avg_depth,
                virality: s.virality,
                seed_side: side_label(t.seed_side()).to_string(),
                prop_yes: st.prop_yes,
                n_classified: st.n_classified,
            }
        }),
    )?;
    write_csv(
        &out.join(CASCADE_EDGES),
        &["cascade_id", "child_user", "parent_user", "child_time"],
        recon.trees.iter().flat_map(|t| {
            t.nodes.iter().filter_map(move |n| {
                n.parent.map(|p| CascadeEdgeRow {
                    cascade_id: t.cascade_id,
                    child_user: n.user_id.clone(),
                    parent_user: t.nodes[p].user_id.clone(),
                    child_time: n.created_at.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                })
            })
        }),
    )?;
    let mut ccdf_rows = Vec::new();
    for (name, m) in [
        ("max_depth", &summary.max_depth),
        ("avg_depth", &summary.avg_depth),
        ("virality", &summary.virality),
    ] {
        for p in &m.ccdf {
            ccdf_rows.push((name, p.value, p.fraction));
        }
    }
    write_csv(&out.join(SCORE_CCDF), &["metric", "value", "fraction"], ccdf_rows)?;

    let report = CascadeReport {
        strategy: cfg.strategy,
        buckets: recon.buckets,
        never_retweeted: recon.singleton_buckets,
        cascades: recon.trees.len(),
        duplicates_dropped: recon.duplicates_dropped,
        diffusion,
        scores: summary,
    };
    write_json(&out.join(DIFFUSION), &report)?;
    Ok(report)
}

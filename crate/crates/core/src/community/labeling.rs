use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::CommunityPartition;
use crate::graph::{local_clustering, MentionGraph};
use crate::ingest::{Annotations, TweetRecord};
use crate::sentiment::UserSentiment;
use crate::stats::mean;
use crate::types::Side;
use crate::{Error, Result};

/// Communities kept for analysis, largest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Retained {
    pub communities: Vec<usize>,
    pub min_size: usize,
    pub top_k: Option<usize>,
    pub warnings: Vec<String>,
}

/// Keeps communities with at least `min_size` members, then the `top_k`
/// largest of those.
pub fn filter_significant(
    partition: &CommunityPartition,
    min_size: usize,
    top_k: Option<usize>,
) -> Retained {
    let mut warnings = Vec::new();
    // ids are already ordered by size
    let mut keep: Vec<usize> = (0..partition.community_count())
        .filter(|&c| partition.sizes[c] >= min_size)
        .collect();
    if keep.is_empty() {
        warnings.push(format!("no community has {min_size} or more members"));
    }
    if let Some(k) = top_k {
        if keep.len() < k && !keep.is_empty() {
            warnings.push(format!(
                "only {} significant communities, {k} requested",
                keep.len()
            ));
        }
        keep.truncate(k);
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Retained {
        communities: keep,
        min_size,
        top_k,
        warnings,
    }
}

/// Side assigned to each retained community.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideLabeling {
    /// community -> side (`None` = unlabeled).
    pub sides: BTreeMap<usize, Option<Side>>,
    pub mean_sent_out: BTreeMap<usize, Option<f64>>,
    pub warnings: Vec<String>,
}

impl SideLabeling {
    pub fn side_of_community(&self, community: usize) -> Option<Side> {
        self.sides.get(&community).copied().flatten()
    }

    /// Side of every node of the partition (`None` outside labeled communities).
    pub fn user_sides(&self, partition: &CommunityPartition) -> Vec<Option<Side>> {
        partition
            .assignment
            .iter()
            .map(|&c| self.side_of_community(c))
            .collect()
    }

    pub fn user_side_map(&self, partition: &CommunityPartition) -> BTreeMap<String, Side> {
        partition
            .users
            .iter()
            .zip(self.user_sides(partition))
            .filter_map(|(u, s)| s.map(|s| (u.clone(), s)))
            .collect()
    }
}

fn community_mean_out(
    partition: &CommunityPartition,
    community: usize,
    sentiments: &BTreeMap<String, UserSentiment>,
) -> Option<f64> {
    let values: Vec<f64> = partition
        .members(community)
        .into_iter()
        .filter_map(|u| sentiments.get(&partition.users[u]).and_then(|s| s.sent_out))
        .collect();
    mean(&values)
}

/// The retained community with the higher mean sentiment-out is `yes`, the
/// other `no`. Equal means label the larger community `yes`.
pub fn classify_sides(
    partition: &CommunityPartition,
    retained: &Retained,
    sentiments: &BTreeMap<String, UserSentiment>,
) -> Result<SideLabeling> {
    let [a, b] = retained.communities[..] else {
        return Err(Error::Invalid(format!(
            "side classification needs exactly two communities, got {}",
            retained.communities.len()
        )));
    };
    let ma = community_mean_out(partition, a, sentiments);
    let mb = community_mean_out(partition, b, sentiments);
    let mut warnings = Vec::new();
    let mut sides = BTreeMap::new();
    match (ma, mb) {
        (Some(x), Some(y)) => {
            let a_yes = if x == y {
                warnings.push(format!(
                    "communities {a} and {b} have equal mean sentiment-out; larger one labeled yes"
                ));
                // a is never smaller than b: ids are size-ordered
                true
            } else {
                x > y
            };
            let (sa, sb) = if a_yes { (Side::Yes, Side::No) } else { (Side::No, Side::Yes) };
            sides.insert(a, Some(sa));
            sides.insert(b, Some(sb));
        }
        _ => {
            warnings.push("a retained community has no member with sentiment-out; left unlabeled".into());
            sides.insert(a, None);
            sides.insert(b, None);
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(SideLabeling {
        sides,
        mean_sent_out: BTreeMap::from([(a, ma), (b, mb)]),
        warnings,
    })
}

/// Confusion counts with `yes` as the positive class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Validation {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub overlap: usize,
    pub recall_yes: Option<f64>,
    pub recall_no: Option<f64>,
    pub balanced_accuracy: f64,
}

impl Validation {
    pub fn from_counts(tp: usize, fp: usize, tn: usize, fn_: usize) -> Result<Validation> {
        let recall = |hit: usize, miss: usize| {
            (hit + miss > 0).then(|| hit as f64 / (hit + miss) as f64)
        };
        let recall_yes = recall(tp, fn_);
        let recall_no = recall(tn, fp);
        let defined: Vec<f64> = [recall_yes, recall_no].into_iter().flatten().collect();
        if defined.is_empty() {
            return Err(Error::Undefined("balanced accuracy"));
        }
        Ok(Validation {
            tp,
            fp,
            tn,
            fn_,
            overlap: tp + fp + tn + fn_,
            recall_yes,
            recall_no,
            balanced_accuracy: defined.iter().sum::<f64>() / defined.len() as f64,
        })
    }
}

/// Compares predicted sides with hand labels over the users present in
/// both. If one class is absent from the overlap, balanced accuracy is the
/// recall of the other.
pub fn validate(predicted: &BTreeMap<String, Side>, annotations: &Annotations) -> Result<Validation> {
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (user, truth) in &annotations.labels {
        let Some(pred) = predicted.get(user) else {
            continue;
        };
        match (truth, pred) {
            (Side::Yes, Side::Yes) => tp += 1,
            (Side::Yes, Side::No) => fn_ += 1,
            (Side::No, Side::No) => tn += 1,
            (Side::No, Side::Yes) => fp += 1,
        }
    }
    if tp + fp + tn + fn_ == 0 {
        return Err(Error::Invalid(
            "no annotated user received a side label".into(),
        ));
    }
    Validation::from_counts(tp, fp, tn, fn_)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserLinkFractions {
    pub user_id: String,
    pub side: Side,
    pub out_links: usize,
    pub to_yes: f64,
    pub to_no: f64,
}

/// Where each labeled user's out-links go, by side of the destination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkFractions {
    pub per_user: Vec<UserLinkFractions>,
    pub yes_yes: Option<f64>,
    pub yes_no: Option<f64>,
    pub no_yes: Option<f64>,
    pub no_no: Option<f64>,
}

impl LinkFractions {
    /// Mean fraction of out-links that stay on the sender's side, over all
    /// users with labeled out-links.
    pub fn same_side_mean(&self) -> Option<f64> {
        let v: Vec<f64> = self
            .per_user
            .iter()
            .map(|u| match u.side {
                Side::Yes => u.to_yes,
                Side::No => u.to_no,
            })
            .collect();
        mean(&v)
    }
}

/// Users without out-links to labeled nodes are left out.
pub fn link_fractions_by_community(g: &MentionGraph, sides: &[Option<Side>]) -> LinkFractions {
    let mut per_user = Vec::new();
    for u in 0..g.node_count() {
        let Some(side) = sides[u] else { continue };
        let (mut yes, mut no) = (0usize, 0usize);
        for v in g.out_neighbors(u) {
            match sides[v] {
                Some(Side::Yes) => yes += 1,
                Some(Side::No) => no += 1,
                None => {}
            }
        }
        let total = yes + no;
        if total == 0 {
            continue;
        }
        per_user.push(UserLinkFractions {
            user_id: g.node_id(u).to_string(),
            side,
            out_links: total,
            to_yes: yes as f64 / total as f64,
            to_no: no as f64 / total as f64,
        });
    }
    let avg = |side: Side, f: fn(&UserLinkFractions) -> f64| {
        let v: Vec<f64> = per_user.iter().filter(|u| u.side == side).map(f).collect();
        mean(&v)
    };
    LinkFractions {
        yes_yes: avg(Side::Yes, |u| u.to_yes),
        yes_no: avg(Side::Yes, |u| u.to_no),
        no_yes: avg(Side::No, |u| u.to_yes),
        no_no: avg(Side::No, |u| u.to_no),
        per_user,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunitySummary {
    pub community: usize,
    pub size: usize,
    pub mean_sent_out: Option<f64>,
    pub mean_sent_in: Option<f64>,
    pub side: Option<Side>,
}

pub fn community_summaries(
    partition: &CommunityPartition,
    sentiments: &BTreeMap<String, UserSentiment>,
    labeling: Option<&SideLabeling>,
) -> Vec<CommunitySummary> {
    (0..partition.community_count())
        .map(|c| {
            let members = partition.members(c);
            let get = |f: fn(&UserSentiment) -> Option<f64>| {
                let v: Vec<f64> = members
                    .iter()
                    .filter_map(|&u| sentiments.get(&partition.users[u]).and_then(f))
                    .collect();
                mean(&v)
            };
            CommunitySummary {
                community: c,
                size: members.len(),
                mean_sent_out: get(|s| s.sent_out),
                mean_sent_in: get(|s| s.sent_in),
                side: labeling.and_then(|l| l.side_of_community(c)),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityPoint {
    pub community: usize,
    pub date: NaiveDate,
    pub tweets: usize,
    pub tweets_per_user: f64,
}

/// Daily tweets by members of each listed community, divided by its size.
pub fn activity_series(
    partition: &CommunityPartition,
    communities: &[usize],
    tweets: &[TweetRecord],
) -> Vec<ActivityPoint> {
    let mut counts: BTreeMap<(usize, NaiveDate), usize> = BTreeMap::new();
    let wanted: BTreeSet<usize> = communities.iter().copied().collect();
    for t in tweets {
        if let Some(c) = partition.community_of(&t.user_id).filter(|c| wanted.contains(c)) {
            *counts.entry((c, t.created_at.date_naive())).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .map(|((c, date), n)| ActivityPoint {
            community: c,
            date,
            tweets: n,
            tweets_per_user: n as f64 / partition.sizes[c] as f64,
        })
        .collect()
}

/// Descriptive numbers for the links from one community to another.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub from: usize,
    pub to: usize,
    /// Within a community: its members. Across: nodes incident to a cross link.
    pub nodes: usize,
    pub links: usize,
    pub avg_out_degree: f64,
    pub avg_clustering: f64,
    pub density: f64,
}

/// Block summaries for every ordered pair of the given communities.
pub fn block_summaries(
    g: &MentionGraph,
    partition: &CommunityPartition,
    communities: &[usize],
) -> Vec<BlockSummary> {
    let mut out = Vec::new();
    for &from in communities {
        for &to in communities {
            let sub = g.filter_edges(|e| {
                partition.assignment[e.src] == from && partition.assignment[e.dst] == to
            });
            let mut incident = vec![false; g.node_count()];
            if from == to {
                for u in partition.members(from) {
                    incident[u] = true;
                }
            } else {
                for e in sub.edges() {
                    incident[e.src] = true;
                    incident[e.dst] = true;
                }
            }
            let block = sub.induced(&incident, false);
            let n = block.node_count();
            let links = block.edge_count();
            let clustering = local_clustering(&block.undirected_neighbors());
            out.push(BlockSummary {
                from,
                to,
                nodes: n,
                links,
                avg_out_degree: if n > 0 { links as f64 / n as f64 } else { 0.0 },
                avg_clustering: if n > 0 {
                    clustering.iter().map(|c| c.0).sum::<f64>() / n as f64
                } else {
                    0.0
                },
                density: if n > 1 {
                    links as f64 / (n as f64 * (n - 1) as f64)
                } else {
                    0.0
                },
            });
        }
    }
    out
}

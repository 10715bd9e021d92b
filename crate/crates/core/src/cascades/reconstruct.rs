use std::collections::{BTreeSet, HashSet};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BucketMember, CascadeNode, CascadeTree, RetweetBucket};
use crate::graph::MentionGraph;
use crate::ingest::FollowerGraph;
use crate::Error;

/// Answers "could `child` have seen content from `parent`".
pub trait EdgeOracle: Sync {
    fn links(&self, child: &str, parent: &str) -> bool;
}

impl EdgeOracle for MentionGraph {
    fn links(&self, child: &str, parent: &str) -> bool {
        self.mentions(child, parent)
    }
}

impl EdgeOracle for FollowerGraph {
    fn links(&self, child: &str, parent: &str) -> bool {
        self.follows(child, parent)
    }
}

/// Explicit `(child, parent)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinkSet(pub HashSet<(String, String)>);

impl LinkSet {
    pub fn new<I, A, B>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        LinkSet(
            pairs
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
        )
    }
}

impl EdgeOracle for LinkSet {
    fn links(&self, child: &str, parent: &str) -> bool {
        self.0.contains(&(child.to_string(), parent.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParentStrategy {
    #[default]
    Mention,
    Follower,
}

impl ParentStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            ParentStrategy::Mention => "mention",
            ParentStrategy::Follower => "follower",
        }
    }
}

impl FromStr for ParentStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mention" | "mentions" => Ok(ParentStrategy::Mention),
            "follower" | "followers" => Ok(ParentStrategy::Follower),
            other => Err(Error::Config(format!("unknown cascade strategy {other:?}"))),
        }
    }
}

/// Picks the parent of `members[i]` among `members[..i]`: the latest prior
/// member the child links to. Among members sharing that latest timestamp the
/// smallest tweet id wins.
pub fn choose_parent(
    members: &[BucketMember],
    i: usize,
    links: impl Fn(usize, usize) -> bool,
) -> Option<usize> {
    let mut best: Option<usize> = None;
    for j in (0..i).rev() {
        if let Some(b) = best {
            if members[j].created_at < members[b].created_at {
                break;
            }
        }
        if links(i, j) {
            // scanning backwards, so a later hit at the same time has a smaller id
            best = Some(j);
        }
    }
    best
}

/// Splits one bucket into cascades. Repeat appearances of a user are dropped
/// (earliest kept); the second value counts them. Trees come back in root
/// order with `cascade_id` unset (0).
pub fn attribute_parents(
    bucket: &RetweetBucket,
    oracle: &dyn EdgeOracle,
) -> (Vec<CascadeTree>, usize) {
    let mut seen = BTreeSet::new();
    let mut members = Vec::with_capacity(bucket.members.len());
    for m in &bucket.members {
        if seen.insert(m.user_id.as_str()) {
            members.push(m.clone());
        }
    }
    let dropped = bucket.members.len() - members.len();

    // (tree, index within tree) for every kept member
    let mut place: Vec<(usize, usize)> = Vec::with_capacity(members.len());
    let mut trees: Vec<CascadeTree> = Vec::new();
    for i in 0..members.len() {
        let parent = choose_parent(&members, i, |c, p| {
            oracle.links(&members[c].user_id, &members[p].user_id)
        });
        let m = &members[i];
        match parent {
            Some(p) => {
                let (t, pi) = place[p];
                let tree = &mut trees[t];
                tree.nodes.push(CascadeNode {
                    user_id: m.user_id.clone(),
                    tweet_id: m.tweet_id.clone(),
                    created_at: m.created_at,
                    parent: Some(pi),
                    side: None,
                });
                place.push((t, tree.nodes.len() - 1));
            }
            None => {
                trees.push(CascadeTree {
                    cascade_id: 0,
                    bucket_id: bucket.bucket_id,
                    nodes: vec![CascadeNode {
                        user_id: m.user_id.clone(),
                        tweet_id: m.tweet_id.clone(),
                        created_at: m.created_at,
                        parent: None,
                        side: None,
                    }],
                });
                place.push((trees.len() - 1, 0));
            }
        }
    }
    (trees, dropped)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Reconstruction {
    pub trees: Vec<CascadeTree>,
    pub buckets: usize,
    pub singleton_buckets: usize,
    pub duplicates_dropped: usize,
}

/// Runs parent attribution over all buckets in parallel. Cascade ids follow
/// bucket order, then root order within a bucket.
pub fn reconstruct_all(buckets: &[RetweetBucket], oracle: &dyn EdgeOracle) -> Reconstruction {
    let parts: Vec<(Vec<CascadeTree>, usize)> = buckets
        .par_iter()
        .map(|b| attribute_parents(b, oracle))
        .collect();
    let mut out = Reconstruction {
        buckets: buckets.len(),
        singleton_buckets: buckets.iter().filter(|b| b.members.len() == 1).count(),
        ..Default::default()
    };
    for (trees, dropped) in parts {
        out.duplicates_dropped += dropped;
        for mut t in trees {
            t.cascade_id = out.trees.len();
            out.trees.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{TimeZone, Utc};

    fn bucket(spec: &[(&str, &str, i64)]) -> RetweetBucket {
        RetweetBucket {
            bucket_id: 7,
            normalized_text: "x".into(),
            members: spec
                .iter()
                .map(|&(id, user, t)| BucketMember {
                    tweet_id: id.into(),
                    user_id: user.into(),
                    created_at: Utc.timestamp_opt(t, 0).unwrap(),
                })
                .collect(),
        }
    }

    fn shape(trees: &[CascadeTree]) -> Vec<Vec<(String, Option<String>)>> {
        trees
            .iter()
            .map(|t| {
                t.nodes
                    .iter()
                    .map(|n| {
                        (
                            n.user_id.clone(),
                            n.parent.map(|p| t.nodes[p].user_id.clone()),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    fn s(x: &str) -> String {
        x.to_string()
    }

    #[test]
    fn chain() {
        let b = bucket(&[("1", "A", 0), ("2", "B", 1), ("3", "C", 2)]);
        let (t, d) = attribute_parents(&b, &LinkSet::new([("B", "A"), ("C", "B")]));
        assert_eq!(d, 0);
        assert_eq!(
            shape(&t),
            vec![vec![(s("A"), None), (s("B"), Some(s("A"))), (s("C"), Some(s("B")))]]
        );
        assert_eq!(t[0].bucket_id, 7);
    }

    #[test]
    fn new_root_when_unlinked() {
        let b = bucket(&[("1", "A", 0), ("2", "B", 1), ("3", "C", 2)]);
        let (t, _) = attribute_parents(&b, &LinkSet::new([("B", "A")]));
        assert_eq!(
            shape(&t),
            vec![vec![(s("A"), None), (s("B"), Some(s("A")))], vec![(s("C"), None)]]
        );
    }

    #[test]
    fn latest_candidate_wins() {
        let b = bucket(&[("1", "A", 0), ("2", "B", 1), ("3", "C", 2), ("4", "D", 3)]);
        let (t, _) = attribute_parents(&b, &LinkSet::new([("C", "A"), ("C", "B"), ("D", "C")]));
        assert_eq!(
            shape(&t),
            vec![
                vec![(s("A"), None)],
                vec![(s("B"), None), (s("C"), Some(s("B"))), (s("D"), Some(s("C")))]
            ]
        );
    }

    #[test]
    fn timestamp_tie_prefers_smaller_tweet_id() {
        let b = bucket(&[("1", "A", 0), ("2", "B", 5), ("3", "C", 5), ("4", "D", 9)]);
        let (t, _) = attribute_parents(&b, &LinkSet::new([("D", "B"), ("D", "C"), ("C", "A"), ("B", "A")]));
        let d = t[0].nodes.iter().find(|n| n.user_id == "D").unwrap();
        assert_eq!(t[0].nodes[d.parent.unwrap()].user_id, "B");
    }

    #[test]
    fn duplicate_users_keep_earliest() {
        let b = bucket(&[("1", "A", 0), ("2", "B", 1), ("3", "A", 2), ("4", "C", 3)]);
        let (t, d) = attribute_parents(&b, &LinkSet::new([("B", "A"), ("C", "A")]));
        assert_eq!(d, 1);
        assert_eq!(
            shape(&t),
            vec![vec![(s("A"), None), (s("B"), Some(s("A"))), (s("C"), Some(s("A")))]]
        );
    }

    #[test]
    fn ids_follow_bucket_order() {
        let mut b0 = bucket(&[("1", "A", 0), ("2", "B", 1)]);
        b0.bucket_id = 0;
        let mut b1 = bucket(&[("3", "C", 2)]);
        b1.bucket_id = 1;
        let r = reconstruct_all(&[b0, b1], &LinkSet::default());
        let ids: Vec<(usize, usize)> = r.trees.iter().map(|t| (t.cascade_id, t.bucket_id)).collect();
        assert_eq!(ids, [(0, 0), (1, 0), (2, 1)]);
        assert_eq!(r.singleton_buckets, 1);
        let total: usize = r.trees.iter().map(|t| t.size()).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("Follower".parse::<ParentStrategy>().unwrap(), ParentStrategy::Follower);
        assert!("friends".parse::<ParentStrategy>().is_err());
    }
}

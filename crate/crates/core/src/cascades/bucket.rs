use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::ingest::{TweetKind, TweetRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketMember {
    pub tweet_id: String,
    pub user_id: String,
    pub created_at: DateTime<Utc>,
}

/// Originals and retweets sharing one normalised text, ordered by
/// `(created_at, tweet_id)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetweetBucket {
    pub bucket_id: usize,
    pub normalized_text: String,
    pub members: Vec<BucketMember>,
}

fn is_url(word: &str) -> bool {
    let w = word.to_ascii_lowercase();
    w.starts_with("http://") || w.starts_with("https://") || w.starts_with("www.")
}

/// Strips a single leading `RT @user:` marker, if present.
fn strip_rt_prefix(s: &str) -> Option<&str> {
    let rest = s.get(..2).filter(|p| p.eq_ignore_ascii_case("rt"))?;
    let _ = rest;
    let after = &s[2..];
    if !after.starts_with(char::is_whitespace) {
        return None;
    }
    let after = after.trim_start().strip_prefix('@')?;
    let end = after
        .find(|c: char| c.is_whitespace() || c == ':')
        .unwrap_or(after.len());
    let after = &after[end..];
    Some(after.strip_prefix(':').unwrap_or(after).trim_start())
}

/// Text key for bucketing: leading `RT @user:` chains and trailing URLs
/// removed, whitespace collapsed, case folded.
pub fn normalize_text(text: &str) -> String {
    let mut s = text.trim();
    while let Some(rest) = strip_rt_prefix(s) {
        s = rest;
    }
    let mut words: Vec<&str> = s.split_whitespace().collect();
    while words.last().is_some_and(|w| is_url(w)) {
        words.pop();
    }
    words.join(" ").to_lowercase()
}

/// Groups originals and retweets by normalised text. Replies are left out.
/// Buckets are numbered by their earliest member; single-member buckets are
/// kept (never-retweeted content).
pub fn bucket_retweets(tweets: &[TweetRecord]) -> Vec<RetweetBucket> {
    let mut groups: BTreeMap<String, Vec<BucketMember>> = BTreeMap::new();
    for t in tweets {
        if t.kind == TweetKind::Reply {
            continue;
        }
        groups
            .entry(normalize_text(&t.text))
            .or_default()
            .push(BucketMember {
                tweet_id: t.tweet_id.clone(),
                user_id: t.user_id.clone(),
                created_at: t.created_at,
            });
    }
    let mut buckets: Vec<RetweetBucket> = groups
        .into_iter()
        .map(|(text, mut members)| {
            members.sort_by(|a, b| {
                a.created_at
                    .cmp(&b.created_at)
                    .then_with(|| a.tweet_id.cmp(&b.tweet_id))
            });
            RetweetBucket {
                bucket_id: 0,
                normalized_text: text,
                members,
            }
        })
        .collect();
    buckets.sort_by(|a, b| {
        let (x, y) = (&a.members[0], &b.members[0]);
        x.created_at
            .cmp(&y.created_at)
            .then_with(|| x.tweet_id.cmp(&y.tweet_id))
    });
    for (i, b) in buckets.iter_mut().enumerate() {
        b.bucket_id = i;
    }
    buckets
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn tweet(id: &str, user: &str, text: &str, kind: TweetKind, secs: i64) -> TweetRecord {
        TweetRecord {
            tweet_id: id.into(),
            user_id: user.into(),
            created_at: Utc.timestamp_opt(1_525_132_800 + secs, 0).unwrap(),
            text: text.into(),
            kind,
            hashtags: vec![],
            mentions: vec![],
            retweet_of: None,
            reply_to: None,
            conversation_id: None,
        }
    }

    #[test]
    fn normalisation() {
        assert_eq!(normalize_text("Vote yes!"), "vote yes!");
        assert_eq!(normalize_text("RT @ann: Vote yes!"), "vote yes!");
        assert_eq!(normalize_text("RT @bob: RT @ann: Vote  yes! https://t.co/abc"), "vote yes!");
        assert_eq!(normalize_text("rt @x Vote yes! http://a http://b"), "vote yes!");
        assert_eq!(normalize_text("RTE news"), "rte news");
        assert_eq!(normalize_text("RT is great"), "rt is great");
    }

    #[test]
    fn groups_original_and_retweet() {
        let tweets = [
            tweet("1", "ann", "Vote yes!", TweetKind::Original, 0),
            tweet("2", "bob", "RT @ann: Vote yes!", TweetKind::Retweet, 10),
            tweet("3", "cat", "something else", TweetKind::Original, 5),
            tweet("4", "dan", "Vote yes!", TweetKind::Reply, 20),
        ];
        let b = bucket_retweets(&tweets);
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].members.len(), 2);
        assert_eq!(b[0].members[1].user_id, "bob");
        assert_eq!(b[1].normalized_text, "something else");
        assert_eq!(b[1].bucket_id, 1);
        assert!(bucket_retweets(&[]).is_empty());
    }

    #[test]
    fn members_order_by_time_then_id() {
        let tweets = [
            tweet("b", "u2", "x", TweetKind::Retweet, 5),
            tweet("a", "u1", "x", TweetKind::Retweet, 5),
            tweet("c", "u0", "x", TweetKind::Original, 1),
        ];
        let b = bucket_retweets(&tweets);
        let ids: Vec<&str> = b[0].members.iter().map(|m| m.tweet_id.as_str()).collect();
        assert_eq!(ids, ["c", "a", "b"]);
    }
}

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, SubsecRound, Utc};
use serde::{Deserialize, Serialize};

use super::Mode;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TweetKind {
    Original,
    Retweet,
    Reply,
}

/// One ingested tweet, retweet or reply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub user_id: String,
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub kind: TweetKind,
    #[serde(default)]
    pub hashtags: Vec<String>,
    #[serde(default)]
    pub mentions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retweet_of: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reply_to: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conversation_id: Option<String>,
}

/// Wire shape of a line before timestamp validation.
#[derive(Deserialize)]
struct RawTweet {
    tweet_id: String,
    user_id: String,
    created_at: String,
    text: String,
    kind: TweetKind,
    #[serde(default)]
    hashtags: Vec<String>,
    #[serde(default)]
    mentions: Vec<String>,
    #[serde(default)]
    retweet_of: Option<String>,
    #[serde(default)]
    reply_to: Option<String>,
    #[serde(default)]
    conversation_id: Option<String>,
}

/// Keeps records carrying at least one tracked hashtag inside a closed time
/// window. An empty hashtag list tracks everything; missing bounds are open.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HashtagTimeFilter {
    pub hashtags: Vec<String>,
    pub start: Option<DateTime<Utc>>,
    pub end: Option<DateTime<Utc>>,
}

fn normalize_tag(tag: &str) -> String {
    tag.trim().trim_start_matches('#').to_lowercase()
}

impl HashtagTimeFilter {
    pub fn new(hashtags: &[&str], start: Option<DateTime<Utc>>, end: Option<DateTime<Utc>>) -> Self {
        HashtagTimeFilter {
            hashtags: hashtags.iter().map(|t| normalize_tag(t)).collect(),
            start,
            end,
        }
    }

    pub fn matches(&self, tweet: &TweetRecord) -> bool {
        if self.start.is_some_and(|s| tweet.created_at < s) {
            return false;
        }
        if self.end.is_some_and(|e| tweet.created_at > e) {
            return false;
        }
        if self.hashtags.is_empty() {
            return true;
        }
        tweet.hashtags.iter().any(|h| {
            let h = normalize_tag(h);
            self.hashtags.iter().any(|t| *t == h)
        })
    }
}

/// Line accounting for one tweet file. `kept + filtered + skipped` always
/// equals `total_lines`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub total_lines: usize,
    pub kept: usize,
    pub filtered: usize,
    pub skipped: usize,
    pub originals: usize,
    pub retweets: usize,
    pub replies: usize,
    /// Skip reason -> count.
    pub rejected: BTreeMap<String, usize>,
}

impl IngestReport {
    fn reject(&mut self, reason: &str) {
        self.skipped += 1;
        *self.rejected.entry(reason.to_string()).or_default() += 1;
    }
}

pub fn load_tweets(
    path: &Path,
    filter: &HashtagTimeFilter,
    mode: Mode,
) -> Result<(Vec<TweetRecord>, IngestReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_tweets(BufReader::new(file), &path.display().to_string(), filter, mode)
}

/// Parses JSON lines from any reader. `source` names the input in errors.
pub fn read_tweets<R: BufRead>(
    reader: R,
    source: &str,
    filter: &HashtagTimeFilter,
    mode: Mode,
) -> Result<(Vec<TweetRecord>, IngestReport)> {
    let mut report = IngestReport::default();
    let mut tweets = Vec::new();
    let mut seen = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(source, e))?;
        report.total_lines += 1;

        let outcome = parse_line(&line).and_then(|t| {
            if seen.contains(&t.tweet_id) {
                Err(("duplicate tweet_id", format!("duplicate tweet_id {}", t.tweet_id)))
            } else {
                Ok(t)
            }
        });
        let tweet = match outcome {
            Ok(t) => t,
            Err((reason, detail)) => {
                if mode == Mode::Strict {
                    return Err(Error::data(source, lineno, detail));
                }
                log::debug!("{source}:{lineno}: skipped ({detail})");
                report.reject(reason);
                continue;
            }
        };
        seen.insert(tweet.tweet_id.clone());

        if !filter.matches(&tweet) {
            report.filtered += 1;
            continue;
        }
        report.kept += 1;
        match tweet.kind {
            TweetKind::Original => report.originals += 1,
            TweetKind::Retweet => report.retweets += 1,
            TweetKind::Reply => report.replies += 1,
        }
        tweets.push(tweet);
    }
    Ok((tweets, report))
}

fn parse_line(line: &str) -> std::result::Result<TweetRecord, (&'static str, String)> {
    if line.trim().is_empty() {
        return Err(("empty line", "empty line".into()));
    }
    let raw: RawTweet =
        serde_json::from_str(line).map_err(|e| ("malformed record", e.to_string()))?;
    let created_at = DateTime::parse_from_rfc3339(raw.created_at.trim())
        .map(|t| t.with_timezone(&Utc).trunc_subsecs(0))
        .map_err(|e| {
            (
                "unparseable timestamp",
                format!("bad created_at {:?}: {e}", raw.created_at),
            )
        })?;
    if raw.tweet_id.is_empty() || raw.user_id.is_empty() {
        return Err(("missing id", "empty tweet_id or user_id".into()));
    }
    if raw.kind == TweetKind::Retweet && raw.mentions.is_empty() && raw.retweet_of.is_none() {
        return Err((
            "retweet without source",
            format!("retweet {} names no source", raw.tweet_id),
        ));
    }
    Ok(TweetRecord {
        tweet_id: raw.tweet_id,
        user_id: raw.user_id,
        created_at,
        text: raw.text,
        kind: raw.kind,
        hashtags: raw.hashtags.iter().map(|h| normalize_tag(h)).collect(),
        mentions: raw.mentions,
        retweet_of: raw.retweet_of,
        reply_to: raw.reply_to,
        conversation_id: raw.conversation_id,
    })
}

pub fn write_tweets<W: Write>(mut out: W, tweets: &[TweetRecord]) -> Result<()> {
    for t in tweets {
        serde_json::to_writer(&mut out, t)?;
        out.write_all(b"\n").map_err(|e| Error::io("<tweets>", e))?;
    }
    Ok(())
}

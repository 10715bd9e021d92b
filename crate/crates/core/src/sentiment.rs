//! Unigram lexicon scoring, network-wide rescaling and per-user aggregation.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ingest::Lexicon;
use crate::stats::ordered_sum;
use crate::types::Polarity;

/// Largest magnitude a rescaled positive or negative sum can take.
pub const MAX_SCALED: f64 = 5.0;

fn is_url(word: &str) -> bool {
    let w = word.to_ascii_lowercase();
    w.starts_with("http://") || w.starts_with("https://") || w.starts_with("www.")
}

/// Lowercase unigrams. URLs and `@mentions` are removed, `#` prefixes are
/// stripped, a leading `RT` retweet marker is dropped, and the rest is split
/// on runs of non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let mut start = 0;
    while start + 1 < words.len()
        && words[start].eq_ignore_ascii_case("rt")
        && words[start + 1].starts_with('@')
    {
        start += 1;
        while start < words.len() && words[start].starts_with('@') {
            start += 1;
        }
    }

    let mut tokens = Vec::new();
    for word in &words[start..] {
        if word.starts_with('@') || is_url(word) {
            continue;
        }
        let lowered = word.trim_start_matches('#').to_lowercase();
        tokens.extend(
            lowered
                .split(|c: char| !c.is_alphanumeric())
                .filter(|t| !t.is_empty())
                .map(str::to_owned),
        );
    }
    tokens
}

/// Sums of positive and negative lexicon hits for one tweet.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawScore {
    pub pos: i64,
    pub neg: i64,
}

pub fn score_tweet<S: AsRef<str>>(tokens: &[S], lexicon: &Lexicon) -> RawScore {
    let mut raw = RawScore::default();
    for tok in tokens {
        match lexicon.get(tok.as_ref()) {
            Some(s) if s > 0 => raw.pos += i64::from(s),
            Some(s) if s < 0 => raw.neg += i64::from(s),
            _ => {}
        }
    }
    raw
}

pub fn score_text(text: &str, lexicon: &Lexicon) -> RawScore {
    score_tweet(&tokenize(text), lexicon)
}

/// Maps raw sums into [0, 5] and [-5, 0] using the largest positive and
/// most negative sums observed over a tweet set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Rescaler {
    pub max_pos: i64,
    pub min_neg: i64,
}

impl Rescaler {
    pub fn fit<'a>(raws: impl IntoIterator<Item = &'a RawScore>) -> Rescaler {
        raws.into_iter().fold(Rescaler::default(), |acc, r| Rescaler {
            max_pos: acc.max_pos.max(r.pos),
            min_neg: acc.min_neg.min(r.neg),
        })
    }

    /// Divisor applied to positive sums (`max_pos / 5`).
    pub fn pos_divisor(&self) -> f64 {
        self.max_pos as f64 / MAX_SCALED
    }

    /// Divisor applied to the magnitude of negative sums (`|min_neg| / 5`).
    pub fn neg_divisor(&self) -> f64 {
        self.min_neg.unsigned_abs() as f64 / MAX_SCALED
    }

    pub fn scale_pos(&self, pos: i64) -> f64 {
        if self.max_pos == 0 {
            0.0
        } else {
            // raw * 5 / max keeps the maximum at exactly 5.0
            pos as f64 * MAX_SCALED / self.max_pos as f64
        }
    }

    pub fn scale_neg(&self, neg: i64) -> f64 {
        if self.min_neg == 0 {
            0.0
        } else {
            neg as f64 * MAX_SCALED / self.min_neg.unsigned_abs() as f64
        }
    }

    pub fn apply(&self, tweet_id: &str, raw: RawScore) -> TweetSentiment {
        let scaled_pos = self.scale_pos(raw.pos);
        let scaled_neg = self.scale_neg(raw.neg);
        TweetSentiment {
            tweet_id: tweet_id.to_string(),
            raw_pos: raw.pos,
            raw_neg: raw.neg,
            scaled_pos,
            scaled_neg,
            score: scaled_pos + scaled_neg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetSentiment {
    pub tweet_id: String,
    pub raw_pos: i64,
    pub raw_neg: i64,
    pub scaled_pos: f64,
    pub scaled_neg: f64,
    pub score: f64,
}

/// Rescales a whole tweet set with constants fitted on that same set.
pub fn rescale_corpus<S: AsRef<str>>(raws: &[(S, RawScore)]) -> (Rescaler, Vec<TweetSentiment>) {
    let rescaler = Rescaler::fit(raws.iter().map(|(_, r)| r));
    let scored = raws
        .iter()
        .map(|(id, r)| rescaler.apply(id.as_ref(), *r))
        .collect();
    (rescaler, scored)
}

/// A scored tweet with its sender and the in-network users it mentions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub tweet_id: String,
    pub sender: String,
    pub receivers: Vec<String>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserSentiment {
    pub user_id: String,
    pub sent_out: Option<f64>,
    pub sent_in: Option<f64>,
    pub n_out: usize,
    pub n_in: usize,
    pub polarity: Polarity,
}

/// Messages in index form, for repeated re-aggregation under resampled scores.
#[derive(Debug, Clone, Default)]
pub struct MessageTable {
    pub users: Vec<String>,
    pub senders: Vec<usize>,
    pub receivers: Vec<Vec<usize>>,
    pub scores: Vec<f64>,
}

impl MessageTable {
    /// Messages without receivers are dropped; repeated receivers inside one
    /// message count once.
    pub fn new(messages: &[Message]) -> MessageTable {
        let users: Vec<String> = messages
            .iter()
            .filter(|m| !m.receivers.is_empty())
            .flat_map(|m| std::iter::once(&m.sender).chain(&m.receivers))
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = |u: &str| users.binary_search_by(|x| x.as_str().cmp(u)).unwrap();

        let mut table = MessageTable::default();
        for m in messages.iter().filter(|m| !m.receivers.is_empty()) {
            let sender = index(&m.sender);
            let recv: BTreeSet<usize> = m
                .receivers
                .iter()
                .map(|r| index(r))
                .filter(|&r| r != sender)
                .collect();
            if recv.is_empty() {
                continue;
            }
            table.senders.push(sender);
            table.receivers.push(recv.into_iter().collect());
            table.scores.push(m.score);
        }
        table.users = users;
        table
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Per-user (sent_out, sent_in) means for the given per-message scores.
    /// Each message counts once for its sender and once for every receiver.
    pub fn means(&self, scores: &[f64]) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
        let n = self.users.len();
        let mut outs: Vec<Vec<f64>> = vec![Vec::new(); n];
        let mut ins: Vec<Vec<f64>> = vec![Vec::new(); n];
        for ((&s, recv), &score) in self.senders.iter().zip(&self.receivers).zip(scores) {
            outs[s].push(score);
            for &r in recv {
                ins[r].push(score);
            }
        }
        let mean = |v: &Vec<f64>| (!v.is_empty()).then(|| ordered_sum(v) / v.len() as f64);
        (outs.iter().map(mean).collect(), ins.iter().map(mean).collect())
    }

    pub fn counts(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.users.len();
        let (mut n_out, mut n_in) = (vec![0; n], vec![0; n]);
        for (&s, recv) in self.senders.iter().zip(&self.receivers) {
            n_out[s] += 1;
            for &r in recv {
                n_in[r] += 1;
            }
        }
        (n_out, n_in)
    }
}

/// Mean outgoing and incoming sentiment for every user that sends or
/// receives at least one message.
pub fn aggregate_users(messages: &[Message]) -> BTreeMap<String, UserSentiment> {
    let table = MessageTable::new(messages);
    let (outs, ins) = table.means(&table.scores);
    let (n_out, n_in) = table.counts();
    table
        .users
        .iter()
        .enumerate()
        .map(|(i, u)| {
            (
                u.clone(),
                UserSentiment {
                    user_id: u.clone(),
                    sent_out: outs[i],
                    sent_in: ins[i],
                    n_out: n_out[i],
                    n_in: n_in[i],
                    polarity: Polarity::from_mean(outs[i]),
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tokenizer_rules() {
        assert_eq!(
            tokenize("Great day, VOTE yes! #together4yes"),
            ["great", "day", "vote", "yes", "together4yes"]
        );
        assert_eq!(tokenize("RT @ann: so sad https://t.co/x"), ["so", "sad"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("rt is fine"), ["rt", "is", "fine"]);
        assert_eq!(tokenize("Ünïcode—words   www.x.ie"), ["ünïcode", "words"]);
    }

    #[test]
    fn scoring_sums_by_sign() {
        let lex = Lexicon::from_pairs([("good", 3), ("bad", -2), ("abandon", -2)]);
        assert_eq!(score_tweet(&["good", "good", "bad"], &lex), RawScore { pos: 6, neg: -2 });
        assert_eq!(score_tweet(&["meh"], &lex), RawScore::default());
        assert_eq!(score_tweet(&["abandon", "abandon"], &lex), RawScore { pos: 0, neg: -4 });
    }

    #[test]
    fn divisor_example() {
        let r = Rescaler { max_pos: 50, min_neg: -40 };
        assert_eq!(r.pos_divisor(), 10.0);
        assert_eq!(r.neg_divisor(), 8.0);
        let t = r.apply("t", RawScore { pos: 20, neg: -8 });
        assert_eq!((t.scaled_pos, t.scaled_neg, t.score), (2.0, -1.0, 1.0));
        assert_eq!(r.apply("z", RawScore::default()).score, 0.0);
    }

    #[test]
    fn neutral_corpus_rescales_to_zero() {
        let (r, s) = rescale_corpus(&[("a", RawScore::default())]);
        assert_eq!(r, Rescaler::default());
        assert_eq!(s[0].score, 0.0);
    }

    fn msg(sender: &str, receivers: &[&str], score: f64) -> Message {
        Message {
            tweet_id: format!("{sender}-{score}"),
            sender: sender.into(),
            receivers: receivers.iter().map(|s| s.to_string()).collect(),
            score,
        }
    }

    #[test]
    fn aggregation_means_and_multi_mention() {
        let users = aggregate_users(&[
            msg("u", &["a"], 1.0),
            msg("u", &["b"], -0.5),
            msg("u", &["a", "b"], 0.0),
            msg("c", &["a", "b", "a"], 2.0),
        ]);
        let u = &users["u"];
        assert!((u.sent_out.unwrap() - 1.0 / 6.0).abs() < 1e-9);
        assert_eq!(u.n_out, 3);
        assert_eq!(u.sent_in, None);
        assert_eq!(u.polarity, Polarity::Positive);
        // a receives 1.0, 0.0 and 2.0 once each
        assert_eq!(users["a"].n_in, 3);
        assert_eq!(users["a"].sent_in, Some(1.0));
        assert_eq!(users["b"].n_in, 3);
        assert_eq!(users["a"].polarity, Polarity::Unknown);
    }

    #[test]
    fn neutral_sender_is_unknown() {
        let users = aggregate_users(&[msg("z", &["a"], 0.0), msg("z", &["b"], 0.0)]);
        assert_eq!(users["z"].sent_out, Some(0.0));
        assert_eq!(users["z"].polarity, Polarity::Unknown);
        assert_eq!(aggregate_users(&[msg("n", &["a"], -0.1)])["n"].polarity, Polarity::Negative);
    }

    fn raw_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((0i64..60, -60i64..=0), 1..80)
    }

    proptest! {
        #[test]
        fn rescaled_extremes_are_exact(raws in raw_strategy()) {
            let input: Vec<(String, RawScore)> = raws
                .iter()
                .enumerate()
                .map(|(i, &(pos, neg))| (i.to_string(), RawScore { pos, neg }))
                .collect();
            let (_, s) = rescale_corpus(&input);
            let max_pos = s.iter().map(|t| t.scaled_pos).fold(0.0, f64::max);
            let min_neg = s.iter().map(|t| t.scaled_neg).fold(0.0, f64::min);
            if raws.iter().any(|r| r.0 > 0) { prop_assert_eq!(max_pos, 5.0); }
            if raws.iter().any(|r| r.1 < 0) { prop_assert_eq!(min_neg, -5.0); }
            for t in &s {
                prop_assert!((-5.0..=5.0).contains(&t.score));
                prop_assert!((0.0..=5.0).contains(&t.scaled_pos));
                prop_assert!((-5.0..=0.0).contains(&t.scaled_neg));
                if t.raw_pos == 0 && t.raw_neg == 0 { prop_assert_eq!(t.score, 0.0); }
            }
        }

        #[test]
        fn doubling_lexicon_leaves_scaled_scores(raws in raw_strategy()) {
            let one: Vec<(usize, RawScore)> = raws.iter().enumerate()
                .map(|(i, &(pos, neg))| (i, RawScore { pos, neg })).collect();
            let two: Vec<(usize, RawScore)> = raws.iter().enumerate()
                .map(|(i, &(pos, neg))| (i, RawScore { pos: 2 * pos, neg: 2 * neg })).collect();
            let a = rescale_corpus(&one.iter().map(|(i, r)| (i.to_string(), *r)).collect::<Vec<_>>()).1;
            let b = rescale_corpus(&two.iter().map(|(i, r)| (i.to_string(), *r)).collect::<Vec<_>>()).1;
            for (x, y) in a.iter().zip(&b) {
                prop_assert_eq!(x.score, y.score);
            }
        }

        #[test]
        fn aggregation_ignores_message_order(
            scores in prop::collection::vec(-5.0f64..5.0, 1..40),
            seed in 0u64..500,
        ) {
            use rand::seq::SliceRandom;
            let users = ["a", "b", "c", "d"];
            let mut msgs: Vec<Message> = scores.iter().enumerate().map(|(i, &s)| {
                msg(users[i % 4], &[users[(i + 1) % 4], users[(i + 2) % 4]], s)
            }).collect();
            let before = aggregate_users(&msgs);
            msgs.shuffle(&mut crate::rng::stream(seed, 1));
            prop_assert_eq!(before, aggregate_users(&msgs));
        }
    }
}

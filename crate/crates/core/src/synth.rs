//! Planted two-sided corpora with known sides and known cascades.
//!
//! Users are split into a yes block (`y0000`...) and a no block (`n0000`...).
//! Every unordered pair is linked with `p_in` inside a block and `p_out`
//! across; a linked pair mentions each other in both directions. Tweet
//! sentiment uses a two-word lexicon (`good` = +2, `bad` = -2) and each user
//! has a leaning drawn around their side's mean. Cascades are seeded on one
//! side and grow by a geometric branching law; each child comes from the
//! other side with probability `cross_side_retweet_prob`.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric, Normal};
use serde::{Deserialize, Serialize};

use crate::ingest::{write_tweets, Lexicon, TweetKind, TweetRecord};
use crate::rng;
use crate::types::Side;
use crate::{Error, Result};

pub const HASHTAG: &str = "synth";
const WINDOW_DAYS: i64 = 25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_yes: usize,
    pub n_no: usize,
    pub p_in: f64,
    pub p_out: f64,
    /// Mean per-word polarity in [-1, 1] for each side.
    pub mean_yes: f64,
    pub mean_no: f64,
    /// Standard deviation of individual leanings around the side mean.
    pub spread: f64,
    pub words_per_tweet: usize,
    /// Each direction of a linked pair gets 1..=this many tweets.
    pub max_tweets_per_direction: usize,
    pub cascades: usize,
    /// Mean offspring per node; the seed gets one extra child.
    pub branching_mean: f64,
    pub max_cascade_size: usize,
    pub cross_side_retweet_prob: f64,
    pub annotated_fraction: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_yes: 100,
            n_no: 100,
            p_in: 0.2,
            p_out: 0.01,
            mean_yes: 0.3,
            mean_no: -0.3,
            spread: 0.2,
            words_per_tweet: 5,
            max_tweets_per_direction: 2,
            cascades: 200,
            branching_mean: 0.9,
            max_cascade_size: 60,
            cross_side_retweet_prob: 0.02,
            annotated_fraction: 0.3,
            seed: 1,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_yes == 0 || self.n_no == 0 {
            return bad("both sides need at least one user".into());
        }
        for (name, p) in [
            ("p_in", self.p_in),
            ("p_out", self.p_out),
            ("cross_side_retweet_prob", self.cross_side_retweet_prob),
            ("annotated_fraction", self.annotated_fraction),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        for (name, m) in [("mean_yes", self.mean_yes), ("mean_no", self.mean_no)] {
            if !(-1.0..=1.0).contains(&m) {
                return bad(format!("{name} must lie in [-1, 1], got {m}"));
            }
        }
        if !(self.spread >= 0.0) || !(self.branching_mean >= 0.0) {
            return bad("spread and branching_mean must be non-negative".into());
        }
        if self.words_per_tweet == 0 || self.max_tweets_per_direction == 0 {
            return bad("words_per_tweet and max_tweets_per_direction must be positive".into());
        }
        if self.max_cascade_size < 2 {
            return bad("max_cascade_size must be at least 2".into());
        }
        for (side, own, other) in [("yes", self.n_yes, self.n_no), ("no", self.n_no, self.n_yes)] {
            let degree = self.p_in * (own - 1) as f64 + self.p_out * other as f64;
            if degree < 1.0 {
                return bad(format!(
                    "expected degree {degree:.3} on the {side} side is below 1; raise p_in/p_out or the side size"
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedCascade {
    pub cascade_id: usize,
    pub seed_side: Side,
    /// `(user, parent)` in time order; the seed has no parent.
    pub members: Vec<(String, Option<String>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub config: SynthConfig,
    pub tweets: Vec<TweetRecord>,
    pub lexicon: Lexicon,
    pub sides: BTreeMap<String, Side>,
    pub annotations: BTreeMap<String, Side>,
    /// `(follower, followed)`, sorted.
    pub followers: Vec<(String, String)>,
    pub cascades: Vec<PlantedCascade>,
}

pub fn user_id(side: Side, i: usize) -> String {
    match side {
        Side::Yes => format!("y{i:04}"),
        Side::No => format!("n{i:04}"),
    }
}

fn window_start() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2018, 5, 1, 0, 0, 0).unwrap()
}

/// Stream indices for the independent parts of generation.
mod streams {
    pub const LEANING: u64 = 0;
    pub const LINKS: u64 = 1;
    pub const TWEETS: u64 = 2;
    pub const CASCADES: u64 = 3;
    pub const ANNOTATION: u64 = 4;
}

struct Draft {
    user: String,
    at: DateTime<Utc>,
    text: String,
    kind: TweetKind,
    mentions: Vec<String>,
    /// Draft index of the cascade seed for retweets.
    source: Option<usize>,
}

fn sentiment_words(rng: &mut impl Rng, leaning: f64, words: usize) -> Vec<&'static str> {
    let p_good = (1.0 + leaning) / 2.0;
    (0..words)
        .map(|_| if rng.random_bool(p_good) { "good" } else { "bad" })
        .collect()
}

fn random_time(rng: &mut impl Rng) -> DateTime<Utc> {
    window_start() + Duration::seconds(rng.random_range(0..WINDOW_DAYS * 86_400))
}

pub fn generate(config: &SynthConfig) -> Result<SynthCorpus> {
    config.validate()?;
    let seed = config.seed;
    let users: Vec<(String, Side)> = (0..config.n_yes)
        .map(|i| (user_id(Side::Yes, i), Side::Yes))
        .chain((0..config.n_no).map(|i| (user_id(Side::No, i), Side::No)))
        .collect();
    let n = users.len();
    let side_of = |u: usize| users[u].1;

    let mut rng = rng::stream(seed, streams::LEANING);
    let leaning: Vec<f64> = users
        .iter()
        .map(|(_, side)| {
            let mean = match side {
                Side::Yes => config.mean_yes,
                Side::No => config.mean_no,
            };
            let x = if config.spread > 0.0 {
                Normal::new(mean, config.spread).unwrap().sample(&mut rng)
            } else {
                mean
            };
            x.clamp(-1.0, 1.0)
        })
        .collect();

    let mut rng = rng::stream(seed, streams::LINKS);
    let mut partners: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in 0..n {
        for b in a + 1..n {
            let p = if side_of(a) == side_of(b) { config.p_in } else { config.p_out };
            if rng.random_bool(p) {
                partners[a].push(b);
                partners[b].push(a);
            }
        }
    }

    let mut drafts: Vec<Draft> = Vec::new();
    let mut rng = rng::stream(seed, streams::TWEETS);
    let mut conversation = 0usize;
    let mut mention_tweet = |drafts: &mut Vec<Draft>, rng: &mut rand_chacha::ChaCha8Rng, a: usize, b: usize, at: DateTime<Utc>| {
        let words = sentiment_words(rng, leaning[a], config.words_per_tweet);
        drafts.push(Draft {
            user: users[a].0.clone(),
            at,
            text: format!("c{conversation} @{} {} #{HASHTAG}", users[b].0, words.join(" ")),
            kind: TweetKind::Original,
            mentions: vec![users[b].0.clone()],
            source: None,
        });
        conversation += 1;
    };
    for a in 0..n {
        for &b in &partners[a] {
            for _ in 0..rng.random_range(1..=config.max_tweets_per_direction) {
                let at = random_time(&mut rng);
                mention_tweet(&mut drafts, &mut rng, a, b, at);
            }
        }
    }

    let mut rng = rng::stream(seed, streams::CASCADES);
    let offspring = Geometric::new(1.0 / (1.0 + config.branching_mean)).unwrap();
    let mut linked: HashSet<(usize, usize)> = partners
        .iter()
        .enumerate()
        .flat_map(|(a, ps)| ps.iter().map(move |&b| (a, b)))
        .collect();
    let side_members = |s: Side| -> Vec<usize> { (0..n).filter(|&u| side_of(u) == s).collect() };
    let by_side = [side_members(Side::Yes), side_members(Side::No)];
    let side_index = |s: Side| if s == Side::Yes { 0 } else { 1 };
    // (user, draft index) per cascade, in generation order
    let mut planted: Vec<(Side, Vec<(usize, usize)>)> = Vec::new();
    for c in 0..config.cascades {
        let seed_side = if rng.random_bool(0.5) { Side::Yes } else { Side::No };
        let root = *by_side[side_index(seed_side)].choose(&mut rng).unwrap();
        let at = random_time(&mut rng);
        let words = sentiment_words(&mut rng, leaning[root], config.words_per_tweet);
        let root_draft = drafts.len();
        drafts.push(Draft {
            user: users[root].0.clone(),
            at,
            text: format!("story s{c} {} #{HASHTAG}", words.join(" ")),
            kind: TweetKind::Original,
            mentions: vec![],
            source: None,
        });
        let mut members = vec![(root, root_draft)];
        let mut in_cascade: HashSet<usize> = HashSet::from([root]);
        let mut frontier = 0;
        while frontier < members.len() && members.len() < config.max_cascade_size {
            let (src, src_draft) = members[frontier];
            let mut kids = offspring.sample(&mut rng) as usize;
            if frontier == 0 {
                kids += 1;
            }
            for _ in 0..kids {
                if members.len() >= config.max_cascade_size {
                    break;
                }
                let target = if rng.random_bool(config.cross_side_retweet_prob) {
                    side_of(src).other()
                } else {
                    side_of(src)
                };
                let options: Vec<usize> = partners[src]
                    .iter()
                    .copied()
                    .filter(|&v| side_of(v) == target && !in_cascade.contains(&v))
                    .collect();
                let child = match options.choose(&mut rng) {
                    Some(&v) => v,
                    None => {
                        let free: Vec<usize> = by_side[side_index(target)]
                            .iter()
                            .copied()
                            .filter(|v| !in_cascade.contains(v))
                            .collect();
                        let Some(&v) = free.choose(&mut rng) else { continue };
                        if linked.insert((v, src)) {
                            let at = random_time(&mut rng);
                            mention_tweet(&mut drafts, &mut rng, v, src, at);
                        }
                        v
                    }
                };
                let at = drafts[src_draft].at + Duration::seconds(rng.random_range(1..=3_600));
                in_cascade.insert(child);
                drafts.push(Draft {
                    user: users[child].0.clone(),
                    at,
                    text: format!("RT @{}: {}", users[root].0, drafts[root_draft].text),
                    kind: TweetKind::Retweet,
                    mentions: vec![],
                    source: Some(root_draft),
                });
                members.push((child, drafts.len() - 1));
            }
            frontier += 1;
        }
        planted.push((seed_side, members));
    }

    // tweet ids follow time, then generation order
    let mut order: Vec<usize> = (0..drafts.len()).collect();
    order.sort_by_key(|&i| (drafts[i].at, i));
    let mut ids = vec![String::new(); drafts.len()];
    for (rank, &i) in order.iter().enumerate() {
        ids[i] = format!("t{rank:07}");
    }
    let tweets: Vec<TweetRecord> = order
        .iter()
        .map(|&i| {
            let d = &drafts[i];
            TweetRecord {
                tweet_id: ids[i].clone(),
                user_id: d.user.clone(),
                created_at: d.at,
                text: d.text.clone(),
                kind: d.kind,
                hashtags: vec![HASHTAG.to_string()],
                mentions: d.mentions.clone(),
                retweet_of: d.source.map(|s| ids[s].clone()),
                reply_to: None,
                conversation_id: None,
            }
        })
        .collect();

    let cascades = planted
        .into_iter()
        .enumerate()
        .map(|(cascade_id, (seed_side, members))| {
            let mut timeline: Vec<(usize, DateTime<Utc>, &str)> = members
                .iter()
                .map(|&(u, d)| (u, drafts[d].at, ids[d].as_str()))
                .collect();
            timeline.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.2.cmp(b.2)));
            let members = (0..timeline.len())
                .map(|i| {
                    let u = timeline[i].0;
                    // latest earlier member the user mentions; on equal times
                    // the smaller tweet id, i.e. the earlier position
                    let parent = (0..i)
                        .filter(|&j| linked.contains(&(u, timeline[j].0)))
                        .max_by(|&x, &y| timeline[x].1.cmp(&timeline[y].1).then(y.cmp(&x)))
                        .map(|j| users[timeline[j].0].0.clone());
                    (users[u].0.clone(), parent)
                })
                .collect();
            PlantedCascade { cascade_id, seed_side, members }
        })
        .collect();

    let mut rng = rng::stream(seed, streams::ANNOTATION);
    let sides: BTreeMap<String, Side> = users.iter().cloned().collect();
    let annotations = users
        .iter()
        .filter(|_| rng.random_bool(config.annotated_fraction))
        .cloned()
        .collect();
    let mut followers: Vec<(String, String)> = linked
        .iter()
        .map(|&(a, b)| (users[a].0.clone(), users[b].0.clone()))
        .collect();
    followers.sort();

    Ok(SynthCorpus {
        config: config.clone(),
        tweets,
        lexicon: Lexicon::from_pairs([("good", 2), ("bad", -2)]),
        sides,
        annotations,
        followers,
        cascades,
    })
}

impl SynthCorpus {
    /// Fraction of directed user links that stay inside a side.
    pub fn same_side_link_fraction(&self) -> f64 {
        let same = self
            .followers
            .iter()
            .filter(|(a, b)| self.sides[a] == self.sides[b])
            .count();
        same as f64 / self.followers.len().max(1) as f64
    }

    /// Writes `tweets.jsonl`, `lexicon.tsv`, `annotations.csv`,
    /// `followers.csv`, `truth_sides.csv` and `truth_cascades.csv`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let create = |name: &str| -> Result<BufWriter<File>> {
            let p = dir.join(name);
            Ok(BufWriter::new(File::create(&p).map_err(|e| Error::io(&p, e))?))
        };

        write_tweets(create("tweets.jsonl")?, &self.tweets)?;

        let p = dir.join("lexicon.tsv");
        let mut lex = create("lexicon.tsv")?;
        let mut entries = self.lexicon.entries();
        entries.sort();
        for (word, score) in entries {
            writeln!(lex, "{word}\t{score}").map_err(|e| Error::io(&p, e))?;
        }
        lex.flush().map_err(|e| Error::io(&p, e))?;

        let mut w = csv::Writer::from_writer(create("annotations.csv")?);
        w.write_record(["user_id", "label"])?;
        for (u, s) in &self.annotations {
            w.write_record([u.as_str(), s.as_str()])?;
        }
        w.flush().map_err(|e| Error::io(dir, e))?;

        let mut w = csv::Writer::from_writer(create("followers.csv")?);
        w.write_record(["follower", "followed"])?;
        for (a, b) in &self.followers {
            w.write_record([a, b])?;
        }
        w.flush().map_err(|e| Error::io(dir, e))?;

        let mut w = csv::Writer::from_writer(create("truth_sides.csv")?);
        w.write_record(["user_id", "side"])?;
        for (u, s) in &self.sides {
            w.write_record([u.as_str(), s.as_str()])?;
        }
        w.flush().map_err(|e| Error::io(dir, e))?;

        let mut w = csv::Writer::from_writer(create("truth_cascades.csv")?);
        w.write_record(["cascade_id", "seed_side", "user_id", "parent_user"])?;
        for c in &self.cascades {
            for (u, p) in &c.members {
                w.write_record([
                    c.cascade_id.to_string().as_str(),
                    c.seed_side.as_str(),
                    u,
                    p.as_deref().unwrap_or(""),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io(dir, e))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SynthConfig {
        SynthConfig {
            n_yes: 50,
            n_no: 50,
            cascades: 40,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn homophily_over_seeds() {
        for seed in 0..20 {
            let c = generate(&small(seed)).unwrap();
            let f = c.same_side_link_fraction();
            assert!(f > 0.85, "seed {seed}: same-side fraction {f}");
        }
    }

    #[test]
    fn no_cross_side_cascades_when_disabled() {
        let cfg = SynthConfig { cross_side_retweet_prob: 0.0, ..small(3) };
        let c = generate(&cfg).unwrap();
        for k in &c.cascades {
            assert!(k.members.len() >= 2);
            assert!(k.members.iter().all(|(u, _)| c.sides[u] == k.seed_side));
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = generate(&small(9)).unwrap();
        let b = generate(&small(9)).unwrap();
        assert_eq!(a, b);
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        a.write_to(dir_a.path()).unwrap();
        b.write_to(dir_b.path()).unwrap();
        for f in ["tweets.jsonl", "truth_cascades.csv", "followers.csv", "annotations.csv"] {
            assert_eq!(
                std::fs::read(dir_a.path().join(f)).unwrap(),
                std::fs::read(dir_b.path().join(f)).unwrap()
            );
        }
        assert_ne!(a.tweets, generate(&small(10)).unwrap().tweets);
    }

    #[test]
    fn planted_parents_are_mentioned_and_earlier() {
        let c = generate(&small(4)).unwrap();
        let links: HashSet<(&str, &str)> = c.followers.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        for k in &c.cascades {
            assert!(k.members[0].1.is_none());
            for (i, (u, p)) in k.members.iter().enumerate().skip(1) {
                let p = p.as_deref().expect("every retweeter has a parent");
                assert!(links.contains(&(u.as_str(), p)));
                assert!(k.members[..i].iter().any(|(v, _)| v == p));
            }
        }
    }

    #[test]
    fn infeasible_configs_rejected() {
        let sparse = SynthConfig { n_yes: 5, n_no: 5, p_in: 0.1, p_out: 0.0, ..Default::default() };
        assert!(matches!(generate(&sparse), Err(Error::Config(_))));
        let empty = SynthConfig { n_no: 0, ..Default::default() };
        assert!(generate(&empty).is_err());
        let prob = SynthConfig { p_in: 1.5, ..Default::default() };
        assert!(generate(&prob).is_err());
    }

    #[test]
    fn retweets_point_at_their_seed() {
        let c = generate(&small(5)).unwrap();
        let by_id: BTreeMap<&str, &TweetRecord> = c.tweets.iter().map(|t| (t.tweet_id.as_str(), t)).collect();
        for t in c.tweets.iter().filter(|t| t.kind == TweetKind::Retweet) {
            let src = by_id[t.retweet_of.as_deref().unwrap()];
            assert_eq!(src.kind, TweetKind::Original);
            assert!(src.created_at < t.created_at);
            assert!(t.text.ends_with(&src.text));
        }
    }
}

//! Acceptance suite. Runs every criterion in order and prints one
//! `PASS`/`FAIL` line each; exits non-zero if any failed.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use chrono::{DateTime, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::Rng;

use polarnet::cascades::{
    attribute_parents, score_parents, BucketMember, EdgeOracle, RetweetBucket,
};
use polarnet::graph::{build_mention_graph, MentionGraph};
use polarnet::ingest::{read_followers, TweetKind, TweetRecord};
use polarnet::nullmodels::{
    assortativity, assortativity_test, link_class_fraction_test, sentiment_correlation_test,
    Verdict,
};
use polarnet::pipeline::{self, RunConfig};
use polarnet::rng::stream;
use polarnet::sentiment::{rescale_corpus, Message, MessageTable, RawScore, Rescaler};
use polarnet::synth::{self, SynthConfig};
use polarnet::{Polarity, Side};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    if elapsed > Duration::from_secs(limit_secs) {
        Err(format!("took {:.1}s, limit {limit_secs}s", elapsed.as_secs_f64()))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------- metrics

/// All-pairs distances by BFS over the undirected tree.
fn brute_metrics(parents: &[Option<usize>]) -> (u32, u64, u64) {
    let n = parents.len();
    let mut adj = vec![Vec::new(); n];
    let mut root = 0;
    for (c, p) in parents.iter().enumerate() {
        match p {
            Some(p) => {
                adj[c].push(*p);
                adj[*p].push(c);
            }
            None => root = c,
        }
    }
    let bfs = |s: usize| {
        let mut d = vec![u64::MAX; n];
        d[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if d[v] == u64::MAX {
                    d[v] = d[u] + 1;
                    q.push_back(v);
                }
            }
        }
        d
    };
    let from_root = bfs(root);
    let max_depth = *from_root.iter().max().unwrap() as u32;
    let depth_sum: u64 = from_root.iter().sum();
    let mut pair_sum = 0;
    for s in 0..n {
        pair_sum += bfs(s).iter().sum::<u64>();
    }
    (max_depth, depth_sum, pair_sum / 2)
}

fn random_tree(rng: &mut impl Rng, n: usize) -> Vec<Option<usize>> {
    // random attachment, then a random relabelling so nodes come in any order
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut parents = vec![None; n];
    for k in 1..n {
        parents[perm[k]] = Some(perm[rng.random_range(0..k)]);
    }
    parents
}

fn cascade_metrics() -> Outcome {
    let mut rng = stream(0xACCE_0001, 0);
    let mut trees = 0;
    for _ in 0..600 {
        let n = rng.random_range(2..=10);
        let parents = random_tree(&mut rng, n);
        let s = score_parents(&parents).map_err(|e| e.to_string())?;
        let (m, depth_sum, wiener) = brute_metrics(&parents);
        let v = 2.0 * wiener as f64 / (n * (n - 1)) as f64;
        ensure!(s.max_depth == m, "max depth {} vs {m} for {parents:?}", s.max_depth);
        ensure!(s.avg_depth == depth_sum as f64 / n as f64, "avg depth for {parents:?}");
        let got = s.virality.ok_or("virality missing")?;
        ensure!((got - v).abs() <= 1e-12, "virality {got} vs {v} for {parents:?}");
        trees += 1;
    }
    for n in 2..=10usize {
        let path: Vec<Option<usize>> = (0..n).map(|i| i.checked_sub(1)).collect();
        let star: Vec<Option<usize>> = (0..n).map(|i| (i > 0).then_some(0)).collect();
        let vp = score_parents(&path).unwrap().virality.unwrap();
        let vs = score_parents(&star).unwrap().virality.unwrap();
        ensure!((vp - (n as f64 + 1.0) / 3.0).abs() <= 1e-12, "path n={n}: {vp}");
        ensure!((vs - 2.0 * (n as f64 - 1.0) / n as f64).abs() <= 1e-12, "star n={n}: {vs}");
    }
    let two = score_parents(&[None, Some(0)]).unwrap();
    ensure!(
        two.max_depth == 1 && two.avg_depth == 0.5 && two.virality == Some(1.0),
        "two-node cascade gave {two:?}"
    );
    Ok(format!("{trees} random trees, paths, stars and the 2-node case agree"))
}

// --------------------------------------------------------- reconstruction

fn ts(secs: i64) -> DateTime<Utc> {
    Utc.timestamp_opt(1_600_000_000 + secs, 0).unwrap()
}

/// The attribution rule applied literally: keep each user's first tweet, and
/// give each later member the earliest-id tweet among the latest prior
/// members it links to.
fn brute_parents(
    members: &[BucketMember],
    links: &HashSet<(String, String)>,
) -> (BTreeMap<String, Option<String>>, usize) {
    let mut kept: Vec<&BucketMember> = Vec::new();
    for m in members {
        if !kept.iter().any(|k| k.user_id == m.user_id) {
            kept.push(m);
        }
    }
    let mut out = BTreeMap::new();
    for (i, m) in kept.iter().enumerate() {
        let cands: Vec<&&BucketMember> = kept[..i]
            .iter()
            .filter(|p| links.contains(&(m.user_id.clone(), p.user_id.clone())))
            .collect();
        let latest = cands.iter().map(|p| p.created_at).max();
        let parent = latest.and_then(|t| {
            cands
                .iter()
                .filter(|p| p.created_at == t)
                .min_by(|a, b| a.tweet_id.cmp(&b.tweet_id))
                .map(|p| p.user_id.clone())
        });
        out.insert(m.user_id.clone(), parent);
    }
    (out, members.len() - kept.len())
}

fn observed_parents(
    bucket: &RetweetBucket,
    oracle: &dyn EdgeOracle,
) -> (BTreeMap<String, Option<String>>, usize) {
    let (trees, dropped) = attribute_parents(bucket, oracle);
    let mut out = BTreeMap::new();
    for t in &trees {
        for n in &t.nodes {
            let parent = n.parent.map(|p| t.nodes[p].user_id.clone());
            out.insert(n.user_id.clone(), parent);
        }
    }
    (out, dropped)
}

fn make_bucket(mut members: Vec<BucketMember>) -> RetweetBucket {
    members.sort_by(|a, b| (a.created_at, &a.tweet_id).cmp(&(b.created_at, &b.tweet_id)));
    RetweetBucket { bucket_id: 0, normalized_text: "story".into(), members }
}

fn mention_oracle(links: &HashSet<(String, String)>) -> MentionGraph {
    let tweets: Vec<TweetRecord> = links
        .iter()
        .enumerate()
        .map(|(i, (a, b))| TweetRecord {
            tweet_id: format!("m{i}"),
            user_id: a.clone(),
            created_at: ts(0),
            text: format!("@{b} hi"),
            kind: TweetKind::Original,
            hashtags: vec![],
            mentions: vec![b.clone()],
            retweet_of: None,
            reply_to: None,
            conversation_id: None,
        })
        .collect();
    build_mention_graph(&tweets)
}

fn follower_oracle(links: &HashSet<(String, String)>) -> impl EdgeOracle {
    let mut csv = String::from("follower,followed\n");
    for (a, b) in links {
        csv.push_str(&format!("{a},{b}\n"));
    }
    read_followers(csv.as_bytes(), "links").unwrap().0
}

struct Case {
    bucket: RetweetBucket,
    links: HashSet<(String, String)>,
}

fn reconstruction_cases() -> Vec<Case> {
    let mut cases = Vec::new();
    // every link set over three users, in every arrival order, with a tie
    let users = ["a", "b", "c"];
    let pairs: Vec<(String, String)> = users
        .iter()
        .flat_map(|a| users.iter().filter(move |b| *b != a).map(move |b| (a.to_string(), b.to_string())))
        .collect();
    let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for mask in 0u32..(1 << pairs.len()) {
        let links: HashSet<_> = (0..pairs.len())
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| pairs[k].clone())
            .collect();
        for order in &orders {
            let members = order
                .iter()
                .enumerate()
                .map(|(pos, &u)| BucketMember {
                    tweet_id: format!("t{}", 9 - u),
                    user_id: users[u].into(),
                    // the last two share a timestamp
                    created_at: ts(pos.min(1) as i64),
                })
                .collect();
            cases.push(Case { bucket: make_bucket(members), links: links.clone() });
        }
    }
    // random buckets of up to eight tweets with repeats and timestamp ties
    let mut rng = stream(0xACCE_0002, 0);
    for _ in 0..1200 {
        let k = rng.random_range(1..=8);
        let pool = rng.random_range(1..=k);
        let mut ids: Vec<u32> = (0..100).collect();
        ids.shuffle(&mut rng);
        let members = (0..k)
            .map(|j| BucketMember {
                tweet_id: format!("t{:03}", ids[j]),
                user_id: format!("u{}", rng.random_range(0..pool)),
                created_at: ts(rng.random_range(0..4)),
            })
            .collect();
        let density = [0.2, 0.5, 0.8][rng.random_range(0..3)];
        let mut links = HashSet::new();
        for a in 0..pool {
            for b in 0..pool {
                if a != b && rng.random_bool(density) {
                    links.insert((format!("u{a}"), format!("u{b}")));
                }
            }
        }
        cases.push(Case { bucket: make_bucket(members), links });
    }
    cases
}

fn reconstruction() -> Outcome {
    let cases = reconstruction_cases();
    ensure!(cases.len() >= 1000, "only {} cases", cases.len());
    for (strategy, build) in [
        ("mention", &(|l: &HashSet<(String, String)>| Box::new(mention_oracle(l)) as Box<dyn EdgeOracle>)
            as &dyn Fn(&HashSet<(String, String)>) -> Box<dyn EdgeOracle>),
        ("follower", &|l: &HashSet<(String, String)>| Box::new(follower_oracle(l)) as Box<dyn EdgeOracle>),
    ] {
        for (i, case) in cases.iter().enumerate() {
            let oracle = build(&case.links);
            let want = brute_parents(&case.bucket.members, &case.links);
            let got = observed_parents(&case.bucket, oracle.as_ref());
            ensure!(got == want, "{strategy} case {i}: got {got:?}, want {want:?}");
        }
    }

    // the four-tweet example: C links to A and B, D links to C
    let members = ["A", "B", "C", "D"]
        .iter()
        .enumerate()
        .map(|(i, u)| BucketMember { tweet_id: format!("t{i}"), user_id: u.to_string(), created_at: ts(i as i64) })
        .collect();
    let links: HashSet<_> = [("C", "A"), ("C", "B"), ("D", "C")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let bucket = make_bucket(members);
    let (trees, _) = attribute_parents(&bucket, &mention_oracle(&links));
    let shapes: Vec<Vec<&str>> = trees.iter().map(|t| t.nodes.iter().map(|n| n.user_id.as_str()).collect()).collect();
    ensure!(shapes == vec![vec!["A"], vec!["B", "C", "D"]], "example gave {shapes:?}");
    Ok(format!("{} cases agree for both strategies", cases.len()))
}

// ------------------------------------------------------ planted pipelines

struct Staged {
    cfg: RunConfig,
    corpus: synth::SynthCorpus,
    _dir: tempfile::TempDir,
}

fn stage_through_communities(config: &SynthConfig, seed: u64) -> Result<Staged, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = dir.path().join("data");
    let corpus = synth::generate(config).map_err(|e| e.to_string())?;
    corpus.write_to(&data).map_err(|e| e.to_string())?;
    let mut cfg = RunConfig::new(dir.path().join("out"));
    cfg.tweets = Some(data.join("tweets.jsonl"));
    cfg.lexicon = Some(data.join("lexicon.tsv"));
    cfg.annotations = Some(data.join("annotations.csv"));
    cfg.seed = seed;
    cfg.validate().map_err(|e| e.to_string())?;
    for stage in [pipeline::Stage::Ingest, pipeline::Stage::Score, pipeline::Stage::Graph, pipeline::Stage::Communities] {
        pipeline::run_stage(&cfg, stage).map_err(|e| format!("{}: {e}", stage.name()))?;
    }
    Ok(Staged { cfg, corpus, _dir: dir })
}

fn planted_partition() -> Outcome {
    let start = Instant::now();
    let mut accs = Vec::new();
    for seed in 0..10u64 {
        let config = SynthConfig { seed: 100 + seed, cascades: 0, ..SynthConfig::default() };
        let staged = stage_through_communities(&config, seed)?;
        let predicted = pipeline::load_sides(&staged.cfg).map_err(|e| e.to_string())?;
        // every planted user counts; unlabelled or missing users are errors
        let mut hit = BTreeMap::<Side, (usize, usize)>::new();
        for (user, truth) in &staged.corpus.sides {
            let slot = hit.entry(*truth).or_default();
            slot.1 += 1;
            if predicted.get(user).copied().flatten() == Some(*truth) {
                slot.0 += 1;
            }
        }
        let recall = |s: Side| hit[&s].0 as f64 / hit[&s].1 as f64;
        accs.push((recall(Side::Yes) + recall(Side::No)) / 2.0);
    }
    let mean = accs.iter().sum::<f64>() / accs.len() as f64;
    ensure!(mean >= 0.95, "mean balanced accuracy {mean:.4} ({accs:?})");
    within(start.elapsed(), 60)?;
    Ok(format!("mean balanced accuracy {mean:.4} over 10 seeds"))
}

// ------------------------------------------------------------ assortativity

fn graph_from_pairs(n: usize, pairs: &[(usize, usize)]) -> MentionGraph {
    let ids: Vec<String> = (0..n).map(|i| format!("v{i:03}")).collect();
    MentionGraph::from_edges(
        pairs.iter().map(|&(a, b)| (ids[a].clone(), ids[b].clone(), 1, vec![])),
        &ids,
    )
}

fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> MentionGraph {
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.random_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    graph_from_pairs(n, &pairs)
}

fn assortativity_checks() -> Outcome {
    let start = Instant::now();
    // groups: nodes 0..3 in group 0, 3..6 in group 1
    let membership: Vec<Option<usize>> = (0..6).map(|i| Some(i / 3)).collect();
    let within_only = graph_from_pairs(6, &[(0, 1), (1, 0), (3, 4), (4, 3)]);
    let across_only = graph_from_pairs(6, &[(0, 3), (3, 0), (1, 4), (4, 1)]);
    let mixed = graph_from_pairs(
        6,
        &[(0, 1), (1, 0), (0, 2), (2, 0), (3, 4), (4, 3), (3, 5), (5, 3), (1, 4), (4, 1)],
    );
    for (g, want) in [(&within_only, 1.0), (&across_only, -1.0), (&mixed, 0.6)] {
        let r = assortativity(g, &membership).map_err(|e| e.to_string())?;
        ensure!(r == want, "fixture gave {r}, want {want}");
    }

    let mut worst: f64 = 0.0;
    for trial in 0..5u64 {
        let mut rng = stream(0xACCE_0004, trial);
        let g = random_graph(&mut rng, 200, 0.05);
        let mut labels: Vec<Option<usize>> = (0..200).map(|i| Some(i % 2)).collect();
        labels.shuffle(&mut rng);
        let res = assortativity_test(&g, &labels, 1000, 7 + trial).map_err(|e| e.to_string())?;
        let mean = res.replicate_mean().abs();
        ensure!(mean <= 0.05, "trial {trial}: |mean replicate r| = {mean}");
        worst = worst.max(mean);
    }
    within(start.elapsed(), 30)?;
    Ok(format!("fixtures exact; worst |mean null r| {worst:.4} over 5 graphs"))
}

// -------------------------------------------------------------- calibration

fn messages_on_edges(rng: &mut impl Rng, g: &MentionGraph) -> MessageTable {
    let messages: Vec<Message> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| Message {
            tweet_id: format!("m{i}"),
            sender: g.node_id(e.src).to_string(),
            receivers: vec![g.node_id(e.dst).to_string()],
            score: rng.random_range(-5.0..5.0),
        })
        .collect();
    MessageTable::new(&messages)
}

fn null_calibration() -> Outcome {
    let start = Instant::now();
    let trials = 100u64;
    let mut corr_inside = 0;
    let mut assort_inside = 0;
    let mut link_inside = [0usize; 9];
    for t in 0..trials {
        let mut rng = stream(0xACCE_0005, t);
        let n = 120;
        let g = random_graph(&mut rng, n, 0.06);
        let table = messages_on_edges(&mut rng, &g);
        let c = sentiment_correlation_test(&table, 1000, 1000 + t).map_err(|e| e.to_string())?;
        corr_inside += usize::from(c.verdict == Verdict::Inside);

        let classes: Vec<Polarity> = (0..n)
            .map(|_| match rng.random_range(0..10) {
                0 => Polarity::Unknown,
                1..=5 => Polarity::Positive,
                _ => Polarity::Negative,
            })
            .collect();
        let lc = link_class_fraction_test(&g, &classes, 1000, 2000 + t).map_err(|e| e.to_string())?;
        for (k, r) in lc.iter().enumerate() {
            link_inside[k] += usize::from(r.verdict == Verdict::Inside);
        }

        let membership: Vec<Option<usize>> = (0..n).map(|_| Some(rng.random_range(0..2))).collect();
        let a = assortativity_test(&g, &membership, 1000, 3000 + t).map_err(|e| e.to_string())?;
        assort_inside += usize::from(a.verdict == Verdict::Inside);
    }
    let worst_link = *link_inside.iter().min().unwrap();
    ensure!(corr_inside >= 90, "correlation inside in {corr_inside}/100");
    ensure!(worst_link >= 90, "link fractions inside {link_inside:?}/100");
    ensure!(assort_inside >= 90, "assortativity inside in {assort_inside}/100");

    // two homophilous blocks whose polarity follows the block
    let mut outside = 0;
    for t in 0..trials {
        let mut rng = stream(0xACCE_0015, t);
        let n = 120;
        let side = |v: usize| v < n / 2;
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let p = if side(a) == side(b) { 0.1 } else { 0.005 };
                if a != b && rng.random_bool(p) {
                    pairs.push((a, b));
                }
            }
        }
        let same = pairs.iter().filter(|&&(a, b)| side(a) == side(b)).count() as f64 / pairs.len() as f64;
        ensure!(same >= 0.9, "trial {t}: same-side fraction {same}");
        let g = graph_from_pairs(n, &pairs);
        let classes: Vec<Polarity> =
            (0..n).map(|v| if side(v) { Polarity::Positive } else { Polarity::Negative }).collect();
        let lc = link_class_fraction_test(&g, &classes, 1000, 4000 + t).map_err(|e| e.to_string())?;
        let verdict = |name: &str| lc.iter().find(|r| r.statistic == name).map(|r| r.verdict);
        if verdict("fpp") == Some(Verdict::Outside) && verdict("fnn") == Some(Verdict::Outside) {
            outside += 1;
        }
    }
    ensure!(outside >= 95, "homophily detected in {outside}/100");
    within(start.elapsed(), 300)?;
    Ok(format!(
        "inside: correlation {corr_inside}, link fractions >= {worst_link}, assortativity {assort_inside}; homophily outside {outside}"
    ))
}

// ---------------------------------------------------------------- rescaling

fn sentiment_rescaling() -> Outcome {
    let r = Rescaler { max_pos: 50, min_neg: -40 };
    ensure!(r.pos_divisor().to_bits() == 10.0f64.to_bits(), "pos divisor {}", r.pos_divisor());
    ensure!(r.neg_divisor().to_bits() == 8.0f64.to_bits(), "neg divisor {}", r.neg_divisor());

    let mut rng = stream(0xACCE_0006, 0);
    for corpus in 0..500 {
        let len = rng.random_range(1..40);
        let mut raws: Vec<(String, RawScore)> = (0..len)
            .map(|i| {
                let pos = rng.random_range(0..=97);
                let neg = -rng.random_range(0..=89);
                (format!("t{i}"), RawScore { pos, neg })
            })
            .collect();
        // guarantee both signs occur
        raws[0].1.pos = raws[0].1.pos.max(1);
        raws[len - 1].1.neg = raws[len - 1].1.neg.min(-1);
        let (_, scored) = rescale_corpus(&raws);
        let max_pos = scored.iter().map(|s| s.scaled_pos).fold(f64::MIN, f64::max);
        let min_neg = scored.iter().map(|s| s.scaled_neg).fold(f64::MAX, f64::min);
        ensure!(max_pos == 5.0 && min_neg == -5.0, "corpus {corpus}: {max_pos} / {min_neg}");
        ensure!(
            scored.iter().all(|s| (0.0..=5.0).contains(&s.scaled_pos) && (-5.0..=0.0).contains(&s.scaled_neg)),
            "corpus {corpus}: value out of range"
        );
    }
    Ok("divisors 10 and 8 bit-exact; extremes exactly +5/-5 over 500 corpora".into())
}

// ---------------------------------------------------------------- diffusion

fn retention(cross: f64) -> Result<(f64, f64), String> {
    let config = SynthConfig { cross_side_retweet_prob: cross, seed: 77, ..SynthConfig::default() };
    let staged = stage_through_communities(&config, 77)?;
    let report = pipeline::cascades(&staged.cfg).map_err(|e| e.to_string())?;
    let d = &report.diffusion;
    Ok((
        d.retained_fraction.ok_or("no classified cascades")?,
        d.unchanged_fraction.ok_or("no classified cascades")?,
    ))
}

fn echo_chamber() -> Outcome {
    let start = Instant::now();
    let (retained, _) = retention(0.02)?;
    let (_, unchanged_mixed) = retention(0.5)?;
    ensure!(retained >= 0.85, "cross 0.02: retained fraction {retained:.3}");
    ensure!(unchanged_mixed < 0.6, "cross 0.5: unchanged fraction {unchanged_mixed:.3}");
    within(start.elapsed(), 120)?;
    Ok(format!("cross 0.02 retained {retained:.3}; cross 0.5 unchanged {unchanged_mixed:.3}"))
}

// -------------------------------------------------------------- determinism

fn polarnet(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_polarnet"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "polarnet {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(())
}

fn run_dir(base: &Path, data: &Path, name: &str, threads: &str) -> Result<Vec<u8>, String> {
    let out = base.join(name);
    let s = |p: &Path| p.to_str().unwrap().to_string();
    polarnet(&[
        "--out", &s(&out), "--seed", "11", "--threads", threads, "run",
        "--tweets", &s(&data.join("tweets.jsonl")),
        "--lexicon", &s(&data.join("lexicon.tsv")),
        "--annotations", &s(&data.join("annotations.csv")),
    ])?;
    std::fs::read(out.join("summary.json")).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = dir.path().join("data");
    polarnet(&["--out", data.to_str().unwrap(), "--seed", "5", "synth"])?;
    let a = run_dir(dir.path(), &data, "a", "1")?;
    let b = run_dir(dir.path(), &data, "b", "8")?;
    let c = run_dir(dir.path(), &data, "c", "8")?;
    ensure!(a == b, "summary differs between 1 and 8 threads");
    ensure!(b == c, "summary differs between two 8-thread runs");
    Ok(format!("summary.json identical across 3 runs ({} bytes)", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 8] = [
        ("1 cascade metrics", cascade_metrics, Some(10)),
        ("2 reconstruction", reconstruction, Some(30)),
        ("3 planted-partition recovery", planted_partition, None),
        ("4 assortativity", assortativity_checks, None),
        ("5 null calibration", null_calibration, None),
        ("6 sentiment rescaling", sentiment_rescaling, None),
        ("7 echo chamber", echo_chamber, None),
        ("8 determinism", determinism, None),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let mut outcome = panic::catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if let Err(e) = within(elapsed, limit) {
                outcome = Err(e);
            }
        }
        match outcome {
            Ok(msg) => println!("PASS  {name}: {msg} [{:.2}s]", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg} [{:.2}s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

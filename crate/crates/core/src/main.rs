use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand};

use polarnet::cascades::ParentStrategy;
use polarnet::pipeline::{self, NullKind, RunConfig, Stage};
use polarnet::synth::{self, SynthConfig};
use polarnet::Error;

#[derive(Parser, Debug)]
#[command(name = "polarnet", version, about = "Polarised mention networks and retweet cascades")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Artifact directory shared by all stages.
    #[arg(long, global = true, default_value = "polarnet_out")]
    out: PathBuf,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Monte Carlo replicates per null test.
    #[arg(long, global = true, default_value_t = 1000)]
    replicates: usize,
    /// Treat any damaged input row as fatal (exit 3).
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct Inputs {
    /// Tweet archive (JSON lines).
    #[arg(long)]
    tweets: Option<PathBuf>,
    /// Sentiment lexicon (word<TAB>score).
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Hand labels, CSV `user_id,label`.
    #[arg(long)]
    annotations: Option<PathBuf>,
    /// Follower list, CSV `follower,followed`.
    #[arg(long)]
    followers: Option<PathBuf>,
    /// Tracked hashtags (comma separated); empty keeps everything.
    #[arg(long, value_delimiter = ',')]
    hashtags: Vec<String>,
    #[arg(long)]
    start: Option<DateTime<Utc>>,
    #[arg(long)]
    end: Option<DateTime<Utc>>,
    #[arg(long, default_value_t = 20)]
    min_community_size: usize,
    #[arg(long, default_value_t = 2)]
    top_k: usize,
    /// Parent attribution: mention or follower.
    #[arg(long, default_value = "mention")]
    strategy: ParentStrategy,
    #[arg(long, default_value_t = 10)]
    min_classified: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Filter and normalise a tweet archive.
    Ingest(Inputs),
    /// Raw lexicon scores per tweet.
    Score(Inputs),
    /// Mention graph, mutual component, sentiment weights and statistics.
    Graph(Inputs),
    /// Louvain communities, side labels and validation.
    Communities(Inputs),
    /// One of the resampling null tests.
    Nulltest {
        #[arg(value_parser = ["correlation", "linkclass", "assortativity"])]
        test: String,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Cascade reconstruction, scores and diffusion summary.
    Cascades(Inputs),
    /// Collect stage reports into summary.json.
    Report(Inputs),
    /// Every stage in order, then the report.
    Run(Inputs),
    /// Write a planted synthetic corpus into --out.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long, default_value_t = 100)]
    n_yes: usize,
    #[arg(long, default_value_t = 100)]
    n_no: usize,
    #[arg(long, default_value_t = 0.2)]
    p_in: f64,
    #[arg(long, default_value_t = 0.01)]
    p_out: f64,
    #[arg(long, default_value_t = 200)]
    cascades: usize,
    #[arg(long, default_value_t = 0.02)]
    cross_side_retweet_prob: f64,
    #[arg(long, default_value_t = 0.3)]
    annotated_fraction: f64,
}

fn config(g: &Global, i: Inputs) -> RunConfig {
    RunConfig {
        tweets: i.tweets,
        lexicon: i.lexicon,
        annotations: i.annotations,
        followers: i.followers,
        hashtags: i.hashtags,
        start: i.start,
        end: i.end,
        seed: g.seed,
        replicates: g.replicates,
        min_community_size: i.min_community_size,
        top_k: i.top_k,
        strategy: i.strategy,
        min_classified: i.min_classified,
        strict: g.strict,
        ..RunConfig::new(&g.out)
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    let g = &cli.global;
    match cli.command {
        Command::Ingest(i) => pipeline::run_stage(&config(g, i), Stage::Ingest),
        Command::Score(i) => pipeline::run_stage(&config(g, i), Stage::Score),
        Command::Graph(i) => pipeline::run_stage(&config(g, i), Stage::Graph),
        Command::Communities(i) => pipeline::run_stage(&config(g, i), Stage::Communities),
        Command::Nulltest { test, inputs } => {
            let kind: NullKind = test.parse()?;
            pipeline::run_stage(&config(g, inputs), Stage::Null(kind))
        }
        Command::Cascades(i) => pipeline::run_stage(&config(g, i), Stage::Cascades),
        Command::Report(i) => pipeline::run_stage(&config(g, i), Stage::Report),
        Command::Run(i) => pipeline::run_pipeline(&config(g, i)).map(drop),
        Command::Synth(s) => {
            let cfg = SynthConfig {
                n_yes: s.n_yes,
                n_no: s.n_no,
                p_in: s.p_in,
                p_out: s.p_out,
                cascades: s.cascades,
                cross_side_retweet_prob: s.cross_side_retweet_prob,
                annotated_fraction: s.annotated_fraction,
                seed: g.seed,
                ..SynthConfig::default()
            };
            synth::generate(&cfg)?.write_to(&g.out)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(pipeline::exit_code(&e) as u8)
        }
    }
}

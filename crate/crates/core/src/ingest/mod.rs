//! Parsing and filtering of the input files.
//!
//! Tweets are JSON lines; lexicons are `word<TAB>score`; annotations and
//! follower lists are two-column CSV files with a header row. Lenient mode
//! (the default) skips damaged rows and counts them, strict mode turns the
//! first damaged row into an error.

mod tables;
mod tweets;

pub use tables::{
    load_annotations, load_followers, load_lexicon, read_annotations, read_followers,
    read_lexicon, Annotations, FollowerGraph, Lexicon, TableReport,
};
pub use tweets::{
    load_tweets, read_tweets, write_tweets, HashtagTimeFilter, IngestReport, TweetKind,
    TweetRecord,
};

/// How damaged input rows are handled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Lenient,
    Strict,
}

impl Mode {
    pub fn strict(flag: bool) -> Mode {
        if flag {
            Mode::Strict
        } else {
            Mode::Lenient
        }
    }
}

//! Social-media event analysis toolkit.
//!
//! The crate covers the full analysis pipeline for an archived social-media
//! corpus: ingestion and cleaning (`corpus`), lexicon-based polarity and
//! emotion scoring (`sentiment`), mention/hashtag network construction and
//! metrics (`graphs`), heavy-tailed degree-distribution model selection
//! (`tailfit`), bot-account assessment (`botdetect`), keyword stream and
//! retweet-trajectory tracking (`streams`), and quantitative summaries plus
//! machine-readable report assembly (`stats`).
//!
//! All stochastic routines take one explicit 64-bit seed and derive
//! per-replicate streams from it (see [`rng`]), so results are reproducible
//! independent of thread scheduling.

pub mod botdetect;
pub mod corpus;
pub mod error;
pub mod graphs;
pub mod rng;
pub mod sentiment;
pub mod stats;
pub mod streams;
pub mod synth;
pub mod tailfit;

pub use error::{Error, Result};

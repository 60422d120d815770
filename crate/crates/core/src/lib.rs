//! Interdisciplinarity analysis of coauthorship networks.
//!
//! The crate ingests author records (per-discipline publication counts,
//! h-index, publication years) and paper author lists, builds the
//! coauthorship graph, and computes:
//!
//! - individual entropy of each author's discipline fractions,
//! - cosine similarity between coauthors and between non-coauthors,
//! - within-team entropy and mean cosine, scored against a random-team null,
//! - a core-shell split by local transitivity, with optional peeling.
//!
//! [`pipeline::run`] ties these together into an [`report::AnalysisReport`].

pub mod coreshell;
pub mod error;
pub mod ingest;
pub mod measures;
pub mod model;
pub mod nullmodel;
mod par;
pub mod pipeline;
pub mod plotspec;
pub mod report;
pub mod rng;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};

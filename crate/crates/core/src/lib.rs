//! Citation networks of hierarchically structured legal codes.
//!
//! A [`corpus::Corpus`] is parsed into explicit article-to-object
//! citations ([`citations`]), which form an undirected simple graph
//! ([`graph`]). [`metrics`] measures it against a G(n, m) baseline and
//! [`communities`] partitions it spectrally. [`pipeline::run_pipeline`]
//! chains all of it into one reproducible report.

pub mod citations;
pub mod communities;
pub mod corpus;
mod error;
pub mod export;
pub mod graph;
pub mod metrics;
pub mod pipeline;
pub mod seed;
pub mod synth;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book;

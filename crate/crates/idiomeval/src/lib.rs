//! File formats, evaluation pipeline and command-line interface for the
//! idiom translation evaluation toolkit.

#![forbid(unsafe_code)]

pub mod align_io;
pub mod cli;
pub mod config;
pub mod corpus_io;
pub mod error;
pub mod lexicon_io;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};

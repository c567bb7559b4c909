//! Targeted evaluation of idiom translation.
//!
//! This crate holds the IO-free algorithms: idiom pattern matching over
//! tokenized sentences, dictionary blocklists and the literal translation
//! error rate, word alignment and alignment-based span scoring, global
//! BLEU/chrF, and the data split protocol. It is `no_std` and only needs
//! `alloc`; file formats and the command line live in the `idiomeval` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod aggregate;
pub mod aligner;
pub mod apt;
pub mod corpus;
pub mod error;
pub mod lexicon;
pub mod litter;
pub mod matcher;
pub mod metrics;
pub mod text;

pub use error::{Error, Result};

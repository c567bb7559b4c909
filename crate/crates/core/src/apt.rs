//! Alignment-based phrase translation evaluation.
//!
//! The source idiom span is projected through word alignments onto the
//! reference and onto the hypothesis; the two projected word sequences are
//! compared with unigram precision and chrF, then macro-averaged per idiom.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::aggregate::{IdiomScore, MacroAverager};
use crate::aligner::AlignmentSet;
use crate::corpus::{AnnotatedPair, IdiomSpan};
use crate::error::{Error, Result};
use crate::metrics::{chrf, CHRF_BETA, CHRF_MAX_N};
use crate::text::{normalize, tokenize, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Reference,
    Hypothesis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanProjection {
    pub pair_id: String,
    pub side: Side,
    pub target_indices: Vec<usize>,
    /// Normalized words at `target_indices`, in order.
    pub target_words: Vec<String>,
    pub empty: bool,
}

/// Target positions linked to any source position inside the span.
pub fn project_span(span: &IdiomSpan, alignment: &AlignmentSet, target_tokens: &[Token], side: Side) -> Result<SpanProjection> {
    if span.token_end > alignment.source_len || alignment.target_len != target_tokens.len() {
        return Err(Error::AlignmentMismatch {
            pair_id: alignment.pair_id.clone(),
            reason: alloc::format!(
                "span [{}, {}) over a {}x{} alignment with {} target tokens",
                span.token_start,
                span.token_end,
                alignment.source_len,
                alignment.target_len,
                target_tokens.len()
            ),
        });
    }
    let indices: BTreeSet<usize> = alignment
        .links
        .iter()
        .filter(|(i, _)| (span.token_start..span.token_end).contains(i))
        .map(|&(_, j)| j)
        .collect();
    let target_indices: Vec<usize> = indices.into_iter().collect();
    Ok(SpanProjection {
        pair_id: alignment.pair_id.clone(),
        side,
        target_words: target_indices.iter().map(|&j| target_tokens[j].normalized.clone()).collect(),
        empty: target_indices.is_empty(),
        target_indices,
    })
}

/// Share of distinct reference words that also occur in the hypothesis.
pub fn unigram_precision<R: AsRef<str>, H: AsRef<str>>(ref_words: &[R], hyp_words: &[H]) -> Result<f64> {
    let reference: BTreeSet<String> = ref_words.iter().map(|w| normalize(w.as_ref())).collect();
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    let hyp: BTreeSet<String> = hyp_words.iter().map(|w| normalize(w.as_ref())).collect();
    Ok(reference.intersection(&hyp).count() as f64 / reference.len() as f64)
}

/// chrF between two span texts.
pub fn chrf_span(ref_text: &str, hyp_text: &str, n_max: usize, beta: f64) -> Result<f64> {
    chrf(ref_text, hyp_text, n_max, beta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AptScore {
    pub pair_id: String,
    pub idiom_id: String,
    pub span_index: usize,
    /// `None` when either projection is empty.
    pub uniprec: Option<f64>,
    pub chrf: Option<f64>,
    pub empty_ref: bool,
    pub empty_hyp: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AptReport {
    pub macro_uniprec: f64,
    pub micro_uniprec: f64,
    pub macro_chrf: f64,
    pub micro_chrf: f64,
    /// Number of scored spans.
    pub items: usize,
    pub empty_ref_rate: f64,
    pub empty_hyp_rate: f64,
    pub per_idiom_uniprec: Vec<IdiomScore>,
    pub per_idiom_chrf: Vec<IdiomScore>,
    pub scores: Vec<AptScore>,
}

pub fn score_span(
    pair: &AnnotatedPair,
    span_index: usize,
    ref_alignment: &AlignmentSet,
    hyp_alignment: &AlignmentSet,
    hyp_tokens: &[Token],
) -> Result<AptScore> {
    let span = &pair.spans[span_index];
    let reference = project_span(span, ref_alignment, &pair.target_tokens, Side::Reference)?;
    let hypothesis = project_span(span, hyp_alignment, hyp_tokens, Side::Hypothesis)?;
    let (uniprec, chrf) = if reference.empty || hypothesis.empty {
        (None, None)
    } else {
        (
            Some(unigram_precision(&reference.target_words, &hypothesis.target_words)?),
            Some(chrf_span(
                &reference.target_words.join(" "),
                &hypothesis.target_words.join(" "),
                CHRF_MAX_N,
                CHRF_BETA,
            )?),
        )
    };
    Ok(AptScore {
        pair_id: pair.pair_id.clone(),
        idiom_id: span.idiom_id.clone(),
        span_index,
        uniprec,
        chrf,
        empty_ref: reference.empty,
        empty_hyp: hypothesis.empty,
    })
}

/// Scores every span of every annotated pair. Spans with an empty
/// projection on either side score 0 and stay in the averages.
pub fn apt_corpus(
    pairs: &[AnnotatedPair],
    ref_alignments: &BTreeMap<String, AlignmentSet>,
    hyp_alignments: &BTreeMap<String, AlignmentSet>,
    hypotheses: &BTreeMap<String, String>,
) -> Result<AptReport> {
    let mut uniprec = MacroAverager::new();
    let mut chrf = MacroAverager::new();
    let mut scores = Vec::new();
    for pair in pairs.iter().filter(|p| p.is_idiomatic()) {
        let id = &pair.pair_id;
        let hypothesis = hypotheses.get(id).ok_or_else(|| Error::MissingHypothesis(id.clone()))?;
        let ref_al = ref_alignments.get(id).ok_or_else(|| Error::MissingAlignment {
            pair_id: id.clone(),
            side: "reference",
        })?;
        let hyp_al = hyp_alignments.get(id).ok_or_else(|| Error::MissingAlignment {
            pair_id: id.clone(),
            side: "hypothesis",
        })?;
        let hyp_tokens = tokenize(hypothesis);
        for k in 0..pair.spans.len() {
            let score = score_span(pair, k, ref_al, hyp_al, &hyp_tokens)?;
            uniprec.add(&score.idiom_id, score.uniprec.unwrap_or(0.0));
            chrf.add(&score.idiom_id, score.chrf.unwrap_or(0.0));
            scores.push(score);
        }
    }
    let items = scores.len();
    let rate = |count: usize| if items == 0 { 0.0 } else { count as f64 / items as f64 };
    let u = uniprec.finish();
    let c = chrf.finish();
    Ok(AptReport {
        macro_uniprec: u.macro_avg,
        micro_uniprec: u.micro_avg,
        macro_chrf: c.macro_avg,
        micro_chrf: c.micro_avg,
        items,
        empty_ref_rate: rate(scores.iter().filter(|s| s.empty_ref).count()),
        empty_hyp_rate: rate(scores.iter().filter(|s| s.empty_hyp).count()),
        per_idiom_uniprec: u.per_idiom,
        per_idiom_chrf: c.per_idiom,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aligner::Direction;
    use alloc::vec;

    fn span(start: usize, end: usize) -> IdiomSpan {
        IdiomSpan {
            idiom_id: "x".into(),
            token_start: start,
            token_end: end,
            char_start: 0,
            char_end: 0,
        }
    }

    fn alignment(links: &[(usize, usize)], n: usize, m: usize) -> AlignmentSet {
        AlignmentSet::new("p", n, m, Direction::Symmetrized)
            .with_links(links.iter().copied())
            .unwrap()
    }

    #[test]
    fn projection_filters_and_dedups() {
        let target = tokenize("a b c d e f");
        let p = project_span(&span(1, 3), &alignment(&[(1, 4), (2, 5), (0, 0)], 4, 6), &target, Side::Reference).unwrap();
        assert_eq!(p.target_indices, vec![4, 5]);
        assert_eq!(p.target_words, vec!["e", "f"]);
        let p = project_span(&span(1, 3), &alignment(&[(1, 4), (2, 4)], 4, 6), &target, Side::Reference).unwrap();
        assert_eq!(p.target_indices, vec![4]);
        let p = project_span(&span(1, 3), &alignment(&[(0, 0), (3, 1)], 4, 6), &target, Side::Hypothesis).unwrap();
        assert!(p.empty && p.target_words.is_empty());
        assert!(project_span(&span(1, 3), &alignment(&[], 4, 5), &target, Side::Reference).is_err());
    }

    #[test]
    fn unigram_precision_examples() {
        assert_eq!(unigram_precision(&["a", "b"], &["b", "c"]).unwrap(), 0.5);
        assert_eq!(unigram_precision(&["a", "b"], &["a", "b"]).unwrap(), 1.0);
        assert_eq!(unigram_precision(&["a", "a", "b"], &["a"]).unwrap(), 0.5);
        assert_eq!(unigram_precision(&[] as &[&str], &["a"]).unwrap_err(), Error::EmptyReference);
    }

    #[test]
    fn chrf_is_order_sensitive_uniprec_is_not() {
        assert_eq!(unigram_precision(&["tomber", "dans"], &["dans", "tomber"]).unwrap(), 1.0);
        let permuted = chrf_span("tomber dans", "dans tomber", 6, 2.0).unwrap();
        assert!(permuted < 1.0);
        assert_eq!(chrf_span("tomber dans", "tomber dans", 6, 2.0).unwrap(), 1.0);
    }
}

//! Literal translation error rate.
//!
//! For every annotated idiom span, each span word is translated with a
//! bilingual dictionary into a blocklist of literal renderings. A blocklist
//! is dropped entirely as soon as the reference uses any of its words, since
//! the candidates are synonyms of one another and a literal rendering is then
//! evidently acceptable. A hypothesis containing a word of a surviving
//! blocklist is a literal translation error. Corpus scores are macro-averaged
//! over idioms.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::aggregate::MacroAverager;
use crate::corpus::{AnnotatedPair, IdiomSpan};
use crate::error::{Error, Result};
use crate::lexicon::BilingualLexicon;
use crate::text::{tokenize, Token};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blocklist {
    pub source_word: String,
    pub candidates: BTreeSet<String>,
    pub removed_by_reference: bool,
    pub removing_word: Option<String>,
}

impl Blocklist {
    pub fn new(source_word: impl Into<String>, candidates: BTreeSet<String>) -> Self {
        Blocklist {
            source_word: source_word.into(),
            candidates,
            removed_by_reference: false,
            removing_word: None,
        }
    }

    pub fn is_active(&self) -> bool {
        !self.removed_by_reference
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocklistSet {
    pub pair_id: String,
    pub idiom_id: String,
    /// One per in-dictionary span word, in span order.
    pub blocklists: Vec<Blocklist>,
    pub oov_words: Vec<String>,
}

impl BlocklistSet {
    pub fn active(&self) -> impl Iterator<Item = &Blocklist> {
        self.blocklists.iter().filter(|b| b.is_active())
    }

    pub fn active_count(&self) -> usize {
        self.active().count()
    }
}

/// A hypothesis word that hit a surviving blocklist, and whose blocklist it was.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Trigger {
    pub hypothesis_word: String,
    pub source_word: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LitterVerdict {
    pub pair_id: String,
    pub triggered: bool,
    pub triggering_words: BTreeSet<Trigger>,
    pub active_blocklists: usize,
}

impl LitterVerdict {
    /// Distinct hypothesis words that triggered.
    pub fn trigger_words(&self) -> BTreeSet<&str> {
        self.triggering_words.iter().map(|t| t.hypothesis_word.as_str()).collect()
    }
}

pub fn build_blocklists(pair: &AnnotatedPair, span: &IdiomSpan, lexicon: &BilingualLexicon) -> Result<BlocklistSet> {
    if span.token_start >= span.token_end || span.token_end > pair.source_tokens.len() {
        return Err(Error::SpanOutOfRange {
            pair_id: pair.pair_id.clone(),
            token_start: span.token_start,
            token_end: span.token_end,
            token_count: pair.source_tokens.len(),
        });
    }
    let mut set = BlocklistSet {
        pair_id: pair.pair_id.clone(),
        idiom_id: span.idiom_id.clone(),
        blocklists: Vec::new(),
        oov_words: Vec::new(),
    };
    for token in pair.span_tokens(span).iter().filter(|t| t.is_alphabetic()) {
        let candidates = lexicon.lookup(&token.normalized);
        if candidates.is_empty() {
            set.oov_words.push(token.normalized.clone());
        } else {
            set.blocklists.push(Blocklist::new(token.normalized.clone(), candidates.clone()));
        }
    }
    Ok(set)
}

/// Marks every blocklist that shares a word with the reference as removed,
/// recording the first reference word responsible.
pub fn filter_by_reference(mut set: BlocklistSet, reference_tokens: &[Token]) -> BlocklistSet {
    for blocklist in set.blocklists.iter_mut().filter(|b| b.is_active()) {
        if let Some(hit) = reference_tokens.iter().find(|t| blocklist.candidates.contains(&t.normalized)) {
            blocklist.removed_by_reference = true;
            blocklist.removing_word = Some(hit.normalized.clone());
        }
    }
    set
}

pub fn check_hypothesis(set: &BlocklistSet, hypothesis_tokens: &[Token]) -> LitterVerdict {
    let mut triggering_words = BTreeSet::new();
    for token in hypothesis_tokens {
        for blocklist in set.active() {
            if blocklist.candidates.contains(&token.normalized) {
                triggering_words.insert(Trigger {
                    hypothesis_word: token.normalized.clone(),
                    source_word: blocklist.source_word.clone(),
                });
            }
        }
    }
    LitterVerdict {
        pair_id: set.pair_id.clone(),
        triggered: !triggering_words.is_empty(),
        triggering_words,
        active_blocklists: set.active_count(),
    }
}

/// Verdict for one pair over all of its spans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceDiagnostic {
    pub pair_id: String,
    /// Idiom the sentence is counted under: the first triggering span's,
    /// otherwise the first span's.
    pub idiom_id: String,
    pub triggered: bool,
    pub triggering_words: Vec<Trigger>,
    pub active_blocklists: usize,
    pub removed_blocklists: usize,
    pub oov_words: Vec<String>,
    /// No blocklist survived OOV lookup and reference filtering.
    pub unscorable: bool,
    pub multi_span: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdiomRate {
    pub idiom_id: String,
    pub n: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LitterReport {
    pub macro_litter: f64,
    pub micro_litter: f64,
    pub evaluated: usize,
    pub unscorable: usize,
    /// OOV span words over all alphabetic span words.
    pub oov_rate: f64,
    pub per_idiom: Vec<IdiomRate>,
    pub sentences: Vec<SentenceDiagnostic>,
}

/// Scores one pair against its hypothesis.
pub fn score_pair(pair: &AnnotatedPair, hypothesis: &str, lexicon: &BilingualLexicon) -> Result<SentenceDiagnostic> {
    let hypothesis_tokens = tokenize(hypothesis);
    let mut group: Option<&str> = None;
    let mut triggers = BTreeSet::new();
    let mut active = 0;
    let mut removed = 0;
    let mut oov_words = Vec::new();
    for span in &pair.spans {
        let set = filter_by_reference(build_blocklists(pair, span, lexicon)?, &pair.target_tokens);
        let verdict = check_hypothesis(&set, &hypothesis_tokens);
        if verdict.triggered && triggers.is_empty() {
            group = Some(&span.idiom_id);
        }
        triggers.extend(verdict.triggering_words);
        active += verdict.active_blocklists;
        removed += set.blocklists.len() - verdict.active_blocklists;
        oov_words.extend(set.oov_words);
    }
    let idiom_id = group.or(pair.primary_idiom()).unwrap_or_default().into();
    Ok(SentenceDiagnostic {
        pair_id: pair.pair_id.clone(),
        idiom_id,
        triggered: !triggers.is_empty(),
        triggering_words: triggers.into_iter().collect(),
        active_blocklists: active,
        removed_blocklists: removed,
        oov_words,
        unscorable: active == 0,
        multi_span: pair.spans.len() > 1,
    })
}

/// Scores every annotated pair; pairs without spans are ignored.
/// Unscorable sentences count as untriggered.
pub fn litter_corpus(
    pairs: &[AnnotatedPair],
    hypotheses: &BTreeMap<String, String>,
    lexicon: &BilingualLexicon,
) -> Result<LitterReport> {
    let mut sentences = Vec::new();
    let mut averager = MacroAverager::new();
    let mut span_words = 0usize;
    let mut oov = 0usize;
    for pair in pairs.iter().filter(|p| p.is_idiomatic()) {
        let hypothesis = hypotheses
            .get(&pair.pair_id)
            .ok_or_else(|| Error::MissingHypothesis(pair.pair_id.clone()))?;
        let diagnostic = score_pair(pair, hypothesis, lexicon)?;
        averager.add(&diagnostic.idiom_id, if diagnostic.triggered { 1.0 } else { 0.0 });
        span_words += pair
            .spans
            .iter()
            .map(|s| pair.span_tokens(s).iter().filter(|t| t.is_alphabetic()).count())
            .sum::<usize>();
        oov += diagnostic.oov_words.len();
        sentences.push(diagnostic);
    }
    let averages = averager.finish();
    Ok(LitterReport {
        macro_litter: averages.macro_avg,
        micro_litter: averages.micro_avg,
        evaluated: sentences.len(),
        unscorable: sentences.iter().filter(|s| s.unscorable).count(),
        oov_rate: if span_words == 0 { 0.0 } else { oov as f64 / span_words as f64 },
        per_idiom: averages
            .per_idiom
            .into_iter()
            .map(|s| IdiomRate {
                idiom_id: s.idiom_id,
                n: s.n,
                rate: s.score,
            })
            .collect(),
        sentences,
    })
}

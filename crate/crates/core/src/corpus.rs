//! Idiom-annotated parallel data: validation, length filtering and the
//! regular / idiom-train / idiom-test split.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{tokenize, Token};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdiomSpan {
    pub idiom_id: String,
    pub token_start: usize,
    pub token_end: usize,
    pub char_start: usize,
    pub char_end: usize,
}

impl IdiomSpan {
    /// Span over `tokens[start..end]` with the character hull filled in.
    /// The range must be non-empty and in bounds.
    pub fn over_tokens(idiom_id: &str, tokens: &[Token], start: usize, end: usize) -> Self {
        IdiomSpan {
            idiom_id: idiom_id.into(),
            token_start: start,
            token_end: end,
            char_start: tokens[start].char_start,
            char_end: tokens[end - 1].char_end,
        }
    }

    pub fn len(&self) -> usize {
        self.token_end - self.token_start
    }

    pub fn is_empty(&self) -> bool {
        self.token_end <= self.token_start
    }

    pub fn overlaps(&self, other: &IdiomSpan) -> bool {
        self.token_start < other.token_end && other.token_start < self.token_end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedPair {
    pub pair_id: String,
    pub source_raw: String,
    pub target_raw: String,
    pub source_tokens: Vec<Token>,
    pub target_tokens: Vec<Token>,
    pub spans: Vec<IdiomSpan>,
}

impl AnnotatedPair {
    /// Tokenizes both sides and checks every span against the source tokens.
    /// Spans are kept sorted by start position.
    pub fn new(
        pair_id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        mut spans: Vec<IdiomSpan>,
    ) -> Result<Self> {
        let pair_id = pair_id.into();
        let source_raw = source.into();
        let target_raw = target.into();
        let source_tokens = tokenize(&source_raw);
        let target_tokens = tokenize(&target_raw);
        spans.sort_by_key(|s| (s.token_start, s.token_end));
        for span in &spans {
            if span.token_start >= span.token_end || span.token_end > source_tokens.len() {
                return Err(Error::SpanOutOfRange {
                    pair_id,
                    token_start: span.token_start,
                    token_end: span.token_end,
                    token_count: source_tokens.len(),
                });
            }
            let expected_start = source_tokens[span.token_start].char_start;
            let expected_end = source_tokens[span.token_end - 1].char_end;
            if (span.char_start, span.char_end) != (expected_start, expected_end) {
                return Err(Error::SpanCharMismatch {
                    pair_id,
                    char_start: span.char_start,
                    char_end: span.char_end,
                    expected_start,
                    expected_end,
                });
            }
        }
        if spans.windows(2).any(|w| w[0].overlaps(&w[1])) {
            return Err(Error::OverlappingSpans { pair_id });
        }
        Ok(AnnotatedPair {
            pair_id,
            source_raw,
            target_raw,
            source_tokens,
            target_tokens,
            spans,
        })
    }

    /// A pair without idiom annotations.
    pub fn regular(pair_id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        let source_raw = source.into();
        let target_raw = target.into();
        AnnotatedPair {
            pair_id: pair_id.into(),
            source_tokens: tokenize(&source_raw),
            target_tokens: tokenize(&target_raw),
            source_raw,
            target_raw,
            spans: Vec::new(),
        }
    }

    pub fn is_idiomatic(&self) -> bool {
        !self.spans.is_empty()
    }

    /// Idiom used to group this pair when splitting.
    pub fn primary_idiom(&self) -> Option<&str> {
        self.spans.first().map(|s| s.idiom_id.as_str())
    }

    pub fn has_multiple_idioms(&self) -> bool {
        self.spans
            .iter()
            .any(|s| Some(s.idiom_id.as_str()) != self.primary_idiom())
    }

    pub fn span_tokens(&self, span: &IdiomSpan) -> &[Token] {
        &self.source_tokens[span.token_start..span.token_end]
    }

    pub fn check_idioms(&self, idioms: &BTreeSet<String>) -> Result<()> {
        match self.spans.iter().find(|s| !idioms.contains(&s.idiom_id)) {
            Some(span) => Err(Error::UnknownIdiom {
                pair_id: self.pair_id.clone(),
                idiom_id: span.idiom_id.clone(),
            }),
            None => Ok(()),
        }
    }
}

pub fn check_unique_ids(pairs: &[AnnotatedPair]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for pair in pairs {
        if !seen.insert(pair.pair_id.as_str()) {
            return Err(Error::DuplicatePairId(pair.pair_id.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DropReason {
    Length,
    Ratio,
    Empty,
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DropReason::Length => "length",
            DropReason::Ratio => "ratio",
            DropReason::Empty => "empty",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterThresholds {
    pub max_len: usize,
    pub max_ratio: f64,
}

impl Default for FilterThresholds {
    fn default() -> Self {
        FilterThresholds {
            max_len: 80,
            max_ratio: 1.5,
        }
    }
}

impl FilterThresholds {
    /// Why a pair with these word counts would be dropped, if at all.
    /// Both limits are strict: exactly `max_len` words or exactly
    /// `max_ratio` passes.
    pub fn verdict(&self, source_words: usize, target_words: usize) -> Option<DropReason> {
        if source_words > self.max_len || target_words > self.max_len {
            return Some(DropReason::Length);
        }
        let (short, long) = if source_words < target_words {
            (source_words, target_words)
        } else {
            (target_words, source_words)
        };
        if short == 0 {
            return Some(DropReason::Empty);
        }
        (long as f64 > self.max_ratio * short as f64).then_some(DropReason::Ratio)
    }
}

/// Whitespace-delimited word count, the unit of the length filter.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

#[derive(Debug, Clone, Default)]
pub struct FilterOutcome {
    pub kept: Vec<AnnotatedPair>,
    pub dropped: Vec<(AnnotatedPair, DropReason)>,
}

pub fn preprocess_filter(pairs: Vec<AnnotatedPair>, thresholds: FilterThresholds) -> FilterOutcome {
    let mut outcome = FilterOutcome::default();
    for pair in pairs {
        match thresholds.verdict(word_count(&pair.source_raw), word_count(&pair.target_raw)) {
            Some(reason) => outcome.dropped.push((pair, reason)),
            None => outcome.kept.push(pair),
        }
    }
    outcome
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    /// Training sees only regular data.
    Zero,
    /// Training sees regular and idiom-train data.
    Joint,
    /// As joint, with idiom-train repeated.
    Upsample,
}

impl FromStr for SplitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(SplitKind::Zero),
            "joint" => Ok(SplitKind::Joint),
            "upsample" => Ok(SplitKind::Upsample),
            other => Err(Error::UnknownSplitKind(other.into())),
        }
    }
}

impl fmt::Display for SplitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitKind::Zero => "zero",
            SplitKind::Joint => "joint",
            SplitKind::Upsample => "upsample",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Regular,
    IdiomTrain,
    IdiomTest,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Regular => "regular",
            Role::IdiomTrain => "idiom-train",
            Role::IdiomTest => "idiom-test",
        })
    }
}

/// One line of a serialized manifest. `repeat` is how many times the pair
/// occurs in the training listing (0 for test pairs and for idiom-train
/// pairs of a zero split).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub pair_id: String,
    pub role: Role,
    pub repeat: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub split_kind: SplitKind,
    pub upsample_factor: usize,
    pub seed: u64,
    pub regular_ids: Vec<String>,
    pub idiom_train_ids: Vec<String>,
    pub idiom_test_ids: Vec<String>,
    /// Pairs whose idiom occurs only once; in no listing.
    pub discarded_ids: Vec<String>,
    /// Idiomatic pairs carrying more than one distinct idiom.
    pub multi_idiom_ids: Vec<String>,
}

impl SplitManifest {
    fn train_repeat(&self) -> usize {
        match self.split_kind {
            SplitKind::Zero => 0,
            SplitKind::Joint => 1,
            SplitKind::Upsample => self.upsample_factor,
        }
    }

    pub fn entries(&self) -> Vec<ManifestEntry> {
        let entry = |id: &String, role, repeat| ManifestEntry {
            pair_id: id.clone(),
            role,
            repeat,
        };
        let train_repeat = self.train_repeat();
        self.regular_ids
            .iter()
            .map(|id| entry(id, Role::Regular, 1))
            .chain(self.idiom_train_ids.iter().map(|id| entry(id, Role::IdiomTrain, train_repeat)))
            .chain(self.idiom_test_ids.iter().map(|id| entry(id, Role::IdiomTest, 0)))
            .collect()
    }

    /// Pair ids of the training data, idiom-train ids repeated per split kind.
    pub fn training_listing(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.regular_ids.iter().map(String::as_str).collect();
        for _ in 0..self.train_repeat() {
            out.extend(self.idiom_train_ids.iter().map(String::as_str));
        }
        out
    }

    pub fn test_listing(&self) -> Vec<&str> {
        self.idiom_test_ids.iter().map(String::as_str).collect()
    }
}

/// Partitions pairs into regular, idiom-train and idiom-test sets.
///
/// Idiomatic pairs are grouped by their first span's idiom. Each group is
/// shuffled with a generator seeded from `seed` and the idiom id, then
/// `floor(n/2)` pairs go to train and the rest to test. Groups of size one
/// are discarded.
pub fn build_split(
    pairs: &[AnnotatedPair],
    kind: SplitKind,
    upsample_factor: usize,
    seed: u64,
) -> Result<SplitManifest> {
    if upsample_factor < 1 {
        return Err(Error::InvalidUpsampleFactor(upsample_factor));
    }
    let mut regular_ids = Vec::new();
    let mut multi_idiom_ids = Vec::new();
    let mut groups: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for pair in pairs {
        match pair.primary_idiom() {
            None => regular_ids.push(pair.pair_id.clone()),
            Some(idiom) => {
                groups.entry(idiom).or_default().push(&pair.pair_id);
                if pair.has_multiple_idioms() {
                    multi_idiom_ids.push(pair.pair_id.clone());
                }
            }
        }
    }

    let mut idiom_train_ids = Vec::new();
    let mut idiom_test_ids = Vec::new();
    let mut discarded_ids = Vec::new();
    for (idiom, mut ids) in groups {
        if ids.len() == 1 {
            discarded_ids.push(ids[0].to_string());
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(idiom));
        ids.shuffle(&mut rng);
        let half = ids.len() / 2;
        idiom_train_ids.extend(ids[..half].iter().map(|s| s.to_string()));
        idiom_test_ids.extend(ids[half..].iter().map(|s| s.to_string()));
    }

    Ok(SplitManifest {
        split_kind: kind,
        upsample_factor: if kind == SplitKind::Upsample { upsample_factor } else { 1 },
        seed,
        regular_ids,
        idiom_train_ids,
        idiom_test_ids,
        discarded_ids,
        multi_idiom_ids,
    })
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Span occurrences per idiom, most frequent first, ties by idiom id.
pub fn idiom_frequency_table(pairs: &[AnnotatedPair]) -> Vec<(String, usize)> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for span in pairs.iter().flat_map(|p| &p.spans) {
        *counts.entry(span.idiom_id.as_str()).or_default() += 1;
    }
    sort_frequency(counts.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

pub(crate) fn sort_frequency(mut table: Vec<(String, usize)>) -> Vec<(String, usize)> {
    table.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    table
}

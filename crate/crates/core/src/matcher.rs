//! Rule-based idiom matcher.
//!
//! Each phrase of an idiom list is compiled into a contiguous token pattern:
//! verbs match any inflection through their lemma, placeholder words
//! (`someone`, `one's`, ...) become a one-word wildcard followed by an
//! optional possessive particle, and inflected non-verbs keep their exact
//! form. Sentences are lemmatized with a lookup table backed by suffix rules.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Reverse;

use serde::{Deserialize, Serialize};

use crate::corpus::{sort_frequency, AnnotatedPair, IdiomSpan};
use crate::error::{Error, Result};
use crate::text::{is_alphabetic_word, normalize, tokenize, Token};

const PLACEHOLDERS: &[&str] = &["someone", "somebody", "something", "one"];
const POSSESSIVES: &[&str] = &["'s", "'", "s", "\u{2019}s", "\u{2019}"];
const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "my", "your", "his", "her", "its", "our",
    "their",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Verb,
    Part,
    Det,
    Other,
}

/// Surface → lemma lookup with a suffix-stripping fallback.
#[derive(Debug, Clone, Default)]
pub struct LemmaTable {
    lemmas: BTreeMap<String, String>,
    verbs: BTreeSet<String>,
}

impl LemmaTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `surface → lemma`. A `Verb` tag marks both forms as verbs.
    pub fn insert(&mut self, surface: &str, lemma: &str, pos: Option<Pos>) {
        let surface = normalize(surface);
        let lemma = normalize(lemma);
        if pos == Some(Pos::Verb) {
            self.verbs.insert(surface.clone());
            self.verbs.insert(lemma.clone());
        }
        self.lemmas.insert(surface, lemma);
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }

    pub fn lemma(&self, word: &str) -> String {
        let word = normalize(word);
        if let Some(lemma) = self.lemmas.get(&word) {
            return lemma.clone();
        }
        if is_alphabetic_word(&word) && !word.starts_with(crate::text::is_apostrophe) {
            suffix_lemma(&word)
        } else {
            word
        }
    }

    pub fn pos(&self, word: &str) -> Pos {
        let word = normalize(word);
        if POSSESSIVES.contains(&word.as_str()) && word != "s" {
            Pos::Part
        } else if DETERMINERS.contains(&word.as_str()) {
            Pos::Det
        } else if self.verbs.contains(&word) || self.verbs.contains(&self.lemma(&word)) {
            Pos::Verb
        } else {
            Pos::Other
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

fn strip<'a>(word: &'a str, suffix: &str) -> Option<&'a str> {
    word.strip_suffix(suffix)
}

/// Strips -ing/-ed/-es/-s with consonant undoubling and e-restoration.
fn suffix_lemma(word: &str) -> String {
    let n = word.chars().count();
    if n > 4 {
        if let Some(stem) = strip(word, "ies").or_else(|| strip(word, "ied")) {
            return stem.to_string() + "y";
        }
        if let Some(stem) = strip(word, "ing") {
            if stem.chars().any(is_vowel) {
                return fix_stem(stem);
            }
        }
    }
    if n > 3 {
        if let Some(stem) = strip(word, "ed") {
            if stem.chars().any(is_vowel) {
                return fix_stem(stem);
            }
        }
        if let Some(stem) = strip(word, "es") {
            if ["s", "x", "z", "ch", "sh"].iter().any(|s| stem.ends_with(s)) {
                return stem.to_string();
            }
        }
        if word.ends_with('s') && !["ss", "us", "is"].iter().any(|s| word.ends_with(s)) {
            return word[..word.len() - 1].to_string();
        }
    }
    word.to_string()
}

fn fix_stem(stem: &str) -> String {
    let chars: Vec<char> = stem.chars().collect();
    let k = chars.len();
    if k >= 2 && chars[k - 1] == chars[k - 2] && !is_vowel(chars[k - 1]) && !"lsfz".contains(chars[k - 1]) {
        return chars[..k - 1].iter().collect();
    }
    if k == 3 && !is_vowel(chars[0]) && is_vowel(chars[1]) && !is_vowel(chars[2]) && !"wx".contains(chars[2]) {
        let mut s: String = chars.iter().collect();
        s.push('e');
        return s;
    }
    stem.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morph {
    pub lemma: String,
    pub pos: Pos,
}

/// Per-token lemma and coarse part of speech for one sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphAnalysis {
    pub morphs: Vec<Morph>,
}

pub fn analyze(tokens: &[Token], table: &LemmaTable) -> MorphAnalysis {
    MorphAnalysis {
        morphs: tokens
            .iter()
            .map(|t| Morph {
                lemma: table.lemma(&t.surface),
                pos: table.pos(&t.surface),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternElement {
    Lemma(String),
    Exact(String),
    /// Exactly one alphabetic, non-particle token.
    Wildcard,
    /// Zero or one possessive particle.
    OptionalPossessive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdiomPattern {
    pub idiom_id: String,
    pub elements: Vec<PatternElement>,
}

pub fn compile_pattern(phrase: &str, table: &LemmaTable) -> Result<IdiomPattern> {
    let idiom_id = phrase.split_whitespace().collect::<Vec<_>>().join(" ");
    let tokens = tokenize(&idiom_id);
    if tokens.is_empty() {
        return Err(Error::EmptyPhrase);
    }
    let mut elements = Vec::with_capacity(tokens.len() + 1);
    let mut iter = tokens.iter().peekable();
    while let Some(token) = iter.next() {
        let word = token.normalized.as_str();
        if PLACEHOLDERS.contains(&word) {
            elements.push(PatternElement::Wildcard);
            elements.push(PatternElement::OptionalPossessive);
            iter.next_if(|t| t.is_possessive_particle());
        } else if token.is_possessive_particle() {
            elements.push(PatternElement::OptionalPossessive);
        } else {
            let lemma = table.lemma(word);
            if table.pos(word) == Pos::Verb || lemma == word {
                elements.push(PatternElement::Lemma(lemma));
            } else {
                elements.push(PatternElement::Exact(word.to_string()));
            }
        }
    }
    Ok(IdiomPattern { idiom_id, elements })
}

impl IdiomPattern {
    /// Longest match starting at `start`, as an exclusive end index.
    pub fn longest_match_at(&self, analysis: &MorphAnalysis, tokens: &[Token], start: usize) -> Option<usize> {
        let mut frontier: BTreeSet<usize> = BTreeSet::new();
        frontier.insert(start);
        for element in &self.elements {
            let mut next = BTreeSet::new();
            for &pos in &frontier {
                if let PatternElement::OptionalPossessive = element {
                    next.insert(pos);
                }
                let Some(token) = tokens.get(pos) else { continue };
                let morph = &analysis.morphs[pos];
                let hit = match element {
                    PatternElement::Lemma(lemma) => morph.lemma == *lemma,
                    PatternElement::Exact(word) => token.normalized == *word,
                    PatternElement::Wildcard => token.is_alphabetic() && morph.pos != Pos::Part,
                    PatternElement::OptionalPossessive => POSSESSIVES.contains(&token.normalized.as_str()),
                };
                if hit {
                    next.insert(pos + 1);
                }
            }
            if next.is_empty() {
                return None;
            }
            frontier = next;
        }
        frontier.last().copied().filter(|&end| end > start)
    }

    /// All leftmost-longest, non-overlapping matches.
    pub fn find_matches(&self, analysis: &MorphAnalysis, tokens: &[Token]) -> Vec<IdiomSpan> {
        let mut spans = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            match self.longest_match_at(analysis, tokens, i) {
                Some(end) => {
                    spans.push(IdiomSpan::over_tokens(&self.idiom_id, tokens, i, end));
                    i = end;
                }
                None => i += 1,
            }
        }
        spans
    }

    /// Whether `span` is exactly one full match of this pattern.
    pub fn matches_span(&self, analysis: &MorphAnalysis, tokens: &[Token], span: &IdiomSpan) -> bool {
        self.longest_match_at(analysis, tokens, span.token_start) == Some(span.token_end)
    }
}

/// Matches of every pattern in one sentence, overlaps resolved leftmost
/// first, then longest, then by pattern order.
pub fn match_sentence(patterns: &[IdiomPattern], analysis: &MorphAnalysis, tokens: &[Token]) -> Vec<IdiomSpan> {
    let mut candidates: Vec<(usize, IdiomSpan)> = patterns
        .iter()
        .enumerate()
        .flat_map(|(k, p)| p.find_matches(analysis, tokens).into_iter().map(move |s| (k, s)))
        .collect();
    candidates.sort_by_key(|(k, s)| (s.token_start, Reverse(s.len()), *k));
    let mut chosen: Vec<IdiomSpan> = Vec::new();
    for (_, span) in candidates {
        if chosen.iter().all(|c| !c.overlaps(&span)) {
            chosen.push(span);
        }
    }
    chosen.sort_by_key(|s| s.token_start);
    chosen
}

#[derive(Debug, Clone, Default)]
pub struct Extraction {
    pub pairs: Vec<AnnotatedPair>,
    /// Occurrences per idiom including zero counts, most frequent first.
    pub counts: Vec<(String, usize)>,
}

/// Scans line-aligned parallel text. Pair ids are 1-based line numbers.
/// Unmatched lines are emitted as regular pairs only if `keep_regular`.
pub fn extract_corpus<S: AsRef<str>, T: AsRef<str>>(
    patterns: &[IdiomPattern],
    table: &LemmaTable,
    source_lines: &[S],
    target_lines: &[T],
    keep_regular: bool,
) -> Result<Extraction> {
    if source_lines.len() != target_lines.len() {
        return Err(Error::LineCountMismatch {
            source_lines: source_lines.len(),
            target_lines: target_lines.len(),
        });
    }
    let mut counts: BTreeMap<&str, usize> = patterns.iter().map(|p| (p.idiom_id.as_str(), 0)).collect();
    let mut pairs = Vec::new();
    for (line, (src, tgt)) in source_lines.iter().zip(target_lines).enumerate() {
        let mut pair = AnnotatedPair::regular((line + 1).to_string(), src.as_ref(), tgt.as_ref());
        let analysis = analyze(&pair.source_tokens, table);
        pair.spans = match_sentence(patterns, &analysis, &pair.source_tokens);
        for span in &pair.spans {
            if let Some(c) = counts.get_mut(span.idiom_id.as_str()) {
                *c += 1;
            }
        }
        if keep_regular || pair.is_idiomatic() {
            pairs.push(pair);
        }
    }
    Ok(Extraction {
        pairs,
        counts: sort_frequency(counts.into_iter().map(|(k, v)| (k.to_string(), v)).collect()),
    })
}

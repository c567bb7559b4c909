//! Tokenization and the normalization used wherever two words are compared.
//!
//! Tokens follow Unicode word boundaries (UAX #29). Whitespace is dropped,
//! punctuation becomes its own token, and apostrophe clitics are split off:
//! English suffix clitics keep the apostrophe on the right (`John` `'s`,
//! `do` `n't`), elided prefixes keep it on the left (`l'` `exemple`).

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;
use unicode_segmentation::UnicodeSegmentation;

/// One word unit of a sentence. Offsets count characters, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub normalized: String,
    pub char_start: usize,
    pub char_end: usize,
}

impl Token {
    pub fn new(surface: &str, char_start: usize) -> Self {
        let len = surface.chars().count();
        Token {
            surface: surface.into(),
            normalized: normalize(surface),
            char_start,
            char_end: char_start + len,
        }
    }

    /// At least one letter, and nothing but letters and apostrophes.
    pub fn is_alphabetic(&self) -> bool {
        is_alphabetic_word(&self.surface)
    }

    /// `'s`, `'` and their typographic variants.
    pub fn is_possessive_particle(&self) -> bool {
        matches!(self.normalized.as_str(), "'s" | "'" | "\u{2019}s" | "\u{2019}")
    }
}

pub fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

pub fn is_alphabetic_word(word: &str) -> bool {
    word.chars().any(char::is_alphabetic)
        && word.chars().all(|c| c.is_alphabetic() || is_apostrophe(c) || is_combining_mark(c))
}

/// Lowercase, compatibility-decompose, strip combining marks, recompose.
///
/// Iterated to a fixed point because lowercasing and compatibility
/// decomposition do not commute for a handful of code points (`ᴬ`, `İ`).
pub fn normalize(word: &str) -> String {
    let mut current = normalize_once(word);
    for _ in 0..8 {
        let next = normalize_once(&current);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

fn normalize_once(word: &str) -> String {
    let folded: String = word.nfkd().filter(|c| !is_combining_mark(*c)).collect();
    let lowered = folded.to_lowercase();
    lowered
        .nfkd()
        .filter(|c| !is_combining_mark(*c))
        .nfc()
        .collect()
}

pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut char_pos = 0;
    let mut last_byte = 0;
    for (byte_idx, segment) in text.split_word_bound_indices() {
        char_pos += text[last_byte..byte_idx].chars().count();
        last_byte = byte_idx;
        if segment.chars().all(char::is_whitespace) {
            continue;
        }
        split_clitics(segment, char_pos, &mut tokens);
    }
    tokens
}

const SUFFIX_CLITICS: &[&str] = &["s", "t", "re", "ve", "ll", "d", "m"];

fn split_clitics(segment: &str, start: usize, out: &mut Vec<Token>) {
    let mut rest = segment;
    let mut offset = start;
    while let Some(pos) = inner_apostrophe(rest) {
        let apostrophe_len = rest[pos..].chars().next().map_or(1, char::len_utf8);
        let after = &rest[pos + apostrophe_len..];
        let is_last = inner_apostrophe(after).is_none() && !after.chars().any(is_apostrophe);
        if is_last && SUFFIX_CLITICS.contains(&after.to_lowercase().as_str()) {
            let head = &rest[..pos];
            let negated = after.eq_ignore_ascii_case("t")
                && head.chars().count() > 1
                && head.ends_with(['n', 'N']);
            let split = if negated { pos - 1 } else { pos };
            push(&rest[..split], &mut offset, out);
            push(&rest[split..], &mut offset, out);
            return;
        }
        push(&rest[..pos + apostrophe_len], &mut offset, out);
        rest = after;
    }
    push(rest, &mut offset, out);
}

fn push(piece: &str, offset: &mut usize, out: &mut Vec<Token>) {
    if piece.is_empty() {
        return;
    }
    let token = Token::new(piece, *offset);
    *offset = token.char_end;
    out.push(token);
}

/// Byte index of the first apostrophe with a letter on both sides.
fn inner_apostrophe(word: &str) -> Option<usize> {
    let chars: Vec<(usize, char)> = word.char_indices().collect();
    (1..chars.len().saturating_sub(1)).find_map(|k| {
        let (idx, c) = chars[k];
        (is_apostrophe(c) && chars[k - 1].1.is_alphabetic() && chars[k + 1].1.is_alphabetic())
            .then_some(idx)
    })
}

/// Normalized forms of the tokens of `text`.
pub fn normalized_words(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|t| t.normalized).collect()
}

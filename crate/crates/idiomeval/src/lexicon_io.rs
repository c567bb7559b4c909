//! Bilingual dictionaries (MUSE layout) and lemma tables.

use std::path::Path;

use idiomeval_core::lexicon::BilingualLexicon;
use idiomeval_core::matcher::{LemmaTable, Pos};
use serde::Serialize;

use crate::corpus_io::read_to_string;
use crate::error::{Error, Result};

const DEFAULT_LEMMAS: &str = include_str!("../data/lemmas.tsv");

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LexiconStats {
    pub source_vocab_size: usize,
    pub pair_count: usize,
    /// Lines with more than two fields (multi-word entries).
    pub skipped_multiword: usize,
    /// Lines with a single field or a side that normalizes to nothing.
    pub skipped_malformed: usize,
}

/// One whitespace-separated `source target` pair per line.
pub fn parse_lexicon(text: &str) -> (BilingualLexicon, LexiconStats) {
    let mut lexicon = BilingualLexicon::new();
    let mut stats = LexiconStats::default();
    for line in text.lines() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [] => {}
            [source, target] => {
                if !lexicon.insert(source, target) {
                    stats.skipped_malformed += 1;
                }
            }
            [_] => stats.skipped_malformed += 1,
            _ => stats.skipped_multiword += 1,
        }
    }
    stats.source_vocab_size = lexicon.source_vocab_size();
    stats.pair_count = lexicon.pair_count();
    (lexicon, stats)
}

pub fn load_lexicon(path: &Path) -> Result<(BilingualLexicon, LexiconStats)> {
    let (lexicon, stats) = parse_lexicon(&read_to_string(path)?);
    if lexicon.is_empty() {
        return Err(Error::NoEntries { path: path.into() });
    }
    Ok((lexicon, stats))
}

pub fn render_lexicon(lexicon: &BilingualLexicon) -> String {
    let mut out = String::new();
    for (s, t) in lexicon.pairs() {
        out.push_str(s);
        out.push(' ');
        out.push_str(t);
        out.push('\n');
    }
    out
}

fn parse_pos(tag: &str) -> Option<Pos> {
    match tag.trim().to_ascii_uppercase().as_str() {
        "VERB" => Some(Pos::Verb),
        "PART" => Some(Pos::Part),
        "DET" => Some(Pos::Det),
        "OTHER" => Some(Pos::Other),
        _ => None,
    }
}

/// `surface<TAB>lemma[<TAB>POS]` lines; `#` comments and blank lines skipped.
pub fn parse_lemma_table(text: &str, path: &Path) -> Result<LemmaTable> {
    let mut table = LemmaTable::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let pos = match fields.get(2) {
            Some(tag) => Some(parse_pos(tag).ok_or_else(|| Error::malformed(path, k + 1, format!("unknown POS `{tag}`")))?),
            None => None,
        };
        match fields.as_slice() {
            [surface, lemma, ..] if fields.len() <= 3 && !surface.is_empty() && !lemma.is_empty() => {
                table.insert(surface, lemma, pos)
            }
            _ => return Err(Error::malformed(path, k + 1, "expected surface<TAB>lemma[<TAB>POS]")),
        }
    }
    Ok(table)
}

pub fn load_lemma_table(path: &Path) -> Result<LemmaTable> {
    parse_lemma_table(&read_to_string(path)?, path)
}

/// The English table shipped with the toolkit.
pub fn default_lemma_table() -> LemmaTable {
    parse_lemma_table(DEFAULT_LEMMAS, Path::new("<builtin lemmas>")).expect("built-in lemma table parses")
}

//! Bilingual word dictionaries, normalized on insertion.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

use crate::text::normalize;

static EMPTY: BTreeSet<String> = BTreeSet::new();

/// Many-to-many source → target word map. Keys and values are stored
/// normalized; empty translation sets are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BilingualLexicon {
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl BilingualLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one translation pair. Returns false when either side normalizes
    /// to the empty string and nothing was stored.
    pub fn insert(&mut self, source: &str, target: &str) -> bool {
        let source = normalize(source);
        let target = normalize(target);
        if source.is_empty() || target.is_empty() {
            return false;
        }
        self.entries.entry(source).or_default().insert(target);
        true
    }

    /// Translations of `normalize(word)`; empty for out-of-vocabulary words.
    pub fn lookup(&self, word: &str) -> &BTreeSet<String> {
        self.entries.get(&normalize(word)).unwrap_or(&EMPTY)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(&normalize(word))
    }

    pub fn source_vocab_size(&self) -> usize {
        self.entries.len()
    }

    pub fn pair_count(&self) -> usize {
        self.entries.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &BTreeSet<String>)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// All pairs in sorted order.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries
            .iter()
            .flat_map(|(s, ts)| ts.iter().map(move |t| (s.as_str(), t.as_str())))
    }
}

impl<'a> FromIterator<(&'a str, &'a str)> for BilingualLexicon {
    fn from_iter<I: IntoIterator<Item = (&'a str, &'a str)>>(iter: I) -> Self {
        let mut lexicon = BilingualLexicon::new();
        for (s, t) in iter {
            lexicon.insert(s, t);
        }
        lexicon
    }
}

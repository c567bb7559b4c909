//! Annotated corpus, split manifest, idiom list and hypothesis files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use idiomeval_core::corpus::{check_unique_ids, AnnotatedPair, IdiomSpan, ManifestEntry, SplitManifest};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusRecord {
    pub pair_id: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub spans: Vec<IdiomSpan>,
}

impl From<&AnnotatedPair> for CorpusRecord {
    fn from(pair: &AnnotatedPair) -> Self {
        CorpusRecord {
            pair_id: pair.pair_id.clone(),
            source: pair.source_raw.clone(),
            target: pair.target_raw.clone(),
            spans: pair.spans.clone(),
        }
    }
}

/// Parses one JSON record per line and validates spans against the
/// tokenization. With `schema_check` every line is examined and all
/// offending lines are reported together; otherwise the first error stops.
pub fn parse_corpus(
    text: &str,
    path: &Path,
    schema_check: bool,
    idioms: Option<&BTreeSet<String>>,
) -> Result<Vec<AnnotatedPair>> {
    let mut pairs = Vec::new();
    let mut bad = Vec::new();
    let mut seen = BTreeSet::new();
    for (line, raw) in content_lines(text) {
        let parsed = serde_json::from_str::<CorpusRecord>(raw)
            .map_err(|e| e.to_string())
            .and_then(|r| {
                AnnotatedPair::new(r.pair_id, r.source, r.target, r.spans).map_err(|e| e.to_string())
            })
            .and_then(|p| match idioms {
                Some(list) => p.check_idioms(list).map(|_| p).map_err(|e| e.to_string()),
                None => Ok(p),
            })
            .and_then(|p| {
                if seen.insert(p.pair_id.clone()) {
                    Ok(p)
                } else {
                    Err(idiomeval_core::Error::DuplicatePairId(p.pair_id).to_string())
                }
            });
        match parsed {
            Ok(pair) => pairs.push(pair),
            Err(msg) if schema_check => bad.push((line, msg)),
            Err(msg) => return Err(Error::malformed(path, line, msg)),
        }
    }
    if !bad.is_empty() {
        return Err(Error::Malformed {
            path: path.into(),
            lines: bad,
        });
    }
    check_unique_ids(&pairs)?;
    Ok(pairs)
}

pub fn load_corpus(path: &Path, schema_check: bool, idioms: Option<&BTreeSet<String>>) -> Result<Vec<AnnotatedPair>> {
    parse_corpus(&read_to_string(path)?, path, schema_check, idioms)
}

pub fn render_corpus(pairs: &[AnnotatedPair]) -> String {
    let mut out = String::new();
    for pair in pairs {
        out.push_str(&serde_json::to_string(&CorpusRecord::from(pair)).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn write_corpus(path: &Path, pairs: &[AnnotatedPair]) -> Result<()> {
    write_file(path, &render_corpus(pairs))
}

pub fn render_manifest(manifest: &SplitManifest) -> String {
    let mut out = String::new();
    for entry in manifest.entries() {
        out.push_str(&serde_json::to_string(&entry).expect("entry serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_manifest(text: &str, path: &Path) -> Result<Vec<ManifestEntry>> {
    content_lines(text)
        .map(|(line, raw)| serde_json::from_str(raw).map_err(|e| Error::malformed(path, line, e.to_string())))
        .collect()
}

pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    parse_manifest(&read_to_string(path)?, path)
}

/// One phrase per line; blank lines and `#` comments ignored.
pub fn parse_idiom_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect()
}

pub fn load_idiom_list(path: &Path) -> Result<Vec<String>> {
    let list = parse_idiom_list(&read_to_string(path)?);
    if list.is_empty() {
        return Err(Error::NoEntries { path: path.into() });
    }
    Ok(list)
}

/// Plain text, one sentence per line.
pub fn load_lines(path: &Path) -> Result<Vec<String>> {
    Ok(read_to_string(path)?.lines().map(str::to_owned).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum HypothesisFormat {
    /// Keyed if every non-blank line is a `{pair_id, text}` object.
    Auto,
    /// One translation per line in corpus order.
    Lines,
    Keyed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KeyedHypothesis {
    pair_id: String,
    text: String,
}

pub fn parse_hypotheses(
    text: &str,
    path: &Path,
    pairs: &[AnnotatedPair],
    format: HypothesisFormat,
) -> Result<BTreeMap<String, String>> {
    let keyed = match format {
        HypothesisFormat::Keyed => true,
        HypothesisFormat::Lines => false,
        HypothesisFormat::Auto => {
            let mut lines = content_lines(text).peekable();
            lines.peek().is_some()
                && lines.all(|(_, l)| serde_json::from_str::<KeyedHypothesis>(l).is_ok())
        }
    };
    if keyed {
        let mut map = BTreeMap::new();
        for (line, raw) in content_lines(text) {
            let h: KeyedHypothesis =
                serde_json::from_str(raw).map_err(|e| Error::malformed(path, line, e.to_string()))?;
            if map.insert(h.pair_id.clone(), h.text).is_some() {
                return Err(Error::malformed(path, line, format!("duplicate pair id `{}`", h.pair_id)));
            }
        }
        return Ok(map);
    }
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() != pairs.len() {
        return Err(Error::Usage(format!(
            "{}: {} hypothesis lines for {} corpus pairs",
            path.display(),
            lines.len(),
            pairs.len()
        )));
    }
    Ok(pairs
        .iter()
        .zip(lines)
        .map(|(p, h)| (p.pair_id.clone(), h.to_owned()))
        .collect())
}

pub fn load_hypotheses(
    path: &Path,
    pairs: &[AnnotatedPair],
    format: HypothesisFormat,
) -> Result<BTreeMap<String, String>> {
    parse_hypotheses(&read_to_string(path)?, path, pairs, format)
}

/// Frequency table as `idiom<TAB>count` lines.
pub fn render_frequency_table(table: &[(String, usize)]) -> String {
    let mut out = String::new();
    for (idiom, count) in table {
        out.push_str(&format!("{idiom}\t{count}\n"));
    }
    out
}

//! Pharaoh alignment files and translation table serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use idiomeval_core::aligner::{AlignmentSet, Direction, Prior, TranslationTable};
use idiomeval_core::corpus::AnnotatedPair;

use crate::corpus_io::read_to_string;
use crate::error::{Error, Result};

/// Marker target word for a row's smoothing floor.
pub const OTHER_TOKEN: &str = "<OTHER>";

/// Parses one Pharaoh line: space-separated `i-j` pairs, source first.
pub fn parse_pharaoh_line(line: &str) -> std::result::Result<Vec<(usize, usize)>, String> {
    line.split_whitespace()
        .map(|item| {
            let (i, j) = item.split_once('-').ok_or_else(|| format!("`{item}` is not i-j"))?;
            let parse = |s: &str| {
                if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                    Err(format!("`{item}` is not i-j"))
                } else {
                    s.parse::<usize>().map_err(|e| format!("`{item}`: {e}"))
                }
            };
            Ok((parse(i)?, parse(j)?))
        })
        .collect()
}

/// Links in ascending order, `i-j` separated by single spaces.
pub fn render_pharaoh_line(alignment: &AlignmentSet) -> String {
    let mut out = String::new();
    for (k, (i, j)) in alignment.links.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{i}-{j}");
    }
    out
}

pub fn render_pharaoh(alignments: &[AlignmentSet]) -> String {
    alignments.iter().map(|a| render_pharaoh_line(a) + "\n").collect()
}

/// Reads a Pharaoh file aligned line-by-line with `pairs`, checking every
/// link against the source tokens and the given target token counts.
pub fn parse_pharaoh(
    text: &str,
    path: &Path,
    pairs: &[AnnotatedPair],
    target_lens: &[usize],
    direction: Direction,
) -> Result<BTreeMap<String, AlignmentSet>> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.len() != pairs.len() {
        return Err(Error::Usage(format!(
            "{}: {} alignment lines for {} corpus pairs",
            path.display(),
            lines.len(),
            pairs.len()
        )));
    }
    let mut out = BTreeMap::new();
    for (k, ((line, pair), &m)) in lines.iter().zip(pairs).zip(target_lens).enumerate() {
        let links = parse_pharaoh_line(line).map_err(|msg| Error::malformed(path, k + 1, msg))?;
        let set = AlignmentSet::new(pair.pair_id.clone(), pair.source_tokens.len(), m, direction)
            .with_links(links)
            .map_err(|e| Error::malformed(path, k + 1, e.to_string()))?;
        out.insert(pair.pair_id.clone(), set);
    }
    Ok(out)
}

pub fn load_pharaoh(
    path: &Path,
    pairs: &[AnnotatedPair],
    target_lens: &[usize],
    direction: Direction,
) -> Result<BTreeMap<String, AlignmentSet>> {
    parse_pharaoh(&read_to_string(path)?, path, pairs, target_lens, direction)
}

/// `#prior` header, then `source target probability` lines, then one
/// `source <OTHER> floor` line per row.
pub fn render_table(table: &TranslationTable) -> String {
    let mut out = match table.prior() {
        Prior::Uniform => "#prior uniform\n".to_owned(),
        Prior::Diagonal { lambda } => format!("#prior diagonal {lambda}\n"),
    };
    for (s, t, p) in table.entries() {
        let _ = writeln!(out, "{s} {t} {p}");
    }
    for (s, floor) in table.floors() {
        let _ = writeln!(out, "{s} {OTHER_TOKEN} {floor}");
    }
    out
}

pub fn parse_table(text: &str, path: &Path) -> Result<TranslationTable> {
    let mut prior = Prior::Uniform;
    let mut entries: Vec<(&str, &str, f64)> = Vec::new();
    let mut floors: Vec<(&str, f64)> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let bad = |msg: String| Error::malformed(path, k + 1, msg);
        if let Some(header) = line.strip_prefix("#prior") {
            let fields: Vec<&str> = header.split_whitespace().collect();
            prior = match fields.as_slice() {
                ["uniform"] => Prior::Uniform,
                ["diagonal", lambda] => Prior::Diagonal {
                    lambda: lambda.parse().map_err(|e| bad(format!("lambda: {e}")))?,
                },
                _ => return Err(bad(format!("bad prior header `{line}`"))),
            };
            continue;
        }
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(' ').collect();
        let [s, t, p] = fields.as_slice() else {
            return Err(bad("expected `source target probability`".into()));
        };
        let p: f64 = p.parse().map_err(|e| bad(format!("probability: {e}")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(bad(format!("probability {p} outside [0, 1]")));
        }
        if *t == OTHER_TOKEN {
            floors.push((s, p));
        } else {
            entries.push((s, t, p));
        }
    }
    if entries.is_empty() {
        return Err(Error::NoEntries { path: path.into() });
    }
    Ok(TranslationTable::from_parts(entries, floors, prior))
}

pub fn load_table(path: &Path) -> Result<TranslationTable> {
    parse_table(&read_to_string(path)?, path)
}

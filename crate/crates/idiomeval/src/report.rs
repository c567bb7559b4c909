//! The evaluation report envelope and its human-readable renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use idiomeval_core::apt::AptReport;
use idiomeval_core::litter::LitterReport;
use serde::{Deserialize, Serialize};

use crate::corpus_io::read_to_string;
use crate::error::{Error, Result};

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalScores {
    /// Corpus BLEU, 0 to 100.
    pub bleu: Option<f64>,
    /// Corpus chrF, 0 to 1.
    pub chrf: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentInfo {
    /// `files` or `trained`.
    pub source: String,
    pub heuristic: Option<String>,
    pub bitext_pairs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub format_version: u32,
    pub metrics: Vec<String>,
    pub pairs: usize,
    pub idiomatic_pairs: usize,
    pub litter: Option<LitterReport>,
    pub apt: Option<AptReport>,
    pub global: Option<GlobalScores>,
    pub alignment: Option<AlignmentInfo>,
}

impl EvalReport {
    /// One compact JSON line.
    pub fn to_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
        let report: EvalReport = serde_json::from_str(line).map_err(|e| Error::malformed(path, 1, e.to_string()))?;
        if report.format_version != REPORT_FORMAT_VERSION {
            return Err(Error::malformed(
                path,
                1,
                format!("report format {} (expected {REPORT_FORMAT_VERSION})", report.format_version),
            ));
        }
        Ok(report)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_to_string(path)?, path)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct IdiomRow {
    n: usize,
    litter: Option<f64>,
    uniprec: Option<f64>,
    chrf: Option<f64>,
}

fn idiom_rows(report: &EvalReport) -> BTreeMap<&str, IdiomRow> {
    let mut rows: BTreeMap<&str, IdiomRow> = BTreeMap::new();
    if let Some(l) = &report.litter {
        for r in &l.per_idiom {
            let row = rows.entry(&r.idiom_id).or_default();
            row.n = row.n.max(r.n);
            row.litter = Some(r.rate);
        }
    }
    if let Some(a) = &report.apt {
        for s in &a.per_idiom_uniprec {
            let row = rows.entry(&s.idiom_id).or_default();
            row.n = row.n.max(s.n);
            row.uniprec = Some(s.score);
        }
        for s in &a.per_idiom_chrf {
            rows.entry(&s.idiom_id).or_default().chrf = Some(s.score);
        }
    }
    rows
}

fn cell(v: Option<f64>, scale: f64) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{:.2}", x * scale))
}

/// Per-idiom scores as TSV: `idiom_id n litter uniprec chrf`, percentages.
pub fn render_idiom_tsv(report: &EvalReport) -> String {
    let mut out = String::from("idiom_id\tn\tlitter\tuniprec\tchrf\n");
    for (idiom, row) in idiom_rows(report) {
        let _ = writeln!(
            out,
            "{idiom}\t{}\t{}\t{}\t{}",
            row.n,
            cell(row.litter, 100.0),
            cell(row.uniprec, 100.0),
            cell(row.chrf, 100.0)
        );
    }
    out
}

/// Summary table followed by the per-idiom breakdown.
pub fn render_table(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "pairs: {} ({} idiomatic)", report.pairs, report.idiomatic_pairs);
    let _ = writeln!(out, "{:<24}{:>10}{:>10}", "metric", "macro", "micro");
    if let Some(l) = &report.litter {
        let _ = writeln!(out, "{:<24}{:>10.2}{:>10.2}", "LitTER %", l.macro_litter * 100.0, l.micro_litter * 100.0);
    }
    if let Some(a) = &report.apt {
        let _ = writeln!(out, "{:<24}{:>10.2}{:>10.2}", "APT uniprec %", a.macro_uniprec * 100.0, a.micro_uniprec * 100.0);
        let _ = writeln!(out, "{:<24}{:>10.2}{:>10.2}", "APT chrF %", a.macro_chrf * 100.0, a.micro_chrf * 100.0);
    }
    if let Some(g) = &report.global {
        if let Some(b) = g.bleu {
            let _ = writeln!(out, "{:<24}{:>10.2}", "BLEU", b);
        }
        if let Some(c) = g.chrf {
            let _ = writeln!(out, "{:<24}{:>10.2}", "chrF", c * 100.0);
        }
    }
    if let Some(l) = &report.litter {
        let _ = writeln!(
            out,
            "litter: {} evaluated, {} unscorable, OOV rate {:.2}%",
            l.evaluated,
            l.unscorable,
            l.oov_rate * 100.0
        );
    }
    if let Some(a) = &report.apt {
        let _ = writeln!(
            out,
            "apt: {} spans, empty reference {:.2}%, empty hypothesis {:.2}%",
            a.items,
            a.empty_ref_rate * 100.0,
            a.empty_hyp_rate * 100.0
        );
    }
    let rows = idiom_rows(report);
    if !rows.is_empty() {
        let width = rows.keys().map(|k| k.chars().count()).max().unwrap_or(0).max(5) + 2;
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<width$}{:>6}{:>10}{:>10}{:>10}", "idiom", "n", "litter", "uniprec", "chrf");
        for (idiom, row) in rows {
            let _ = writeln!(
                out,
                "{idiom:<width$}{:>6}{:>10}{:>10}{:>10}",
                row.n,
                cell(row.litter, 100.0),
                cell(row.uniprec, 100.0),
                cell(row.chrf, 100.0)
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use idiomeval_core::litter::IdiomRate;

    fn report() -> EvalReport {
        EvalReport {
            format_version: REPORT_FORMAT_VERSION,
            metrics: vec!["litter".into()],
            pairs: 3,
            idiomatic_pairs: 3,
            litter: Some(LitterReport {
                macro_litter: 0.25,
                micro_litter: 1.0 / 3.0,
                evaluated: 3,
                unscorable: 0,
                oov_rate: 0.0,
                per_idiom: vec![
                    IdiomRate { idiom_id: "a".into(), n: 2, rate: 0.5 },
                    IdiomRate { idiom_id: "b".into(), n: 1, rate: 0.0 },
                ],
                sentences: vec![],
            }),
            apt: None,
            global: None,
            alignment: None,
        }
    }

    #[test]
    fn line_round_trips() {
        let r = report();
        let line = r.to_line();
        assert_eq!(line.matches('\n').count(), 1);
        assert_eq!(EvalReport::parse(&line, Path::new("r")).unwrap(), r);
    }

    #[test]
    fn tsv_has_one_row_per_idiom() {
        let tsv = render_idiom_tsv(&report());
        assert_eq!(tsv, "idiom_id\tn\tlitter\tuniprec\tchrf\na\t2\t50.00\t-\t-\nb\t1\t0.00\t-\t-\n");
        assert!(render_table(&report()).contains("LitTER %"));
    }
}

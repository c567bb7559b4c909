//! Evaluation orchestration shared by the CLI and the acceptance tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use idiomeval_core::aligner::{
    align_pair, align_pair_reverse, symmetrize, train, AlignmentSet, Heuristic, SentencePair, TrainConfig,
    TranslationTable,
};
use idiomeval_core::apt::apt_corpus;
use idiomeval_core::corpus::{AnnotatedPair, ManifestEntry, Role};
use idiomeval_core::lexicon::BilingualLexicon;
use idiomeval_core::litter::litter_corpus;
use idiomeval_core::metrics::{corpus_bleu, corpus_chrf, BLEU_MAX_N};
use idiomeval_core::text::{tokenize, Token};

use crate::error::{Error, Result};
use crate::report::{AlignmentInfo, EvalReport, GlobalScores, REPORT_FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    Litter,
    Apt,
    Bleu,
    Chrf,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Litter, Metric::Apt, Metric::Bleu, Metric::Chrf];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Litter => "litter",
            Metric::Apt => "apt",
            Metric::Bleu => "bleu",
            Metric::Chrf => "chrf",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| format!("unknown metric `{s}` (expected litter, apt, bleu or chrf)"))
    }
}

/// Comma-separated metric names, deduplicated and ordered.
pub fn parse_metrics(list: &str) -> Result<BTreeSet<Metric>> {
    let set = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Metric>().map_err(Error::Usage))
        .collect::<Result<BTreeSet<_>>>()?;
    if set.is_empty() {
        return Err(Error::Usage("no metrics requested".into()));
    }
    Ok(set)
}

/// Reference and hypothesis alignments keyed by pair id.
#[derive(Debug, Clone, Default)]
pub struct Alignments {
    pub reference: BTreeMap<String, AlignmentSet>,
    pub hypothesis: BTreeMap<String, AlignmentSet>,
    pub info: Option<AlignmentInfo>,
}

pub struct EvalInputs<'a> {
    pub pairs: &'a [AnnotatedPair],
    pub hypotheses: &'a BTreeMap<String, String>,
    pub lexicon: Option<&'a BilingualLexicon>,
    pub alignments: Option<&'a Alignments>,
}

fn normalized(tokens: &[Token]) -> Vec<String> {
    tokens.iter().map(|t| t.normalized.clone()).collect()
}

/// Normalized source/target word sequences of `pairs`.
pub fn bitext<'a>(pairs: impl IntoIterator<Item = &'a AnnotatedPair>) -> Vec<SentencePair> {
    pairs
        .into_iter()
        .map(|p| (normalized(&p.source_tokens), normalized(&p.target_tokens)))
        .collect()
}

/// Pair ids used for aligner training: regular and idiom-train pairs, plus
/// idiom-test pairs when `include_test` is set.
pub fn training_ids(manifest: &[ManifestEntry], include_test: bool) -> BTreeSet<String> {
    manifest
        .iter()
        .filter(|e| include_test || e.role != Role::IdiomTest)
        .map(|e| e.pair_id.clone())
        .collect()
}

/// Trains a source-to-target table and a target-to-source table.
pub fn train_tables(bitext: &[SentencePair], config: &TrainConfig) -> Result<(TranslationTable, TranslationTable)> {
    let reversed: Vec<SentencePair> = bitext.iter().map(|(s, t)| (t.clone(), s.clone())).collect();
    Ok((train(bitext, config)?, train(&reversed, config)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignMode {
    Forward,
    Reverse,
    Symmetrized(Heuristic),
}

pub fn align_words(
    fwd: &TranslationTable,
    rev: &TranslationTable,
    pair_id: &str,
    source: &[String],
    target: &[String],
    mode: AlignMode,
) -> Result<AlignmentSet> {
    Ok(match mode {
        AlignMode::Forward => align_pair(fwd, pair_id, source, target),
        AlignMode::Reverse => align_pair_reverse(rev, pair_id, source, target),
        AlignMode::Symmetrized(h) => symmetrize(
            &align_pair(fwd, pair_id, source, target),
            &align_pair_reverse(rev, pair_id, source, target),
            h,
        )?,
    })
}

/// Trains in-process on source-reference and source-hypothesis bitext of
/// the idiomatic pairs plus `extra`, then aligns both sides of each
/// idiomatic pair.
pub fn train_alignments(
    pairs: &[AnnotatedPair],
    hypotheses: &BTreeMap<String, String>,
    extra: &[SentencePair],
    config: &TrainConfig,
    heuristic: Heuristic,
) -> Result<Alignments> {
    let idiomatic: Vec<&AnnotatedPair> = pairs.iter().filter(|p| p.is_idiomatic()).collect();
    let mut hyp_words = BTreeMap::new();
    for p in &idiomatic {
        let h = hypotheses
            .get(&p.pair_id)
            .ok_or_else(|| idiomeval_core::Error::MissingHypothesis(p.pair_id.clone()))?;
        hyp_words.insert(p.pair_id.as_str(), normalized(&tokenize(h)));
    }
    let mut data: Vec<SentencePair> = extra.to_vec();
    data.extend(bitext(idiomatic.iter().copied()));
    for p in &idiomatic {
        data.push((normalized(&p.source_tokens), hyp_words[p.pair_id.as_str()].clone()));
    }
    let (fwd, rev) = train_tables(&data, config)?;
    let mode = AlignMode::Symmetrized(heuristic);
    let mut out = Alignments {
        info: Some(AlignmentInfo {
            source: "trained".into(),
            heuristic: Some(heuristic.to_string()),
            bitext_pairs: Some(data.len()),
        }),
        ..Alignments::default()
    };
    for p in &idiomatic {
        let src = normalized(&p.source_tokens);
        let id = &p.pair_id;
        out.reference
            .insert(id.clone(), align_words(&fwd, &rev, id, &src, &normalized(&p.target_tokens), mode)?);
        out.hypothesis
            .insert(id.clone(), align_words(&fwd, &rev, id, &src, &hyp_words[id.as_str()], mode)?);
    }
    Ok(out)
}

/// Runs the requested metrics. Only the inputs a metric needs are required.
pub fn evaluate(inputs: &EvalInputs<'_>, metrics: &BTreeSet<Metric>) -> Result<EvalReport> {
    let pairs = inputs.pairs;
    let litter = if metrics.contains(&Metric::Litter) {
        let lexicon = inputs
            .lexicon
            .ok_or_else(|| Error::Usage("metric `litter` needs --lexicon".into()))?;
        Some(litter_corpus(pairs, inputs.hypotheses, lexicon)?)
    } else {
        None
    };
    let apt = if metrics.contains(&Metric::Apt) {
        let al = inputs.alignments.ok_or_else(|| {
            Error::Usage("metric `apt` needs --ref-alignments and --hyp-alignments, or --train-aligner".into())
        })?;
        Some(apt_corpus(pairs, &al.reference, &al.hypothesis, inputs.hypotheses)?)
    } else {
        None
    };
    let global = if metrics.contains(&Metric::Bleu) || metrics.contains(&Metric::Chrf) {
        let mut hyps = Vec::with_capacity(pairs.len());
        for p in pairs {
            let h = inputs
                .hypotheses
                .get(&p.pair_id)
                .ok_or_else(|| idiomeval_core::Error::MissingHypothesis(p.pair_id.clone()))?;
            hyps.push(h.as_str());
        }
        let refs: Vec<&str> = pairs.iter().map(|p| p.target_raw.as_str()).collect();
        Some(GlobalScores {
            bleu: metrics
                .contains(&Metric::Bleu)
                .then(|| corpus_bleu(&hyps, &refs, BLEU_MAX_N))
                .transpose()?,
            chrf: metrics
                .contains(&Metric::Chrf)
                .then(|| corpus_chrf(&hyps, &refs))
                .transpose()?,
        })
    } else {
        None
    };
    Ok(EvalReport {
        format_version: REPORT_FORMAT_VERSION,
        metrics: metrics.iter().map(|m| m.name().to_owned()).collect(),
        pairs: pairs.len(),
        idiomatic_pairs: pairs.iter().filter(|p| p.is_idiomatic()).count(),
        litter,
        apt,
        global,
        alignment: if metrics.contains(&Metric::Apt) {
            inputs.alignments.and_then(|a| a.info.clone())
        } else {
            None
        },
    })
}

//! Statistical word alignment: IBM Model 1 trained by EM, a variant with a
//! fixed diagonal position prior, Viterbi alignment and symmetrization.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NULL_TOKEN: &str = "<NULL>";

/// A tokenized sentence pair for training.
pub type SentencePair = (Vec<String>, Vec<String>);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Prior {
    /// Model 1: every source position, NULL included, equally likely.
    Uniform,
    /// NULL keeps `1/(n+1)`; the remaining mass is spread over source
    /// positions proportionally to `exp(-lambda * |i/n - j/m|)`.
    Diagonal { lambda: f64 },
}

impl Prior {
    /// Probabilities of source positions `0..=n` (0 is NULL) for target
    /// position `j` (1-based) of `m`.
    pub fn weights(&self, j: usize, m: usize, n: usize) -> Vec<f64> {
        let uniform = 1.0 / (n + 1) as f64;
        match *self {
            Prior::Uniform => vec![uniform; n + 1],
            Prior::Diagonal { lambda } => {
                let mut w = Vec::with_capacity(n + 1);
                w.push(uniform);
                if n == 0 {
                    return w;
                }
                let jm = j as f64 / m as f64;
                w.extend((1..=n).map(|i| libm::exp(-lambda * libm::fabs(i as f64 / n as f64 - jm))));
                let z: f64 = w[1..].iter().sum();
                let scale = n as f64 / (n + 1) as f64 / z;
                for x in &mut w[1..] {
                    *x *= scale;
                }
                w
            }
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            Prior::Uniform => None,
            Prior::Diagonal { lambda } => Some(lambda),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Vocab {
    words: Vec<String>,
    index: BTreeMap<String, u32>,
}

impl Vocab {
    fn intern(&mut self, word: &str) -> u32 {
        if let Some(&id) = self.index.get(word) {
            return id;
        }
        let id = self.words.len() as u32;
        self.words.push(word.into());
        self.index.insert(word.into(), id);
        id
    }

    fn get(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    fn len(&self) -> usize {
        self.words.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Row {
    targets: Vec<u32>,
    probs: Vec<f64>,
    /// Probability of any target word in the vocabulary not listed.
    floor: f64,
}

impl Row {
    fn prob(&self, target: u32) -> f64 {
        match self.targets.binary_search(&target) {
            Ok(k) => self.probs[k],
            Err(_) => self.floor,
        }
    }
}

/// Lexical translation probabilities `t(target | source)`, with a NULL
/// source word. Rows sum to one over the target vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslationTable {
    sources: Vocab,
    targets: Vocab,
    rows: Vec<Row>,
    prior: Prior,
    /// Corpus log-likelihood at the start of each EM iteration.
    pub log_likelihoods: Vec<f64>,
}

impl TranslationTable {
    pub fn prior(&self) -> Prior {
        self.prior
    }

    pub fn lambda(&self) -> Option<f64> {
        self.prior.lambda()
    }

    /// `t(target | source)`; 0 for unknown source words or target words
    /// outside the vocabulary.
    pub fn prob(&self, source: &str, target: &str) -> f64 {
        match (self.sources.get(source), self.targets.get(target)) {
            (Some(s), Some(t)) => self.rows[s as usize].prob(t),
            _ => 0.0,
        }
    }

    pub fn target_vocab_size(&self) -> usize {
        self.targets.len()
    }

    pub fn source_words(&self) -> impl Iterator<Item = &str> {
        self.sources.words.iter().map(String::as_str)
    }

    /// Sum of `t(· | source)` over the whole target vocabulary.
    pub fn row_sum(&self, source: &str) -> Option<f64> {
        let row = &self.rows[self.sources.get(source)? as usize];
        let unlisted = self.targets.len() - row.targets.len();
        Some(row.probs.iter().sum::<f64>() + unlisted as f64 * row.floor)
    }

    /// Listed entries `(source, target, probability)`, rows in source order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.rows.iter().enumerate().flat_map(move |(s, row)| {
            row.targets.iter().zip(&row.probs).map(move |(&t, &p)| {
                (self.sources.words[s].as_str(), self.targets.words[t as usize].as_str(), p)
            })
        })
    }

    /// Per-row floor probabilities `(source, floor)`.
    pub fn floors(&self) -> impl Iterator<Item = (&str, f64)> {
        self.rows
            .iter()
            .enumerate()
            .map(move |(s, row)| (self.sources.words[s].as_str(), row.floor))
    }

    /// Rebuilds a table from listed entries and row floors. The target
    /// vocabulary is the set of targets listed anywhere.
    pub fn from_parts<'a>(
        entries: impl IntoIterator<Item = (&'a str, &'a str, f64)>,
        floors: impl IntoIterator<Item = (&'a str, f64)>,
        prior: Prior,
    ) -> Self {
        let mut sources = Vocab::default();
        let mut targets = Vocab::default();
        sources.intern(NULL_TOKEN);
        let mut listed: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new()];
        for (s, t, p) in entries {
            let sid = sources.intern(s) as usize;
            let tid = targets.intern(t);
            if listed.len() <= sid {
                listed.resize(sid + 1, BTreeMap::new());
            }
            listed[sid].insert(tid, p);
        }
        let mut floor_of = vec![0.0; listed.len()];
        for (s, f) in floors {
            let sid = sources.intern(s) as usize;
            if floor_of.len() <= sid {
                floor_of.resize(sid + 1, 0.0);
                listed.resize(sid + 1, BTreeMap::new());
            }
            floor_of[sid] = f;
        }
        let rows = listed
            .into_iter()
            .zip(floor_of)
            .map(|(m, floor)| Row {
                targets: m.keys().copied().collect(),
                probs: m.values().copied().collect(),
                floor,
            })
            .collect();
        TranslationTable {
            sources,
            targets,
            rows,
            prior,
            log_likelihoods: Vec::new(),
        }
    }

    /// Posterior over source positions `0..=n` for each target position.
    pub fn posteriors<S: AsRef<str>, T: AsRef<str>>(&self, source: &[S], target: &[T]) -> Vec<Vec<f64>> {
        let src = self.source_ids(source);
        let m = target.len();
        target
            .iter()
            .enumerate()
            .map(|(j, f)| {
                let scores = self.scores(&src, f.as_ref(), j + 1, m);
                let z: f64 = scores.iter().sum();
                scores.iter().map(|s| if z > 0.0 { s / z } else { 0.0 }).collect()
            })
            .collect()
    }

    fn source_ids<S: AsRef<str>>(&self, source: &[S]) -> Vec<Option<u32>> {
        core::iter::once(Some(0))
            .chain(source.iter().map(|w| self.sources.get(w.as_ref())))
            .collect()
    }

    fn scores(&self, src: &[Option<u32>], target: &str, j: usize, m: usize) -> Vec<f64> {
        let prior = self.prior.weights(j, m, src.len() - 1);
        let tid = self.targets.get(target);
        src.iter()
            .zip(prior)
            .map(|(s, p)| match (s, tid) {
                (Some(s), Some(t)) => p * self.rows[*s as usize].prob(t),
                _ => 0.0,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub iterations: usize,
    pub alpha: f64,
    pub prior: Prior,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            iterations: 5,
            alpha: 0.01,
            prior: Prior::Diagonal { lambda: 4.0 },
        }
    }
}

/// IBM Model 1: uniform initialization, NULL source word, add-alpha
/// smoothing of expected counts.
pub fn train_model1(bitext: &[SentencePair], iterations: usize, alpha: f64) -> Result<TranslationTable> {
    train(bitext, &TrainConfig {
        iterations,
        alpha,
        prior: Prior::Uniform,
    })
}

/// Model 1 with the fixed diagonal prior; `lambda = 0` reduces to Model 1.
pub fn train_diag(bitext: &[SentencePair], iterations: usize, lambda: f64, alpha: f64) -> Result<TranslationTable> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::NegativeParameter { name: "lambda", value: lambda });
    }
    train(bitext, &TrainConfig {
        iterations,
        alpha,
        prior: Prior::Diagonal { lambda },
    })
}

pub fn train(bitext: &[SentencePair], config: &TrainConfig) -> Result<TranslationTable> {
    if config.iterations == 0 {
        return Err(Error::ZeroIterations);
    }
    if bitext.is_empty() {
        return Err(Error::EmptyBitext);
    }
    if config.alpha.is_nan() || config.alpha < 0.0 {
        return Err(Error::NegativeParameter {
            name: "alpha",
            value: config.alpha,
        });
    }
    if let Some(lambda) = config.prior.lambda() {
        if lambda.is_nan() || lambda < 0.0 {
            return Err(Error::NegativeParameter { name: "lambda", value: lambda });
        }
    }

    let mut sources = Vocab::default();
    let mut targets = Vocab::default();
    sources.intern(NULL_TOKEN);
    let corpus: Vec<(Vec<u32>, Vec<u32>)> = bitext
        .iter()
        .map(|(s, t)| {
            let s = core::iter::once(0).chain(s.iter().map(|w| sources.intern(w))).collect();
            let t = t.iter().map(|w| targets.intern(w)).collect();
            (s, t)
        })
        .collect();

    let mut cooc: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); sources.len()];
    for (s, t) in &corpus {
        for &e in s {
            cooc[e as usize].extend(t.iter().copied());
        }
    }
    let vf = targets.len().max(1) as f64;
    let mut rows: Vec<Row> = cooc
        .into_iter()
        .map(|ts| Row {
            probs: vec![1.0 / vf; ts.len()],
            targets: ts.into_iter().collect(),
            floor: 1.0 / vf,
        })
        .collect();

    let mut log_likelihoods = Vec::with_capacity(config.iterations);
    for _ in 0..config.iterations {
        let mut counts: Vec<Vec<f64>> = rows.iter().map(|r| vec![0.0; r.targets.len()]).collect();
        let mut loglik = 0.0;
        for (s, t) in &corpus {
            let m = t.len();
            let mut joint = vec![0.0; s.len()];
            for (j, &f) in t.iter().enumerate() {
                let prior = config.prior.weights(j + 1, m, s.len() - 1);
                for (i, &e) in s.iter().enumerate() {
                    joint[i] = prior[i] * rows[e as usize].prob(f);
                }
                let z: f64 = joint.iter().sum();
                if z <= 0.0 {
                    loglik = f64::NEG_INFINITY;
                    continue;
                }
                loglik += libm::log(z);
                for (i, &e) in s.iter().enumerate() {
                    let row = &rows[e as usize];
                    let k = row.targets.binary_search(&f).expect("co-occurring pair is listed");
                    counts[e as usize][k] += joint[i] / z;
                }
            }
        }
        log_likelihoods.push(loglik);

        for (row, c) in rows.iter_mut().zip(counts) {
            let total: f64 = c.iter().sum::<f64>() + config.alpha * vf;
            if total > 0.0 {
                row.probs = c.iter().map(|x| (x + config.alpha) / total).collect();
                row.floor = config.alpha / total;
            }
        }
    }

    Ok(TranslationTable {
        sources,
        targets,
        rows,
        prior: config.prior,
        log_likelihoods,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    SrcToTgt,
    TgtToSrc,
    Symmetrized,
}

/// Word links of one sentence pair, always stored as
/// `(source index, target index)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentSet {
    pub pair_id: String,
    pub source_len: usize,
    pub target_len: usize,
    pub links: BTreeSet<(usize, usize)>,
    pub direction: Direction,
}

impl AlignmentSet {
    pub fn new(pair_id: impl Into<String>, source_len: usize, target_len: usize, direction: Direction) -> Self {
        AlignmentSet {
            pair_id: pair_id.into(),
            source_len,
            target_len,
            links: BTreeSet::new(),
            direction,
        }
    }

    /// Adds links, rejecting any outside the sentence bounds.
    pub fn with_links(mut self, links: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        for (i, j) in links {
            if i >= self.source_len || j >= self.target_len {
                return Err(Error::AlignmentMismatch {
                    pair_id: self.pair_id,
                    reason: alloc::format!(
                        "link {i}-{j} outside a {}x{} sentence pair",
                        self.source_len,
                        self.target_len
                    ),
                });
            }
            self.links.insert((i, j));
        }
        Ok(self)
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }
}

/// Viterbi alignment of each target word to `argmax_i prior(i,j) * t(f_j|e_i)`.
/// Ties between source words go to the smaller position. NULL takes the
/// target word (no link) only when it scores strictly higher than every
/// source word, or when no source word scores above zero.
pub fn align_pair<S: AsRef<str>, T: AsRef<str>>(
    table: &TranslationTable,
    pair_id: &str,
    source: &[S],
    target: &[T],
) -> AlignmentSet {
    let src = table.source_ids(source);
    let m = target.len();
    let mut set = AlignmentSet::new(pair_id, source.len(), target.len(), Direction::SrcToTgt);
    for (j, f) in target.iter().enumerate() {
        let scores = table.scores(&src, f.as_ref(), j + 1, m);
        let mut best: Option<usize> = None;
        for (i, &s) in scores.iter().enumerate().skip(1) {
            if best.is_none_or(|b| s > scores[b]) {
                best = Some(i);
            }
        }
        if let Some(b) = best.filter(|&b| scores[b] > 0.0 && scores[b] >= scores[0]) {
            set.links.insert((b - 1, j));
        }
    }
    set
}

/// Aligns with a table trained target→source, reporting links in
/// `(source, target)` order.
pub fn align_pair_reverse<S: AsRef<str>, T: AsRef<str>>(
    reverse_table: &TranslationTable,
    pair_id: &str,
    source: &[S],
    target: &[T],
) -> AlignmentSet {
    let inner = align_pair(reverse_table, pair_id, target, source);
    AlignmentSet {
        pair_id: inner.pair_id,
        source_len: source.len(),
        target_len: target.len(),
        links: inner.links.into_iter().map(|(t, s)| (s, t)).collect(),
        direction: Direction::TgtToSrc,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Heuristic {
    Intersection,
    Union,
    GrowDiagFinalAnd,
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "intersection" => Ok(Heuristic::Intersection),
            "union" => Ok(Heuristic::Union),
            "grow-diag-final-and" => Ok(Heuristic::GrowDiagFinalAnd),
            other => Err(Error::UnknownHeuristic(other.into())),
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::Intersection => "intersection",
            Heuristic::Union => "union",
            Heuristic::GrowDiagFinalAnd => "grow-diag-final-and",
        })
    }
}

const NEIGHBORS: [(isize, isize); 8] = [(-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)];

pub fn symmetrize(fwd: &AlignmentSet, rev: &AlignmentSet, heuristic: Heuristic) -> Result<AlignmentSet> {
    if fwd.pair_id != rev.pair_id || fwd.source_len != rev.source_len || fwd.target_len != rev.target_len {
        return Err(Error::AlignmentMismatch {
            pair_id: fwd.pair_id.clone(),
            reason: alloc::format!(
                "cannot symmetrize with `{}` ({}x{} vs {}x{})",
                rev.pair_id,
                fwd.source_len,
                fwd.target_len,
                rev.source_len,
                rev.target_len
            ),
        });
    }
    let union: BTreeSet<_> = fwd.links.union(&rev.links).copied().collect();
    let links = match heuristic {
        Heuristic::Union => union,
        Heuristic::Intersection => fwd.links.intersection(&rev.links).copied().collect(),
        Heuristic::GrowDiagFinalAnd => grow_diag_final_and(fwd, rev, &union),
    };
    Ok(AlignmentSet {
        pair_id: fwd.pair_id.clone(),
        source_len: fwd.source_len,
        target_len: fwd.target_len,
        links,
        direction: Direction::Symmetrized,
    })
}

fn grow_diag_final_and(fwd: &AlignmentSet, rev: &AlignmentSet, union: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let (n, m) = (fwd.source_len, fwd.target_len);
    let mut links: BTreeSet<(usize, usize)> = fwd.links.intersection(&rev.links).copied().collect();
    let mut src_aligned = vec![false; n];
    let mut tgt_aligned = vec![false; m];
    for &(i, j) in &links {
        src_aligned[i] = true;
        tgt_aligned[j] = true;
    }

    // grow-diag
    loop {
        let mut added = false;
        for i in 0..n {
            for j in 0..m {
                if !links.contains(&(i, j)) {
                    continue;
                }
                for (di, dj) in NEIGHBORS {
                    let (Some(ni), Some(nj)) = (i.checked_add_signed(di), j.checked_add_signed(dj)) else {
                        continue;
                    };
                    if ni >= n || nj >= m {
                        continue;
                    }
                    if (!src_aligned[ni] || !tgt_aligned[nj]) && union.contains(&(ni, nj)) {
                        links.insert((ni, nj));
                        src_aligned[ni] = true;
                        tgt_aligned[nj] = true;
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }

    // final-and
    for directional in [&fwd.links, &rev.links] {
        for &(i, j) in directional {
            if !src_aligned[i] && !tgt_aligned[j] {
                links.insert((i, j));
                src_aligned[i] = true;
                tgt_aligned[j] = true;
            }
        }
    }
    links
}

/// Tokens of a sentence as owned strings, for building bitexts.
pub fn words<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    tokens.into_iter().map(ToString::to_string).collect()
}

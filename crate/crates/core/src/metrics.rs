//! Global metrics: BLEU with clipped n-gram counts and character n-gram
//! F-score (chrF). Both are computed from additive statistics so corpus
//! scores pool counts before scoring.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::tokenize;

pub const BLEU_MAX_N: usize = 4;
pub const CHRF_MAX_N: usize = 6;
pub const CHRF_BETA: f64 = 2.0;

fn ngram_counts<T: Ord>(items: &[T], n: usize) -> BTreeMap<&[T], usize> {
    let mut counts = BTreeMap::new();
    if n > 0 && items.len() >= n {
        for gram in items.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped matches and totals per order, `(matches, hypothesis total, reference total)`.
fn order_stats<T: Ord>(hyp: &[T], reference: &[T], n: usize) -> (usize, usize, usize) {
    let h = ngram_counts(hyp, n);
    let r = ngram_counts(reference, n);
    let matches = h
        .iter()
        .map(|(gram, &c)| c.min(r.get(gram).copied().unwrap_or(0)))
        .sum();
    (matches, h.values().sum(), r.values().sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BleuStats {
    pub matches: Vec<usize>,
    pub totals: Vec<usize>,
    pub hyp_len: usize,
    pub ref_len: usize,
}

impl BleuStats {
    pub fn zero(max_n: usize) -> Self {
        BleuStats {
            matches: vec![0; max_n],
            totals: vec![0; max_n],
            hyp_len: 0,
            ref_len: 0,
        }
    }

    pub fn from_tokens<T: Ord>(hyp: &[T], reference: &[T], max_n: usize) -> Self {
        let mut stats = BleuStats::zero(max_n);
        for n in 1..=max_n {
            let (m, t, _) = order_stats(hyp, reference, n);
            stats.matches[n - 1] = m;
            stats.totals[n - 1] = t;
        }
        stats.hyp_len = hyp.len();
        stats.ref_len = reference.len();
        stats
    }

    pub fn from_text(hyp: &str, reference: &str, max_n: usize) -> Self {
        let h: Vec<_> = tokenize(hyp).into_iter().map(|t| t.surface).collect();
        let r: Vec<_> = tokenize(reference).into_iter().map(|t| t.surface).collect();
        Self::from_tokens(&h, &r, max_n)
    }

    fn brevity_penalty(&self) -> f64 {
        if self.hyp_len == 0 {
            0.0
        } else if self.hyp_len >= self.ref_len {
            1.0
        } else {
            libm::exp(1.0 - self.ref_len as f64 / self.hyp_len as f64)
        }
    }

    /// Unsmoothed BLEU in [0, 100]. Orders for which the hypothesis has no
    /// n-grams at all are left out of the geometric mean.
    pub fn score(&self) -> f64 {
        let mut log_sum = 0.0;
        let mut orders = 0;
        for (&m, &t) in self.matches.iter().zip(&self.totals) {
            if t == 0 {
                continue;
            }
            if m == 0 {
                return 0.0;
            }
            log_sum += libm::log(m as f64 / t as f64);
            orders += 1;
        }
        if orders == 0 {
            return 0.0;
        }
        100.0 * self.brevity_penalty() * libm::exp(log_sum / orders as f64)
    }

    /// BLEU with add-one smoothing of orders two and up.
    pub fn smoothed_score(&self) -> f64 {
        let (Some(&m1), Some(&t1)) = (self.matches.first(), self.totals.first()) else {
            return 0.0;
        };
        if m1 == 0 || t1 == 0 {
            return 0.0;
        }
        let mut log_sum = libm::log(m1 as f64 / t1 as f64);
        for (&m, &t) in self.matches.iter().zip(&self.totals).skip(1) {
            log_sum += libm::log((m + 1) as f64 / (t + 1) as f64);
        }
        100.0 * self.brevity_penalty() * libm::exp(log_sum / self.matches.len() as f64)
    }
}

impl AddAssign<&BleuStats> for BleuStats {
    fn add_assign(&mut self, rhs: &BleuStats) {
        for (a, b) in self.matches.iter_mut().zip(&rhs.matches) {
            *a += b;
        }
        for (a, b) in self.totals.iter_mut().zip(&rhs.totals) {
            *a += b;
        }
        self.hyp_len += rhs.hyp_len;
        self.ref_len += rhs.ref_len;
    }
}

fn check_lengths(hyps: usize, refs: usize) -> Result<()> {
    if hyps != refs {
        return Err(Error::LengthMismatch {
            hypotheses: hyps,
            references: refs,
        });
    }
    Ok(())
}

pub fn corpus_bleu<H: AsRef<str>, R: AsRef<str>>(hyps: &[H], refs: &[R], max_n: usize) -> Result<f64> {
    check_lengths(hyps.len(), refs.len())?;
    let mut total = BleuStats::zero(max_n);
    for (h, r) in hyps.iter().zip(refs) {
        total += &BleuStats::from_text(h.as_ref(), r.as_ref(), max_n);
    }
    if total.ref_len == 0 {
        return Err(Error::EmptyReference);
    }
    Ok(total.score())
}

pub fn sentence_bleu(hyp: &str, reference: &str) -> Result<f64> {
    let stats = BleuStats::from_text(hyp, reference, BLEU_MAX_N);
    if stats.ref_len == 0 {
        return Err(Error::EmptyReference);
    }
    Ok(stats.smoothed_score())
}

/// Character n-gram statistics per order; whitespace is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChrfStats {
    pub matches: Vec<usize>,
    pub hyp_totals: Vec<usize>,
    pub ref_totals: Vec<usize>,
}

impl ChrfStats {
    pub fn zero(n_max: usize) -> Self {
        ChrfStats {
            matches: vec![0; n_max],
            hyp_totals: vec![0; n_max],
            ref_totals: vec![0; n_max],
        }
    }

    pub fn from_text(hyp: &str, reference: &str, n_max: usize) -> Self {
        let h: Vec<char> = hyp.chars().filter(|c| !c.is_whitespace()).collect();
        let r: Vec<char> = reference.chars().filter(|c| !c.is_whitespace()).collect();
        let mut stats = ChrfStats::zero(n_max);
        for n in 1..=n_max {
            let (m, ht, rt) = order_stats(&h, &r, n);
            stats.matches[n - 1] = m;
            stats.hyp_totals[n - 1] = ht;
            stats.ref_totals[n - 1] = rt;
        }
        stats
    }

    /// Mean over orders of the per-order F-beta, skipping orders with no
    /// reference n-grams. `None` when every order is skipped.
    pub fn score(&self, beta: f64) -> Option<f64> {
        let b2 = beta * beta;
        let mut sum = 0.0;
        let mut orders = 0;
        for k in 0..self.matches.len() {
            if self.ref_totals[k] == 0 {
                continue;
            }
            let m = self.matches[k] as f64;
            let precision = if self.hyp_totals[k] == 0 { 0.0 } else { m / self.hyp_totals[k] as f64 };
            let recall = m / self.ref_totals[k] as f64;
            let denom = b2 * precision + recall;
            sum += if denom > 0.0 { (1.0 + b2) * precision * recall / denom } else { 0.0 };
            orders += 1;
        }
        (orders > 0).then(|| sum / orders as f64)
    }
}

impl AddAssign<&ChrfStats> for ChrfStats {
    fn add_assign(&mut self, rhs: &ChrfStats) {
        for (a, b) in self.matches.iter_mut().zip(&rhs.matches) {
            *a += b;
        }
        for (a, b) in self.hyp_totals.iter_mut().zip(&rhs.hyp_totals) {
            *a += b;
        }
        for (a, b) in self.ref_totals.iter_mut().zip(&rhs.ref_totals) {
            *a += b;
        }
    }
}

/// chrF of one string pair, in [0, 1].
pub fn chrf(reference: &str, hyp: &str, n_max: usize, beta: f64) -> Result<f64> {
    ChrfStats::from_text(hyp, reference, n_max)
        .score(beta)
        .ok_or(Error::EmptyReference)
}

/// chrF over pooled corpus counts, in [0, 1].
pub fn corpus_chrf<H: AsRef<str>, R: AsRef<str>>(hyps: &[H], refs: &[R]) -> Result<f64> {
    check_lengths(hyps.len(), refs.len())?;
    let mut total = ChrfStats::zero(CHRF_MAX_N);
    for (h, r) in hyps.iter().zip(refs) {
        total += &ChrfStats::from_text(h.as_ref(), r.as_ref(), CHRF_MAX_N);
    }
    total.score(CHRF_BETA).ok_or(Error::EmptyReference)
}

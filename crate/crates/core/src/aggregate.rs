//! Per-idiom grouping with macro and micro averages.
//!
//! The macro score is the unweighted mean over idioms of each idiom's mean
//! score, so frequent idioms cannot dominate; the micro score is the plain
//! mean over all items. Values are summed in sorted order, which makes both
//! averages independent of insertion order down to the last bit.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdiomScore {
    pub idiom_id: String,
    pub n: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Averages {
    pub macro_avg: f64,
    pub micro_avg: f64,
    pub per_idiom: Vec<IdiomScore>,
}

#[derive(Debug, Clone, Default)]
pub struct MacroAverager {
    groups: BTreeMap<String, Vec<f64>>,
}

impl MacroAverager {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, idiom_id: &str, value: f64) {
        match self.groups.get_mut(idiom_id) {
            Some(values) => values.push(value),
            None => {
                self.groups.insert(idiom_id.into(), alloc::vec![value]);
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Empty input averages to 0.
    pub fn finish(&self) -> Averages {
        let mut all = Vec::new();
        let mut per_idiom = Vec::with_capacity(self.groups.len());
        for (idiom, values) in &self.groups {
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            per_idiom.push(IdiomScore {
                idiom_id: idiom.clone(),
                n: sorted.len(),
                score: sorted.iter().sum::<f64>() / sorted.len() as f64,
            });
            all.extend(sorted);
        }
        all.sort_by(f64::total_cmp);
        let mean = |xs: &[f64]| if xs.is_empty() { 0.0 } else { xs.iter().sum::<f64>() / xs.len() as f64 };
        let mut idiom_means: Vec<f64> = per_idiom.iter().map(|s| s.score).collect();
        idiom_means.sort_by(f64::total_cmp);
        Averages {
            macro_avg: mean(&idiom_means),
            micro_avg: mean(&all),
            per_idiom,
        }
    }
}

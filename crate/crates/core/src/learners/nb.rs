//! Naive Bayes over symbolic attributes.
//!
//! Probabilities are relative frequencies. A zero count for `P(v|C)` is
//! replaced by `P(C)/N`, `N` being the number of training examples. Scores
//! are accumulated as logarithms.
//!
//! `NbMode::Standard` multiplies a factor for every attribute, including
//! every absent word of the broad context. `NbMode::Positive` keeps only the
//! factors of words present in the test sentence.

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Result, WsdError};
use crate::features::{AttributeValue, FeatureSet, FeatureVector, WordSet};

use super::{argmax_by_rank, Labeled, SenseIndex};

/// Log-score margin under which two senses count as tied.
pub const TIE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NbMode {
    Standard,
    Positive,
}

#[derive(Debug, Clone)]
pub struct NbModel {
    schema: FeatureSet,
    width: usize,
    senses: SenseIndex,
    n: usize,
    priors: Vec<f64>,
    /// Per attribute: value -> count per sense.
    cond_counts: Vec<HashMap<AttributeValue, Vec<u32>>>,
    /// Positive schema only: word -> number of examples per sense containing it.
    context_counts: BTreeMap<String, Vec<u32>>,
    log_priors: Vec<f64>,
    /// `ln(P(C)/N)` per sense.
    log_smoothed: Vec<f64>,
    log_tables: Vec<HashMap<AttributeValue, Vec<f64>>>,
    log_present: HashMap<String, Vec<f64>>,
    log_absent: Vec<(String, Vec<f64>)>,
}

pub fn nb_train(training: &[Labeled]) -> Result<NbModel> {
    NbModel::train(training, None)
}

pub fn nb_classify(model: &NbModel, fv: &FeatureVector, mode: NbMode) -> Result<String> {
    model.classify(fv, mode)
}

impl NbModel {
    pub fn train(training: &[Labeled], inventory: Option<&[String]>) -> Result<Self> {
        let labels: Vec<&str> = training.iter().map(|(_, s)| s.as_str()).collect();
        Self::train_from(&labels, training.iter().map(|(fv, _)| fv), inventory)
    }

    /// Trains from `labels` and a matching stream of vectors, so callers need
    /// not hold every extracted vector at once.
    pub fn train_from<B: Borrow<FeatureVector>>(
        labels: &[&str],
        vectors: impl IntoIterator<Item = B>,
        inventory: Option<&[String]>,
    ) -> Result<Self> {
        let senses = SenseIndex::from_labels(labels.iter().copied(), inventory)?;
        let m = senses.len();
        let n = labels.len();

        let mut shape: Option<(FeatureSet, usize)> = None;
        let mut cond_counts: Vec<HashMap<AttributeValue, Vec<u32>>> = Vec::new();
        let mut context_counts: BTreeMap<String, Vec<u32>> = BTreeMap::new();
        let mut seen = 0;
        for (fv, sense) in vectors.into_iter().zip(labels) {
            let fv = fv.borrow();
            seen += 1;
            let (schema, width) = *shape.get_or_insert((fv.schema, fv.values.len()));
            if cond_counts.is_empty() {
                cond_counts = vec![HashMap::new(); width];
            }
            super::check_shape(schema, width, fv)?;
            let s = senses.id(sense).expect("sense indexed from training labels");
            for (table, value) in cond_counts.iter_mut().zip(&fv.values) {
                table.entry(value.clone()).or_insert_with(|| vec![0; m])[s] += 1;
            }
            if let Some(ctx) = &fv.context_set {
                for w in ctx.iter() {
                    context_counts.entry(w.to_string()).or_insert_with(|| vec![0; m])[s] += 1;
                }
            }
        }

        if seen != n {
            return Err(WsdError::Config(format!("{n} labels but {seen} feature vectors")));
        }
        let (schema, width) = shape.ok_or(WsdError::EmptyTraining)?;

        let priors: Vec<f64> = senses.counts().iter().map(|&c| c as f64 / n as f64).collect();
        let smoothed: Vec<f64> = priors.iter().map(|p| p / n as f64).collect();
        let log_smoothed: Vec<f64> = smoothed.iter().map(|p| p.ln()).collect();
        let totals = senses.counts().to_vec();
        let log_factor = |count: u32, s: usize| -> f64 {
            if count == 0 {
                log_smoothed[s]
            } else {
                (count as f64 / totals[s] as f64).ln()
            }
        };
        let log_row = |counts: &[u32]| -> Vec<f64> {
            counts.iter().enumerate().map(|(s, &c)| log_factor(c, s)).collect()
        };

        let log_tables = cond_counts
            .iter()
            .map(|t| t.iter().map(|(v, c)| (v.clone(), log_row(c))).collect())
            .collect();
        let log_present = context_counts
            .iter()
            .map(|(w, c)| (w.clone(), log_row(c)))
            .collect();
        let log_absent = context_counts
            .iter()
            .map(|(w, c)| {
                let absent: Vec<u32> = c.iter().zip(&totals).map(|(&c, &t)| t as u32 - c).collect();
                (w.clone(), log_row(&absent))
            })
            .collect();

        Ok(NbModel {
            schema,
            width,
            n,
            log_priors: priors.iter().map(|p| p.ln()).collect(),
            priors,
            senses,
            cond_counts,
            context_counts,
            log_smoothed,
            log_tables,
            log_present,
            log_absent,
        })
    }

    pub fn senses(&self) -> &SenseIndex {
        &self.senses
    }

    pub fn training_size(&self) -> usize {
        self.n
    }

    pub fn priors(&self) -> BTreeMap<String, f64> {
        self.senses
            .senses()
            .iter()
            .cloned()
            .zip(self.priors.iter().copied())
            .collect()
    }

    pub fn prior(&self, sense: &str) -> Option<f64> {
        self.senses.id(sense).map(|s| self.priors[s])
    }

    pub fn sense_total(&self, sense: &str) -> Option<usize> {
        self.senses.id(sense).map(|s| self.senses.counts()[s])
    }

    /// Raw training count of `value` for attribute `attr` under `sense`.
    pub fn cond_count(&self, attr: usize, value: &AttributeValue, sense: &str) -> usize {
        let Some(s) = self.senses.id(sense) else { return 0 };
        self.cond_counts
            .get(attr)
            .and_then(|t| t.get(value))
            .map_or(0, |c| c[s] as usize)
    }

    pub fn values_of(&self, attr: usize) -> impl Iterator<Item = &AttributeValue> {
        self.cond_counts.get(attr).into_iter().flat_map(|t| t.keys())
    }

    pub fn context_count(&self, word: &str, sense: &str) -> usize {
        let Some(s) = self.senses.id(sense) else { return 0 };
        self.context_counts.get(word).map_or(0, |c| c[s] as usize)
    }

    /// Smoothed `P(value | sense)` as used by the classifier.
    pub fn conditional(&self, attr: usize, value: &AttributeValue, sense: &str) -> Option<f64> {
        let s = self.senses.id(sense)?;
        let count = self.cond_count(attr, value, sense);
        Some(self.smooth(count, s))
    }

    /// Smoothed probability that `word` is present (or absent) given `sense`.
    pub fn context_conditional(&self, word: &str, present: bool, sense: &str) -> Option<f64> {
        let s = self.senses.id(sense)?;
        let seen = self.context_count(word, sense);
        let count = if present {
            seen
        } else {
            self.senses.counts()[s] - seen
        };
        Some(self.smooth(count, s))
    }

    fn smooth(&self, count: usize, s: usize) -> f64 {
        if count == 0 {
            self.priors[s] / self.n as f64
        } else {
            count as f64 / self.senses.counts()[s] as f64
        }
    }

    /// Log score per sense, in `SenseIndex` order.
    pub fn log_scores(&self, fv: &FeatureVector, mode: NbMode) -> Result<Vec<f64>> {
        super::check_shape(self.schema, self.width, fv)?;
        let mut scores = self.log_priors.clone();
        let add = |scores: &mut [f64], row: &[f64]| {
            for (acc, x) in scores.iter_mut().zip(row) {
                *acc += x;
            }
        };

        for (table, value) in self.log_tables.iter().zip(&fv.values) {
            if mode == NbMode::Positive && *value == AttributeValue::Flag(false) {
                continue;
            }
            match table.get(value) {
                Some(row) => add(&mut scores, row),
                None => add(&mut scores, &self.log_smoothed),
            }
        }

        if self.schema == FeatureSet::BPositive {
            let empty = WordSet::new();
            let ctx = fv.context_set.as_ref().unwrap_or(&empty);
            match mode {
                NbMode::Positive => {
                    for w in ctx.iter() {
                        if let Some(row) = self.log_present.get(w) {
                            add(&mut scores, row);
                        }
                    }
                }
                NbMode::Standard => {
                    for (w, absent) in &self.log_absent {
                        if ctx.contains(w) {
                            add(&mut scores, &self.log_present[w]);
                        } else {
                            add(&mut scores, absent);
                        }
                    }
                }
            }
        }
        Ok(scores)
    }

    pub fn classify(&self, fv: &FeatureVector, mode: NbMode) -> Result<String> {
        let scores = self.log_scores(fv, mode)?;
        Ok(self.senses.name(argmax_by_rank(&scores, TIE_EPSILON)).to_string())
    }
}

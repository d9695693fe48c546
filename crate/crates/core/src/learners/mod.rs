//! Classifiers: most-frequent-sense, Naive Bayes (standard and positive) and
//! exemplar-based k-NN (Hamming or MVDM, optional example and attribute
//! weighting, positive set-valued context).

use std::collections::{BTreeMap, HashMap};

use crate::error::{Result, WsdError};
use crate::features::{FeatureSet, FeatureVector};

pub mod exemplar;
pub mod metrics;
pub mod nb;
pub mod rlm;

pub use exemplar::{eb_classify, mvdm_distance, EbConfig, ExemplarBase, Metric, Neighbour};
pub use metrics::{hamming_distance, matching_coefficient};
pub use nb::{nb_classify, nb_train, NbMode, NbModel};
pub use rlm::rlm_attribute_weights;

pub type Labeled = (FeatureVector, String);

/// Senses seen in training, ranked for tie-breaking: descending training
/// count, then inventory rank, then lexicographic.
#[derive(Debug, Clone, PartialEq)]
pub struct SenseIndex {
    senses: Vec<String>,
    counts: Vec<usize>,
    index: HashMap<String, usize>,
}

impl SenseIndex {
    pub fn from_labels<'a>(
        labels: impl IntoIterator<Item = &'a str>,
        inventory: Option<&[String]>,
    ) -> Result<Self> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for l in labels {
            *counts.entry(l).or_insert(0) += 1;
        }
        if counts.is_empty() {
            return Err(WsdError::EmptyTraining);
        }
        let rank: HashMap<&str, usize> = inventory
            .unwrap_or(&[])
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut ordered: Vec<(&str, usize)> = counts.into_iter().collect();
        ordered.sort_by(|a, b| {
            b.1.cmp(&a.1)
                .then_with(|| {
                    let ra = rank.get(a.0).copied().unwrap_or(usize::MAX);
                    let rb = rank.get(b.0).copied().unwrap_or(usize::MAX);
                    ra.cmp(&rb)
                })
                .then_with(|| a.0.cmp(b.0))
        });
        let senses: Vec<String> = ordered.iter().map(|(s, _)| s.to_string()).collect();
        let counts = ordered.iter().map(|(_, c)| *c).collect();
        let index = senses.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Ok(SenseIndex {
            senses,
            counts,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.senses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.senses.is_empty()
    }

    pub fn senses(&self) -> &[String] {
        &self.senses
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn id(&self, sense: &str) -> Option<usize> {
        self.index.get(sense).copied()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.senses[id]
    }
}

/// Picks the highest score; near-equal scores (within `eps`) go to the
/// earlier sense in `SenseIndex` order.
pub(crate) fn argmax_by_rank(scores: &[f64], eps: f64) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] + eps {
            best = i;
        }
    }
    best
}

/// Baseline that always answers the majority training sense.
#[derive(Debug, Clone)]
pub struct MfsModel {
    sense: String,
}

impl MfsModel {
    pub fn train<'a>(labels: impl IntoIterator<Item = &'a str>, inventory: Option<&[String]>) -> Result<Self> {
        let index = SenseIndex::from_labels(labels, inventory)?;
        Ok(MfsModel {
            sense: index.name(0).to_string(),
        })
    }

    pub fn sense(&self) -> &str {
        &self.sense
    }
}

pub(crate) fn check_schema(expected: &FeatureVector, found: &FeatureVector) -> Result<()> {
    check_shape(expected.schema, expected.values.len(), found)
}

pub(crate) fn check_shape(schema: FeatureSet, width: usize, found: &FeatureVector) -> Result<()> {
    if schema != found.schema || width != found.values.len() {
        return Err(WsdError::SchemaMismatch {
            expected: format!("{} ({width} values)", schema.schema_id()),
            found: format!("{} ({} values)", found.schema_id(), found.values.len()),
        });
    }
    Ok(())
}

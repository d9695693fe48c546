//! Exemplar-based k-NN classification.
//!
//! Every training vector is kept. A test vector is compared with all of them
//! through a closeness score:
//!
//! * each symbolic attribute `a` adds `w_a` on an exact match (Hamming), or
//!   `w_a * (2 - mvdm(x_a, y_a)) / 2` under MVDM;
//! * a set-valued broad context adds one per shared word.
//!
//! The distance used for example weighting is the best attainable score minus
//! the actual score, which is the weighted Hamming distance on purely
//! symbolic schemas. Neighbours vote with weight 1, or `1 / (1 + d)` with
//! example weighting.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WsdError};
use crate::features::{AttributeValue, FeatureSet, FeatureVector};

use super::metrics::profile_distance;
use super::rlm::rlm_weight;
use super::{argmax_by_rank, Labeled, SenseIndex};

const UNSEEN: u32 = u32::MAX;
const VOTE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Hamming,
    Mvdm,
}

impl Metric {
    /// Short tag used in configuration identifiers (`h` or `cs`).
    pub fn tag(self) -> &'static str {
        match self {
            Metric::Hamming => "h",
            Metric::Mvdm => "cs",
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "hamming" | "h" => Ok(Metric::Hamming),
            "mvdm" | "cs" => Ok(Metric::Mvdm),
            other => Err(format!("unknown metric {other:?} (expected hamming or mvdm)")),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Hamming => "hamming",
            Metric::Mvdm => "mvdm",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EbConfig {
    pub k: usize,
    pub metric: Metric,
    pub example_weighting: bool,
    pub attribute_weighting: bool,
}

impl EbConfig {
    pub fn new(k: usize, metric: Metric) -> Self {
        EbConfig {
            k,
            metric,
            example_weighting: false,
            attribute_weighting: false,
        }
    }

    pub fn example_weighted(mut self, on: bool) -> Self {
        self.example_weighting = on;
        self
    }

    pub fn attribute_weighted(mut self, on: bool) -> Self {
        self.attribute_weighting = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(WsdError::Config("k must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for EbConfig {
    fn default() -> Self {
        EbConfig::new(1, Metric::Hamming)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neighbour {
    /// Position of the exemplar in the training sequence.
    pub index: usize,
    pub sense: String,
    pub score: f64,
    pub distance: f64,
}

#[derive(Debug, Clone)]
struct MvdmTables {
    /// attribute -> value id -> P(sense | value)
    profiles: Vec<Vec<Vec<f64>>>,
    prior: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ExemplarBase {
    schema: FeatureSet,
    width: usize,
    senses: SenseIndex,
    labels: Vec<usize>,
    /// Row-major value ids, `width` per exemplar.
    rows: Vec<u32>,
    codebook: Vec<HashMap<AttributeValue, u32>>,
    value_counts: Vec<u32>,
    word_ids: HashMap<String, u32>,
    /// Word id -> ascending indices of the exemplars whose context holds it.
    postings: Vec<Vec<u32>>,
    attribute_weights: Vec<f64>,
    mvdm: Option<MvdmTables>,
}

impl ExemplarBase {
    /// Stores `training`. RLM weights are estimated when
    /// `cfg.attribute_weighting` is set and MVDM tables when `cfg.metric` is
    /// MVDM; otherwise weights stay at 1 and no tables are built.
    pub fn train(training: &[Labeled], cfg: &EbConfig) -> Result<Self> {
        Self::train_with_inventory(training, cfg, None)
    }

    pub fn train_with_inventory(
        training: &[Labeled],
        cfg: &EbConfig,
        inventory: Option<&[String]>,
    ) -> Result<Self> {
        let labels: Vec<&str> = training.iter().map(|(_, s)| s.as_str()).collect();
        Self::train_from(&labels, training.iter().map(|(fv, _)| fv), cfg, inventory)
    }

    /// Builds the base from `labels` and a matching stream of vectors.
    pub fn train_from<B: Borrow<FeatureVector>>(
        sense_labels: &[&str],
        vectors: impl IntoIterator<Item = B>,
        cfg: &EbConfig,
        inventory: Option<&[String]>,
    ) -> Result<Self> {
        let senses = SenseIndex::from_labels(sense_labels.iter().copied(), inventory)?;
        let n = sense_labels.len();

        let mut shape: Option<(FeatureSet, usize)> = None;
        let mut codebook: Vec<HashMap<AttributeValue, u32>> = Vec::new();
        let mut value_counts = Vec::new();
        let mut rows = Vec::new();
        let mut word_ids: HashMap<String, u32> = HashMap::new();
        let mut postings: Vec<Vec<u32>> = Vec::new();
        let mut labels = Vec::with_capacity(n);

        for (fv, sense) in vectors.into_iter().zip(sense_labels) {
            let fv = fv.borrow();
            let (schema, width) = *shape.get_or_insert((fv.schema, fv.values.len()));
            if codebook.is_empty() {
                codebook = vec![HashMap::new(); width];
                value_counts = vec![0u32; width];
                rows.reserve(n * width);
            }
            super::check_shape(schema, width, fv)?;
            labels.push(senses.id(sense).expect("indexed"));
            for (a, value) in fv.values.iter().enumerate() {
                let id = match value {
                    AttributeValue::Flag(b) => {
                        value_counts[a] = 2;
                        *b as u32
                    }
                    other => {
                        let next = value_counts[a];
                        let id = *codebook[a].entry(other.clone()).or_insert(next);
                        if id == next {
                            value_counts[a] += 1;
                        }
                        id
                    }
                };
                rows.push(id);
            }
            if let Some(set) = &fv.context_set {
                let exemplar = (labels.len() - 1) as u32;
                for w in set.iter() {
                    let next = word_ids.len() as u32;
                    let id = *word_ids.entry(w.to_string()).or_insert(next);
                    if id == next {
                        postings.push(Vec::new());
                    }
                    postings[id as usize].push(exemplar);
                }
            }
        }

        if labels.len() != n {
            return Err(WsdError::Config(format!("{n} labels but {} feature vectors", labels.len())));
        }
        let (schema, width) = shape.ok_or(WsdError::EmptyTraining)?;
        let mut base = ExemplarBase {
            schema,
            width,
            senses,
            labels,
            rows,
            codebook,
            value_counts,
            word_ids,
            postings,
            attribute_weights: vec![1.0; width],
            mvdm: None,
        };
        if cfg.attribute_weighting {
            base.attribute_weights = (0..width)
                .map(|a| rlm_weight(base.column(a).zip(base.labels.iter().copied())))
                .collect();
        }
        if cfg.metric == Metric::Mvdm {
            base.build_mvdm_tables();
        }
        Ok(base)
    }

    fn column(&self, a: usize) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().skip(a).step_by(self.width).copied()
    }

    fn build_mvdm_tables(&mut self) {
        let m = self.senses.len();
        let n = self.labels.len() as f64;
        let prior: Vec<f64> = self.senses.counts().iter().map(|&c| c as f64 / n).collect();
        let profiles = (0..self.width)
            .map(|a| {
                let mut counts = vec![vec![0u32; m]; self.value_counts[a] as usize];
                for (id, &s) in self.column(a).zip(&self.labels) {
                    counts[id as usize][s] += 1;
                }
                counts
                    .into_iter()
                    .map(|c| {
                        let total: u32 = c.iter().sum();
                        if total == 0 {
                            prior.clone()
                        } else {
                            c.iter().map(|&x| x as f64 / total as f64).collect()
                        }
                    })
                    .collect()
            })
            .collect();
        self.mvdm = Some(MvdmTables { profiles, prior });
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn schema(&self) -> FeatureSet {
        self.schema
    }

    pub fn senses(&self) -> &SenseIndex {
        &self.senses
    }

    pub fn attribute_weights(&self) -> &[f64] {
        &self.attribute_weights
    }

    /// Replaces the attribute weights (one per symbolic attribute).
    pub fn set_attribute_weights(&mut self, weights: Vec<f64>) -> Result<()> {
        if weights.len() != self.width || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(WsdError::Config(format!(
                "expected {} nonnegative attribute weights",
                self.width
            )));
        }
        self.attribute_weights = weights;
        Ok(())
    }

    pub fn has_mvdm_tables(&self) -> bool {
        self.mvdm.is_some()
    }

    pub fn ensure_mvdm_tables(&mut self) {
        if self.mvdm.is_none() {
            self.build_mvdm_tables();
        }
    }

    fn lookup(&self, a: usize, value: &AttributeValue) -> u32 {
        match value {
            AttributeValue::Flag(b) => *b as u32,
            other => self.codebook[a].get(other).copied().unwrap_or(UNSEEN),
        }
    }

    /// `P(sense | value)` for attribute `attr`, in `SenseIndex` order. Values
    /// never seen in training get the sense priors.
    pub fn mvdm_profile(&self, attr: usize, value: &AttributeValue) -> Result<&[f64]> {
        let tables = self.mvdm.as_ref().ok_or(WsdError::MissingMvdmTables)?;
        if attr >= self.width {
            return Err(WsdError::SchemaMismatch {
                expected: format!("attribute index < {}", self.width),
                found: attr.to_string(),
            });
        }
        let id = self.lookup(attr, value);
        Ok(tables.profiles[attr]
            .get(id as usize)
            .map_or(tables.prior.as_slice(), Vec::as_slice))
    }

    /// Closeness of `fv` to every exemplar, plus the maximum attainable score.
    pub fn scores(&self, fv: &FeatureVector, cfg: &EbConfig) -> Result<(Vec<f64>, f64)> {
        super::check_shape(self.schema, self.width, fv)?;
        let codes: Vec<u32> = fv
            .values
            .iter()
            .enumerate()
            .map(|(a, v)| self.lookup(a, v))
            .collect();
        let ctx: Vec<u32> = fv
            .context_set
            .as_ref()
            .map(|set| set.iter().filter_map(|w| self.word_ids.get(w).copied()).collect())
            .unwrap_or_default();

        let weighted = cfg.attribute_weighting;
        let weights = &self.attribute_weights;
        let weight_sum: f64 = if weighted {
            weights.iter().sum()
        } else {
            self.width as f64
        };
        let max_score = weight_sum + ctx.len() as f64;

        let mut scores: Vec<f64> = match cfg.metric {
            Metric::Hamming if !weighted => self
                .rows
                .chunks_exact(self.width)
                .map(|row| row.iter().zip(&codes).filter(|(x, y)| x == y).count() as f64)
                .collect(),
            Metric::Hamming => self
                .rows
                .chunks_exact(self.width)
                .map(|row| {
                    row.iter()
                        .zip(&codes)
                        .zip(weights)
                        .filter(|((x, y), _)| x == y)
                        .map(|(_, w)| *w)
                        .sum()
                })
                .collect(),
            Metric::Mvdm => {
                let tables = self.mvdm.as_ref().ok_or(WsdError::MissingMvdmTables)?;
                // Per attribute, similarity of the test value to each training value.
                let sims: Vec<Vec<f64>> = (0..self.width)
                    .map(|a| {
                        let w = if weighted { weights[a] } else { 1.0 };
                        let test = tables.profiles[a]
                            .get(codes[a] as usize)
                            .unwrap_or(&tables.prior);
                        tables.profiles[a]
                            .iter()
                            .map(|p| w * (2.0 - profile_distance(test, p)) / 2.0)
                            .collect()
                    })
                    .collect();
                self.rows
                    .chunks_exact(self.width)
                    .map(|row| row.iter().zip(&sims).map(|(&id, s)| s[id as usize]).sum())
                    .collect()
            }
        };
        // Shared context words, one point each.
        for &w in &ctx {
            for &e in &self.postings[w as usize] {
                scores[e as usize] += 1.0;
            }
        }
        Ok((scores, max_score))
    }

    /// The `k` closest exemplars, best first; equal scores keep training order.
    pub fn neighbours(&self, fv: &FeatureVector, cfg: &EbConfig) -> Result<Vec<Neighbour>> {
        cfg.validate()?;
        let (scores, max_score) = self.scores(fv, cfg)?;
        let k = cfg.k.min(scores.len());
        let by_rank = |&a: &usize, &b: &usize| scores[b].total_cmp(&scores[a]).then(a.cmp(&b));
        let mut order: Vec<usize> = (0..scores.len()).collect();
        if k < order.len() {
            order.select_nth_unstable_by(k - 1, by_rank);
            order.truncate(k);
        }
        order.sort_unstable_by(by_rank);
        Ok(order
            .into_iter()
            .map(|i| Neighbour {
                index: i,
                sense: self.senses.name(self.labels[i]).to_string(),
                score: scores[i],
                distance: (max_score - scores[i]).max(0.0),
            })
            .collect())
    }

    pub fn classify(&self, fv: &FeatureVector, cfg: &EbConfig) -> Result<String> {
        let neighbours = self.neighbours(fv, cfg)?;
        let mut votes = vec![0.0; self.senses.len()];
        for nb in &neighbours {
            let weight = if cfg.example_weighting {
                1.0 / (1.0 + nb.distance)
            } else {
                1.0
            };
            votes[self.senses.id(&nb.sense).expect("indexed")] += weight;
        }
        Ok(self.senses.name(argmax_by_rank(&votes, VOTE_EPSILON)).to_string())
    }
}

pub fn eb_classify(base: &ExemplarBase, fv: &FeatureVector, cfg: &EbConfig) -> Result<String> {
    base.classify(fv, cfg)
}

/// MVDM distance between two values of attribute `attr`, in `[0, 2]`.
pub fn mvdm_distance(
    attr: usize,
    v1: &AttributeValue,
    v2: &AttributeValue,
    base: &ExemplarBase,
) -> Result<f64> {
    let p = base.mvdm_profile(attr, v1)?;
    let q = base.mvdm_profile(attr, v2)?;
    Ok(profile_distance(p, q))
}

//! Classifier configurations and the train/predict pipeline that turns
//! examples into feature vectors for them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{make_folds, Example, WordDataset};
use crate::error::{Result, WsdError};
use crate::features::{FeatureExtractor, FeatureSet, Vocabulary};
use crate::learners::{EbConfig, ExemplarBase, Metric, MfsModel, NbMode, NbModel};

use super::cv::cross_validate_sequential;

/// Something that can be trained on the training part of a fold.
pub trait Classifier: Sync {
    fn id(&self) -> String;

    /// `inventory` lists the training senses in tie-break order.
    fn fit(&self, training: &[&Example], inventory: &[String]) -> Result<Box<dyn Predictor>>;
}

pub trait Predictor: Send + Sync {
    fn predict(&self, example: &Example) -> Result<String>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Mfs,
    Nb,
    Pnb,
    Eb,
    Peb,
}

impl ClassifierKind {
    fn name(self) -> &'static str {
        match self {
            ClassifierKind::Mfs => "MFS",
            ClassifierKind::Nb => "NB",
            ClassifierKind::Pnb => "PNB",
            ClassifierKind::Eb => "EB",
            ClassifierKind::Peb => "PEB",
        }
    }

    pub fn is_exemplar(self) -> bool {
        matches!(self, ClassifierKind::Eb | ClassifierKind::Peb)
    }

    pub fn default_features(self) -> FeatureSet {
        match self {
            ClassifierKind::Pnb | ClassifierKind::Peb => FeatureSet::BPositive,
            _ => FeatureSet::A,
        }
    }
}

impl FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mfs" => Ok(ClassifierKind::Mfs),
            "nb" => Ok(ClassifierKind::Nb),
            "pnb" => Ok(ClassifierKind::Pnb),
            "eb" => Ok(ClassifierKind::Eb),
            "peb" => Ok(ClassifierKind::Peb),
            other => Err(format!(
                "unknown classifier {other:?} (expected mfs, nb, pnb, eb or peb)"
            )),
        }
    }
}

/// One cell of an experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassifierConfig {
    pub kind: ClassifierKind,
    pub features: FeatureSet,
    /// Used by `Eb` and `Peb` only.
    pub eb: EbConfig,
}

impl ClassifierConfig {
    pub fn mfs() -> Self {
        Self::new(ClassifierKind::Mfs, FeatureSet::A)
    }

    pub fn nb(features: FeatureSet) -> Self {
        Self::new(ClassifierKind::Nb, features)
    }

    pub fn pnb(features: FeatureSet) -> Self {
        Self::new(ClassifierKind::Pnb, features)
    }

    pub fn eb(features: FeatureSet, eb: EbConfig) -> Self {
        ClassifierConfig {
            kind: ClassifierKind::Eb,
            features,
            eb,
        }
    }

    pub fn peb(eb: EbConfig) -> Self {
        ClassifierConfig {
            kind: ClassifierKind::Peb,
            features: FeatureSet::BPositive,
            eb,
        }
    }

    pub fn new(kind: ClassifierKind, features: FeatureSet) -> Self {
        ClassifierConfig {
            kind,
            features,
            eb: EbConfig::default(),
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.eb.k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        use ClassifierKind::*;
        match (self.kind, self.features) {
            (Pnb, FeatureSet::A) => {
                return Err(WsdError::Config(
                    "pnb needs broad-context features (b-binary or b-positive)".into(),
                ))
            }
            (Peb, f) if f != FeatureSet::BPositive => {
                return Err(WsdError::Config("peb needs b-positive features".into()))
            }
            (Eb, FeatureSet::BPositive) => {
                return Err(WsdError::Config(
                    "eb over b-positive features is peb; use --classifier peb".into(),
                ))
            }
            _ => {}
        }
        if self.kind.is_exemplar() {
            self.eb.validate()?;
            if self.eb.metric == Metric::Mvdm && self.features == FeatureSet::BBinary {
                return Err(WsdError::Config(
                    "mvdm over the binary broad-context expansion is not supported; use peb with b-positive".into(),
                ));
            }
        }
        Ok(())
    }

    /// Short name in the `EB_h,7,e,a` style.
    pub fn label(&self) -> String {
        let mut s = self.kind.name().to_string();
        if self.kind.is_exemplar() {
            s.push('_');
            s.push_str(self.eb.metric.tag());
            s.push_str(&format!(",{}", self.eb.k));
            if self.eb.example_weighting {
                s.push_str(",e");
            }
            if self.eb.attribute_weighting {
                s.push_str(",a");
            }
        }
        s
    }

    /// Label plus feature set, e.g. `PEB_h,7,e@b-positive`. Round-trips through `FromStr`.
    pub fn id(&self) -> String {
        format!("{}@{}", self.label(), self.features.flag())
    }
}

impl fmt::Display for ClassifierConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for ClassifierConfig {
    type Err = WsdError;

    /// Parses `NB`, `PNB@b-binary`, `EB_h,7,e,a@a`, `PEB_cs,10,e`. The
    /// feature set defaults to `a`, or `b-positive` for the positive variants.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| WsdError::Config(format!("cannot parse classifier {s:?}: {msg}"));
        let (head, features) = match s.split_once('@') {
            Some((h, f)) => (h, Some(f.parse::<FeatureSet>().map_err(bad)?)),
            None => (s, None),
        };
        let (name, params) = match head.split_once('_') {
            Some((n, p)) => (n, Some(p)),
            None => (head, None),
        };
        let kind: ClassifierKind = name.parse().map_err(bad)?;
        let mut cfg = ClassifierConfig::new(kind, features.unwrap_or(kind.default_features()));
        match (kind.is_exemplar(), params) {
            (true, Some(p)) => {
                let mut parts = p.split(',');
                let metric = parts.next().unwrap_or_default();
                cfg.eb.metric = metric.parse().map_err(bad)?;
                let k = parts.next().ok_or_else(|| bad("missing k".into()))?;
                cfg.eb.k = k.parse().map_err(|_| bad(format!("k {k:?} is not an integer")))?;
                for flag in parts {
                    match flag {
                        "e" => cfg.eb.example_weighting = true,
                        "a" => cfg.eb.attribute_weighting = true,
                        other => return Err(bad(format!("unknown flag {other:?}"))),
                    }
                }
            }
            (true, None) => return Err(bad("expected metric and k, e.g. EB_h,7".into())),
            (false, Some(_)) => return Err(bad("only EB and PEB take parameters".into())),
            (false, None) => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Classifier for ClassifierConfig {
    fn id(&self) -> String {
        ClassifierConfig::id(self)
    }

    fn fit(&self, training: &[&Example], inventory: &[String]) -> Result<Box<dyn Predictor>> {
        Pipeline::new(*self).fit(training, inventory)
    }
}

/// A configuration together with the feature extractor it uses.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub config: ClassifierConfig,
    pub extractor: FeatureExtractor,
}

impl Pipeline {
    pub fn new(config: ClassifierConfig) -> Self {
        Pipeline {
            config,
            extractor: FeatureExtractor::default(),
        }
    }
}

impl Pipeline {
    fn encoder(&self, vocab: Option<Vocabulary>) -> Encoder {
        Encoder {
            extractor: self.extractor.clone(),
            features: self.config.features,
            vocab,
        }
    }
}

impl Classifier for Pipeline {
    fn id(&self) -> String {
        self.config.id()
    }

    fn fit(&self, training: &[&Example], inventory: &[String]) -> Result<Box<dyn Predictor>> {
        self.config.validate()?;
        let labels: Vec<&str> = training.iter().map(|e| e.sense.as_str()).collect();
        if self.config.kind == ClassifierKind::Mfs {
            let model = MfsModel::train(labels, Some(inventory))?;
            return Ok(Box::new(model));
        }

        let features = self.config.features;
        let vocab = features
            .uses_vocabulary()
            .then(|| self.extractor.build_vocabulary(training.iter().copied()));
        let vectors = training
            .iter()
            .map(|ex| self.extractor.extract(ex, features, vocab.as_ref()));

        let predictor: Box<dyn Predictor> = match self.config.kind {
            ClassifierKind::Nb | ClassifierKind::Pnb => {
                let model = NbModel::train_from(&labels, vectors, Some(inventory))?;
                let mode = if self.config.kind == ClassifierKind::Pnb {
                    NbMode::Positive
                } else {
                    NbMode::Standard
                };
                Box::new(NbPredictor {
                    model,
                    mode,
                    encoder: self.encoder(vocab),
                })
            }
            ClassifierKind::Eb | ClassifierKind::Peb => {
                let cfg = self.config.eb;
                let base = ExemplarBase::train_from(&labels, vectors, &cfg, Some(inventory))?;
                Box::new(EbPredictor {
                    base,
                    cfg,
                    encoder: self.encoder(vocab),
                })
            }
            ClassifierKind::Mfs => unreachable!("handled above"),
        };
        Ok(predictor)
    }
}

struct Encoder {
    extractor: FeatureExtractor,
    features: FeatureSet,
    vocab: Option<Vocabulary>,
}

impl Predictor for MfsModel {
    fn predict(&self, _: &Example) -> Result<String> {
        Ok(self.sense().to_string())
    }
}

struct NbPredictor {
    model: NbModel,
    mode: NbMode,
    encoder: Encoder,
}

impl Predictor for NbPredictor {
    fn predict(&self, example: &Example) -> Result<String> {
        let e = &self.encoder;
        let fv = e.extractor.extract(example, e.features, e.vocab.as_ref());
        self.model.classify(&fv, self.mode)
    }
}

struct EbPredictor {
    base: ExemplarBase,
    cfg: EbConfig,
    encoder: Encoder,
}

impl Predictor for EbPredictor {
    fn predict(&self, example: &Example) -> Result<String> {
        let e = &self.encoder;
        let fv = e.extractor.extract(example, e.features, e.vocab.as_ref());
        self.base.classify(&fv, &self.cfg)
    }
}

/// Exemplar-based configuration whose `k` is chosen by an inner
/// cross-validation on the training part of each outer fold.
#[derive(Debug, Clone)]
pub struct InnerCvK {
    pub base: ClassifierConfig,
    pub ks: Vec<usize>,
    pub inner_folds: usize,
    pub seed: u64,
}

impl InnerCvK {
    /// Best `k` on `training` (highest mean inner accuracy, smallest k on ties).
    pub fn select_k(&self, training: &[&Example]) -> Result<usize> {
        if self.ks.is_empty() {
            return Err(WsdError::Config("no k candidates".into()));
        }
        let examples: Vec<Example> = training.iter().map(|e| (*e).clone()).collect();
        let inner = WordDataset::new("", None, examples);
        let folds = make_folds(&inner, self.inner_folds.min(inner.len()), self.seed)?;
        let mut best: Option<(usize, f64)> = None;
        for &k in &self.ks {
            let cfg = self.base.with_k(k);
            let report = cross_validate_sequential(&inner, &folds, &cfg)?;
            if best.is_none_or(|(_, acc)| report.mean_accuracy > acc) {
                best = Some((k, report.mean_accuracy));
            }
        }
        Ok(best.expect("ks non-empty").0)
    }
}

impl Classifier for InnerCvK {
    fn id(&self) -> String {
        let mut cfg = self.base;
        cfg.eb.k = 0;
        cfg.id().replacen(",0", ",k~cv", 1)
    }

    fn fit(&self, training: &[&Example], inventory: &[String]) -> Result<Box<dyn Predictor>> {
        if !self.base.kind.is_exemplar() {
            return Err(WsdError::Config("inner-CV k selection applies to eb/peb only".into()));
        }
        let k = self.select_k(training)?;
        self.base.with_k(k).fit(training, inventory)
    }
}

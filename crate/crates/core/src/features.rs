//! Attribute extraction: the 7 local-context attributes of set A and the
//! 15 local attributes plus broad context of set B.
//!
//! Broad context comes in two encodings. `BBinary` expands it into one
//! presence flag per vocabulary word; `BPositive` keeps only the set of
//! content words that occur in the sentence.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Example;

pub const BOUNDARY: &str = "__";
pub const DEFAULT_SEPARATOR: &str = "·";
pub const DEFAULT_OPEN_CLASS: [&str; 4] = ["NN", "VB", "JJ", "RB"];

pub const SET_A_ATTRIBUTES: usize = 7;
pub const SET_B_SYMBOLIC_ATTRIBUTES: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttributeValue {
    Symbol(String),
    /// Position outside the sentence.
    Boundary,
    /// Presence bit of one vocabulary word in the binary broad-context encoding.
    Flag(bool),
}

impl fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttributeValue::Symbol(s) => f.write_str(s),
            AttributeValue::Boundary => f.write_str(BOUNDARY),
            AttributeValue::Flag(b) => f.write_str(if *b { "1" } else { "0" }),
        }
    }
}

/// Unordered set of lowercased content words.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct WordSet(BTreeSet<String>);

impl WordSet {
    pub fn new() -> Self {
        WordSet(BTreeSet::new())
    }

    /// Inserts `word` lowercased; empty words are ignored.
    pub fn insert(&mut self, word: &str) -> bool {
        if word.is_empty() {
            return false;
        }
        self.0.insert(word.to_lowercase())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl<S: AsRef<str>> FromIterator<S> for WordSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut set = WordSet::new();
        for w in iter {
            set.insert(w.as_ref());
        }
        set
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureSet {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b-binary")]
    BBinary,
    #[serde(rename = "b-positive")]
    BPositive,
}

impl FeatureSet {
    pub fn schema_id(self) -> &'static str {
        match self {
            FeatureSet::A => "set-a",
            FeatureSet::BBinary => "set-b-binary",
            FeatureSet::BPositive => "set-b-positive",
        }
    }

    pub fn flag(self) -> &'static str {
        match self {
            FeatureSet::A => "a",
            FeatureSet::BBinary => "b-binary",
            FeatureSet::BPositive => "b-positive",
        }
    }

    pub fn uses_vocabulary(self) -> bool {
        !matches!(self, FeatureSet::A)
    }
}

impl FromStr for FeatureSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" | "set-a" => Ok(FeatureSet::A),
            "b-binary" | "set-b-binary" => Ok(FeatureSet::BBinary),
            "b-positive" | "set-b-positive" => Ok(FeatureSet::BPositive),
            other => Err(format!(
                "unknown feature set {other:?} (expected a, b-binary or b-positive)"
            )),
        }
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContextMode {
    Binary,
    Positive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureVector {
    pub schema: FeatureSet,
    pub values: Vec<AttributeValue>,
    /// Present only for `FeatureSet::BPositive`.
    pub context_set: Option<WordSet>,
}

impl FeatureVector {
    pub fn schema_id(&self) -> &'static str {
        self.schema.schema_id()
    }

    /// Content words whose presence bit is set, for a binary-encoded vector.
    /// For positive vectors this is the stored context set.
    pub fn positive_context(&self, vocab: &Vocabulary) -> WordSet {
        match (&self.context_set, self.schema) {
            (Some(set), _) => set.clone(),
            (None, FeatureSet::BBinary) => self.values[SET_B_SYMBOLIC_ATTRIBUTES..]
                .iter()
                .zip(vocab.words())
                .filter(|(v, _)| matches!(v, AttributeValue::Flag(true)))
                .map(|(_, w)| w.as_str())
                .collect(),
            _ => WordSet::new(),
        }
    }

    /// Rewrites a binary-encoded vector into the positive encoding.
    pub fn to_positive(&self, vocab: &Vocabulary) -> FeatureVector {
        let symbolic = match self.schema {
            FeatureSet::A => return self.clone(),
            _ => self.values[..SET_B_SYMBOLIC_ATTRIBUTES].to_vec(),
        };
        FeatureVector {
            schema: FeatureSet::BPositive,
            values: symbolic,
            context_set: Some(self.positive_context(vocab)),
        }
    }
}

/// POS-tag prefixes that mark open-class (content) words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenClassTags(Vec<String>);

impl OpenClassTags {
    pub fn new<S: Into<String>>(prefixes: impl IntoIterator<Item = S>) -> Self {
        OpenClassTags(prefixes.into_iter().map(Into::into).collect())
    }

    pub fn is_open(&self, pos: &str) -> bool {
        self.0.iter().any(|p| pos.starts_with(p.as_str()))
    }

    pub fn prefixes(&self) -> &[String] {
        &self.0
    }
}

impl Default for OpenClassTags {
    fn default() -> Self {
        OpenClassTags::new(DEFAULT_OPEN_CLASS)
    }
}

/// Content words observed in a training split, lexicographically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
    index: HashMap<String, usize>,
    open_class: OpenClassTags,
}

impl Vocabulary {
    pub fn from_words<S: AsRef<str>>(words: impl IntoIterator<Item = S>, open_class: OpenClassTags) -> Self {
        let sorted: BTreeSet<String> = words.into_iter().map(|w| w.as_ref().to_lowercase()).collect();
        let words: Vec<String> = sorted.into_iter().collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Vocabulary {
            words,
            index,
            open_class,
        }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn open_class(&self) -> &OpenClassTags {
        &self.open_class
    }
}

#[derive(Debug, Clone)]
pub struct FeatureExtractor {
    pub separator: String,
    pub open_class: OpenClassTags,
}

impl Default for FeatureExtractor {
    fn default() -> Self {
        FeatureExtractor {
            separator: DEFAULT_SEPARATOR.to_string(),
            open_class: OpenClassTags::default(),
        }
    }
}

impl FeatureExtractor {
    fn word(&self, ex: &Example, offset: isize) -> AttributeValue {
        match ex.form_at(offset) {
            Some(f) => AttributeValue::Symbol(f.to_string()),
            None => AttributeValue::Boundary,
        }
    }

    fn tag(&self, ex: &Example, offset: isize) -> AttributeValue {
        match ex.pos_at(offset) {
            Some(p) => AttributeValue::Symbol(p.to_string()),
            None => AttributeValue::Boundary,
        }
    }

    fn collocation(&self, ex: &Example, offsets: &[isize]) -> AttributeValue {
        let parts: Vec<&str> = offsets
            .iter()
            .map(|&o| ex.form_at(o).unwrap_or(BOUNDARY))
            .collect();
        AttributeValue::Symbol(parts.join(&self.separator))
    }

    /// w-2, w-1, w+1, w+2, (w-2,w-1), (w-1,w+1), (w+1,w+2).
    pub fn extract_set_a(&self, ex: &Example) -> FeatureVector {
        let values = vec![
            self.word(ex, -2),
            self.word(ex, -1),
            self.word(ex, 1),
            self.word(ex, 2),
            self.collocation(ex, &[-2, -1]),
            self.collocation(ex, &[-1, 1]),
            self.collocation(ex, &[1, 2]),
        ];
        FeatureVector {
            schema: FeatureSet::A,
            values,
            context_set: None,
        }
    }

    fn set_b_symbolic(&self, ex: &Example) -> Vec<AttributeValue> {
        let mut values = Vec::with_capacity(SET_B_SYMBOLIC_ATTRIBUTES);
        values.push(self.word(ex, -1));
        values.push(self.word(ex, 1));
        for offsets in [
            &[-2, -1][..],
            &[-1, 1],
            &[1, 2],
            &[-3, -2, -1],
            &[-2, -1, 1],
            &[-1, 1, 2],
            &[1, 2, 3],
        ] {
            values.push(self.collocation(ex, offsets));
        }
        for offset in [-3, -2, -1, 1, 2, 3] {
            values.push(self.tag(ex, offset));
        }
        values
    }

    /// Lowercased open-class forms of the sentence, the target occurrence excluded.
    pub fn content_words<'a>(&'a self, ex: &'a Example) -> impl Iterator<Item = String> + 'a {
        ex.tokens
            .iter()
            .enumerate()
            .filter(move |(i, t)| *i != ex.target_index && self.open_class.is_open(&t.pos))
            .map(|(_, t)| t.form.to_lowercase())
    }

    pub fn extract_set_b(&self, ex: &Example, vocab: &Vocabulary, mode: ContextMode) -> FeatureVector {
        let mut values = self.set_b_symbolic(ex);
        match mode {
            ContextMode::Positive => {
                let context: WordSet = self
                    .content_words(ex)
                    .filter(|w| vocab.index_of(w).is_some())
                    .collect();
                FeatureVector {
                    schema: FeatureSet::BPositive,
                    values,
                    context_set: Some(context),
                }
            }
            ContextMode::Binary => {
                let mut present = vec![false; vocab.len()];
                for w in self.content_words(ex) {
                    if let Some(i) = vocab.index_of(&w) {
                        present[i] = true;
                    }
                }
                values.extend(present.into_iter().map(AttributeValue::Flag));
                FeatureVector {
                    schema: FeatureSet::BBinary,
                    values,
                    context_set: None,
                }
            }
        }
    }

    /// Extracts `set`; the vocabulary is ignored for set A.
    pub fn extract(&self, ex: &Example, set: FeatureSet, vocab: Option<&Vocabulary>) -> FeatureVector {
        match (set, vocab) {
            (FeatureSet::A, _) => self.extract_set_a(ex),
            (FeatureSet::BBinary, Some(v)) => self.extract_set_b(ex, v, ContextMode::Binary),
            (FeatureSet::BPositive, Some(v)) => self.extract_set_b(ex, v, ContextMode::Positive),
            (_, None) => {
                let empty = Vocabulary::from_words(Vec::<String>::new(), self.open_class.clone());
                let mode = if set == FeatureSet::BBinary {
                    ContextMode::Binary
                } else {
                    ContextMode::Positive
                };
                self.extract_set_b(ex, &empty, mode)
            }
        }
    }

    pub fn build_vocabulary<'a>(&self, training: impl IntoIterator<Item = &'a Example>) -> Vocabulary {
        let mut words = BTreeSet::new();
        for ex in training {
            words.extend(self.content_words(ex));
        }
        Vocabulary::from_words(words, self.open_class.clone())
    }
}

pub fn extract_set_a(ex: &Example) -> FeatureVector {
    FeatureExtractor::default().extract_set_a(ex)
}

pub fn extract_set_b(ex: &Example, vocab: &Vocabulary, mode: ContextMode) -> FeatureVector {
    let extractor = FeatureExtractor {
        open_class: vocab.open_class().clone(),
        ..FeatureExtractor::default()
    };
    extractor.extract_set_b(ex, vocab, mode)
}

pub fn build_vocabulary<'a>(
    training: impl IntoIterator<Item = &'a Example>,
    open_class: &OpenClassTags,
) -> Vocabulary {
    let extractor = FeatureExtractor {
        open_class: open_class.clone(),
        ..FeatureExtractor::default()
    };
    extractor.build_vocabulary(training)
}

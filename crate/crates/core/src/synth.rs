//! Seeded synthetic corpora for a single ambiguous word.
//!
//! * `collocational`: the word right before the target is a sense cue.
//! * `broad-context`: each sense has a pool of topic words; a few of them
//!   appear anywhere in the sentence, the local context is random.
//! * `length-confounded`: like `broad-context`, but the first sense has much
//!   longer sentences than the others. Context-set sizes then differ by sense,
//!   which misleads any similarity that also counts shared absences.
//!
//! Every content word is tagged `NN` (cues are `JJ`); sentences open with
//! `the/DT` and close with `./.`.

use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{corpus_to_string, Example, Token, WordDataset};
use crate::error::{Result, WsdError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Signal {
    Collocational,
    BroadContext,
    LengthConfounded,
}

impl FromStr for Signal {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "collocational" => Ok(Signal::Collocational),
            "broad-context" => Ok(Signal::BroadContext),
            "length-confounded" => Ok(Signal::LengthConfounded),
            other => Err(format!(
                "unknown signal {other:?} (expected collocational, broad-context or length-confounded)"
            )),
        }
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signal::Collocational => "collocational",
            Signal::BroadContext => "broad-context",
            Signal::LengthConfounded => "length-confounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorSpec {
    pub lemma: String,
    pub senses: usize,
    pub examples: usize,
    /// Number of distinct filler words.
    pub vocab: usize,
    pub signal: Signal,
    /// Probability that an example's label is replaced by a different sense.
    pub noise: f64,
    /// Share of the first sense; the rest is split evenly. Uniform if unset.
    pub majority: Option<f64>,
    /// Topic words per sense (broad-context and length-confounded).
    pub topic_pool: usize,
    /// Topic words drawn into each sentence.
    pub topic_per_sentence: usize,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            lemma: "synth".into(),
            senses: 3,
            examples: 500,
            vocab: 2000,
            signal: Signal::Collocational,
            noise: 0.0,
            majority: None,
            topic_pool: 10,
            topic_per_sentence: 5,
        }
    }
}

// Filler-word ranges (inclusive start, exclusive end).
const SHORT_FILLER: (usize, usize) = (2, 7);
const MEDIUM_FILLER: (usize, usize) = (8, 16);
const LONG_FILLER: (usize, usize) = (20, 29);
const COLLOCATION_FILLER: (usize, usize) = (4, 12);

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(WsdError::Generator(m));
        if self.lemma.is_empty() || self.lemma.contains(|c: char| c == '/' || c.is_whitespace()) {
            return fail(format!("invalid lemma {:?}", self.lemma));
        }
        if self.senses < 1 {
            return fail("need at least one sense".into());
        }
        if self.examples < self.senses {
            return fail(format!(
                "{} examples cannot cover {} senses",
                self.examples, self.senses
            ));
        }
        if self.vocab < 10 {
            return fail("vocabulary must have at least 10 words".into());
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return fail(format!("noise {} outside [0, 1]", self.noise));
        }
        if let Some(m) = self.majority {
            if !(m.is_finite() && m * self.senses as f64 >= 1.0 - 1e-12 && m <= 1.0) {
                return fail(format!(
                    "majority {m} must lie in [1/senses, 1] (senses = {})",
                    self.senses
                ));
            }
            if self.senses == 1 && m < 1.0 {
                return fail("a single sense has majority 1".into());
            }
        }
        if self.signal != Signal::Collocational
            && (self.topic_per_sentence == 0 || self.topic_per_sentence > self.topic_pool)
        {
            return fail(format!(
                "topic_per_sentence must be in 1..={}",
                self.topic_pool
            ));
        }
        Ok(())
    }

    /// Reads a TOML spec; missing keys take their defaults.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| WsdError::Generator(e.to_string()))
    }

    /// Example count per sense, first sense first.
    pub fn sense_sizes(&self) -> Vec<usize> {
        let n = self.examples;
        let m = self.senses;
        let (first, rest_total) = match self.majority {
            Some(p) => {
                let first = ((p * n as f64).round() as usize).clamp(1, n - (m - 1));
                (first, n - first)
            }
            None => (n / m + usize::from(!n.is_multiple_of(m)), n - (n / m + usize::from(!n.is_multiple_of(m)))),
        };
        let mut sizes = vec![first];
        if m > 1 {
            let others = m - 1;
            for i in 0..others {
                sizes.push(rest_total / others + usize::from(i < rest_total % others));
            }
        }
        sizes
    }
}

fn sense_name(i: usize) -> String {
    format!("s{}", i + 1)
}

fn nn(form: String) -> Token {
    Token { form, pos: "NN".into() }
}

fn fillers(rng: &mut ChaCha8Rng, vocab: usize, range: (usize, usize)) -> Vec<Token> {
    let n = rng.gen_range(range.0..range.1);
    (0..n).map(|_| nn(format!("w{}", rng.gen_range(0..vocab)))).collect()
}

/// Generates the dataset. Same spec and seed give the same corpus.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<WordDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = spec
        .sense_sizes()
        .into_iter()
        .enumerate()
        .flat_map(|(s, n)| std::iter::repeat_n(s, n))
        .collect();
    labels.shuffle(&mut rng);

    let mut examples = Vec::with_capacity(labels.len());
    for &true_sense in &labels {
        let mut content = match spec.signal {
            Signal::Collocational => fillers(&mut rng, spec.vocab, COLLOCATION_FILLER),
            Signal::BroadContext | Signal::LengthConfounded => {
                let range = match spec.signal {
                    Signal::BroadContext => MEDIUM_FILLER,
                    _ if true_sense == 0 => LONG_FILLER,
                    _ => SHORT_FILLER,
                };
                let mut words = fillers(&mut rng, spec.vocab, range);
                for j in index::sample(&mut rng, spec.topic_pool, spec.topic_per_sentence) {
                    words.push(nn(format!("t{}x{j}", true_sense + 1)));
                }
                words.shuffle(&mut rng);
                words
            }
        };

        let target = nn(spec.lemma.clone());
        let split = match spec.signal {
            // Cue right before the target, anywhere in the sentence.
            Signal::Collocational => {
                let split = rng.gen_range(0..=content.len());
                content.insert(
                    split,
                    Token {
                        form: format!("cue{}", true_sense + 1),
                        pos: "JJ".into(),
                    },
                );
                split + 1
            }
            // Middle of the sentence, keeping the window around the target uniform.
            _ => content.len() / 2,
        };
        let mut tokens = Vec::with_capacity(content.len() + 3);
        tokens.push(Token { form: "the".into(), pos: "DT".into() });
        tokens.extend(content.drain(..split));
        let target_index = tokens.len();
        tokens.push(target);
        tokens.extend(content);
        tokens.push(Token { form: ".".into(), pos: ".".into() });

        let sense = if spec.senses > 1 && spec.noise > 0.0 && rng.gen_bool(spec.noise) {
            let shift = rng.gen_range(1..spec.senses);
            (true_sense + shift) % spec.senses
        } else {
            true_sense
        };
        examples.push(Example {
            sense: sense_name(sense),
            tokens,
            target_index,
        });
    }
    Ok(WordDataset::new(spec.lemma.clone(), Some("n".into()), examples))
}

/// Generated corpus in the line format, with a header naming the word.
pub fn generate_corpus_text(spec: &GeneratorSpec, seed: u64) -> Result<String> {
    let ds = generate(spec, seed)?;
    let mut out = format!(
        "# synthetic {} corpus: senses={} examples={} vocab={} noise={} seed={seed}\n",
        spec.signal, spec.senses, spec.examples, spec.vocab, spec.noise
    );
    out.push_str(&corpus_to_string(&ds));
    Ok(out)
}

//! Sense-tagged corpus ingestion, sense inventories and stratified folds.
//!
//! A corpus file holds the examples of one target word. Lines starting with
//! `#` and blank lines are skipped. An optional header `@word <lemma> [<pos>]`
//! may appear before the first data line. Every data line has the shape
//!
//! ```text
//! <sense>\t<target_index>\t<form>/<pos> <form>/<pos> ...
//! ```
//!
//! where the last `/` of a token separates the form from its tag and
//! `target_index` is 0-based.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, WsdError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub form: String,
    pub pos: String,
}

impl Token {
    pub fn new(form: impl Into<String>, pos: impl Into<String>) -> std::result::Result<Self, String> {
        let form = form.into();
        let pos = pos.into();
        if form.is_empty() {
            return Err("empty token form".into());
        }
        if form.contains('/') || form.chars().any(char::is_whitespace) {
            return Err(format!("token form {form:?} contains '/' or whitespace"));
        }
        if pos.chars().any(char::is_whitespace) {
            return Err(format!("POS tag {pos:?} contains whitespace"));
        }
        Ok(Token { form, pos })
    }

    fn parse(raw: &str) -> std::result::Result<Self, String> {
        let (form, pos) = raw
            .rsplit_once('/')
            .ok_or_else(|| format!("token {raw:?} has no '/' separating form and POS"))?;
        Token::new(form, pos)
    }
}

/// Parses `form/POS`, splitting at the last `/`.
impl FromStr for Token {
    type Err = String;

    fn from_str(raw: &str) -> std::result::Result<Self, String> {
        Token::parse(raw)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.form, self.pos)
    }
}

/// One sense-tagged sentence with a marked target occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub sense: String,
    pub tokens: Vec<Token>,
    pub target_index: usize,
}

impl Example {
    pub fn new(
        sense: impl Into<String>,
        tokens: Vec<Token>,
        target_index: usize,
    ) -> std::result::Result<Self, String> {
        let sense = sense.into();
        if sense.is_empty() {
            return Err("empty sense label".into());
        }
        if sense.contains(['\t', '\n', '\r']) {
            return Err(format!("sense label {sense:?} contains a tab or newline"));
        }
        if target_index >= tokens.len() {
            return Err(format!(
                "target index {target_index} out of range for {} tokens",
                tokens.len()
            ));
        }
        Ok(Example {
            sense,
            tokens,
            target_index,
        })
    }

    pub fn target(&self) -> &Token {
        &self.tokens[self.target_index]
    }

    /// Form at `offset` positions from the target, `None` past a sentence boundary.
    pub fn form_at(&self, offset: isize) -> Option<&str> {
        self.token_at(offset).map(|t| t.form.as_str())
    }

    pub fn pos_at(&self, offset: isize) -> Option<&str> {
        self.token_at(offset).map(|t| t.pos.as_str())
    }

    fn token_at(&self, offset: isize) -> Option<&Token> {
        let idx = self.target_index as isize + offset;
        if idx < 0 {
            None
        } else {
            self.tokens.get(idx as usize)
        }
    }
}

/// All examples of one target word.
#[derive(Debug, Clone, PartialEq)]
pub struct WordDataset {
    pub target_lemma: String,
    /// Coarse part of speech of the target (`n`, `v`, ...), used for grouped averages.
    pub target_pos: Option<String>,
    /// Sense inventory: descending frequency, lexicographic tiebreak.
    pub senses: Vec<String>,
    pub examples: Vec<Example>,
    pub sense_counts: BTreeMap<String, usize>,
}

impl WordDataset {
    pub fn new(
        target_lemma: impl Into<String>,
        target_pos: Option<String>,
        examples: Vec<Example>,
    ) -> Self {
        let sense_counts = count_senses(examples.iter().map(|e| e.sense.as_str()));
        let senses = inventory_order(&sense_counts);
        WordDataset {
            target_lemma: target_lemma.into(),
            target_pos,
            senses,
            examples,
            sense_counts,
        }
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Rank of every inventory sense (0 = most frequent).
    pub fn sense_rank(&self) -> BTreeMap<String, usize> {
        self.senses
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect()
    }
}

pub fn count_senses<'a>(senses: impl IntoIterator<Item = &'a str>) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for s in senses {
        *counts.entry(s.to_string()).or_insert(0) += 1;
    }
    counts
}

/// Orders senses by descending count, breaking ties lexicographically.
pub fn inventory_order(counts: &BTreeMap<String, usize>) -> Vec<String> {
    let mut senses: Vec<(&String, &usize)> = counts.iter().collect();
    // BTreeMap iteration is already lexicographic; a stable sort keeps it for ties.
    senses.sort_by(|a, b| b.1.cmp(a.1));
    senses.into_iter().map(|(s, _)| s.clone()).collect()
}

pub fn parse_corpus<R: BufRead>(reader: R) -> Result<WordDataset> {
    let mut lemma = String::new();
    let mut pos = None;
    let mut examples = Vec::new();
    let mut seen_content = false;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let err = |message: String| WsdError::Parse {
            line: line_no,
            message,
        };
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("@word") {
            if seen_content {
                return Err(err("@word header must precede all data lines".into()));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            match fields.as_slice() {
                [l] => lemma = l.to_string(),
                [l, p] => {
                    lemma = l.to_string();
                    pos = Some(p.to_string());
                }
                _ => return Err(err("expected `@word <lemma> [<pos>]`".into())),
            }
            seen_content = true;
            continue;
        }
        seen_content = true;

        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(err(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let target_index: usize = fields[1]
            .trim()
            .parse()
            .map_err(|_| err(format!("target index {:?} is not a non-negative integer", fields[1])))?;
        let tokens = fields[2]
            .split_whitespace()
            .map(Token::parse)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(err)?;
        let example = Example::new(fields[0], tokens, target_index).map_err(err)?;
        examples.push(example);
    }

    Ok(WordDataset::new(lemma, pos, examples))
}

pub fn parse_corpus_str(input: &str) -> Result<WordDataset> {
    parse_corpus(input.as_bytes())
}

pub fn write_corpus<W: Write>(dataset: &WordDataset, mut out: W) -> Result<()> {
    if !dataset.target_lemma.is_empty() {
        match &dataset.target_pos {
            Some(pos) => writeln!(out, "@word {} {}", dataset.target_lemma, pos)?,
            None => writeln!(out, "@word {}", dataset.target_lemma)?,
        }
    }
    for ex in &dataset.examples {
        write!(out, "{}\t{}\t", ex.sense, ex.target_index)?;
        for (i, tok) in ex.tokens.iter().enumerate() {
            if i > 0 {
                out.write_all(b" ")?;
            }
            write!(out, "{tok}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn corpus_to_string(dataset: &WordDataset) -> String {
    let mut buf = Vec::new();
    write_corpus(dataset, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("corpus text is UTF-8")
}

/// Majority sense and its share of the examples; ties go to inventory order.
pub fn most_frequent_sense(dataset: &WordDataset) -> Result<(String, f64)> {
    let top = dataset.senses.first().ok_or(WsdError::EmptyDataset)?;
    let count = dataset.sense_counts[top];
    Ok((top.clone(), count as f64 / dataset.len() as f64))
}

/// Assignment of every example to one of `fold_count` folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub fold_count: usize,
    pub seed: u64,
    /// `assignments[i]` is the fold of example `i`.
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == fold)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter(|(_, &f)| f != fold)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.fold_count];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Stratified fold assignment.
///
/// Examples of each sense are shuffled with a seeded generator, then dealt
/// round-robin. The dealing counter carries over from one sense to the next
/// (senses visited in inventory order), so both overall fold sizes and
/// per-sense fold counts differ by at most one.
pub fn make_folds(dataset: &WordDataset, fold_count: usize, seed: u64) -> Result<FoldPlan> {
    if fold_count < 2 {
        return Err(WsdError::Folds(format!(
            "fold count must be at least 2, got {fold_count}"
        )));
    }
    if dataset.len() < fold_count {
        return Err(WsdError::Folds(format!(
            "{} examples cannot fill {fold_count} folds",
            dataset.len()
        )));
    }

    let mut by_sense: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, ex) in dataset.examples.iter().enumerate() {
        by_sense.entry(ex.sense.as_str()).or_default().push(i);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0; dataset.len()];
    let mut dealt = 0usize;
    for sense in &dataset.senses {
        let mut members = by_sense.remove(sense.as_str()).unwrap_or_default();
        members.shuffle(&mut rng);
        for idx in members {
            assignments[idx] = dealt % fold_count;
            dealt += 1;
        }
    }

    Ok(FoldPlan {
        fold_count,
        seed,
        assignments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_stream_gives_empty_dataset() {
        let ds = parse_corpus_str("").unwrap();
        assert!(ds.is_empty());
        assert!(ds.senses.is_empty());
        assert!(most_frequent_sense(&ds).is_err());
    }

    #[test]
    fn single_line() {
        let ds = parse_corpus_str("s1\t2\tthe/DT old/JJ age/NN\n").unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.examples[0].target_index, 2);
        assert_eq!(ds.examples[0].target().form, "age");
        assert_eq!(ds.examples[0].target().pos, "NN");
    }

    #[test]
    fn sense_counts_and_inventory() {
        let text = "s1\t0\ta/X\ns1\t0\tb/X\ns2\t0\tc/X\n";
        let ds = parse_corpus_str(text).unwrap();
        assert_eq!(ds.sense_counts["s1"], 2);
        assert_eq!(ds.sense_counts["s2"], 1);
        assert_eq!(ds.senses, vec!["s1", "s2"]);
    }

    #[test]
    fn inventory_ties_are_lexicographic() {
        let ds = parse_corpus_str("b\t0\tx/X\na\t0\tx/X\n").unwrap();
        assert_eq!(ds.senses, vec!["a", "b"]);
        assert_eq!(most_frequent_sense(&ds).unwrap(), ("a".to_string(), 0.5));
    }

    #[test]
    fn header_comments_and_empty_pos() {
        let text = "# comment\n\n@word age n\ns1\t1\tthe/ age/NN\n";
        let ds = parse_corpus_str(text).unwrap();
        assert_eq!(ds.target_lemma, "age");
        assert_eq!(ds.target_pos.as_deref(), Some("n"));
        assert_eq!(ds.examples[0].tokens[0], Token::new("the", "").unwrap());
    }

    #[test]
    fn form_keeps_everything_before_last_slash_only_if_valid() {
        let err = parse_corpus_str("s\t0\ta/b/NN\n").unwrap_err();
        assert!(matches!(err, WsdError::Parse { line: 1, .. }));
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let cases = [
            ("s1\t0\n", 1),
            ("# c\ns1\tx\ta/B\n", 2),
            ("s1\t0\ta/B\n\ns1\t5\ta/B b/C\n", 3),
            ("s1\t-1\ta/B\n", 1),
            ("\t0\ta/B\n", 1),
            ("s1\t0\tnoslash\n", 1),
            ("s1\t0\ta/B\n@word late\n", 2),
        ];
        for (text, line) in cases {
            match parse_corpus_str(text) {
                Err(WsdError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn mfs_of_age_like_counts() {
        let mut examples = Vec::new();
        for (sense, n) in [("s1", 306), ("s2", 187)] {
            for _ in 0..n {
                examples.push(Example::new(sense, vec![Token::new("age", "NN").unwrap()], 0).unwrap());
            }
        }
        let ds = WordDataset::new("age", Some("n".into()), examples);
        let (sense, share) = most_frequent_sense(&ds).unwrap();
        assert_eq!(sense, "s1");
        assert_eq!((share * 1000.0).round() / 10.0, 62.1);
    }

    #[test]
    fn single_sense_mfs_is_one() {
        let ds = parse_corpus_str("only\t0\ta/X\nonly\t0\tb/X\n").unwrap();
        assert_eq!(most_frequent_sense(&ds).unwrap(), ("only".to_string(), 1.0));
    }

    fn synthetic(counts: &[(&str, usize)]) -> WordDataset {
        let mut examples = Vec::new();
        for (sense, n) in counts {
            for i in 0..*n {
                let tok = Token::new(format!("t{i}"), "NN").unwrap();
                examples.push(Example::new(*sense, vec![tok], 0).unwrap());
            }
        }
        WordDataset::new("w", None, examples)
    }

    #[test]
    fn folds_divisible() {
        let ds = synthetic(&[("a", 60), ("b", 40)]);
        let plan = make_folds(&ds, 10, 7).unwrap();
        assert_eq!(plan.fold_sizes(), vec![10; 10]);
    }

    #[test]
    fn folds_with_remainder() {
        let ds = synthetic(&[("a", 50), ("b", 30), ("c", 15)]);
        let plan = make_folds(&ds, 10, 7).unwrap();
        let mut sizes = plan.fold_sizes();
        sizes.sort();
        assert_eq!(sizes, vec![9, 9, 9, 9, 9, 10, 10, 10, 10, 10]);
    }

    #[test]
    fn folds_are_stratified_exactly() {
        let ds = synthetic(&[("major", 40), ("minor", 10)]);
        let plan = make_folds(&ds, 10, 3).unwrap();
        for fold in 0..10 {
            let test = plan.test_indices(fold);
            let major = test.iter().filter(|&&i| ds.examples[i].sense == "major").count();
            assert_eq!(major, 4);
            assert_eq!(test.len() - major, 1);
        }
    }

    #[test]
    fn fold_errors() {
        let ds = synthetic(&[("a", 5)]);
        assert!(make_folds(&ds, 1, 0).is_err());
        assert!(make_folds(&ds, 10, 0).is_err());
    }

    #[test]
    fn folds_depend_on_seed_only() {
        let ds = synthetic(&[("a", 33), ("b", 21)]);
        assert_eq!(make_folds(&ds, 10, 5).unwrap(), make_folds(&ds, 10, 5).unwrap());
        assert_ne!(
            make_folds(&ds, 10, 5).unwrap().assignments,
            make_folds(&ds, 10, 6).unwrap().assignments
        );
    }
}

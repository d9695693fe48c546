//! Accuracy, significance and timing tables in CSV or Markdown.
//!
//! Accuracies are rendered in percentage points with one decimal.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WsdError};

use super::cv::{EvalReport, PhaseTimes};
use super::stats::SignificanceResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Md,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(OutputFormat::Md),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected csv or md)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// One row per word followed by the average rows.
    ByWord,
    /// Only the noun/verb/all average rows.
    PosGroups,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PosGroup {
    Nouns,
    Verbs,
    All,
}

impl PosGroup {
    pub fn name(self) -> &'static str {
        match self {
            PosGroup::Nouns => "nouns",
            PosGroup::Verbs => "verbs",
            PosGroup::All => "all",
        }
    }

    fn contains(self, pos: Option<&str>) -> bool {
        let first = pos.and_then(|p| p.chars().next()).map(|c| c.to_ascii_lowercase());
        match self {
            PosGroup::Nouns => first == Some('n'),
            PosGroup::Verbs => first == Some('v'),
            PosGroup::All => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Averaging {
    /// Weighted by each word's example count.
    Micro,
    /// Every word counts once.
    Macro,
}

impl Averaging {
    pub fn name(self) -> &'static str {
        match self {
            Averaging::Micro => "micro",
            Averaging::Macro => "macro",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub word: String,
    pub pos: Option<String>,
    pub examples: usize,
    /// Mean accuracy per config column, in [0, 1].
    pub cells: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AverageRow {
    pub group: PosGroup,
    pub averaging: Averaging,
    pub words: usize,
    pub cells: Vec<Option<f64>>,
}

impl AverageRow {
    pub fn label(&self) -> String {
        format!("avg {} ({})", self.group.name(), self.averaging.name())
    }
}

/// Words by configurations. Rows and columns keep first-insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub configs: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl ResultTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one cell. `examples` is the word's example count, used for micro averages.
    pub fn add(&mut self, report: &EvalReport, pos: Option<&str>, examples: usize) {
        self.set(&report.word, pos, examples, &report.config_id, report.mean_accuracy);
    }

    /// Sets the value of `column` for `word`, creating either as needed.
    pub fn set(&mut self, word: &str, pos: Option<&str>, examples: usize, column: &str, acc: f64) {
        let col = match self.configs.iter().position(|c| c == column) {
            Some(c) => c,
            None => {
                self.configs.push(column.to_string());
                for row in &mut self.rows {
                    row.cells.push(None);
                }
                self.configs.len() - 1
            }
        };
        let row = match self.rows.iter().position(|r| r.word == word) {
            Some(r) => r,
            None => {
                self.rows.push(TableRow {
                    word: word.to_string(),
                    pos: pos.map(str::to_string),
                    examples,
                    cells: vec![None; self.configs.len()],
                });
                self.rows.len() - 1
            }
        };
        self.rows[row].cells[col] = Some(acc);
    }

    /// Micro rows first, then macro; groups without words are skipped
    /// (the `all` group always appears).
    pub fn averages(&self) -> Vec<AverageRow> {
        let mut out = Vec::new();
        for averaging in [Averaging::Micro, Averaging::Macro] {
            for group in [PosGroup::Nouns, PosGroup::Verbs, PosGroup::All] {
                let rows: Vec<&TableRow> = self
                    .rows
                    .iter()
                    .filter(|r| group.contains(r.pos.as_deref()))
                    .collect();
                if rows.is_empty() && group != PosGroup::All {
                    continue;
                }
                let cells = (0..self.configs.len())
                    .map(|c| average(&rows, c, averaging))
                    .collect();
                out.push(AverageRow {
                    group,
                    averaging,
                    words: rows.len(),
                    cells,
                });
            }
        }
        out
    }

    pub fn render(&self, layout: Layout, format: OutputFormat) -> Result<String> {
        let mut header = vec!["word".to_string(), "pos".into(), "examples".into()];
        header.extend(self.configs.iter().cloned());
        let mut lines: Vec<Vec<String>> = Vec::new();
        if layout == Layout::ByWord {
            for r in &self.rows {
                let mut line = vec![
                    r.word.clone(),
                    r.pos.clone().unwrap_or_default(),
                    r.examples.to_string(),
                ];
                line.extend(r.cells.iter().map(|c| pct_cell(*c)));
                lines.push(line);
            }
        }
        for a in self.averages() {
            let examples: usize = self
                .rows
                .iter()
                .filter(|r| a.group.contains(r.pos.as_deref()))
                .map(|r| r.examples)
                .sum();
            let mut line = vec![a.label(), String::new(), examples.to_string()];
            line.extend(a.cells.iter().map(|c| pct_cell(*c)));
            lines.push(line);
        }
        render_rows(&header, &lines, format)
    }
}

fn average(rows: &[&TableRow], col: usize, averaging: Averaging) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for r in rows {
        let acc = r.cells[col]?;
        let w = match averaging {
            Averaging::Micro => r.examples as f64,
            Averaging::Macro => 1.0,
        };
        num += acc * w;
        den += w;
    }
    (den > 0.0).then(|| num / den)
}

/// Accuracy in percentage points, one decimal.
pub fn pct(acc: f64) -> String {
    format!("{:.1}", acc * 100.0)
}

fn pct_cell(acc: Option<f64>) -> String {
    acc.map(pct).unwrap_or_else(|| "-".into())
}

pub fn render_rows(header: &[String], rows: &[Vec<String>], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            let bytes = w.into_inner().map_err(|e| WsdError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        OutputFormat::Md => {
            let mut s = String::new();
            let _ = writeln!(s, "| {} |", header.join(" | "));
            let _ = writeln!(
                s,
                "|{}",
                header
                    .iter()
                    .enumerate()
                    .map(|(i, _)| if i < 2 { "---|" } else { "---:|" })
                    .collect::<String>()
            );
            for r in rows {
                let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
                let _ = writeln!(s, "| {} |", cells.join(" | "));
            }
            Ok(s)
        }
    }
}

/// One line per (word, config, fold), enough to rerun significance tests.
pub fn folds_csv(reports: &[EvalReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["word", "config", "fold", "accuracy", "correct", "test_size"])?;
    for r in reports {
        for (f, acc) in r.fold_accuracies.iter().enumerate() {
            w.write_record([
                r.word.clone(),
                r.config_id.clone(),
                f.to_string(),
                format!("{acc:?}"),
                r.fold_correct[f].to_string(),
                r.fold_sizes[f].to_string(),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| WsdError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Deserialize)]
struct FoldRecord {
    word: String,
    config: String,
    fold: usize,
    accuracy: f64,
}

/// Reads [`folds_csv`] output back as (word, config) → accuracies in fold order.
pub fn read_folds_csv<R: Read>(input: R) -> Result<BTreeMap<(String, String), Vec<f64>>> {
    let mut by_key: BTreeMap<(String, String), BTreeMap<usize, f64>> = BTreeMap::new();
    for rec in csv::Reader::from_reader(input).deserialize() {
        let rec: FoldRecord = rec?;
        let slot = by_key.entry((rec.word.clone(), rec.config.clone())).or_default();
        if slot.insert(rec.fold, rec.accuracy).is_some() {
            return Err(WsdError::Config(format!(
                "fold {} of {} / {} appears twice",
                rec.fold, rec.word, rec.config
            )));
        }
    }
    by_key
        .into_iter()
        .map(|(key, folds)| {
            if folds.keys().copied().ne(0..folds.len()) {
                return Err(WsdError::Config(format!(
                    "folds of {} / {} are not numbered 0..{}",
                    key.0,
                    key.1,
                    folds.len()
                )));
            }
            Ok((key, folds.into_values().collect()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub word: String,
    pub config_a: String,
    pub config_b: String,
    pub mean_a: f64,
    pub mean_b: f64,
    pub result: SignificanceResult,
}

pub fn significance_table(rows: &[Comparison], format: OutputFormat) -> Result<String> {
    let header: Vec<String> = ["word", "config_a", "config_b", "acc_a", "acc_b", "t", "df", "threshold", "significant"]
        .map(String::from)
        .to_vec();
    let lines: Vec<Vec<String>> = rows
        .iter()
        .map(|c| {
            vec![
                c.word.clone(),
                c.config_a.clone(),
                c.config_b.clone(),
                pct(c.mean_a),
                pct(c.mean_b),
                format!("{:.3}", c.result.t_statistic),
                c.result.degrees_of_freedom.to_string(),
                format!("{:.3}", c.result.threshold),
                if c.result.significant { "yes" } else { "no" }.into(),
            ]
        })
        .collect();
    render_rows(&header, &lines, format)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub corpus: String,
    pub config_id: String,
    pub times: PhaseTimes,
    pub mean_accuracy: f64,
}

pub fn timing_table(rows: &[TimingRow], format: OutputFormat) -> Result<String> {
    let header: Vec<String> = ["corpus", "config", "train_s", "classify_s", "total_s", "accuracy"]
        .map(String::from)
        .to_vec();
    let lines: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.corpus.clone(),
                r.config_id.clone(),
                format!("{:.3}", r.times.train.as_secs_f64()),
                format!("{:.3}", r.times.classify.as_secs_f64()),
                format!("{:.3}", r.times.total().as_secs_f64()),
                pct(r.mean_accuracy),
            ]
        })
        .collect();
    render_rows(&header, &lines, format)
}

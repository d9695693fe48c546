//! Argument definitions and command implementations for the `wsd` binary.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use crate::corpus::{make_folds, most_frequent_sense, parse_corpus, FoldPlan, WordDataset};
use crate::error::{Result, WsdError};
use crate::evaluation::report::{
    folds_csv, read_folds_csv, significance_table, timing_table, Comparison, Layout, TimingRow,
};
use crate::evaluation::stats::threshold_for_folds;
use crate::evaluation::{
    cross_validate, paired_t_test, sweep_k, time_config, ClassifierConfig, ClassifierKind,
    EvalReport, InnerCvK, OutputFormat, PhaseTimes, ResultTable, DEFAULT_KS,
};
use crate::features::FeatureSet;
use crate::learners::Metric;
use crate::synth::{generate_corpus_text, GeneratorSpec, Signal};

#[derive(Debug, Parser)]
#[command(name = "wsd", version, about = "Word sense disambiguation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cross-validate classifier configurations and print an accuracy table.
    Run(ExperimentArgs),
    /// Accuracy for every k in the sweep list, with the post-hoc best k.
    SweepK(ExperimentArgs),
    /// Paired t-test between two configurations on each corpus.
    Compare(CompareArgs),
    /// Wall-clock training and classification time per configuration.
    Time(ExperimentArgs),
    /// Write a synthetic corpus.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutArg {
    /// A row per word plus noun/verb/all averages.
    Words,
    /// Only the noun/verb/all averages.
    Pos,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    /// Corpus files, one target word each.
    #[arg(long, num_args = 1.., value_name = "PATH")]
    pub corpus: Vec<PathBuf>,
    #[arg(long, value_name = "a|b-binary|b-positive")]
    pub features: Option<FeatureSet>,
    #[arg(long, value_name = "mfs|nb|pnb|eb|peb")]
    pub classifier: Option<ClassifierKind>,
    #[arg(long, value_name = "hamming|mvdm")]
    pub metric: Option<Metric>,
    #[arg(long, conflicts_with = "sweep")]
    pub k: Option<usize>,
    /// Pick k post hoc from the sweep list (optimistic).
    #[arg(long)]
    pub sweep: bool,
    /// Pick k by cross-validation inside each training fold.
    #[arg(long, conflicts_with = "sweep")]
    pub inner_cv: bool,
    /// Candidate k values for --sweep, --inner-cv and sweep-k.
    #[arg(long, value_delimiter = ',', value_name = "K,...")]
    pub ks: Option<Vec<usize>>,
    #[arg(long)]
    pub example_weighting: bool,
    #[arg(long)]
    pub attribute_weighting: bool,
    /// Full configuration id such as `EB_h,7,e@a`; repeat for a grid.
    #[arg(long = "cell", value_name = "ID")]
    pub cells: Vec<String>,
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub format: Option<OutputFormat>,
    #[arg(long, value_enum)]
    pub layout: Option<LayoutArg>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write per-fold accuracies as CSV (input for `compare --from`).
    #[arg(long, value_name = "PATH")]
    pub folds_out: Option<PathBuf>,
    /// TOML experiment file; command-line flags take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Upper bound on worker threads.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// First configuration id, e.g. `NB@a`.
    pub first: String,
    /// Second configuration id.
    pub second: String,
    /// Read fold accuracies from a CSV written by `--folds-out` instead of running.
    #[arg(long, value_name = "PATH")]
    pub from: Option<PathBuf>,
    /// Significance threshold on |t|; 2.262 for 10 folds by default.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub experiment: ExperimentArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_name = "collocational|broad-context|length-confounded")]
    pub signal: Option<Signal>,
    #[arg(long)]
    pub senses: Option<usize>,
    #[arg(long)]
    pub examples: Option<usize>,
    #[arg(long)]
    pub vocab: Option<usize>,
    #[arg(long)]
    pub noise: Option<f64>,
    /// Share of the most frequent sense.
    #[arg(long)]
    pub majority: Option<f64>,
    #[arg(long)]
    pub lemma: Option<String>,
    #[arg(long)]
    pub topic_pool: Option<usize>,
    #[arg(long)]
    pub topic_per_sentence: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// TOML generator spec; flags take precedence.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Experiment file contents. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentFile {
    pub corpus: Vec<PathBuf>,
    pub features: Option<String>,
    pub classifier: Option<String>,
    pub metric: Option<String>,
    pub k: Option<usize>,
    pub sweep: Option<bool>,
    pub inner_cv: Option<bool>,
    pub ks: Option<Vec<usize>>,
    pub example_weighting: Option<bool>,
    pub attribute_weighting: Option<bool>,
    pub cells: Vec<String>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub layout: Option<LayoutArg>,
    pub workers: Option<usize>,
}

impl ExperimentFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut file: ExperimentFile = toml::from_str(&text)
            .map_err(|e| WsdError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in &mut file.corpus {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(file)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KSelection {
    Fixed,
    /// Best k on the evaluation folds themselves.
    Sweep(Vec<usize>),
    /// Best k from an inner cross-validation on each training fold.
    InnerCv(Vec<usize>),
}

/// Fully resolved experiment settings.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub corpus: Vec<PathBuf>,
    pub cells: Vec<ClassifierConfig>,
    pub selection: KSelection,
    pub folds: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub layout: Layout,
    pub out: Option<PathBuf>,
    pub folds_out: Option<PathBuf>,
    pub workers: Option<usize>,
}

fn parse_opt<T: std::str::FromStr<Err = String>>(v: &Option<String>) -> Result<Option<T>> {
    v.as_deref()
        .map(|s| s.parse().map_err(WsdError::Config))
        .transpose()
}

impl ExperimentConfig {
    /// Merges flags over the optional experiment file. `need_cells` is false
    /// for commands that name their configurations elsewhere.
    pub fn resolve(args: &ExperimentArgs, need_cells: bool) -> Result<Self> {
        let file = match &args.config {
            Some(p) => ExperimentFile::load(p)?,
            None => ExperimentFile::default(),
        };
        let features = args.features.or(parse_opt(&file.features)?);
        let metric = args.metric.or(parse_opt(&file.metric)?);
        let k = args.k.or(file.k);
        let ew = args.example_weighting || file.example_weighting.unwrap_or(false);
        let aw = args.attribute_weighting || file.attribute_weighting.unwrap_or(false);
        let override_eb = |mut cfg: ClassifierConfig| {
            if let Some(f) = args.features {
                cfg.features = f;
            }
            if cfg.kind.is_exemplar() {
                if let Some(m) = args.metric {
                    cfg.eb.metric = m;
                }
                if let Some(k) = args.k {
                    cfg.eb.k = k;
                }
                cfg.eb.example_weighting |= args.example_weighting;
                cfg.eb.attribute_weighting |= args.attribute_weighting;
            }
            cfg
        };
        let from_fields = |kind: ClassifierKind| {
            let mut cfg = ClassifierConfig::new(kind, features.unwrap_or(kind.default_features()));
            cfg.eb.metric = metric.unwrap_or(Metric::Hamming);
            cfg.eb.k = k.unwrap_or(1);
            cfg.eb.example_weighting = ew;
            cfg.eb.attribute_weighting = aw;
            cfg
        };

        let mut cells = Vec::new();
        if !args.cells.is_empty() || args.classifier.is_some() {
            for id in &args.cells {
                cells.push(id.parse::<ClassifierConfig>()?);
            }
            if let Some(kind) = args.classifier {
                cells.push(from_fields(kind));
            }
        } else if !file.cells.is_empty() {
            for id in &file.cells {
                cells.push(override_eb(id.parse::<ClassifierConfig>()?));
            }
        } else if let Some(kind) = parse_opt::<ClassifierKind>(&file.classifier)? {
            cells.push(from_fields(kind));
        }
        if need_cells && cells.is_empty() {
            return Err(WsdError::Config(
                "no classifier given; use --classifier, --cell or a config file".into(),
            ));
        }
        for c in &cells {
            c.validate()?;
        }

        let ks = args.ks.clone().or(file.ks).unwrap_or(DEFAULT_KS.to_vec());
        if ks.is_empty() || ks.contains(&0) {
            return Err(WsdError::Config("k candidates must be positive".into()));
        }
        let sweep = args.sweep || (args.k.is_none() && file.sweep.unwrap_or(false));
        let inner = args.inner_cv || (args.k.is_none() && file.inner_cv.unwrap_or(false));
        let selection = match (sweep, inner) {
            (true, true) => {
                return Err(WsdError::Config("choose either sweep or inner-cv".into()))
            }
            (true, false) => KSelection::Sweep(ks),
            (false, true) => KSelection::InnerCv(ks),
            (false, false) => KSelection::Fixed,
        };

        let format = match args.format {
            Some(f) => f,
            None => parse_opt(&file.format)?.unwrap_or_default(),
        };
        let layout = match args.layout.or(file.layout).unwrap_or(LayoutArg::Words) {
            LayoutArg::Words => Layout::ByWord,
            LayoutArg::Pos => Layout::PosGroups,
        };
        let folds = args.folds.or(file.folds).unwrap_or(10);
        if folds < 2 {
            return Err(WsdError::Config("need at least 2 folds".into()));
        }
        let workers = args.workers.or(file.workers);
        if workers == Some(0) {
            return Err(WsdError::Config("workers must be at least 1".into()));
        }
        Ok(ExperimentConfig {
            corpus: if args.corpus.is_empty() {
                file.corpus
            } else {
                args.corpus.clone()
            },
            cells,
            selection,
            folds,
            seed: args.seed.or(file.seed).unwrap_or(42),
            format,
            layout,
            out: args.out.clone(),
            folds_out: args.folds_out.clone(),
            workers,
        })
    }

    pub fn load_corpora(&self) -> Result<Vec<WordDataset>> {
        if self.corpus.is_empty() {
            return Err(WsdError::Config("no corpus given; use --corpus".into()));
        }
        self.corpus.iter().map(|p| load_corpus(p)).collect()
    }

    fn with_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.workers {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| WsdError::Config(e.to_string()))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Reads one corpus file. A file without a `@word` header is named after its stem.
pub fn load_corpus(path: &Path) -> Result<WordDataset> {
    let wrap = |e: WsdError| WsdError::Corpus {
        path: path.display().to_string(),
        source: Box::new(e),
    };
    let file = File::open(path).map_err(|e| wrap(e.into()))?;
    let mut ds = parse_corpus(BufReader::new(file)).map_err(wrap)?;
    if ds.target_lemma.is_empty() {
        ds.target_lemma = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
    }
    if ds.is_empty() {
        return Err(wrap(WsdError::EmptyDataset));
    }
    Ok(ds)
}

/// Column id for a cell whose k is chosen per word.
fn selected_k_id(cfg: &ClassifierConfig, marker: &str) -> String {
    cfg.with_k(0).id().replacen(",0", &format!(",{marker}"), 1)
}

/// One evaluated (word, configuration) cell.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub word: usize,
    pub cell: usize,
    pub report: EvalReport,
    /// Set when k was picked post hoc.
    pub best_k: Option<usize>,
}

/// Name of the table column holding each word's majority-sense share.
pub const DATA_MFS_COLUMN: &str = "MFS";

#[derive(Debug, Clone)]
pub struct WordInfo {
    pub name: String,
    pub pos: Option<String>,
    pub examples: usize,
    /// Share of the most frequent sense over the whole dataset.
    pub mfs: f64,
}

#[derive(Debug, Clone)]
pub struct GridResult {
    pub words: Vec<WordInfo>,
    pub results: Vec<CellResult>,
    pub optimistic: bool,
}

impl GridResult {
    /// Words by configurations, led by the data-determined `MFS` column.
    pub fn table(&self) -> ResultTable {
        let mut t = ResultTable::new();
        for w in &self.words {
            t.set(&w.name, w.pos.as_deref(), w.examples, DATA_MFS_COLUMN, w.mfs);
        }
        let mut ordered: Vec<&CellResult> = self.results.iter().collect();
        ordered.sort_by_key(|r| (r.word, r.cell));
        for r in ordered {
            let w = &self.words[r.word];
            t.add(&r.report, w.pos.as_deref(), w.examples);
        }
        t
    }

    pub fn reports(&self) -> Vec<EvalReport> {
        self.results.iter().map(|r| r.report.clone()).collect()
    }
}

/// Cross-validates every configuration on every dataset. All configurations
/// of a word share one fold plan.
pub fn run_grid(
    datasets: &[WordDataset],
    cells: &[ClassifierConfig],
    selection: &KSelection,
    fold_count: usize,
    seed: u64,
) -> Result<GridResult> {
    let plans: Vec<FoldPlan> = datasets
        .iter()
        .map(|ds| make_folds(ds, fold_count, seed))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..datasets.len())
        .flat_map(|w| (0..cells.len()).map(move |c| (w, c)))
        .collect();
    let names = unique_names(datasets);
    let mut results = jobs
        .par_iter()
        .map(|&(w, c)| {
            let ds = &datasets[w];
            let cfg = &cells[c];
            let folds = &plans[w];
            let (report, best_k) = match selection {
                KSelection::Sweep(ks) if cfg.kind.is_exemplar() => {
                    let s = sweep_k(ds, folds, cfg, ks)?;
                    let mut report = s.best().clone();
                    report.config_id = format!("{} (optimistic)", selected_k_id(cfg, "k*"));
                    (report, Some(s.best_k))
                }
                KSelection::InnerCv(ks) if cfg.kind.is_exemplar() => {
                    let inner = InnerCvK {
                        base: *cfg,
                        ks: ks.clone(),
                        inner_folds: fold_count,
                        seed,
                    };
                    (cross_validate(ds, folds, &inner)?, None)
                }
                _ => (cross_validate(ds, folds, cfg)?, None),
            };
            let report = EvalReport {
                word: names[w].clone(),
                ..report
            };
            Ok(CellResult {
                word: w,
                cell: c,
                report,
                best_k,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    results.sort_by_key(|r| (r.word, r.cell));
    Ok(GridResult {
        words: datasets
            .iter()
            .zip(names)
            .map(|(d, name)| {
                Ok(WordInfo {
                    name,
                    pos: d.target_pos.clone(),
                    examples: d.len(),
                    mfs: most_frequent_sense(d)?.1,
                })
            })
            .collect::<Result<_>>()?,
        results,
        optimistic: matches!(selection, KSelection::Sweep(_)) && cells.iter().any(|c| c.kind.is_exemplar()),
    })
}

/// Target lemmas, numbered `lemma#1`, `lemma#2`, ... when several corpora share one.
fn unique_names(datasets: &[WordDataset]) -> Vec<String> {
    let mut total: BTreeMap<&str, usize> = BTreeMap::new();
    for d in datasets {
        *total.entry(&d.target_lemma).or_insert(0) += 1;
    }
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    datasets
        .iter()
        .map(|d| {
            let lemma = d.target_lemma.as_str();
            if total[lemma] == 1 {
                return lemma.to_string();
            }
            let n = seen.entry(lemma).or_insert(0);
            *n += 1;
            format!("{lemma}#{n}")
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<String> {
    if let Some(p) = out {
        fs::write(p, text)?;
    }
    Ok(text.to_string())
}

const OPTIMISTIC_NOTE: &str =
    "k marked k* was chosen on the evaluation folds themselves; accuracies are optimistic.";

pub fn cmd_run(args: &ExperimentArgs) -> Result<String> {
    let cfg = ExperimentConfig::resolve(args, true)?;
    let datasets = cfg.load_corpora()?;
    let grid = cfg.with_pool(|| run_grid(&datasets, &cfg.cells, &cfg.selection, cfg.folds, cfg.seed))??;
    if let Some(p) = &cfg.folds_out {
        fs::write(p, folds_csv(&grid.reports())?)?;
    }
    let mut text = grid.table().render(cfg.layout, cfg.format)?;
    if grid.optimistic {
        let best: Vec<String> = grid
            .results
            .iter()
            .filter_map(|r| {
                r.best_k
                    .map(|k| format!("{} {}: k={k}", grid.words[r.word].name, cfg.cells[r.cell].label()))
            })
            .collect();
        match cfg.format {
            OutputFormat::Md => {
                text.push_str(&format!("\n{OPTIMISTIC_NOTE}\n"));
                for b in best {
                    text.push_str(&format!("- {b}\n"));
                }
            }
            OutputFormat::Csv => {
                eprintln!("{OPTIMISTIC_NOTE}");
                for b in best {
                    eprintln!("  {b}");
                }
            }
        }
    }
    emit(cfg.out.as_deref(), &text)
}

pub fn cmd_sweep_k(args: &ExperimentArgs) -> Result<String> {
    let cfg = ExperimentConfig::resolve(args, true)?;
    let ks = match &cfg.selection {
        KSelection::Sweep(ks) | KSelection::InnerCv(ks) => ks.clone(),
        KSelection::Fixed => args.ks.clone().unwrap_or(DEFAULT_KS.to_vec()),
    };
    let cells: Vec<ClassifierConfig> = cfg.cells.iter().copied().filter(|c| c.kind.is_exemplar()).collect();
    if cells.is_empty() {
        return Err(WsdError::Config("sweep-k needs an eb or peb configuration".into()));
    }
    let datasets = cfg.load_corpora()?;
    let rows = cfg.with_pool(|| {
        datasets
            .iter()
            .flat_map(|ds| cells.iter().map(move |c| (ds, c)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(ds, c)| {
                let folds = make_folds(ds, cfg.folds, cfg.seed)?;
                Ok((ds.target_lemma.clone(), *c, sweep_k(ds, &folds, c, &ks)?))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    if let Some(p) = &cfg.folds_out {
        let reports: Vec<EvalReport> = rows
            .iter()
            .flat_map(|(_, _, s)| s.reports.iter().map(|(_, r)| r.clone()))
            .collect();
        fs::write(p, folds_csv(&reports)?)?;
    }
    let mut header = vec!["word".to_string(), "config".into()];
    header.extend(ks.iter().map(|k| format!("k={k}")));
    header.push("best_k".into());
    let lines: Vec<Vec<String>> = rows
        .iter()
        .map(|(word, c, s)| {
            let mut line = vec![word.clone(), selected_k_id(c, "k")];
            line.extend(s.reports.iter().map(|(_, r)| crate::evaluation::report::pct(r.mean_accuracy)));
            line.push(s.best_k.to_string());
            line
        })
        .collect();
    let mut text = crate::evaluation::report::render_rows(&header, &lines, cfg.format)?;
    match cfg.format {
        OutputFormat::Md => text.push_str("\nbest_k is selected on the evaluation folds; its accuracy is optimistic.\n"),
        OutputFormat::Csv => eprintln!("best_k is selected on the evaluation folds; its accuracy is optimistic."),
    }
    emit(cfg.out.as_deref(), &text)
}

pub fn cmd_compare(args: &CompareArgs) -> Result<String> {
    let cfg = ExperimentConfig::resolve(&args.experiment, false)?;
    let mut pairs: Vec<(String, EvalReport, EvalReport)> = Vec::new();
    match &args.from {
        Some(path) => {
            let folds = read_folds_csv(File::open(path)?)?;
            let words: Vec<&String> = folds.keys().map(|(w, _)| w).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            for w in words {
                let get = |c: &str| {
                    folds.get(&(w.clone(), c.to_string())).map(|accs| stored_report(w, c, accs))
                };
                if let (Some(a), Some(b)) = (get(&args.first), get(&args.second)) {
                    pairs.push((w.clone(), a, b));
                }
            }
            if pairs.is_empty() {
                return Err(WsdError::Config(format!(
                    "{} has no word with both {} and {}",
                    path.display(),
                    args.first,
                    args.second
                )));
            }
        }
        None => {
            let a: ClassifierConfig = args.first.parse()?;
            let b: ClassifierConfig = args.second.parse()?;
            let datasets = cfg.load_corpora()?;
            let grid = cfg.with_pool(|| run_grid(&datasets, &[a, b], &cfg.selection, cfg.folds, cfg.seed))??;
            if let Some(p) = &cfg.folds_out {
                fs::write(p, folds_csv(&grid.reports())?)?;
            }
            for (w, info) in grid.words.iter().enumerate() {
                let find = |c: usize| {
                    grid.results
                        .iter()
                        .find(|r| r.word == w && r.cell == c)
                        .map(|r| r.report.clone())
                        .expect("every cell evaluated")
                };
                pairs.push((info.name.clone(), find(0), find(1)));
            }
        }
    }
    let rows = pairs
        .into_iter()
        .map(|(word, a, b)| {
            let threshold = match args.threshold {
                Some(t) => t,
                None => threshold_for_folds(a.fold_accuracies.len())?,
            };
            Ok(Comparison {
                result: paired_t_test(&a.fold_accuracies, &b.fold_accuracies, threshold)?,
                word,
                config_a: a.config_id,
                config_b: b.config_id,
                mean_a: a.mean_accuracy,
                mean_b: b.mean_accuracy,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(cfg.out.as_deref(), &significance_table(&rows, cfg.format)?)
}

fn stored_report(word: &str, config: &str, accs: &[f64]) -> EvalReport {
    EvalReport {
        word: word.to_string(),
        config_id: config.to_string(),
        fold_accuracies: accs.to_vec(),
        fold_correct: Vec::new(),
        fold_sizes: Vec::new(),
        mean_accuracy: accs.iter().sum::<f64>() / accs.len() as f64,
        train_time: Default::default(),
        classify_time: Default::default(),
    }
}

pub fn cmd_time(args: &ExperimentArgs) -> Result<String> {
    let cfg = ExperimentConfig::resolve(args, true)?;
    let datasets = cfg.load_corpora()?;
    let mut rows = Vec::new();
    let mut totals: BTreeMap<usize, (PhaseTimes, f64, usize)> = BTreeMap::new();
    for ds in &datasets {
        let folds = make_folds(ds, cfg.folds, cfg.seed)?;
        for (c, cell) in cfg.cells.iter().enumerate() {
            let (times, report) = time_config(ds, &folds, cell)?;
            let t = totals.entry(c).or_default();
            t.0.train += times.train;
            t.0.classify += times.classify;
            t.1 += report.mean_accuracy * ds.len() as f64;
            t.2 += ds.len();
            rows.push(TimingRow {
                corpus: ds.target_lemma.clone(),
                config_id: cell.id(),
                times,
                mean_accuracy: report.mean_accuracy,
            });
        }
    }
    if datasets.len() > 1 {
        for (c, (times, acc, n)) in totals {
            rows.push(TimingRow {
                corpus: "all".into(),
                config_id: cfg.cells[c].id(),
                times,
                mean_accuracy: acc / n as f64,
            });
        }
    }
    emit(cfg.out.as_deref(), &timing_table(&rows, cfg.format)?)
}

pub fn cmd_gen(args: &GenArgs) -> Result<String> {
    let mut spec = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p)?;
            GeneratorSpec::from_toml(&text).map_err(|e| match e {
                WsdError::Generator(m) => WsdError::Generator(format!("{}: {m}", p.display())),
                other => other,
            })?
        }
        None => GeneratorSpec::default(),
    };
    if let Some(v) = args.signal {
        spec.signal = v;
    }
    if let Some(v) = args.senses {
        spec.senses = v;
    }
    if let Some(v) = args.examples {
        spec.examples = v;
    }
    if let Some(v) = args.vocab {
        spec.vocab = v;
    }
    if let Some(v) = args.noise {
        spec.noise = v;
    }
    if args.majority.is_some() {
        spec.majority = args.majority;
    }
    if let Some(v) = &args.lemma {
        spec.lemma = v.clone();
    }
    if let Some(v) = args.topic_pool {
        spec.topic_pool = v;
    }
    if let Some(v) = args.topic_per_sentence {
        spec.topic_per_sentence = v;
    }
    let text = generate_corpus_text(&spec, args.seed)?;
    emit(args.out.as_deref(), &text)
}

/// Runs a parsed command. The returned text is what goes to stdout when
/// no `--out` file is given.
pub fn execute(cli: &Cli) -> Result<(String, bool)> {
    let (text, to_file) = match &cli.command {
        Command::Run(a) => (cmd_run(a)?, a.out.is_some()),
        Command::SweepK(a) => (cmd_sweep_k(a)?, a.out.is_some()),
        Command::Compare(a) => (cmd_compare(a)?, a.experiment.out.is_some()),
        Command::Time(a) => (cmd_time(a)?, a.out.is_some()),
        Command::Gen(a) => (cmd_gen(a)?, a.out.is_some()),
    };
    Ok((text, to_file))
}

//! Cross-validation, k sweeps and per-phase timing.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::corpus::{count_senses, inventory_order, Example, FoldPlan, WordDataset};
use crate::error::{Result, WsdError};

use super::classifier::{Classifier, ClassifierConfig};

/// Sweep list used when none is given.
pub const DEFAULT_KS: [usize; 8] = [1, 3, 5, 7, 10, 15, 20, 25];

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub word: String,
    pub config_id: String,
    pub fold_accuracies: Vec<f64>,
    pub fold_correct: Vec<usize>,
    pub fold_sizes: Vec<usize>,
    /// Arithmetic mean of `fold_accuracies`.
    pub mean_accuracy: f64,
    pub train_time: Duration,
    pub classify_time: Duration,
}

impl EvalReport {
    pub fn fold_count(&self) -> usize {
        self.fold_accuracies.len()
    }

    /// Correct answers over all folds.
    pub fn total_correct(&self) -> usize {
        self.fold_correct.iter().sum()
    }

    pub fn total_tested(&self) -> usize {
        self.fold_sizes.iter().sum()
    }

    /// Same report with the timing fields zeroed, for determinism checks.
    pub fn without_timing(&self) -> EvalReport {
        EvalReport {
            train_time: Duration::ZERO,
            classify_time: Duration::ZERO,
            ..self.clone()
        }
    }
}

struct FoldOutcome {
    correct: usize,
    tested: usize,
    train: Duration,
    classify: Duration,
}

fn run_fold(
    dataset: &WordDataset,
    folds: &FoldPlan,
    fold: usize,
    classifier: &dyn Classifier,
) -> Result<FoldOutcome> {
    let wrap = |e: WsdError| WsdError::Fold {
        fold,
        source: Box::new(e),
    };
    let training: Vec<&Example> = folds
        .train_indices(fold)
        .into_iter()
        .map(|i| &dataset.examples[i])
        .collect();
    let test = folds.test_indices(fold);

    // Tie-break order from the training part only, so test labels cannot leak in.
    let inventory = inventory_order(&count_senses(training.iter().map(|e| e.sense.as_str())));

    let start = Instant::now();
    let predictor = classifier.fit(&training, &inventory).map_err(wrap)?;
    let train = start.elapsed();
    drop(training);

    let start = Instant::now();
    let mut correct = 0;
    for &i in &test {
        let ex = &dataset.examples[i];
        if predictor.predict(ex).map_err(wrap)? == ex.sense {
            correct += 1;
        }
    }
    let classify = start.elapsed();
    Ok(FoldOutcome {
        correct,
        tested: test.len(),
        train,
        classify,
    })
}

fn check_plan(dataset: &WordDataset, folds: &FoldPlan) -> Result<()> {
    if folds.assignments.len() != dataset.len() {
        return Err(WsdError::Folds(format!(
            "fold plan covers {} examples but the dataset has {}",
            folds.assignments.len(),
            dataset.len()
        )));
    }
    if let Some(empty) = folds.fold_sizes().iter().position(|&n| n == 0) {
        return Err(WsdError::Folds(format!("fold {empty} is empty")));
    }
    Ok(())
}

fn assemble(
    dataset: &WordDataset,
    classifier: &dyn Classifier,
    outcomes: Vec<FoldOutcome>,
) -> EvalReport {
    let fold_accuracies: Vec<f64> = outcomes
        .iter()
        .map(|o| o.correct as f64 / o.tested as f64)
        .collect();
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64;
    EvalReport {
        word: dataset.target_lemma.clone(),
        config_id: classifier.id(),
        fold_correct: outcomes.iter().map(|o| o.correct).collect(),
        fold_sizes: outcomes.iter().map(|o| o.tested).collect(),
        mean_accuracy,
        train_time: outcomes.iter().map(|o| o.train).sum(),
        classify_time: outcomes.iter().map(|o| o.classify).sum(),
        fold_accuracies,
    }
}

/// Trains on every fold but one and tests on the held-out fold, for each
/// fold. Folds run in parallel on the rayon pool.
pub fn cross_validate(
    dataset: &WordDataset,
    folds: &FoldPlan,
    classifier: &dyn Classifier,
) -> Result<EvalReport> {
    check_plan(dataset, folds)?;
    let outcomes = (0..folds.fold_count)
        .into_par_iter()
        .map(|f| run_fold(dataset, folds, f, classifier))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(dataset, classifier, outcomes))
}

/// Like [`cross_validate`] but one fold at a time on the calling thread.
pub fn cross_validate_sequential(
    dataset: &WordDataset,
    folds: &FoldPlan,
    classifier: &dyn Classifier,
) -> Result<EvalReport> {
    check_plan(dataset, folds)?;
    let outcomes = (0..folds.fold_count)
        .map(|f| run_fold(dataset, folds, f, classifier))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(dataset, classifier, outcomes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhaseTimes {
    pub train: Duration,
    pub classify: Duration,
}

impl PhaseTimes {
    pub fn total(&self) -> Duration {
        self.train + self.classify
    }
}

/// Wall-clock train and classify time summed over folds. Runs sequentially
/// so configurations timed one after another are comparable.
pub fn time_config(
    dataset: &WordDataset,
    folds: &FoldPlan,
    classifier: &dyn Classifier,
) -> Result<(PhaseTimes, EvalReport)> {
    let report = cross_validate_sequential(dataset, folds, classifier)?;
    let times = PhaseTimes {
        train: report.train_time,
        classify: report.classify_time,
    };
    Ok((times, report))
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub best_k: usize,
    pub reports: Vec<(usize, EvalReport)>,
    /// Always true: k was chosen on the same folds it is reported on.
    pub optimistic: bool,
}

impl SweepResult {
    pub fn best(&self) -> &EvalReport {
        &self
            .reports
            .iter()
            .find(|(k, _)| *k == self.best_k)
            .expect("best k is one of the swept values")
            .1
    }
}

/// Cross-validates `base` once per k. The best k has the highest mean
/// accuracy; ties go to the smaller k.
pub fn sweep_k(
    dataset: &WordDataset,
    folds: &FoldPlan,
    base: &ClassifierConfig,
    ks: &[usize],
) -> Result<SweepResult> {
    if ks.is_empty() {
        return Err(WsdError::Config("k sweep needs at least one k".into()));
    }
    if !base.kind.is_exemplar() {
        return Err(WsdError::Config(format!(
            "k sweep applies to eb/peb, not {}",
            base.label()
        )));
    }
    let mut reports = Vec::with_capacity(ks.len());
    for &k in ks {
        let cfg = base.with_k(k);
        reports.push((k, cross_validate(dataset, folds, &cfg)?));
    }
    let mut best: Option<(usize, f64)> = None;
    for (k, r) in &reports {
        let better = match best {
            None => true,
            Some((bk, acc)) => r.mean_accuracy > acc || (r.mean_accuracy == acc && *k < bk),
        };
        if better {
            best = Some((*k, r.mean_accuracy));
        }
    }
    Ok(SweepResult {
        best_k: best.expect("ks non-empty").0,
        reports,
        optimistic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    use crate::corpus::{make_folds, parse_corpus_str};
    use crate::evaluation::classifier::Predictor;
    use crate::features::FeatureSet;

    fn two_sense(major: usize, minor: usize) -> WordDataset {
        let mut text = String::new();
        for i in 0..major + minor {
            let sense = if i < major { "s1" } else { "s2" };
            text.push_str(&format!("{sense}\t1\tthe/DT w/NN id{i}/NN\n"));
        }
        parse_corpus_str(&text).unwrap()
    }

    /// Memorizes labels keyed by the third token, which is unique.
    struct Memorizer(HashMap<String, String>);
    struct Lookup(HashMap<String, String>);
    struct Failing;

    impl Predictor for Lookup {
        fn predict(&self, ex: &Example) -> Result<String> {
            Ok(self.0.get(&ex.tokens[2].form).cloned().unwrap_or_default())
        }
    }

    impl Classifier for Memorizer {
        fn id(&self) -> String {
            "oracle".into()
        }
        fn fit(&self, _: &[&Example], _: &[String]) -> Result<Box<dyn Predictor>> {
            Ok(Box::new(Lookup(self.0.clone())))
        }
    }

    impl Classifier for Failing {
        fn id(&self) -> String {
            "failing".into()
        }
        fn fit(&self, _: &[&Example], _: &[String]) -> Result<Box<dyn Predictor>> {
            Err(WsdError::Config("cannot train".into()))
        }
    }

    #[test]
    fn perfect_classifier_scores_one_everywhere() {
        let ds = two_sense(30, 20);
        let table = ds
            .examples
            .iter()
            .map(|e| (e.tokens[2].form.clone(), e.sense.clone()))
            .collect();
        let folds = make_folds(&ds, 10, 1).unwrap();
        let r = cross_validate(&ds, &folds, &Memorizer(table)).unwrap();
        assert!(r.fold_accuracies.iter().all(|&a| a == 1.0));
        assert_eq!(r.mean_accuracy, 1.0);
    }

    #[test]
    fn errors_carry_the_fold_index() {
        let ds = two_sense(30, 20);
        let folds = make_folds(&ds, 10, 1).unwrap();
        let err = cross_validate_sequential(&ds, &folds, &Failing).unwrap_err();
        assert!(matches!(err, WsdError::Fold { fold: 0, .. }), "{err:?}");
    }

    #[test]
    fn mfs_on_sixty_forty() {
        let ds = two_sense(60, 40);
        let folds = make_folds(&ds, 10, 42).unwrap();
        let r = cross_validate(&ds, &folds, &ClassifierConfig::mfs()).unwrap();
        assert!((r.mean_accuracy - 0.60).abs() <= 0.03, "{}", r.mean_accuracy);
        let mean = r.fold_accuracies.iter().sum::<f64>() / 10.0;
        assert!((mean - r.mean_accuracy).abs() <= 1e-12);
        assert_eq!(r.fold_count(), 10);
    }

    #[test]
    fn reports_are_deterministic() {
        let ds = two_sense(25, 25);
        let folds = make_folds(&ds, 5, 3).unwrap();
        let cfg = ClassifierConfig::nb(FeatureSet::A);
        let a = cross_validate(&ds, &folds, &cfg).unwrap();
        let b = cross_validate(&ds, &folds, &cfg).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
    }

    #[test]
    fn sweep_single_candidate_and_ties() {
        let ds = two_sense(30, 20);
        let folds = make_folds(&ds, 10, 1).unwrap();
        let base: ClassifierConfig = "EB_h,1@a".parse().unwrap();
        let s = sweep_k(&ds, &folds, &base, &[1]).unwrap();
        assert_eq!(s.best_k, 1);
        assert!(s.optimistic);
        // Every test example has a unique id and otherwise identical
        // attributes, so every k votes over the same tie and scores alike.
        let s = sweep_k(&ds, &folds, &base, &[5, 3]).unwrap();
        assert_eq!(s.reports[0].1.mean_accuracy, s.reports[1].1.mean_accuracy);
        assert_eq!(s.best_k, 3);
        assert!(sweep_k(&ds, &folds, &base, &[]).is_err());
    }

    #[test]
    fn default_sweep_list() {
        assert_eq!(DEFAULT_KS, [1, 3, 5, 7, 10, 15, 20, 25]);
    }

    #[test]
    fn timing_is_nonnegative() {
        let ds = two_sense(30, 20);
        let folds = make_folds(&ds, 10, 1).unwrap();
        let (t, _) = time_config(&ds, &folds, &ClassifierConfig::nb(FeatureSet::A)).unwrap();
        assert!(t.total() >= t.train);
    }
}

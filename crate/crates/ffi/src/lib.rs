//! C interface to `wsd-core`.
//!
//! Every fallible function returns a [`WsdStatus`]. On failure the message is
//! kept per thread and can be read with [`wsd_last_error`]. Datasets and
//! trained models are opaque handles that must be released with their
//! `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use wsd_core::corpus::{count_senses, inventory_order, make_folds, parse_corpus_str, Example, Token, WordDataset};
use wsd_core::evaluation::stats::threshold_for_folds;
use wsd_core::evaluation::{cross_validate, paired_t_test, Classifier, ClassifierConfig, Predictor};
use wsd_core::synth::{generate, GeneratorSpec};
use wsd_core::WsdError;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed corpus or sentence text.
    Parse = 3,
    /// Invalid configuration id, classifier combination or generator spec.
    Config = 4,
    /// Empty data or a fold plan that does not fit the data.
    Data = 5,
    Statistics = 6,
    Io = 7,
    /// A buffer passed in is too small.
    BufferTooSmall = 8,
    Internal = 9,
}

/// Sense-tagged examples of one target word.
pub struct WsdDataset(WordDataset);

/// A classifier trained on a dataset.
pub struct WsdModel(Box<dyn Predictor>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("NULs were removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &WsdError) -> WsdStatus {
    match e {
        WsdError::Parse { .. } | WsdError::Corpus { .. } => WsdStatus::Parse,
        WsdError::Config(_) | WsdError::Generator(_) | WsdError::SchemaMismatch { .. } => WsdStatus::Config,
        WsdError::EmptyDataset | WsdError::EmptyTraining | WsdError::Folds(_) => WsdStatus::Data,
        WsdError::Statistics(_) => WsdStatus::Statistics,
        WsdError::Io(_) | WsdError::Csv(_) => WsdStatus::Io,
        WsdError::Fold { source, .. } => status_of(source),
        WsdError::MissingMvdmTables => WsdStatus::Internal,
    }
}

struct Failure(WsdStatus, String);

impl From<WsdError> for Failure {
    fn from(e: WsdError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs `f`, records any error or panic and turns it into a status.
fn guard(f: impl FnOnce() -> Outcome<()>) -> WsdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WsdStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {message}"));
            WsdStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(WsdStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(WsdStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Outcome<&'a mut T> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn dataset<'a>(p: *const WsdDataset) -> Outcome<&'a WordDataset> {
    p.as_ref().map(|d| &d.0).ok_or_else(|| null("dataset"))
}

fn config(id: &str) -> Outcome<ClassifierConfig> {
    let cfg: ClassifierConfig = id.parse()?;
    cfg.validate()?;
    Ok(cfg)
}

/// Message of the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn wsd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses corpus text (one `sense<TAB>target<TAB>form/POS ...` line per example).
///
/// # Safety
/// `corpus` must be a NUL-terminated string and `out_dataset` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wsd_dataset_parse(corpus: *const c_char, out_dataset: *mut *mut WsdDataset) -> WsdStatus {
    guard(|| {
        let slot = out(out_dataset, "out_dataset")?;
        let ds = parse_corpus_str(text(corpus, "corpus")?)?;
        *slot = Box::into_raw(Box::new(WsdDataset(ds)));
        Ok(())
    })
}

/// Reads a corpus file. A file without `@word` header is named after its stem.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out_dataset` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wsd_dataset_load(path: *const c_char, out_dataset: *mut *mut WsdDataset) -> WsdStatus {
    guard(|| {
        let slot = out(out_dataset, "out_dataset")?;
        let ds = wsd_core::cli::load_corpus(Path::new(text(path, "path")?))?;
        *slot = Box::into_raw(Box::new(WsdDataset(ds)));
        Ok(())
    })
}

/// Generates a synthetic corpus. `spec_toml` may be NULL for the default spec.
///
/// # Safety
/// `spec_toml` must be NULL or a NUL-terminated string; `out_dataset` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wsd_dataset_generate(
    spec_toml: *const c_char,
    seed: u64,
    out_dataset: *mut *mut WsdDataset,
) -> WsdStatus {
    guard(|| {
        let slot = out(out_dataset, "out_dataset")?;
        let spec = if spec_toml.is_null() {
            GeneratorSpec::default()
        } else {
            GeneratorSpec::from_toml(text(spec_toml, "spec_toml")?)?
        };
        *slot = Box::into_raw(Box::new(WsdDataset(generate(&spec, seed)?)));
        Ok(())
    })
}

/// Number of examples.
///
/// # Safety
/// `ds` must be a live dataset handle and `out_len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wsd_dataset_len(ds: *const WsdDataset, out_len: *mut usize) -> WsdStatus {
    guard(|| {
        *out(out_len, "out_len")? = dataset(ds)?.len();
        Ok(())
    })
}

/// Number of distinct senses.
///
/// # Safety
/// `ds` must be a live dataset handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wsd_dataset_sense_count(ds: *const WsdDataset, out_count: *mut usize) -> WsdStatus {
    guard(|| {
        *out(out_count, "out_count")? = dataset(ds)?.senses.len();
        Ok(())
    })
}

/// # Safety
/// `ds` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wsd_dataset_free(ds: *mut WsdDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Trains the configuration `config_id` (e.g. `"NB@a"`, `"PEB_h,7,e"`) on all of `ds`.
///
/// # Safety
/// `ds` must be a live dataset handle, `config_id` a NUL-terminated string
/// and `out_model` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wsd_model_train(
    ds: *const WsdDataset,
    config_id: *const c_char,
    out_model: *mut *mut WsdModel,
) -> WsdStatus {
    guard(|| {
        let slot = out(out_model, "out_model")?;
        let ds = dataset(ds)?;
        let cfg = config(text(config_id, "config_id")?)?;
        let training: Vec<&Example> = ds.examples.iter().collect();
        let inventory = inventory_order(&count_senses(training.iter().map(|e| e.sense.as_str())));
        let model = cfg.fit(&training, &inventory)?;
        *slot = Box::into_raw(Box::new(WsdModel(model)));
        Ok(())
    })
}

/// Predicts the sense of the token at `target_index` in `sentence`
/// (`form/POS` tokens separated by spaces). The returned string must be
/// released with [`wsd_string_free`].
///
/// # Safety
/// `model` must be a live model handle, `sentence` a NUL-terminated string
/// and `out_sense` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wsd_model_predict(
    model: *const WsdModel,
    sentence: *const c_char,
    target_index: usize,
    out_sense: *mut *mut c_char,
) -> WsdStatus {
    guard(|| {
        let slot = out(out_sense, "out_sense")?;
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        let tokens = text(sentence, "sentence")?
            .split_whitespace()
            .map(str::parse::<Token>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|m| Failure(WsdStatus::Parse, m))?;
        let example = Example::new("?", tokens, target_index).map_err(|m| Failure(WsdStatus::Parse, m))?;
        let sense = model.0.predict(&example)?;
        *slot = CString::new(sense)
            .map_err(|_| Failure(WsdStatus::Internal, "sense contains NUL".into()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wsd_model_free(model: *mut WsdModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wsd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Stratified `folds`-fold cross-validation of `config_id` on `ds`.
/// Writes the mean fold accuracy (0..1) to `out_mean`. When `fold_accuracies`
/// is not NULL it receives one accuracy per fold and must hold `folds` values.
///
/// # Safety
/// `ds` must be a live dataset handle, `config_id` a NUL-terminated string,
/// `out_mean` valid, and `fold_accuracies` NULL or writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn wsd_cross_validate(
    ds: *const WsdDataset,
    config_id: *const c_char,
    folds: usize,
    seed: u64,
    out_mean: *mut f64,
    fold_accuracies: *mut f64,
    capacity: usize,
) -> WsdStatus {
    guard(|| {
        let mean = out(out_mean, "out_mean")?;
        let ds = dataset(ds)?;
        let cfg = config(text(config_id, "config_id")?)?;
        if !fold_accuracies.is_null() && capacity < folds {
            return Err(Failure(
                WsdStatus::BufferTooSmall,
                format!("fold_accuracies holds {capacity} values, {folds} needed"),
            ));
        }
        let plan = make_folds(ds, folds, seed)?;
        let report = cross_validate(ds, &plan, &cfg)?;
        *mean = report.mean_accuracy;
        if !fold_accuracies.is_null() {
            std::slice::from_raw_parts_mut(fold_accuracies, folds).copy_from_slice(&report.fold_accuracies);
        }
        Ok(())
    })
}

/// Paired t-test on `n` per-fold accuracies. A negative `threshold` selects
/// the 95% two-sided value for `n - 1` degrees of freedom.
///
/// # Safety
/// `a` and `b` must point to `n` readable doubles; `out_t` and
/// `out_significant` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn wsd_paired_t_test(
    a: *const f64,
    b: *const f64,
    n: usize,
    threshold: f64,
    out_t: *mut f64,
    out_significant: *mut bool,
) -> WsdStatus {
    guard(|| {
        let t = out(out_t, "out_t")?;
        let significant = out(out_significant, "out_significant")?;
        if a.is_null() || b.is_null() {
            return Err(null("sample"));
        }
        let (a, b) = (std::slice::from_raw_parts(a, n), std::slice::from_raw_parts(b, n));
        let threshold = if threshold < 0.0 { threshold_for_folds(n)? } else { threshold };
        let r = paired_t_test(a, b, threshold)?;
        *t = r.t_statistic;
        *significant = r.significant;
        Ok(())
    })
}

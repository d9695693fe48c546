#ifndef WSD_H
#define WSD_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum WsdStatus {
  WSD_STATUS_OK = 0,
  WSD_STATUS_NULL_POINTER = 1,
  WSD_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed corpus or sentence text.
   */
  WSD_STATUS_PARSE = 3,
  /**
   * Invalid configuration id, classifier combination or generator spec.
   */
  WSD_STATUS_CONFIG = 4,
  /**
   * Empty data or a fold plan that does not fit the data.
   */
  WSD_STATUS_DATA = 5,
  WSD_STATUS_STATISTICS = 6,
  WSD_STATUS_IO = 7,
  /**
   * A buffer passed in is too small.
   */
  WSD_STATUS_BUFFER_TOO_SMALL = 8,
  WSD_STATUS_INTERNAL = 9,
} WsdStatus;

/**
 * Sense-tagged examples of one target word.
 */
typedef struct WsdDataset WsdDataset;

/**
 * A classifier trained on a dataset.
 */
typedef struct WsdModel WsdModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL after a success.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *wsd_last_error(void);

/**
 * Parses corpus text (one `sense<TAB>target<TAB>form/POS ...` line per example).
 *
 * # Safety
 * `corpus` must be a NUL-terminated string and `out_dataset` a valid pointer.
 */
enum WsdStatus wsd_dataset_parse(const char *corpus, struct WsdDataset **out_dataset);

/**
 * Reads a corpus file. A file without `@word` header is named after its stem.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out_dataset` a valid pointer.
 */
enum WsdStatus wsd_dataset_load(const char *path, struct WsdDataset **out_dataset);

/**
 * Generates a synthetic corpus. `spec_toml` may be NULL for the default spec.
 *
 * # Safety
 * `spec_toml` must be NULL or a NUL-terminated string; `out_dataset` must be valid.
 */
enum WsdStatus wsd_dataset_generate(const char *spec_toml,
                                    uint64_t seed,
                                    struct WsdDataset **out_dataset);

/**
 * Number of examples.
 *
 * # Safety
 * `ds` must be a live dataset handle and `out_len` a valid pointer.
 */
enum WsdStatus wsd_dataset_len(const struct WsdDataset *ds, size_t *out_len);

/**
 * Number of distinct senses.
 *
 * # Safety
 * `ds` must be a live dataset handle and `out_count` a valid pointer.
 */
enum WsdStatus wsd_dataset_sense_count(const struct WsdDataset *ds, size_t *out_count);

/**
 * # Safety
 * `ds` must be NULL or a handle not yet freed.
 */
void wsd_dataset_free(struct WsdDataset *ds);

/**
 * Trains the configuration `config_id` (e.g. `"NB@a"`, `"PEB_h,7,e"`) on all of `ds`.
 *
 * # Safety
 * `ds` must be a live dataset handle, `config_id` a NUL-terminated string
 * and `out_model` a valid pointer.
 */
enum WsdStatus wsd_model_train(const struct WsdDataset *ds,
                               const char *config_id,
                               struct WsdModel **out_model);

/**
 * Predicts the sense of the token at `target_index` in `sentence`
 * (`form/POS` tokens separated by spaces). The returned string must be
 * released with [`wsd_string_free`].
 *
 * # Safety
 * `model` must be a live model handle, `sentence` a NUL-terminated string
 * and `out_sense` a valid pointer.
 */
enum WsdStatus wsd_model_predict(const struct WsdModel *model,
                                 const char *sentence,
                                 size_t target_index,
                                 char **out_sense);

/**
 * # Safety
 * `model` must be NULL or a handle not yet freed.
 */
void wsd_model_free(struct WsdModel *model);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void wsd_string_free(char *s);

/**
 * Stratified `folds`-fold cross-validation of `config_id` on `ds`.
 * Writes the mean fold accuracy (0..1) to `out_mean`. When `fold_accuracies`
 * is not NULL it receives one accuracy per fold and must hold `folds` values.
 *
 * # Safety
 * `ds` must be a live dataset handle, `config_id` a NUL-terminated string,
 * `out_mean` valid, and `fold_accuracies` NULL or writable for `capacity` doubles.
 */
enum WsdStatus wsd_cross_validate(const struct WsdDataset *ds,
                                  const char *config_id,
                                  size_t folds,
                                  uint64_t seed,
                                  double *out_mean,
                                  double *fold_accuracies,
                                  size_t capacity);

/**
 * Paired t-test on `n` per-fold accuracies. A negative `threshold` selects
 * the 95% two-sided value for `n - 1` degrees of freedom.
 *
 * # Safety
 * `a` and `b` must point to `n` readable doubles; `out_t` and
 * `out_significant` must be valid pointers.
 */
enum WsdStatus wsd_paired_t_test(const double *a,
                                 const double *b,
                                 size_t n,
                                 double threshold,
                                 double *out_t,
                                 bool *out_significant);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WSD_H */

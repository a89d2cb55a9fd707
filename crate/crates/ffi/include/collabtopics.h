#ifndef COLLABTOPICS_H
#define COLLABTOPICS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a C interface call.
 */
typedef enum CtStatus {
  CT_STATUS_OK = 0,
  CT_STATUS_NULL_POINTER = 1,
  CT_STATUS_INVALID_UTF8 = 2,
  CT_STATUS_IO = 3,
  CT_STATUS_VALIDATION = 4,
  CT_STATUS_MISSING_ARTIFACT = 5,
  CT_STATUS_INVALID_PARAMETER = 6,
  CT_STATUS_UNDEFINED = 7,
  CT_STATUS_EMPTY_GRAPH = 8,
  CT_STATUS_NO_FOCAL_SCIENTISTS = 9,
  CT_STATUS_UNKNOWN_AUTHOR = 10,
  CT_STATUS_OUT_OF_RANGE = 11,
  CT_STATUS_PANIC = 12,
  CT_STATUS_OTHER = 13,
} CtStatus;

/**
 * Loaded publication corpus.
 */
typedef struct CtCorpus CtCorpus;

/**
 * Topic detection result for one scientist.
 */
typedef struct CtTopics CtTopics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call on the same thread.
 */
const char *ct_last_error(void);

/**
 * Load a `.jsonl` or `.csv` corpus. With `strict` set, the first invalid
 * record fails the call; otherwise invalid records are skipped and counted.
 */
enum CtStatus ct_corpus_load(const char *path, bool strict, struct CtCorpus **out);

void ct_corpus_free(struct CtCorpus *corpus);

size_t ct_corpus_n_papers(const struct CtCorpus *corpus);

size_t ct_corpus_n_authors(const struct CtCorpus *corpus);

/**
 * Records skipped while loading.
 */
size_t ct_corpus_n_rejected(const struct CtCorpus *corpus);

/**
 * Number of authors with at least `min_papers` papers.
 */
size_t ct_corpus_n_focal(const struct CtCorpus *corpus, size_t min_papers);

/**
 * Detect topics in one author's co-citing network. The seed is the global
 * seed; the result matches the pipeline for the same seed and settings.
 */
enum CtStatus ct_topics_detect(const struct CtCorpus *corpus,
                               const char *author,
                               uint64_t seed,
                               double topic_threshold,
                               bool weighted,
                               struct CtTopics **out);

void ct_topics_free(struct CtTopics *topics);

/**
 * Number of major topics.
 */
size_t ct_topics_count(const struct CtTopics *topics);

/**
 * Papers in the scientist's series, in chronological order.
 */
size_t ct_topics_n_papers(const struct CtTopics *topics);

/**
 * Modularity of the detected partition.
 */
double ct_topics_modularity(const struct CtTopics *topics);

/**
 * Topic of paper `index` in the series; -1 for papers outside major topics.
 */
enum CtStatus ct_topics_paper_topic(const struct CtTopics *topics, size_t index, int64_t *out);

/**
 * Kendall tau-b of `n` paired values.
 */
enum CtStatus ct_kendall_tau(const double *x, const double *y, size_t n, double *out);

/**
 * Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
 */
enum CtStatus ct_ks_test(const double *a,
                         size_t n_a,
                         const double *b,
                         size_t n_b,
                         double *out_d,
                         double *out_p);

/**
 * Run the full pipeline on `n_inputs` corpus paths with default analysis
 * settings apart from the given ones. `workers` 0 uses every core.
 */
enum CtStatus ct_run_pipeline(const char *const *inputs,
                              size_t n_inputs,
                              const char *out_dir,
                              uint64_t seed,
                              size_t min_papers,
                              size_t workers,
                              bool surrogate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLLABTOPICS_H */

/*
 * semnorm: semantic difference detection between two corpora from the norms
 * of mean contextualized word vectors.
 *
 * C interface. Every fallible call returns a semnorm_status; on failure a
 * one-line description is available from semnorm_last_error() on the same
 * thread. Handles are opaque and released with the matching *_free call.
 * Output paths accept "-" for standard output.
 */
#ifndef SEMNORM_SEMNORM_H_
#define SEMNORM_SEMNORM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SEMNORM_BUILDING_LIBRARY)
#define SEMNORM_API __attribute__((visibility("default")))
#else
#define SEMNORM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum semnorm_status {
    SEMNORM_OK = 0,
    SEMNORM_ERROR_INVALID_ARGUMENT = 1,
    SEMNORM_ERROR_IO = 2,
    SEMNORM_ERROR_DECODE = 3,
    SEMNORM_ERROR_VALIDATION = 4,
    SEMNORM_ERROR_NOT_FOUND = 5,
    SEMNORM_ERROR_INTERNAL = 6
} semnorm_status;

typedef enum semnorm_log_base { SEMNORM_LOG_E = 0, SEMNORM_LOG_10 = 1 } semnorm_log_base;

typedef enum semnorm_direction {
    SEMNORM_DIRECTION_SOURCE = 0,
    SEMNORM_DIRECTION_TARGET = 1
} semnorm_direction;

typedef enum semnorm_format { SEMNORM_FORMAT_BINARY = 0, SEMNORM_FORMAT_JSONL = 1 } semnorm_format;

SEMNORM_API const char* semnorm_version(void);
SEMNORM_API const char* semnorm_status_string(semnorm_status status);

/* Message of the last failed call on this thread ("" if none). */
SEMNORM_API const char* semnorm_last_error(void);

/* Byte offset of the last decode error on this thread, UINT64_MAX otherwise. */
SEMNORM_API uint64_t semnorm_last_error_offset(void);

/* ---- per-corpus statistics ------------------------------------------- */

typedef struct semnorm_stats semnorm_stats;

/* One pass over an embedding stream (binary or JSONL, auto-detected).
 * threads = 0 means 1. */
SEMNORM_API semnorm_status semnorm_stats_from_file(const char* path, unsigned threads, semnorm_stats** out);
SEMNORM_API void semnorm_stats_free(semnorm_stats* stats);

SEMNORM_API semnorm_status semnorm_stats_info(const semnorm_stats* stats, uint32_t* dim, size_t* type_count);

/* SEMNORM_ERROR_NOT_FOUND if the word type does not occur. */
SEMNORM_API semnorm_status semnorm_stats_lookup(const semnorm_stats* stats, const char* word, uint64_t* n,
                                                double* norm);

/* TSV: word_type, n, l. */
SEMNORM_API semnorm_status semnorm_stats_write_tsv(const semnorm_stats* stats, const char* path);

/* ---- detection --------------------------------------------------------- */

typedef struct semnorm_detect_options {
    uint64_t min_freq; /* types need more than this many instances per corpus */
    semnorm_log_base log_base;
    const char* const* exclude;
    size_t exclude_count;
} semnorm_detect_options;

SEMNORM_API void semnorm_detect_options_init(semnorm_detect_options* options);

typedef struct semnorm_scored_type {
    const char* word_type; /* owned by the detection handle */
    uint64_t f_source;
    uint64_t f_target;
    double l_source;
    double l_target;
    double coverage;
    double log_coverage;
    int degenerate;
} semnorm_scored_type;

typedef struct semnorm_detection semnorm_detection;

/* options may be NULL for defaults. */
SEMNORM_API semnorm_status semnorm_detect(const semnorm_stats* source, const semnorm_stats* target,
                                          const semnorm_detect_options* options, semnorm_detection** out);
SEMNORM_API void semnorm_detection_free(semnorm_detection* detection);
SEMNORM_API size_t semnorm_detection_size(const semnorm_detection* detection);
SEMNORM_API semnorm_status semnorm_detection_get(const semnorm_detection* detection, size_t index,
                                                 semnorm_scored_type* out);

/* TSV: rank, word_type, log_coverage, f_S, f_T, degenerate. */
SEMNORM_API semnorm_status semnorm_detection_write_tsv(const semnorm_detection* detection, const char* path);
SEMNORM_API semnorm_status semnorm_detection_write_json(const semnorm_detection* detection, const char* path);

/* ---- typical instances ------------------------------------------------- */

typedef struct semnorm_instance_query {
    const char* word;
    semnorm_direction direction;
    size_t top_k;
    uint64_t min_freq;
} semnorm_instance_query;

SEMNORM_API void semnorm_instance_query_init(semnorm_instance_query* query);

typedef struct semnorm_scored_instance {
    uint64_t instance_id;
    const char* sentence;     /* owned by the list handle */
    const char* corpus_label; /* owned by the list handle */
    double score;
} semnorm_scored_instance;

typedef struct semnorm_instance_list semnorm_instance_list;

/* Scores instances from source_path (direction source) or target_path
 * (direction target) against the statistics of both corpora. */
SEMNORM_API semnorm_status semnorm_typical_instances(const semnorm_stats* source, const semnorm_stats* target,
                                                     const char* source_path, const char* target_path,
                                                     const semnorm_instance_query* query,
                                                     semnorm_instance_list** out);
SEMNORM_API void semnorm_instance_list_free(semnorm_instance_list* list);
SEMNORM_API size_t semnorm_instance_list_size(const semnorm_instance_list* list);
SEMNORM_API semnorm_status semnorm_instance_list_get(const semnorm_instance_list* list, size_t index,
                                                     semnorm_scored_instance* out);

/* TSV: rank, score, corpus_label, instance_id, sentence. sentence_width = 0
 * prints full sentences. */
SEMNORM_API semnorm_status semnorm_instance_list_write_tsv(const semnorm_instance_list* list, const char* path,
                                                           size_t sentence_width);

/* ---- norm stability ---------------------------------------------------- */

typedef struct semnorm_curve semnorm_curve;

SEMNORM_API semnorm_status semnorm_stability_from_file(const char* path, size_t max_n, semnorm_curve** out);
SEMNORM_API void semnorm_curve_free(semnorm_curve* curve);
SEMNORM_API size_t semnorm_curve_max_n(const semnorm_curve* curve);

/* k in [2, max_n]. */
SEMNORM_API semnorm_status semnorm_curve_get(const semnorm_curve* curve, size_t k, double* avg_diff,
                                             uint64_t* support);

/* TSV: k, avg_diff, support. */
SEMNORM_API semnorm_status semnorm_curve_write_tsv(const semnorm_curve* curve, const char* path);

/* ---- synthetic corpora ------------------------------------------------- */

typedef struct semnorm_simulate_options {
    size_t types;
    uint32_t dim;
    size_t instances; /* per type and corpus */
    double kappa_min;
    double kappa_max;
    uint64_t seed;
    semnorm_format format;
} semnorm_simulate_options;

SEMNORM_API void semnorm_simulate_options_init(semnorm_simulate_options* options);

/* Writes source.{semb,jsonl}, target.{semb,jsonl} and truth.tsv to out_dir. */
SEMNORM_API semnorm_status semnorm_simulate(const semnorm_simulate_options* options, const char* out_dir);

/* ---- scalar scores ----------------------------------------------------- */

SEMNORM_API semnorm_status semnorm_coverage(double l_source, double l_target, semnorm_log_base base,
                                            double* coverage, double* log_coverage);
SEMNORM_API semnorm_status semnorm_estimate_kappa(double l, uint32_t dim, double* kappa);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEMNORM_SEMNORM_H_ */

#ifndef WCALC_H
#define WCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

#define WCALC_OK 0

// Null pointer, invalid UTF-8 or an out-of-range enum value.
#define WCALC_ERR_INVALID_ARGUMENT 1

#define WCALC_ERR_PARSE 2

#define WCALC_ERR_PRECONDITION 3

#define WCALC_ERR_CONSISTENCY 4

#define WCALC_ERR_PANIC 5

#define WCALC_HOLDS 0

#define WCALC_FAILS 1

#define WCALC_INCONCLUSIVE 2

#define WCALC_ROUMIEU 0

#define WCALC_BEURLING 1

typedef struct WcalcMatrix WcalcMatrix;

typedef struct WcalcSequence WcalcSequence;

typedef struct WcalcWeight WcalcWeight;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a sequence descriptor into a new handle.
//
// # Safety
// `descriptor` must be a NUL-terminated string and `out` writable.
int32_t wcalc_sequence_parse(const char *descriptor, size_t pmax, struct WcalcSequence **out);

// # Safety
// `seq` must come from `wcalc_sequence_parse` and not be used afterwards.
void wcalc_sequence_free(struct WcalcSequence *seq);

// Number of represented terms, pmax + 1.
//
// # Safety
// `seq` must be a live handle and `out` writable.
int32_t wcalc_sequence_len(const struct WcalcSequence *seq, size_t *out);

// log M_p; beyond the prefix the tail law is used when there is one.
//
// # Safety
// `seq` must be a live handle and `out` writable.
int32_t wcalc_sequence_log_value(const struct WcalcSequence *seq, size_t p, double *out);

// Condition dossier as JSON.
//
// # Safety
// `seq` must be a live handle and `json_out` writable.
int32_t wcalc_sequence_analyze(const struct WcalcSequence *seq, char **json_out);

// (nq) of the class; `status_out` receives a `WCALC_HOLDS`-style code.
//
// # Safety
// `seq` must be a live handle and `status_out` writable.
int32_t wcalc_sequence_nq(const struct WcalcSequence *seq, int32_t *status_out);

// # Safety
// `descriptor` must be a NUL-terminated string and `out` writable.
int32_t wcalc_weight_parse(const char *descriptor, size_t pmax, struct WcalcWeight **out);

// Associated function ω_M of a sequence.
//
// # Safety
// `seq` must be a live handle and `out` writable.
int32_t wcalc_weight_from_sequence(const struct WcalcSequence *seq, struct WcalcWeight **out);

// # Safety
// `w` must come from a weight constructor and not be used afterwards.
void wcalc_weight_free(struct WcalcWeight *w);

// ω(t).
//
// # Safety
// `w` must be a live handle and `out` writable.
int32_t wcalc_weight_omega(const struct WcalcWeight *w, double t, double *out);

// (ω0)–(ω7), (ω_nq) and (W) as JSON.
//
// # Safety
// `w` must be a live handle and `json_out` writable.
int32_t wcalc_weight_analyze(const struct WcalcWeight *w, char **json_out);

// # Safety
// `descriptor` must be a NUL-terminated string and `out` writable.
int32_t wcalc_matrix_parse(const char *descriptor, size_t pmax, struct WcalcMatrix **out);

// # Safety
// `m` must come from `wcalc_matrix_parse` and not be used afterwards.
void wcalc_matrix_free(struct WcalcMatrix *m);

// Every matrix condition in both senses as JSON.
//
// # Safety
// `m` must be a live handle and `json_out` writable.
int32_t wcalc_matrix_conditions(const struct WcalcMatrix *m, char **json_out);

// (nq) of the matrix class; `sense` is `WCALC_ROUMIEU` or `WCALC_BEURLING`.
//
// # Safety
// `m` must be a live handle and `status_out` writable.
int32_t wcalc_matrix_nq(const struct WcalcMatrix *m, int32_t sense, int32_t *status_out);

// Runs a command-line invocation given as a JSON array of arguments (without
// the program name) and returns its JSON report. `--out` and `--format` are
// ignored: nothing is written to disk.
//
// # Safety
// `args_json` must be a NUL-terminated string and `json_out` writable.
int32_t wcalc_run(const char *args_json, char **json_out);

// # Safety
// `s` must come from this library and not be used afterwards.
void wcalc_string_free(char *s);

// Message of the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *wcalc_last_error(void);

const char *wcalc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WCALC_H */

#ifndef KSAT_SMJ_H
#define KSAT_SMJ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum KsatStatus {
  KSAT_STATUS_OK = 0,
  KSAT_STATUS_INVALID_ARGUMENT = 1,
  KSAT_STATUS_DOMAIN = 2,
  KSAT_STATUS_BUDGET = 3,
  KSAT_STATUS_UNPROVEN = 4,
  KSAT_STATUS_NUMERIC = 5,
  KSAT_STATUS_NULL_POINTER = 6,
  KSAT_STATUS_BUFFER_TOO_SMALL = 7,
  KSAT_STATUS_PANIC = 8,
} KsatStatus;

// Which local maximum of the rate function is global.
typedef enum KsatActive {
  KSAT_ACTIVE_S1 = 1,
  KSAT_ACTIVE_S3 = 3,
  KSAT_ACTIVE_BOTH = 4,
} KsatActive;

// Opaque handle: a k-SAT formula.
typedef struct KsatFormula KsatFormula;

// Opaque handle: critical points and threshold for one clause length.
typedef struct KsatPhaseDiagram KsatPhaseDiagram;

typedef struct KsatCriticalPoints {
  uint32_t k;
  double s01;
  double s02;
  double s03;
  double r_at_s01;
  double r_at_s03;
} KsatCriticalPoints;

typedef struct KsatThresholds {
  uint32_t k;
  double r_cr;
  double s1cr;
  double s3cr;
  double s3cr_complement;
  double bracket_lo;
  double bracket_hi;
  double residual;
} KsatThresholds;

// `s_mj` at one ratio. Absent values are NaN.
typedef struct KsatCurvePoint {
  double r;
  double smj;
  double smj_complement;
  double smj_alt;
  enum KsatActive active;
  double f_s1;
  double f_s3;
} KsatCurvePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Length in bytes (without terminator) of the last error message on this
// thread, or 0 when there is none.
size_t ksat_last_error_length(void);

// Copies the last error message (NUL-terminated, truncated to fit) into
// `buf`. Returns the number of bytes written excluding the terminator.
size_t ksat_last_error_message(char *buf, size_t len);

// Rate function `f(s) = h(s) - r·g(s)`.
enum KsatStatus ksat_rate_f(uint32_t k, double r, double s, double *out);

// Critical-point curve `r(s)` for `s` in `[0.5, 1)`.
enum KsatStatus ksat_r_of_s(uint32_t k, double s, double *out);

// Per-clause probability that both members of a pair with similarity
// number `s_num` satisfy a random clause.
enum KsatStatus ksat_clause_pair_agreement_probability(uint32_t n,
                                                       uint32_t k,
                                                       uint32_t s_num,
                                                       double *out);

// Natural log of the probability that a pair satisfies `m` random clauses.
enum KsatStatus ksat_ln_pair_sat_probability(uint32_t n,
                                             uint32_t k,
                                             uint64_t m,
                                             uint32_t s_num,
                                             double *out);

// Natural log of the expected number of satisfying ordered pairs.
enum KsatStatus ksat_ln_expected_sat_pairs(uint32_t n,
                                           uint32_t k,
                                           uint64_t m,
                                           uint32_t s_num,
                                           double *out);

// Builds the phase diagram for `k >= 5`. `tolerance <= 0` selects the
// defaults (1e-12 in s, 1e-10 in r).
enum KsatStatus ksat_phase_diagram_new(uint32_t k, double tolerance, struct KsatPhaseDiagram **out);

void ksat_phase_diagram_free(struct KsatPhaseDiagram *diagram);

enum KsatStatus ksat_phase_diagram_critical_points(const struct KsatPhaseDiagram *diagram,
                                                   struct KsatCriticalPoints *out);

enum KsatStatus ksat_phase_diagram_thresholds(const struct KsatPhaseDiagram *diagram,
                                              struct KsatThresholds *out);

// Inverse of `r(s)` on branch 1, 2 or 3.
enum KsatStatus ksat_phase_diagram_invert_branch(const struct KsatPhaseDiagram *diagram,
                                                 uint32_t branch,
                                                 double r,
                                                 double *out);

// Major similarity degree at ratio `r`.
enum KsatStatus ksat_phase_diagram_major_similarity(const struct KsatPhaseDiagram *diagram,
                                                    double r,
                                                    struct KsatCurvePoint *out);

// Random k-SAT formula with `m` clauses over `n` variables.
enum KsatStatus ksat_formula_generate(uint32_t n,
                                      uint32_t k,
                                      uint64_t m,
                                      uint64_t seed,
                                      struct KsatFormula **out);

void ksat_formula_free(struct KsatFormula *formula);

uint32_t ksat_formula_num_vars(const struct KsatFormula *formula);

uint64_t ksat_formula_num_clauses(const struct KsatFormula *formula);

// Evaluates the formula on `len` bytes (nonzero = true), one per variable.
enum KsatStatus ksat_formula_evaluate(const struct KsatFormula *formula,
                                      const uint8_t *bits,
                                      size_t len,
                                      bool *out);

// Number of satisfying assignments (exhaustive, `n <= 26`).
enum KsatStatus ksat_formula_count_solutions(const struct KsatFormula *formula, uint64_t *out);

// Ordered-pair similarity histogram of the formula's solutions; `counts`
// must hold `n + 1` entries.
enum KsatStatus ksat_formula_pair_histogram(const struct KsatFormula *formula,
                                            uint64_t *counts,
                                            size_t len);

// DIMACS CNF text of the formula; release with [`ksat_string_free`].
// Returns NULL on failure.
char *ksat_formula_to_dimacs(const struct KsatFormula *formula);

void ksat_string_free(char *s);

// Monte Carlo mean and standard error of the pair histogram; `mean` and
// `std_error` must each hold `n + 1` entries.
enum KsatStatus ksat_monte_carlo_histogram(uint32_t n,
                                           uint32_t k,
                                           uint64_t m,
                                           uint64_t trials,
                                           uint64_t seed,
                                           double *mean,
                                           double *std_error,
                                           size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KSAT_SMJ_H */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef ECDENSITY_H
#define ECDENSITY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define EC_PREDICATE_TORSION3 0

#define EC_PREDICATE_ISOGENY3 1

/**
 * Torsion of the prime order passed as `ell`.
 */
#define EC_PREDICATE_ELL_TORSION 2

#define EC_PREDICATE_P_TORSION 3

#define EC_PREDICATE_ALWAYS 4

/**
 * Pass as `stratum` to estimate over all models.
 */
#define EC_STRATUM_ALL -1

#define EC_STRATUM_GOOD 0

#define EC_STRATUM_SPLIT_MULT 1

#define EC_STRATUM_NONSPLIT_MULT 2

#define EC_STRATUM_ADDITIVE 3

#define EC_STRATUM_UNRESOLVED 4

/**
 * Outcome of a call.
 */
typedef enum EcStatus {
  EC_STATUS_OK = 0,
  EC_STATUS_NULL_POINTER = 1,
  EC_STATUS_INVALID_ARGUMENT = 2,
  EC_STATUS_PRIME_TWO_UNSUPPORTED = 3,
  EC_STATUS_NOT_PRIME = 4,
  EC_STATUS_PRECISION = 5,
  EC_STATUS_BUDGET_EXCEEDED = 6,
  EC_STATUS_UNSUPPORTED = 7,
  EC_STATUS_INTERNAL = 8,
} EcStatus;

/**
 * Tri-state answer of a decision.
 */
typedef enum EcAnswer {
  EC_ANSWER_NO = 0,
  EC_ANSWER_YES = 1,
  EC_ANSWER_UNDECIDED = 2,
} EcAnswer;

/**
 * A density estimate with its tallies.
 */
typedef struct EcEstimate EcEstimate;

/**
 * An exact rational number.
 */
typedef struct EcRational EcRational;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; do not free.
 */
const char *ec_version(void);

/**
 * Message for the last failed call on this thread, or null. Free with `ec_string_free`.
 */
char *ec_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer returned by `ec_last_error`, `ec_rational_to_string` or
 * `ec_estimate_to_json`, not already freed.
 */
void ec_string_free(char *s);

/**
 * Density of curves over `Z_p` with a nontrivial `Q_p`-rational 3-torsion point.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum EcStatus ec_density_tors(uint64_t p, struct EcRational **out);

/**
 * Density of curves over `Z_p` with a `Q_p`-rational 3-isogeny (`p >= 5`).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum EcStatus ec_density_iso(uint64_t p, struct EcRational **out);

/**
 * Writes the value as `"num/den"`. Free the string with `ec_string_free`.
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer to writable storage.
 */
enum EcStatus ec_rational_to_string(const struct EcRational *r, char **out);

/**
 * Nearest double to the value.
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer to writable storage.
 */
enum EcStatus ec_rational_to_double(const struct EcRational *r, double *out);

/**
 * # Safety
 * `r` must be null or a handle from this library, not already freed.
 */
void ec_rational_free(struct EcRational *r);

/**
 * Decides a predicate for `y^2 = x^3 + a x + b` given modulo `p^k`. At `p = 3` the model is
 * treated as `y^2 = x^3 + a x + b` with zero `x^2` term.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum EcStatus ec_decide_short(uint64_t p,
                              int64_t a,
                              int64_t b,
                              uint32_t k,
                              uint32_t predicate,
                              uint64_t ell,
                              enum EcAnswer *out);

/**
 * Decides a predicate for `y^2 = x^3 + a2 x^2 + a4 x + a6` given modulo `3^k`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum EcStatus ec_decide_medium_p3(int64_t a2,
                                  int64_t a4,
                                  int64_t a6,
                                  uint32_t k,
                                  uint32_t predicate,
                                  uint64_t ell,
                                  enum EcAnswer *out);

/**
 * Applies a predicate to every model modulo `p^k`. `jobs = 0` uses all cores.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum EcStatus ec_estimate_exhaustive(uint64_t p,
                                     uint32_t k,
                                     uint32_t predicate,
                                     uint64_t ell,
                                     int32_t stratum,
                                     uint64_t budget,
                                     uint32_t jobs,
                                     struct EcEstimate **out);

/**
 * Applies a predicate to `samples` seeded random models modulo `p^k`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum EcStatus ec_estimate_monte_carlo(uint64_t p,
                                      uint32_t k,
                                      uint64_t samples,
                                      uint64_t seed,
                                      uint32_t predicate,
                                      uint64_t ell,
                                      int32_t stratum,
                                      uint32_t jobs,
                                      struct EcEstimate **out);

/**
 * Yes, no and undecided counts of the estimate.
 *
 * # Safety
 * `e` must be a live handle; each output pointer must be valid and writable.
 */
enum EcStatus ec_estimate_counts(const struct EcEstimate *e,
                                 uint64_t *yes,
                                 uint64_t *no,
                                 uint64_t *undecided);

/**
 * Lower and upper ends of the interval claimed to contain the density. For Monte-Carlo
 * estimates this is the widened confidence interval.
 *
 * # Safety
 * `e` must be a live handle; `lower` and `upper` must be valid pointers to writable storage.
 */
enum EcStatus ec_estimate_bracket(const struct EcEstimate *e,
                                  struct EcRational **lower,
                                  struct EcRational **upper);

/**
 * The estimate as a JSON object. Free the string with `ec_string_free`.
 *
 * # Safety
 * `e` must be a live handle and `out` a valid pointer to writable storage.
 */
enum EcStatus ec_estimate_to_json(const struct EcEstimate *e, char **out);

/**
 * # Safety
 * `e` must be null or a handle from this library, not already freed.
 */
void ec_estimate_free(struct EcEstimate *e);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ECDENSITY_H */

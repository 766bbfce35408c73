#ifndef TRL_H
#define TRL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TrlStatus {
  TRL_STATUS_OK = 0,
  TRL_STATUS_NULL_POINTER = 1,
  TRL_STATUS_INVALID_ARGUMENT = 2,
  TRL_STATUS_BUFFER_TOO_SMALL = 3,
  // The numerical routine failed or the input sits on an excluded point.
  TRL_STATUS_NUMERICAL = 4,
  TRL_STATUS_IO = 5,
  TRL_STATUS_PANIC = 6,
} TrlStatus;

// Recurrence `P_n + B P_{n-l} + A P_{n-k} = 0`.
typedef struct TrlRecurrence TrlRecurrence;

// Trinomial `a t^k + b t^l + 1`.
typedef struct TrlTrinomial TrlTrinomial;

typedef struct TrlComplex {
  double re;
  double im;
} TrlComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *trl_last_error(void);

// Library version, a static string.
const char *trl_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from a `trl_*_json` call and not have been freed.
void trl_string_free(char *s);

// Builds a recurrence from ascending coefficient arrays of `A` and `B`.
//
// # Safety
// `a` and `b` must point to `a_len` and `b_len` readable values; `out` must
// be writable.
enum TrlStatus trl_recurrence_new(const struct TrlComplex *a,
                                  size_t a_len,
                                  const struct TrlComplex *b,
                                  size_t b_len,
                                  uint32_t k,
                                  uint32_t l,
                                  struct TrlRecurrence **out);

// The recurrence behind the reference table.
//
// # Safety
// `out` must be writable.
enum TrlStatus trl_recurrence_table1(struct TrlRecurrence **out);

// # Safety
// `rec` must come from `trl_recurrence_new` or `trl_recurrence_table1`, or be null.
void trl_recurrence_free(struct TrlRecurrence *rec);

// Ascending coefficients of `P_n`. The zero polynomial has length 0.
//
// # Safety
// `rec` must be a live handle, `coeffs` must hold `cap` values, `len_out`
// must be writable.
enum TrlStatus trl_recurrence_term(const struct TrlRecurrence *rec,
                                   size_t n,
                                   struct TrlComplex *coeffs,
                                   size_t cap,
                                   size_t *len_out);

// Full verification of `P_n` for each listed `n`, as a JSON report. The
// status is `Ok` whether or not the checks pass; read `passed` in the report.
//
// # Safety
// `rec` must be a live handle, `ns` must hold `ns_len` values, `out` must be
// writable. Free the string with `trl_string_free`.
enum TrlStatus trl_recurrence_verify_json(const struct TrlRecurrence *rec,
                                          const size_t *ns,
                                          size_t ns_len,
                                          char **out);

// Zeros of a polynomial given by ascending coefficients.
//
// # Safety
// `coeffs` must hold `len` values, `roots_out` `cap` values; `count_out`
// must be writable.
enum TrlStatus trl_poly_roots(const struct TrlComplex *coeffs,
                              size_t len,
                              struct TrlComplex *roots_out,
                              size_t cap,
                              size_t *count_out);

// # Safety
// `out` must be writable.
enum TrlStatus trl_trinomial_new(struct TrlComplex a,
                                 struct TrlComplex b,
                                 uint32_t k,
                                 uint32_t l,
                                 struct TrlTrinomial **out);

// The trinomial `A(z0) t^k + B(z0) t^l + 1`; fails when `z0` is a zero of `A`.
//
// # Safety
// `rec` must be a live handle and `out` writable.
enum TrlStatus trl_trinomial_at(const struct TrlRecurrence *rec,
                                struct TrlComplex z0,
                                struct TrlTrinomial **out);

// # Safety
// `tri` must come from `trl_trinomial_new` or `trl_trinomial_at`, or be null.
void trl_trinomial_free(struct TrlTrinomial *tri);

// `alpha = (-1)^k b^k / a^l` and whether it counts as real.
//
// # Safety
// `tri` must be a live handle; `alpha` and `is_real` writable.
enum TrlStatus trl_trinomial_alpha(const struct TrlTrinomial *tri,
                                   struct TrlComplex *alpha,
                                   bool *is_real);

// The `k` zeros, with multiplicity.
//
// # Safety
// `tri` must be a live handle, `roots_out` must hold `cap` values,
// `count_out` must be writable.
enum TrlStatus trl_trinomial_roots(const struct TrlTrinomial *tri,
                                   struct TrlComplex *roots_out,
                                   size_t cap,
                                   size_t *count_out);

// Number of distinct real values among the ratios of distinct zeros.
//
// # Safety
// `tri` must be a live handle and `out` writable.
enum TrlStatus trl_trinomial_real_ratio_count(const struct TrlTrinomial *tri,
                                              double tol,
                                              size_t *out);

// Expected number of distinct real ratios; requires a real `alpha`.
//
// # Safety
// `tri` must be a live handle; `count` and `boundary` writable.
enum TrlStatus trl_trinomial_omega(const struct TrlTrinomial *tri, uint32_t *count, bool *boundary);

// The q-discriminant at `q`; vanishes when `q` is a ratio of two zeros.
//
// # Safety
// `tri` must be a live handle and `out` writable.
enum TrlStatus trl_trinomial_q_discriminant(const struct TrlTrinomial *tri,
                                            struct TrlComplex q,
                                            struct TrlComplex *out);

// `h(q) = (1 - q^k)^k / ((1 - q^l)^l (q^l - q^k)^(k-l))`
//
// # Safety
// `out` must be writable.
enum TrlStatus trl_h(struct TrlComplex q, uint32_t k, uint32_t l, struct TrlComplex *out);

// Real restriction of `h`, continuous at 1.
//
// # Safety
// `out` must be writable.
enum TrlStatus trl_g(double x, uint32_t k, uint32_t l, double *out);

// `k^k / (l^l (k-l)^(k-l))`
double trl_beta(uint32_t k, uint32_t l);

// Reproduces the reference table as a JSON report. `tol` is the cell
// tolerance; pass a non-positive value for the default.
//
// # Safety
// `out` must be writable. Free the string with `trl_string_free`.
enum TrlStatus trl_table1_json(double tol, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRL_H */

#ifndef WSEGRE_H
#define WSEGRE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WsegreStatus {
  WSEGRE_STATUS_OK = 0,
  WSEGRE_STATUS_NULL_POINTER = 1,
  WSEGRE_STATUS_INVALID_ARGUMENT = 2,
  WSEGRE_STATUS_DIMENSION_MISMATCH = 3,
  WSEGRE_STATUS_NOT_INVERTIBLE = 4,
  WSEGRE_STATUS_UNSUPPORTED_DIMENSION = 5,
  WSEGRE_STATUS_PARSE = 6,
  WSEGRE_STATUS_NOT_FOUND = 7,
  WSEGRE_STATUS_INTERNAL = 8,
} WsegreStatus;

// Validated geometric input `(n, (K+D)^n, (-D)^n, components)`.
typedef struct WsegreGeometry WsegreGeometry;

// Exact rational number.
typedef struct WsegreRational WsegreRational;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *wsegre_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a pointer obtained from this library and not yet freed.
void wsegre_string_free(char *s);

// Creates `num/den`.
//
// # Safety
// `out` must be a valid pointer.
enum WsegreStatus wsegre_rational_new(int64_t num, int64_t den, struct WsegreRational **out);

// Parses `"P/Q"` or `"P"` with arbitrarily large integers.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum WsegreStatus wsegre_rational_parse(const char *text, struct WsegreRational **out);

// Decimal `"P/Q"` (or `"P"`) form; free with `wsegre_string_free`.
//
// # Safety
// `q` must be null or a live handle.
char *wsegre_rational_to_string(const struct WsegreRational *q);

// Nearest binary64 value; NaN for a null handle.
//
// # Safety
// `q` must be null or a live handle.
double wsegre_rational_to_f64(const struct WsegreRational *q);

// # Safety
// `q` must be null or a handle from this library that has not been freed.
void wsegre_rational_free(struct WsegreRational *q);

// Creates a geometry handle. The rationals are copied.
//
// # Safety
// `kd_n` and `neg_dn` must be live handles and `out` a valid pointer.
enum WsegreStatus wsegre_geometry_new(size_t n,
                                      const struct WsegreRational *kd_n,
                                      const struct WsegreRational *neg_dn,
                                      uint64_t components,
                                      struct WsegreGeometry **out);

// # Safety
// `g` must be null or a handle from this library that has not been freed.
void wsegre_geometry_free(struct WsegreGeometry *g);

// Sum of `1/(u_1...u_n)` over `n`-subsets of the multiset `S_{k,n}`.
//
// # Safety
// `out` must be a valid pointer.
enum WsegreStatus wsegre_sum_skn(size_t n, uint64_t k, struct WsegreRational **out);

// Sum of `1/(i_1...i_n)` over `1 <= i_1 <= ... <= i_n <= k`.
//
// # Safety
// `out` must be a valid pointer.
enum WsegreStatus wsegre_sum_nondecreasing(size_t n, uint64_t k, struct WsegreRational **out);

// `(-1)^n` times the top Segre class of the weighted sum of `k` copies of
// the tangent bundle of `P^n`.
//
// # Safety
// `out` must be a valid pointer.
enum WsegreStatus wsegre_weighted_tangent_top_segre(size_t n,
                                                    uint64_t k,
                                                    struct WsegreRational **out);

// Volume of logarithmic jet differentials of order `k`.
//
// # Safety
// `kd_n` must be a live handle and `out` a valid pointer.
enum WsegreStatus wsegre_volume_log(size_t n,
                                    uint64_t k,
                                    const struct WsegreRational *kd_n,
                                    struct WsegreRational **out);

// Lower bound on the volume of order-`k` Green-Griffiths jet differentials.
//
// # Safety
// `g` must be a live handle and `out` a valid pointer.
enum WsegreStatus wsegre_theorem1_bound(const struct WsegreGeometry *g,
                                        uint64_t k,
                                        struct WsegreRational **out);

// Smallest `k <= k_max` with a positive bound, or `WSEGRE_STATUS_NOT_FOUND`.
//
// # Safety
// `g` must be a live handle and `out` a valid pointer.
enum WsegreStatus wsegre_find_min_k(const struct WsegreGeometry *g, uint64_t k_max, uint64_t *out);

// Threshold on `log k`. `neg_dn` may be null for `n >= 6`.
//
// # Safety
// `neg_dn` must be null or a live handle; `out` must be a valid pointer.
enum WsegreStatus wsegre_threshold_logk(size_t n, const struct WsegreRational *neg_dn, double *out);

// The factor `A(k, n)` as a function of `log k`.
//
// # Safety
// `out` must be a valid pointer.
enum WsegreStatus wsegre_a_of_kn(double log_k, size_t n, double *out);

// Rank of the degree-`m` graded piece of `E^GG_{k,m}` in dimension `n`, as
// an integer-valued rational.
//
// # Safety
// `out` must be a valid pointer.
enum WsegreStatus wsegre_rank_gr_e(size_t n, size_t k, uint64_t m, struct WsegreRational **out);

// Sections of the graded boundary sheaf in degree `m`, for a boundary with
// `(-D)^n = -neg_dn_abs` spread over `components` components.
//
// # Safety
// `neg_dn_abs` must be a live handle and `out` a valid pointer.
enum WsegreStatus wsegre_h0_gr_q(size_t n,
                                 size_t k,
                                 uint64_t m,
                                 const struct WsegreRational *neg_dn_abs,
                                 uint64_t components,
                                 struct WsegreRational **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WSEGRE_H */

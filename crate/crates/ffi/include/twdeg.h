#ifndef TWDEG_H
#define TWDEG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TwdegStatus {
  TWDEG_STATUS_OK = 0,
  TWDEG_STATUS_NULL_POINTER = 1,
  TWDEG_STATUS_INVALID_ARGUMENT = 2,
  TWDEG_STATUS_BAD_ORDER = 3,
  TWDEG_STATUS_TOO_LARGE = 4,
  TWDEG_STATUS_UNKNOWN_CHECK = 5,
  TWDEG_STATUS_IO = 6,
  TWDEG_STATUS_INTERNAL = 7,
  TWDEG_STATUS_PANIC = 8,
} TwdegStatus;

// A field order `q` with its enumerated `PSL(2,q)`.
typedef struct TwdegPsl TwdegPsl;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next failing call on the same thread; do not free.
const char *twdeg_last_error_message(void);

// Builds `PSL(2,q)`. Elements are indices `0..order`, with 0 the identity.
enum TwdegStatus twdeg_psl_new(uint32_t q, struct TwdegPsl **out);

// Releases a handle; null is ignored.
void twdeg_psl_free(struct TwdegPsl *h);

enum TwdegStatus twdeg_psl_order(const struct TwdegPsl *h, uint64_t *out);

// Order of the stabilizer of infinity.
enum TwdegStatus twdeg_psl_point_stabilizer_order(const struct TwdegPsl *h, uint64_t *out);

// `a * b`, acting first by `a`.
enum TwdegStatus twdeg_psl_multiply(const struct TwdegPsl *h,
                                    uint32_t a,
                                    uint32_t b,
                                    uint32_t *out);

enum TwdegStatus twdeg_psl_inverse(const struct TwdegPsl *h, uint32_t a, uint32_t *out);

enum TwdegStatus twdeg_psl_element_order(const struct TwdegPsl *h, uint32_t a, uint32_t *out);

enum TwdegStatus twdeg_psl_centralizer_order(const struct TwdegPsl *h, uint32_t a, uint64_t *out);

// Size of the conjugacy class of `a`.
enum TwdegStatus twdeg_psl_class_size(const struct TwdegPsl *h, uint32_t a, uint64_t *out);

// Runs `table1`, `table2`, `table4`, `report` or a lemma id and returns the
// JSON report in `out_json`. `q` and `m` of 0 select the defaults;
// `passed` receives 1 iff no check failed.
enum TwdegStatus twdeg_run(const char *command,
                           uint32_t q,
                           uint32_t m,
                           bool long_running,
                           char **out_json,
                           int32_t *passed);

// Releases a string returned by this library; null is ignored.
void twdeg_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWDEG_H */

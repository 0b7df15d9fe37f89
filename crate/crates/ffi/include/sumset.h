#ifndef SUMSET_H
#define SUMSET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SumsetStatus {
  SUMSET_STATUS_OK = 0,
  SUMSET_STATUS_NULL_POINTER = 1,
  SUMSET_STATUS_USAGE = 2,
  SUMSET_STATUS_UNSUPPORTED = 3,
  SUMSET_STATUS_PARSE = 4,
  SUMSET_STATUS_INFEASIBLE = 5,
  SUMSET_STATUS_CHECKPOINT = 6,
  SUMSET_STATUS_IO = 7,
  SUMSET_STATUS_BUFFER_TOO_SMALL = 8,
  SUMSET_STATUS_INTERNAL = 9,
} SumsetStatus;

typedef enum SumsetStrategy {
  SUMSET_STRATEGY_EXHAUSTIVE = 0,
  SUMSET_STRATEGY_ORBIT = 1,
  SUMSET_STRATEGY_BRANCH_AND_BOUND = 2,
} SumsetStrategy;

// Opaque set of points of Z_p^r.
typedef struct SumsetSet SumsetSet;

// Result of `sumset_rho`.
typedef struct SumsetRhoResult {
  // Least |2^A| found; meaningful only when `found` is nonzero.
  uint32_t value;
  bool found;
  // Whether every m-subset was covered.
  bool complete;
  double coverage;
  uint64_t nodes_visited;
} SumsetRhoResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *sumset_version(void);

// Message for the last failed call on this thread. Valid until the next
// failing call on the same thread; empty if none failed.
const char *sumset_last_error(void);

// Builds a set in Z_p^r from flat indices (index = c0 + p c1 + p^2 c2 ...).
enum SumsetStatus sumset_set_new(uint32_t p,
                                 uint32_t r,
                                 const uint32_t *indices,
                                 size_t len,
                                 struct SumsetSet **out);

// Releases a handle. Null is ignored.
void sumset_set_free(struct SumsetSet *set);

enum SumsetStatus sumset_set_len(const struct SumsetSet *set, size_t *out);

// Copies sorted flat indices into `buf`. `needed` always receives the set
// size; if it exceeds `cap`, nothing is copied and `BufferTooSmall` is
// returned.
enum SumsetStatus sumset_set_indices(const struct SumsetSet *set,
                                     uint32_t *buf,
                                     size_t cap,
                                     size_t *needed);

// A + B, or the restricted sum {a + b : a != b} when `restricted` is set.
enum SumsetStatus sumset_sumset(const struct SumsetSet *a,
                                const struct SumsetSet *b,
                                bool restricted,
                                struct SumsetSet **out);

// |2^A|, the size of the restricted sumset of A with itself.
enum SumsetStatus sumset_restricted_size(const struct SumsetSet *a, size_t *out);

// Minimum |2^A| over m-subsets of Z_p^r. `budget_secs <= 0` means no
// budget; long unbudgeted runs are refused with `Infeasible`.
enum SumsetStatus sumset_rho(uint32_t p,
                             uint32_t r,
                             size_t m,
                             enum SumsetStrategy strategy,
                             double budget_secs,
                             struct SumsetRhoResult *out);

// Lower bound on |2^A| for any A in Z_p^2 whose coset sizes with respect
// to some order-p subgroup are `sizes` (p entries, any order).
enum SumsetStatus sumset_profile_bound(uint32_t p,
                                       const uint32_t *sizes,
                                       size_t len,
                                       uint32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMSET_H */

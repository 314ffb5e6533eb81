#ifndef FANOCI_H
#define FANOCI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. The first four values match the command-line exit codes.
 */
typedef enum FanociStatus {
  /**
   * Success; for checks, a pass or partial verdict.
   */
  FANOCI_STATUS_OK = 0,
  /**
   * A check ran and some condition failed.
   */
  FANOCI_STATUS_FAIL = 1,
  FANOCI_STATUS_INPUT_ERROR = 2,
  FANOCI_STATUS_BUDGET_EXCEEDED = 3,
  FANOCI_STATUS_NULL_POINTER = 4,
  /**
   * A panic was caught at the boundary.
   */
  FANOCI_STATUS_INTERNAL = 5,
} FanociStatus;

/**
 * A parsed pair document.
 */
typedef struct FanociPair FanociPair;

/**
 * The per-condition codimension bounds at `(M, d1, d2)`.
 */
typedef struct FanociLedger {
  uint32_t m;
  uint32_t d1;
  uint32_t d2;
  int64_t r01_irred;
  int64_t r01_rank;
  int64_t r02;
  int64_t r1;
  /**
   * Shared by R2.2 and R3.2.
   */
  int64_t r22;
  int64_t r21;
  int64_t r31;
  int64_t minimum;
  int64_t target;
  /**
   * Every required ledger check holds.
   */
  bool ok;
} FanociLedger;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last non-ok status on this thread, or null. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *fanoci_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void fanoci_string_free(char *s);

/**
 * Parses a pair document (JSON) into a new handle stored in `*out`.
 *
 * # Safety
 * `json` must be a valid nul-terminated string; `out` must be valid for one
 * pointer write.
 */
enum FanociStatus fanoci_pair_from_json(const char *json, struct FanociPair **out);

/**
 * # Safety
 * `pair` must be null or a handle from [`fanoci_pair_from_json`] not yet freed.
 */
void fanoci_pair_free(struct FanociPair *pair);

/**
 * Runs every condition on the pair at its listed points, or at up to
 * `sample` sampled points when it lists none. The report (JSON) goes to
 * `*out_json` whenever the check ran; the status carries the verdict.
 *
 * # Safety
 * `pair` must be a live handle; `out_json` must be valid for one pointer write.
 */
enum FanociStatus fanoci_pair_check(const struct FanociPair *pair,
                                    uintptr_t budget,
                                    uint64_t seed,
                                    uintptr_t sample,
                                    char **out_json);

/**
 * Classifies the pair's listed points; the result is a JSON array.
 *
 * # Safety
 * `pair` must be a live handle; `out_json` must be valid for one pointer write.
 */
enum FanociStatus fanoci_pair_classify(const struct FanociPair *pair, char **out_json);

/**
 * Reduced Gröbner basis of an ideal document (JSON in, JSON out).
 *
 * # Safety
 * `json` must be a valid nul-terminated string; `out_json` must be valid for
 * one pointer write.
 */
enum FanociStatus fanoci_groebner_json(const char *json, uintptr_t budget, char **out_json);

/**
 * The stated codimension bound for one condition. `tag` is one of
 * `R0.1-irred`, `R0.1-rank`, `R0.2`, `R1`, `R2.1`, `R2.2`, `R3.1`, `R3.2`.
 *
 * # Safety
 * `tag` must be a valid nul-terminated string; `out` must be valid for one write.
 */
enum FanociStatus fanoci_condition_bound(const char *tag,
                                         uint32_t m,
                                         uint32_t d1,
                                         uint32_t d2,
                                         int64_t *out);

/**
 * Fills `*out` with the bound ledger at `(M, d1, d2)`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum FanociStatus fanoci_ledger(uint32_t m, uint32_t d1, uint32_t d2, struct FanociLedger *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FANOCI_H */

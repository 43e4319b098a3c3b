#ifndef IDEMKERN_H
#define IDEMKERN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes; 0 to 3 match the command-line exit statuses.
 */
typedef enum IkStatus {
  IK_STATUS_OK = 0,
  /**
   * The question was answered in the negative; outputs are still written.
   */
  IK_STATUS_VERDICT_NEGATIVE = 1,
  IK_STATUS_INVALID_INPUT = 2,
  IK_STATUS_INTERNAL_INCONSISTENCY = 3,
  IK_STATUS_NULL_POINTER = 4,
  IK_STATUS_PANIC = 5,
} IkStatus;

/**
 * An operator between functional semimodules loaded from JSON.
 */
typedef struct IkOperator IkOperator;

/**
 * A functional semimodule loaded from JSON.
 */
typedef struct IkSemimodule IkSemimodule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread; empty if none. Valid until
 * the next call into this library on the same thread.
 */
const char *ik_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ik_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ik_string_free(char *s);

/**
 * Loads a semimodule file.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum IkStatus ik_semimodule_from_json(const char *json, struct IkSemimodule **out);

/**
 * # Safety
 * `m` must be null or a handle from [`ik_semimodule_from_json`], not yet freed.
 */
void ik_semimodule_free(struct IkSemimodule *m);

/**
 * Number of points of the underlying set `X`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum IkStatus ik_semimodule_dim(const struct IkSemimodule *m, size_t *out);

/**
 * Carrier size; `InvalidInput` for a full space over an infinite semiring
 * or one larger than the enumeration cap.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum IkStatus ik_semimodule_len(const struct IkSemimodule *m, size_t *out);

/**
 * Whether the internal join is the pointwise one.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum IkStatus ik_semimodule_is_b_subsemimodule(const struct IkSemimodule *m, bool *out);

/**
 * Whether the identity of the semimodule is integral. Returns
 * `VerdictNegative` (with `*holds = false`) when it is not.
 *
 * # Safety
 * `m` must be a live handle; `holds` must be writable.
 */
enum IkStatus ik_semimodule_identity_integral(const struct IkSemimodule *m, bool *holds);

/**
 * Loads an operator file.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum IkStatus ik_operator_from_json(const char *json, struct IkOperator **out);

/**
 * # Safety
 * `op` must be null or a handle from [`ik_operator_from_json`], not yet freed.
 */
void ik_operator_free(struct IkOperator *op);

/**
 * The maximal kernel as a kernel file. Returns `VerdictNegative` when the
 * operator has no integral representation; the kernel written is then the
 * residual candidate that fails.
 *
 * # Safety
 * `op` must be a live handle; `kernel_json` must be writable.
 */
enum IkStatus ik_operator_max_kernel(const struct IkOperator *op, char **kernel_json);

/**
 * Runs a command on JSON input and writes its JSON output, with the same
 * status the command-line tool would exit with. Commands: `axioms`,
 * `kernel-extract`, `kernel-decide`, `delta-enum`, `shortest-path`,
 * `viterbi`, `conv`. `seed` is used by `axioms`.
 *
 * # Safety
 * `command` and `input` must be NUL-terminated strings; `output` must be
 * writable.
 */
enum IkStatus ik_run(const char *command, const char *input, uint64_t seed, char **output);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IDEMKERN_H */

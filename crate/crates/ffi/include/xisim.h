#ifndef XISIM_H
#define XISIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/*
 Result codes. Zero is success.
 */
typedef enum XisimStatus {
  XISIM_STATUS_OK = 0,
  XISIM_STATUS_NULL_POINTER = 1,
  XISIM_STATUS_INVALID_UTF8 = 2,
  XISIM_STATUS_PARSE = 3,
  XISIM_STATUS_INVALID_ARGUMENT = 4,
  /*
   Input outside an operation's domain.
   */
  XISIM_STATUS_DOMAIN = 5,
  XISIM_STATUS_TOO_LARGE = 6,
  XISIM_STATUS_NOT_LOCALLY_APPLICABLE = 7,
  /*
   Search ended with several candidate solutions.
   */
  XISIM_STATUS_MULTIPLE_SOLUTIONS = 8,
  XISIM_STATUS_INTERNAL = 9,
} XisimStatus;

/*
 Shared resource for [`xisim_chsh`].
 */
typedef enum XisimResource {
  XISIM_RESOURCE_CLASSICAL = 0,
  XISIM_RESOURCE_QUANTUM = 1,
  XISIM_RESOURCE_PR_BOX = 2,
} XisimResource;

/*
 Alice's action for [`xisim_bell_signaling_advantage`].
 */
typedef enum XisimAction {
  XISIM_ACTION_IDENTITY = 0,
  XISIM_ACTION_PAULI_X = 1,
  XISIM_ACTION_HADAMARD = 2,
  XISIM_ACTION_WEINBERG = 3,
} XisimAction;

/*
 Opaque causal model.
 */
typedef struct XisimModel XisimModel;

/*
 Opaque truth-table oracle.
 */
typedef struct XisimOracle XisimOracle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. Free with [`xisim_string_free`].
 */
char *xisim_last_error_message(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void xisim_string_free(char *s);

/*
 Library version as a static NUL-terminated string.
 */
const char *xisim_version(void);

/*
 Parses an oracle file (`n=<int>` then one satisfying bit string per line).

 # Safety
 `source` must be a NUL-terminated string and `out_oracle` writable.
 */
enum XisimStatus xisim_oracle_parse(const char *source, struct XisimOracle **out_oracle);

/*
 Builds an oracle from `2^n` truth-table bytes (nonzero means satisfied).

 # Safety
 `table` must point to `len` readable bytes and `out_oracle` be writable.
 */
enum XisimStatus xisim_oracle_from_table(size_t n,
                                         const uint8_t *table,
                                         size_t len,
                                         struct XisimOracle **out_oracle);

/*
 # Safety
 `oracle` must come from this library or be NULL.
 */
void xisim_oracle_free(struct XisimOracle *oracle);

/*
 Marker-mode search. `found` is false when the oracle has no solution.

 # Safety
 `oracle` must be a live handle; out-pointers must be writable.
 */
enum XisimStatus xisim_np_search(const struct XisimOracle *oracle,
                                 bool *out_found,
                                 uint64_t *out_solution,
                                 size_t *out_gate_applications);

/*
 Number of satisfying inputs.

 # Safety
 `oracle` must be a live handle; `out_count` must be writable.
 */
enum XisimStatus xisim_sharp_p_count(const struct XisimOracle *oracle, uint64_t *out_count);

/*
 Smallest solution by prefix descent on counts.

 # Safety
 `oracle` must be a live handle; out-pointers must be writable.
 */
enum XisimStatus xisim_search_via_counting(const struct XisimOracle *oracle,
                                           bool *out_found,
                                           uint64_t *out_solution,
                                           size_t *out_counting_calls);

/*
 Parses a causal model file.

 # Safety
 `source` must be a NUL-terminated string and `out_model` writable.
 */
enum XisimStatus xisim_model_parse(const char *source, struct XisimModel **out_model);

/*
 Serializes a model; free the result with [`xisim_string_free`]. NULL on a NULL handle.

 # Safety
 `model` must be a live handle or NULL.
 */
char *xisim_model_to_string(const struct XisimModel *model);

/*
 # Safety
 `model` must come from this library or be NULL.
 */
void xisim_model_free(struct XisimModel *model);

/*
 d-separation of comma-separated node lists; `l` may be empty.

 # Safety
 `model` must be a live handle, the lists NUL-terminated strings and
 `out_separated` writable.
 */
enum XisimStatus xisim_d_separated(const struct XisimModel *model,
                                   const char *j,
                                   const char *k,
                                   const char *l,
                                   bool *out_separated);

/*
 CHSH value for a resource. `angles` holds Alice's two angles then Bob's
 and is read only for the quantum resource; NULL selects the Tsirelson angles.

 # Safety
 `angles` must be NULL or point to 4 doubles; `out_value` must be writable.
 */
enum XisimStatus xisim_chsh(enum XisimResource resource, const double *angles, double *out_value);

/*
 Trace distance between Bob's states before and after Alice acts on her
 half of `(|00⟩ + |11⟩)/√2`.

 # Safety
 `out_distance` must be writable.
 */
enum XisimStatus xisim_bell_signaling_advantage(enum XisimAction action, double *out_distance);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XISIM_H */

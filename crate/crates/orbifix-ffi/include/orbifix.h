/* C interface of the orbifix fixing and separation routines. */

#ifndef ORBIFIX_H
#define ORBIFIX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status and error codes. Non-negative values are outcomes, negative
// values are errors.
enum OrbifixStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  ORBIFIX_STATUS_OK = 0,
  // The face contains no feasible 0/1 point.
  ORBIFIX_STATUS_INFEASIBLE = 1,
  // Separation found no violated inequality.
  ORBIFIX_STATUS_NO_VIOLATION = 2,
  ORBIFIX_STATUS_INVALID_ARGUMENT = -1,
  ORBIFIX_STATUS_PARSE_ERROR = -2,
  ORBIFIX_STATUS_NOT_FIXING_READY = -3,
  ORBIFIX_STATUS_NULL_POINTER = -4,
  ORBIFIX_STATUS_INVALID_UTF8 = -5,
  ORBIFIX_STATUS_GUARD_EXCEEDED = -6,
  ORBIFIX_STATUS_BUFFER_TOO_SMALL = -7,
  ORBIFIX_STATUS_PANIC = -99,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum OrbifixStatus OrbifixStatus;
#else
typedef int32_t OrbifixStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Opaque face handle: a set of 0-fixed and 1-fixed cells over a shape.
typedef struct OrbifixFace OrbifixFace;

// Work counters reported by [`orbifix_fix`].
typedef struct OrbifixFixStats {
  uint64_t flag_transitions;
  uint64_t fixed_zeros;
  uint64_t fixed_ones;
} OrbifixFixStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The last error message of this thread; a borrowed pointer, valid until
// the next library call on the same thread.
const char *orbifix_last_error(void);

// Library version as a static string.
const char *orbifix_version(void);

// Creates an empty face over a `p x q` shape (`p >= q >= 2`).
//
// # Safety
// `out` must be a valid pointer; on `Ok` it receives a handle that must be
// released with [`orbifix_face_free`].
OrbifixStatus orbifix_face_new(uint32_t p, uint32_t q, struct OrbifixFace **out);

// Parses the text record `p q ; zeros: (i,j) ... ; ones: (i,j) ...`.
//
// # Safety
// `text` must be a NUL-terminated string; `out` as in [`orbifix_face_new`].
OrbifixStatus orbifix_face_parse(const char *text, struct OrbifixFace **out);

// Releases a face handle. A null pointer is ignored.
//
// # Safety
// `face` must have been returned by this library and not freed before.
void orbifix_face_free(struct OrbifixFace *face);

// Frees a string returned by this library. A null pointer is ignored.
//
// # Safety
// `s` must have been returned by this library and not freed before.
void orbifix_string_free(char *s);

// Fixes a cell to zero.
//
// # Safety
// `face` must be a live handle from this library.
OrbifixStatus orbifix_face_fix_zero(struct OrbifixFace *face, uint32_t i, uint32_t j);

// Fixes a cell to one.
//
// # Safety
// `face` must be a live handle from this library.
OrbifixStatus orbifix_face_fix_one(struct OrbifixFace *face, uint32_t i, uint32_t j);

// Renders the face as a text record; the string is freed with
// [`orbifix_string_free`].
//
// # Safety
// `face` must be a live handle; `out` must be a valid pointer.
OrbifixStatus orbifix_face_format(const struct OrbifixFace *face, char **out);

// Closes the face under the one-per-row rule (row-complement zeros of every
// 1-fixing) in place. Returns `Infeasible` when a cell is forced both ways.
//
// # Safety
// `face` must be a live handle from this library.
OrbifixStatus orbifix_face_complete(struct OrbifixFace *face);

// Computes the simultaneous fixing of a fixing-ready face.
//
// On `Ok`, `out_fixed` receives the enlarged face; on `Infeasible` it is
// set to null. `stats` (optional) receives the work counters either way.
// A face that violates the readiness conditions yields `NotFixingReady`;
// close it with [`orbifix_face_complete`] first.
//
// # Safety
// `face` must be a live handle; `out_fixed` must be valid; `stats` may be
// null.
OrbifixStatus orbifix_fix(const struct OrbifixFace *face,
                          struct OrbifixFace **out_fixed,
                          struct OrbifixFixStats *stats);

// Whether the face satisfies the fixing-readiness conditions.
//
// # Safety
// `face` must be a live handle from this library.
OrbifixStatus orbifix_face_is_ready(const struct OrbifixFace *face);

// Finds the most violated shifted column inequality at a fractional point.
//
// `x` holds the point row-major over the reduced index set of the shape
// (`len` values). On `Ok`, the anchor cell and the violation are written,
// and `entry_cols` receives the shifted-column entry columns by diagonal
// (`entry_len` of them, at most `p`). Returns `NoViolation` when every
// inequality holds within 1e-6.
//
// # Safety
// `x` must point to `len` doubles; out-pointers must be valid; `entry_cols`
// must have capacity for `entry_capacity` values.
OrbifixStatus orbifix_separate(uint32_t p,
                               uint32_t q,
                               const double *x,
                               size_t len,
                               uint32_t *anchor_i,
                               uint32_t *anchor_j,
                               double *violation,
                               uint32_t *entry_cols,
                               size_t entry_capacity,
                               size_t *entry_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBIFIX_H */

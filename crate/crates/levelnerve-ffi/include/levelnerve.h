#ifndef LEVELNERVE_H
#define LEVELNERVE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LnStatus {
  LN_STATUS_OK = 0,
  LN_STATUS_NULL_POINTER = 1,
  LN_STATUS_ARGUMENT = 2,
  LN_STATUS_SCHEMA = 3,
  LN_STATUS_RESOURCE = 4,
  LN_STATUS_UNSUPPORTED = 5,
  LN_STATUS_PRECONDITION = 6,
  LN_STATUS_INVARIANCE = 7,
  LN_STATUS_UTF8 = 8,
  LN_STATUS_INTERNAL = 9,
} LnStatus;

/*
 Finite simplicial set.
 */
typedef struct LnComplex LnComplex;

/*
 Finite Galois cover of a punctured surface.
 */
typedef struct LnCover LnCover;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL.
 */
const char *ln_last_error(void);

/*
 Library version as a static string.
 */
const char *ln_version(void);

/*
 # Safety
 `s` must come from this library or be NULL.
 */
void ln_string_free(char *s);

/*
 Abelian nerve of `S_{g,n}` at level `m`.

 # Safety
 `out` must be a valid pointer.
 */
enum LnStatus ln_nerve_build(uintptr_t g, uintptr_t n, int64_t m, struct LnComplex **out);

/*
 Image complex of `cover` at level `m`.

 # Safety
 `cover` must be a live handle and `out` a valid pointer.
 */
enum LnStatus ln_image_build(const struct LnCover *cover, int64_t m, struct LnComplex **out);

/*
 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LnStatus ln_complex_from_json(const char *json, struct LnComplex **out);

/*
 # Safety
 `x` must be a live handle and `out` a valid pointer.
 */
enum LnStatus ln_complex_to_json(const struct LnComplex *x, char **out);

/*
 Number of ranks (top rank plus one).

 # Safety
 `x` must be a live handle and `out` a valid pointer.
 */
enum LnStatus ln_complex_ranks(const struct LnComplex *x, uintptr_t *out);

/*
 Number of simplices of rank `k` (0 above the top rank).

 # Safety
 `x` must be a live handle and `out` a valid pointer.
 */
enum LnStatus ln_complex_count(const struct LnComplex *x, uintptr_t k, uintptr_t *out);

/*
 Writes 1 if the edge-path group was shown trivial, 0 if a nontrivial
 quotient was found, -1 if undecided.

 # Safety
 `x` must be a live handle and `out` a valid pointer.
 */
enum LnStatus ln_complex_pi1(const struct LnComplex *x, int32_t *out);

/*
 # Safety
 `x` must come from this library or be NULL.
 */
void ln_complex_free(struct LnComplex *x);

/*
 Trivial cover of `S_{g,n}`.

 # Safety
 `out` must be a valid pointer.
 */
enum LnStatus ln_cover_identity(uintptr_t g, uintptr_t n, struct LnCover **out);

/*
 Mod-`m` homology cover of `S_{g,n}`.

 # Safety
 `out` must be a valid pointer.
 */
enum LnStatus ln_cover_homology(uintptr_t g, uintptr_t n, int64_t m, struct LnCover **out);

/*
 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LnStatus ln_cover_from_json(const char *json, struct LnCover **out);

/*
 # Safety
 `c` must be a live handle and `out` a valid pointer.
 */
enum LnStatus ln_cover_to_json(const struct LnCover *c, char **out);

/*
 # Safety
 `c` must come from this library or be NULL.
 */
void ln_cover_free(struct LnCover *c);

/*
 Abelian local kernel at the `index`-th stratum type of rank `rank`, as a
 JSON artifact.

 # Safety
 `out` must be a valid pointer.
 */
enum LnStatus ln_abelian_kernel_json(uintptr_t g,
                                     uintptr_t n,
                                     uintptr_t rank,
                                     uintptr_t index,
                                     int64_t m,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEVELNERVE_H */

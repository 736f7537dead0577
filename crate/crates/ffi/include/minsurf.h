#ifndef MINSURF_H
#define MINSURF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Error codes mirrored from the CLI exit codes.
 */
#define MINSURF_OK 0

#define MINSURF_ERR_CONDITION 1

#define MINSURF_ERR_PARSE 2

#define MINSURF_ERR_DEGENERATE 3

#define MINSURF_ERR_NUMERICAL 4

#define MINSURF_ERR_NOT_CONGRUENT 5

#define MINSURF_ERR_ARGUMENT -1

/**
 * An opaque surface: Weierstrass data plus its default grid.
 */
typedef struct MinsurfSurface MinsurfSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a TOML surface description.  On success writes a new handle to
 * `out` and returns 0; the handle must be released with
 * `minsurf_surface_free`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
int minsurf_surface_parse(const char *text, struct MinsurfSurface **out);

/**
 * Releases a handle obtained from `minsurf_surface_parse`.
 *
 * # Safety
 * `surface` must be a handle from this library or null; it must not be
 * used afterwards.
 */
void minsurf_surface_free(struct MinsurfSurface *surface);

/**
 * Runs the validity conditions over the surface's grid: 0 when clean,
 * 1 when any node is flagged.
 *
 * # Safety
 * `surface` must be a valid handle.
 */
int minsurf_surface_validate(const struct MinsurfSurface *surface);

/**
 * Evaluates Phi and Phi' at t = u + iv: 16 doubles, interleaved
 * re/im of the four components of Phi then of Phi'.
 *
 * # Safety
 * `surface` must be a valid handle and `out` must point to 16 doubles.
 */
int minsurf_surface_phi(const struct MinsurfSurface *surface, double u, double v, double *out);

/**
 * Pointwise invariants at t = u + iv: writes E, K and kappa.
 *
 * # Safety
 * `surface` must be a valid handle; `e`, `k`, `kappa` must be valid
 * pointers.
 */
int minsurf_surface_invariants(const struct MinsurfSurface *surface,
                               double u,
                               double v,
                               double *e,
                               double *k,
                               double *kappa);

/**
 * Samples the surface over its grid with base point t0 = u0 + iv0 and
 * returns the CSV as a newly allocated string; release it with
 * `minsurf_string_free`.
 *
 * # Safety
 * `surface` must be a valid handle and `out` a valid pointer.
 */
int minsurf_surface_sample_csv(const struct MinsurfSurface *surface,
                               double u0,
                               double v0,
                               char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library or be null; it must not be used
 * afterwards.
 */
void minsurf_string_free(char *s);

/**
 * The message of the most recent error on this thread, or null.  The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *minsurf_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINSURF_H */

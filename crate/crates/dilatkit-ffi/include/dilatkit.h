/* C interface for the dilatkit surface library.
 *
 * Surfaces are opaque handles. Functions return a status code; the most
 * recent error message for the current thread is available through
 * dilatkit_last_error(). Strings returned through char** out-parameters
 * must be released with dilatkit_string_free().
 */

#ifndef DILATKIT_H
#define DILATKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct DilatkitSurface DilatkitSurface;

enum {
  DILATKIT_OK = 0,
  DILATKIT_ERR_PARSE = 1,
  DILATKIT_ERR_VALIDATION = 2,
  DILATKIT_ERR_INTERNAL = 3,
  DILATKIT_ERR_NULL_ARG = 4,
  DILATKIT_ERR_UTF8 = 5,
};

/* Most recent error message on this thread; valid until the next failing
 * call on the same thread. */
const char *dilatkit_last_error(void);

/* Library version. */
const char *dilatkit_version(void);

/* Release a string returned by this library. */
void dilatkit_string_free(char *s);

/* Parse and validate a surface from its JSON document. */
int32_t dilatkit_surface_parse(const char *json, DilatkitSurface **out);

/* Build a built-in corpus surface: square_torus, regular_2n_gon, chamber,
 * troyanov. param may be NULL or a rational string such as "3/2". */
int32_t dilatkit_surface_corpus(const char *name, const char *param,
                                DilatkitSurface **out);

/* Release a surface handle. */
void dilatkit_surface_free(DilatkitSurface *s);

/* Vertex classes, pairings, polygons, genus, marked points. Null
 * out-pointers are skipped. */
int32_t dilatkit_surface_topology(const DilatkitSurface *s, uint64_t *v,
                                  uint64_t *e, uint64_t *f, uint64_t *genus,
                                  uint64_t *n_marked);

/* Canonical serialization of the surface. */
int32_t dilatkit_surface_to_json(const DilatkitSurface *s, char **out);

/* Full invariant report (topology, cone data, holonomy kind, framing,
 * classification) as canonical JSON. */
int32_t dilatkit_surface_report_json(const DilatkitSurface *s, char **out);

/* Holonomy data (chi, m) on the canonical homology basis, as JSON. */
int32_t dilatkit_surface_holonomy_json(const DilatkitSurface *s, char **out);

/* SVG rendering of the polygon presentation. */
int32_t dilatkit_surface_svg(const DilatkitSurface *s, char **out);

/* Number of connected components of the dilation stratum with the given
 * genus and integer vector kappa. On success *count holds the component
 * count and *is_infinite is 0, or *is_infinite is 1 for the infinite
 * genus-1 unpunctured case. */
int32_t dilatkit_component_count(uint64_t genus, const int64_t *kappa,
                                 size_t kappa_len, uint64_t *count,
                                 uint8_t *is_infinite);

#ifdef __cplusplus
}
#endif

#endif /* DILATKIT_H */

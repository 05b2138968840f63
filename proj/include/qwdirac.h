#ifndef QWDIRAC_H
#define QWDIRAC_H

/* C interface to the quantum-walk simulator. Handles are opaque; every
 * fallible call returns an error code (or NULL) and leaves a message in
 * qwd_last_error(). Strings and buffers returned through char** are
 * heap-allocated and must be released with qwd_free().
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    QWD_OK = 0,       /* success */
    QWD_E_RUN = 1,    /* runtime or invariant failure */
    QWD_E_CONFIG = 2, /* unparsable or invalid configuration */
};

const char* qwd_version(void);

/* Message from the most recent failed call on this thread; empty string if
 * none. The pointer stays valid until the next API call on the thread. */
const char* qwd_last_error(void);

void qwd_free(void* p);

/* ---- experiment configuration ---------------------------------------- */

typedef struct qwd_config qwd_config;

/* Parse and validate a key = value configuration. NULL on failure. */
qwd_config* qwd_config_load(const char* path);
qwd_config* qwd_config_parse(const char* text);
void qwd_config_free(qwd_config* cfg);

/* Set one key and revalidate; on failure the configuration is unchanged. */
int qwd_config_set(qwd_config* cfg, const char* key, const char* value);

/* Resolved value of a key, defaults included. NULL if the key is not part
 * of this configuration. Free the result with qwd_free(). */
char* qwd_config_get(const qwd_config* cfg, const char* key);

/* Run the configured experiment; outputs go to the configured output_dir.
 * On return *report (if report is non-NULL) holds a human-readable summary,
 * to be freed with qwd_free(). */
int qwd_run(const qwd_config* cfg, char** report);

/* Randomized invariant battery. QWD_OK when every check passes; the report
 * (if requested) is produced for failures too. */
int qwd_check(uint64_t seed, char** report);

/* ---- direct walk stepping --------------------------------------------- */

typedef struct qwd_walk qwd_walk;

/* A walk on n_sites periodic sites spanning [0, length); n_sites must be
 * even and at least 4. The state starts as all zeros and the coin angles
 * as all zeros (pure streaming). */
qwd_walk* qwd_walk_create(int n_sites, double length);
void qwd_walk_free(qwd_walk* w);

int qwd_walk_size(const qwd_walk* w);

/* Space- and time-uniform coin angles. */
int qwd_walk_set_uniform_angles(qwd_walk* w, double theta, double xi, double zeta,
                                double alpha);

/* State layout: 4 doubles per site, [Re L, Im L, Re R, Im R], site-major. */
int qwd_walk_set_state(qwd_walk* w, const double* interleaved, size_t len);
int qwd_walk_get_state(const qwd_walk* w, double* interleaved, size_t len);

/* Advance n_steps walk steps; the internal time row advances with them. */
int qwd_walk_step(qwd_walk* w, int n_steps);

/* Total probability, sum of |psi|^2 times the site spacing. */
double qwd_walk_norm(const qwd_walk* w);

#ifdef __cplusplus
}
#endif

#endif

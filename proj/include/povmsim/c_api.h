// Copyright 2026 The povmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to povmsim. All handles are opaque; every fallible call
 * returns a povm_status and leaves a message in povm_last_error(). Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with povm_string_free. Matrices are row-major; complex data is
 * interleaved (re, im). */

#ifndef POVMSIM_C_API_H
#define POVMSIM_C_API_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define POVM_API __declspec(dllexport)
#else
#define POVM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum povm_status {
    POVM_OK = 0,
    POVM_ERR_INVALID_ARGUMENT = 1,
    POVM_ERR_VALIDATION = 2,
    POVM_ERR_NUMERICAL = 3,
    POVM_ERR_IO = 4,
    POVM_ERR_INTERNAL = 5
} povm_status;

typedef struct povm_artifacts povm_artifacts;
typedef struct povm_model povm_model;
typedef struct povm_sg_params povm_sg_params;

POVM_API const char *povm_version(void);
/* Message of the last failed call on this thread ("" when none). */
POVM_API const char *povm_last_error(void);
POVM_API void povm_string_free(char *s);

/* --- commands ---------------------------------------------------------- */

/* JSON or flat-key config text -> JSON object text. */
POVM_API povm_status povm_config_parse(const char *text, char **json_out);

/* command: "sg run", "sg calibrate", "tomography", "inequalities", "sample",
 * "convergence". config_json: JSON object (NULL or "" for defaults). */
POVM_API povm_status povm_run_command(const char *command,
                                      const char *config_json,
                                      povm_artifacts **out);
POVM_API size_t povm_artifacts_count(const povm_artifacts *a);
POVM_API const char *povm_artifacts_name(const povm_artifacts *a, size_t i);
POVM_API const char *povm_artifacts_content(const povm_artifacts *a, size_t i,
                                            size_t *length);
POVM_API void povm_artifacts_free(povm_artifacts *a);

/* --- measurement models ------------------------------------------------ */

/* name: "controlled_flip" or "identity". */
POVM_API povm_status povm_model_builtin(const char *name, povm_model **out);
POVM_API povm_status povm_model_from_json(const char *json, povm_model **out);
POVM_API povm_status povm_model_to_json(const povm_model *m, char **json_out);
POVM_API povm_status povm_model_dims(const povm_model *m, int *object_dim,
                                     int *ancilla_dim, int *outcomes);
/* rho: object_dim x object_dim complex; probs: `outcomes` doubles. */
POVM_API povm_status povm_model_pointer_probabilities(const povm_model *m,
                                                      const double *rho,
                                                      double *probs);
/* effects: outcomes x object_dim x object_dim complex. */
POVM_API povm_status povm_model_effective_povm(const povm_model *m,
                                               double *effects);
POVM_API void povm_model_free(povm_model *m);

/* --- Stern-Gerlach ------------------------------------------------------ */

/* variant: "ideal", "corrected", "quadrupole". */
POVM_API povm_status povm_sg_params_create(const char *variant,
                                           povm_sg_params **out);
/* key: a, b, mu, m, tau, grid_n, extent, packet_width, steps. */
POVM_API povm_status povm_sg_params_set(povm_sg_params *p, const char *key,
                                        double value);
POVM_API povm_status povm_sg_params_get(const povm_sg_params *p,
                                        const char *key, double *value);
POVM_API povm_status povm_sg_params_to_json(const povm_sg_params *p,
                                            char **json_out);
/* spin: 2 complex amplitudes. probs receives 2 (univariate) or 4
 * (quadrupole) values; *count is set to that number. */
POVM_API povm_status povm_sg_run(const povm_sg_params *p, const double *spin,
                                 double *probs, size_t capacity,
                                 size_t *count);
POVM_API void povm_sg_params_free(povm_sg_params *p);

/* --- numerics ----------------------------------------------------------- */

/* lambda: rows x cols, column-stochastic. */
POVM_API povm_status povm_row_entropy(const double *lambda, int rows, int cols,
                                      double *out);
/* rho: dim x dim complex. */
POVM_API povm_status povm_von_neumann_entropy(const double *rho, int dim,
                                              double *out);
/* Operators dim x dim complex; psi dim complex. */
POVM_API povm_status povm_robertson(const double *a, const double *b,
                                    const double *psi, int dim, double *lhs,
                                    double *rhs);
POVM_API povm_status povm_sample(const double *probs, size_t outcomes,
                                 uint64_t n, uint64_t seed, uint64_t *counts);

#ifdef __cplusplus
}
#endif

#endif /* POVMSIM_C_API_H */

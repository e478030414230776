#ifndef LAVLAB_LAVLAB_H
#define LAVLAB_LAVLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LAVLAB_API __declspec(dllexport)
#else
#define LAVLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lavlab_status {
    LAVLAB_OK = 0,
    LAVLAB_ERR_ARGUMENT = 1,
    LAVLAB_ERR_DOMAIN = 2,
    LAVLAB_ERR_LOOKUP = 3,
    LAVLAB_ERR_SINGULAR = 4,
    LAVLAB_ERR_CONTRACT = 5,
    LAVLAB_ERR_INFEASIBLE = 6,
    LAVLAB_ERR_UNSUPPORTED = 7,
    LAVLAB_ERR_PARSE = 8,
    LAVLAB_ERR_IO = 9,
    LAVLAB_ERR_INTERNAL = 10
} lavlab_status;

typedef struct lavlab_lagrangian lavlab_lagrangian;
typedef struct lavlab_trajectory lavlab_trajectory;
typedef struct lavlab_repar_result lavlab_repar_result;
typedef struct lavlab_run_output lavlab_run_output;

/* Message of the last failing call on this thread ("" after success). */
LAVLAB_API const char* lavlab_last_error_message(void);
LAVLAB_API const char* lavlab_status_name(lavlab_status status);
LAVLAB_API const char* lavlab_version(void);
/* Frees strings returned through char** out-parameters. */
LAVLAB_API void lavlab_string_free(char* s);

/* ---- Lagrangians ---- */

LAVLAB_API size_t lavlab_catalog_size(void);
LAVLAB_API const char* lavlab_catalog_id(size_t index); /* NULL past the end */
LAVLAB_API lavlab_status lavlab_lagrangian_from_catalog(const char* id, lavlab_lagrangian** out);
/* Catalog id string, {"id": ..., "A": ...} or a polynomial / catalog sum. */
LAVLAB_API lavlab_status lavlab_lagrangian_from_json(const char* json, lavlab_lagrangian** out);
LAVLAB_API void lavlab_lagrangian_free(lavlab_lagrangian* l);
LAVLAB_API const char* lavlab_lagrangian_id(const lavlab_lagrangian* l);
LAVLAB_API lavlab_status lavlab_lagrangian_eval(const lavlab_lagrangian* l, double t, double y, double v,
                                                double* out);
/* out[0] = L_t, out[1] = L_y, out[2] = L_v */
LAVLAB_API lavlab_status lavlab_lagrangian_partials(const lavlab_lagrangian* l, double t, double y, double v,
                                                    double out[3]);
LAVLAB_API lavlab_status lavlab_lagrangian_flags(const lavlab_lagrangian* l, int* autonomous, int* convex_in_v,
                                                 int* extended);

/* ---- Trajectories ---- */

LAVLAB_API lavlab_status lavlab_trajectory_create(const double* nodes, const double* values, size_t count,
                                                  lavlab_trajectory** out);
/* Nodal interpolant of a named exact function on graded_mesh(a, b, n, power).
 * params_json may be NULL or an object of numeric parameters, e.g. {"n": 10}. */
LAVLAB_API lavlab_status lavlab_trajectory_sample_exact(const char* name, const char* params_json, double a,
                                                        double b, size_t n, double power,
                                                        lavlab_trajectory** out);
LAVLAB_API lavlab_status lavlab_trajectory_from_csv(const char* text, lavlab_trajectory** out);
LAVLAB_API lavlab_status lavlab_trajectory_from_json(const char* text, lavlab_trajectory** out);
LAVLAB_API lavlab_status lavlab_trajectory_to_csv(const lavlab_trajectory* y, char** out);
LAVLAB_API lavlab_status lavlab_trajectory_to_json(const lavlab_trajectory* y, char** out);
LAVLAB_API void lavlab_trajectory_free(lavlab_trajectory* y);
LAVLAB_API size_t lavlab_trajectory_node_count(const lavlab_trajectory* y);
/* Copy up to `capacity` entries; returns the number of nodes. */
LAVLAB_API size_t lavlab_trajectory_copy_nodes(const lavlab_trajectory* y, double* out, size_t capacity);
LAVLAB_API size_t lavlab_trajectory_copy_values(const lavlab_trajectory* y, double* out, size_t capacity);
LAVLAB_API lavlab_status lavlab_trajectory_eval(const lavlab_trajectory* y, double t, double* out);
LAVLAB_API double lavlab_trajectory_lipschitz(const lavlab_trajectory* y);

/* ---- Computations ---- */

/* F(y) with the given quadrature order; *value is +INFINITY when infinite.
 * report_json (optional) receives {value, per_cell, error_estimate, order}. */
LAVLAB_API lavlab_status lavlab_energy(const lavlab_lagrangian* l, const lavlab_trajectory* y, int order,
                                       double* value, char** report_json);

typedef struct lavlab_repar_summary {
    double k;
    double lambda;
    double lip_before;
    double lip_after;
    double energy_before;
    double energy_after;
    double measure_fast;
    double measure_accel;
    double deficit;
} lavlab_repar_summary;

/* On LAVLAB_ERR_INFEASIBLE, *minimal_k (optional) receives the smallest
 * feasible slope threshold. */
LAVLAB_API lavlab_status lavlab_reparametrize(const lavlab_lagrangian* l, const lavlab_trajectory* y, double k,
                                              int order, lavlab_repar_result** out, double* minimal_k);
LAVLAB_API void lavlab_repar_result_free(lavlab_repar_result* r);
LAVLAB_API lavlab_status lavlab_repar_result_summary(const lavlab_repar_result* r, lavlab_repar_summary* out);
/* New trajectory handle owned by the caller. */
LAVLAB_API lavlab_status lavlab_repar_result_trajectory(const lavlab_repar_result* r, lavlab_trajectory** out);
LAVLAB_API lavlab_status lavlab_repar_result_json(const lavlab_repar_result* r, char** out);

/* Threshold report JSON; *found is 1 and *k_threshold set when a K exists. */
LAVLAB_API lavlab_status lavlab_find_threshold_k(const lavlab_lagrangian* l, const lavlab_trajectory* y,
                                                 const double* k_grid, size_t count, int order, unsigned threads,
                                                 int* found, double* k_threshold, char** report_json);

LAVLAB_API lavlab_status lavlab_el_residual(const lavlab_lagrangian* l, const lavlab_trajectory* y,
                                            double* max_abs, char** report_json);
LAVLAB_API lavlab_status lavlab_dbr_residual(const lavlab_lagrangian* l, const lavlab_trajectory* y,
                                             double* max_abs, double* constant, char** report_json);
LAVLAB_API lavlab_status lavlab_halfinverse_lower_bound(const lavlab_trajectory* y, double c, double b,
                                                        double lipschitz, double* out);

/* ---- Runner ---- */

/* Runs one experiment described by a JSON config (see README). Writes the
 * configured output files; the in-memory outputs stay readable from *out. */
LAVLAB_API lavlab_status lavlab_run(const char* config_json, lavlab_run_output** out);
LAVLAB_API const char* lavlab_run_output_json(const lavlab_run_output* o);
LAVLAB_API const char* lavlab_run_output_csv(const lavlab_run_output* o);
LAVLAB_API const char* lavlab_run_output_text(const lavlab_run_output* o);
LAVLAB_API void lavlab_run_output_free(lavlab_run_output* o);
/* Canonical JSON form of a (partial) config, without running it. */
LAVLAB_API lavlab_status lavlab_config_canonicalize(const char* config_json, char** out);
/* Validates a config; the aggregated messages are in lavlab_last_error_message. */
LAVLAB_API lavlab_status lavlab_config_validate(const char* config_json);

#ifdef __cplusplus
}
#endif

#endif

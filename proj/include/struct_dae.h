#ifndef STRUCT_DAE_H
#define STRUCT_DAE_H

#include <stddef.h>

#if defined(_WIN32)
#define SDAE_API __declspec(dllexport)
#else
#define SDAE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdae_status {
  SDAE_OK = 0,
  SDAE_ERR_INVALID_ARGUMENT = 1,
  SDAE_ERR_DOMAIN = 2,
  SDAE_ERR_DIMENSION = 3,
  SDAE_ERR_PARSE = 4,
  SDAE_ERR_SINGULAR = 5,
  SDAE_ERR_RANK = 6,
  SDAE_ERR_STRUCTURE = 7,
  SDAE_ERR_REGULARITY = 8,
  SDAE_ERR_UNSUPPORTED = 9,
  SDAE_ERR_INTERNAL = 10
} sdae_status;

typedef struct sdae_model sdae_model;
typedef struct sdae_reduced sdae_reduced;
typedef struct sdae_trajectory sdae_trajectory;

/* Uniform grid. t0 >= tf selects the model interval; points >= 2. */
typedef struct sdae_grid {
  double t0;
  double tf;
  size_t points;
} sdae_grid;

typedef enum sdae_input_kind {
  SDAE_INPUT_ZERO = 0,
  SDAE_INPUT_CONSTANT = 1, /* u_i(t) = amplitude */
  SDAE_INPUT_SINE = 2,     /* u_i(t) = amplitude sin t */
  SDAE_INPUT_COSINE = 3    /* u_i(t) = amplitude cos t */
} sdae_input_kind;

typedef struct sdae_input {
  sdae_input_kind kind;
  double amplitude;
} sdae_input;

SDAE_API const char* sdae_version(void);
SDAE_API const char* sdae_status_name(sdae_status status);
/* Message of the last failed call on this thread ("" if none). */
SDAE_API const char* sdae_last_error(void);
/* Releases strings returned through char** out-parameters. */
SDAE_API void sdae_string_free(char* s);

/* Models. params_json is an object of numbers, e.g. {"RL": 1}; may be NULL. */
SDAE_API sdae_status sdae_model_demo(const char* name, const char* params_json, sdae_model** out);
SDAE_API sdae_status sdae_model_parse(const char* json, sdae_model** out);
SDAE_API sdae_status sdae_model_load(const char* path, sdae_model** out);
SDAE_API sdae_status sdae_model_save(const sdae_model* model, const char* path);
SDAE_API sdae_status sdae_model_to_json(const sdae_model* model, char** out);
SDAE_API sdae_status sdae_model_info(const sdae_model* model, size_t* n, size_t* inputs, double* t0, double* tf);
SDAE_API sdae_status sdae_model_state_name(const sdae_model* model, size_t i, const char** name);
/* E(t) and A(t), row-major n x n; either pointer may be NULL. */
SDAE_API sdae_status sdae_model_eval(const sdae_model* model, double t, double* e, double* a);
SDAE_API void sdae_model_free(sdae_model* model);

/* Reports are JSON strings. structure: "self", "skew" or "auto"; tol <= 0
   selects the default 1e-10 (1 + max |E|, |A|). *passes is optional. */
SDAE_API sdae_status sdae_check(const sdae_model* model, const char* structure, sdae_grid grid, double tol,
                                char** report, int* passes);
/* kind: "rank", "sym", "inertia" or "rownorm"; of: "E", "A" or "input". */
SDAE_API sdae_status sdae_factor(const sdae_model* model, const char* kind, const char* of, sdae_grid grid,
                                 char** report);
/* Global canonical form of a constant pair; structure "self", "skew" or "auto". */
SDAE_API sdae_status sdae_canonical(const sdae_model* model, const char* structure, sdae_grid grid, double tol,
                                    int with_transform, char** report, int* passes);

/* pipeline: "semidefinite", "stokes", "self" or "auto". */
SDAE_API sdae_status sdae_reduce(const sdae_model* model, const char* pipeline, sdae_grid grid, sdae_reduced** out);
SDAE_API sdae_status sdae_reduced_to_json(const sdae_reduced* sys, char** out);
SDAE_API sdae_status sdae_reduced_info(const sdae_reduced* sys, size_t* dynamic_dim, size_t* state_dim,
                                       size_t* inputs, double* lie_defect);
SDAE_API sdae_status sdae_reduced_project(const sdae_reduced* sys, double t, const double* x, double* z);
SDAE_API sdae_status sdae_reduced_reconstruct(const sdae_reduced* sys, double t, const double* z, const double* u,
                                              const double* udot, double* x);
SDAE_API void sdae_reduced_free(sdae_reduced* sys);

/* Fundamental solution of the dynamic part with its group defect. */
SDAE_API sdae_status sdae_flow(const sdae_model* model, const char* structure, sdae_grid grid, char** report,
                               double* max_defect);

/* mode: "reduced", "direct" or "auto". x0 is a full state (n entries); in
   reduced mode it is projected onto the dynamic coordinates. with_flow adds
   the per-point flow defect (reduced mode only). */
SDAE_API sdae_status sdae_simulate(const sdae_model* model, const char* mode, const double* x0, sdae_input input,
                                   sdae_grid grid, int with_flow, sdae_trajectory** out);
SDAE_API sdae_status sdae_trajectory_info(const sdae_trajectory* tr, size_t* points, size_t* n, int* has_flow);
/* Any output pointer may be NULL; x receives n entries. */
SDAE_API sdae_status sdae_trajectory_point(const sdae_trajectory* tr, size_t k, double* t, double* x,
                                           double* hamiltonian, double* flow_defect);
/* Columns t, x_1..x_n, H and flow_defect when present. */
SDAE_API sdae_status sdae_trajectory_to_csv(const sdae_trajectory* tr, char** out);
/* Discrete dissipation check for an unforced run of a port-Hamiltonian model. */
SDAE_API sdae_status sdae_dissipation(const sdae_model* model, const sdae_trajectory* tr, char** report, int* ok);
SDAE_API void sdae_trajectory_free(sdae_trajectory* tr);

#ifdef __cplusplus
}
#endif

#endif

/* fclt — functional central limit simulation and rate-bound verification.
 *
 * C interface of the shared library. All handles are opaque; every function
 * that can fail returns an fclt_status and, on failure, an error message the
 * caller releases with fclt_string_free. Strings in and out are UTF-8 JSON
 * documents; their schemas match the CLI config format (see README).
 */
#ifndef FCLT_H
#define FCLT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define FCLT_API __declspec(dllexport)
#else
#define FCLT_API __attribute__((visibility("default")))
#endif

typedef enum fclt_status {
  FCLT_OK = 0,
  FCLT_VERIFY_FAILED = 1, /* experiment ran; a verification criterion failed */
  FCLT_CONFIG_ERROR = 2,  /* bad config, bad JSON, or a failed precondition */
} fclt_status;

typedef struct fclt_model fclt_model;
typedef struct fclt_functional fclt_functional;

FCLT_API const char* fclt_version(void);

/* Worker count the harness will use (FCLT_THREADS or hardware). */
FCLT_API int fclt_effective_threads(void);

FCLT_API void fclt_string_free(char* s);

/* Model descriptor, e.g. {"scans":{...}}, {"ustat":{...}}, {"iid":{...}}. */
FCLT_API fclt_status fclt_model_create(const char* model_json, fclt_model** out_model,
                                       char** out_error);
FCLT_API void fclt_model_destroy(fclt_model* model);

/* Functional descriptor, e.g. {"type":"cylinder","chi":"bounded",...}. */
FCLT_API fclt_status fclt_functional_create(const char* functional_json,
                                            fclt_functional** out_functional, char** out_error);
FCLT_API void fclt_functional_destroy(fclt_functional* functional);

/* Itemized rate-bound report as JSON. The functional may be NULL except in
 * the unit-scans regime, whose last term needs its direction bound. */
FCLT_API fclt_status fclt_bound_report(const fclt_model* model, const fclt_functional* functional,
                                       uint64_t seed, uint64_t budget, char** out_json,
                                       char** out_error);

/* Bound-dominance run: distance vs inflated bound. Returns FCLT_OK when the
 * bound dominates, FCLT_VERIFY_FAILED when it does not. */
FCLT_API fclt_status fclt_verify_report(const fclt_model* model, const fclt_functional* functional,
                                        uint64_t seed, uint64_t samples, char** out_json,
                                        char** out_error);

/* Sampled paths as JSON ({"grid_n":..,"p":..,"paths":[[[x..]..]..]}). */
FCLT_API fclt_status fclt_sample_paths(const fclt_model* model, uint64_t seed, uint64_t count,
                                       int refinement, char** out_json, char** out_error);

/* Full experiment driver. config_json is the CLI config document;
 * overrides_json may be NULL or carry {"command","seed","samples","out",
 * "format"}. The result document is
 *   {"status":int,"human":str,"artifact_json":str,"artifact_csv":str,
 *    "out":str,"format":str}
 * and the return value mirrors its status field. */
FCLT_API fclt_status fclt_run(const char* config_json, const char* overrides_json,
                              char** out_result_json, char** out_error);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FCLT_H */

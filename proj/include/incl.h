/* C interface to the inclusion toolkit. All reports are UTF-8 JSON strings
 * owned by the caller and released with incl_string_free. */
#ifndef INCL_H
#define INCL_H

#include <stdint.h>

#if defined(INCL_BUILDING_LIBRARY)
#define INCL_API __attribute__((visibility("default")))
#else
#define INCL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum incl_status {
  INCL_OK = 0,
  INCL_ERR_INVALID_ARGUMENT = 1,
  INCL_ERR_CONFORMANCE = 2,
  INCL_ERR_PARSE = 3,
  INCL_ERR_VERIFICATION = 4,
  INCL_ERR_INFINITE_INDEX = 5,
  INCL_ERR_PRECONDITION = 6,
  INCL_ERR_LIMIT = 7,
  INCL_ERR_INTERNAL = 8
} incl_status;

typedef struct incl_context incl_context;
typedef struct incl_inclusion incl_inclusion;
typedef struct incl_action incl_action;

INCL_API const char* incl_version(void);
INCL_API const char* incl_status_string(incl_status status);
INCL_API void incl_string_free(char* s);

/* Tolerances default to eq_tol 1e-9, rank_tol 1e-10, 64 samples, seed 0. */
INCL_API incl_status incl_context_create(incl_context** out);
INCL_API void incl_context_destroy(incl_context* ctx);
INCL_API incl_status incl_context_set_tolerance(incl_context* ctx, double eq_tol, double rank_tol, int sample_count,
                                                uint64_t seed);
/* Message of the last failed call on this context, "" when none. */
INCL_API const char* incl_context_last_error(const incl_context* ctx);

/* Inclusion A >= P with expectation E, from an inclusion JSON document or a catalog entry. */
INCL_API incl_status incl_inclusion_from_json(incl_context* ctx, const char* json, incl_inclusion** out);
INCL_API incl_status incl_inclusion_from_catalog(incl_context* ctx, const char* name, incl_inclusion** out);
INCL_API void incl_inclusion_destroy(incl_inclusion* inc);
INCL_API int incl_inclusion_dims(const incl_inclusion* inc, int* domain_dim, int* range_dim);

INCL_API incl_status incl_index(incl_context* ctx, incl_inclusion* inc, char** report);
INCL_API incl_status incl_basic_construction(incl_context* ctx, incl_inclusion* inc, char** report);
INCL_API incl_status incl_tower(incl_context* ctx, incl_inclusion* inc, int levels, char** report);
/* A NULL projection or witness uses the one stored with a catalog entry. */
INCL_API incl_status incl_tunnel(incl_context* ctx, incl_inclusion* inc, const char* projection_json, char** report);
INCL_API incl_status incl_rohlin_check(incl_context* ctx, incl_inclusion* inc, const char* witness_json,
                                       char** report);
INCL_API incl_status incl_approx_rep_check(incl_context* ctx, incl_inclusion* inc, const char* witness_json,
                                           char** report);
/* direction: "forward", "backward" or "roundtrip". */
INCL_API incl_status incl_duality(incl_context* ctx, incl_inclusion* inc, const char* direction,
                                  const char* witness_json, char** report);
INCL_API incl_status incl_beta_map(incl_context* ctx, incl_inclusion* inc, const char* witness_json, char** report);
INCL_API incl_status incl_relative_commutant(incl_context* ctx, incl_inclusion* inc, char** report);

/* Finite group action, from an action JSON document or a catalog entry that has one. */
INCL_API incl_status incl_action_from_json(incl_context* ctx, const char* json, incl_action** out);
INCL_API incl_status incl_action_from_catalog(incl_context* ctx, const char* name, incl_action** out);
INCL_API void incl_action_destroy(incl_action* act);
INCL_API incl_status incl_fixed_point(incl_context* ctx, incl_action* act, char** report);
/* Rohlin criterion for e, rohlin_check on its orbit and innerness of every element. */
INCL_API incl_status incl_rohlin_action_check(incl_context* ctx, incl_action* act, const char* projection_json,
                                              char** report);
/* subgroup_json: array of element indices or labels. */
INCL_API incl_status incl_subgroup_inclusion(incl_context* ctx, incl_action* act, const char* subgroup_json,
                                             char** report);

INCL_API incl_status incl_defect_curve(incl_context* ctx, const char* system_json, char** report);

/* filter: shell pattern over entry names, NULL or "" for all. all_pass may be NULL. */
INCL_API incl_status incl_catalog_list(incl_context* ctx, char** names_json);
INCL_API incl_status incl_catalog_run(incl_context* ctx, const char* filter, char** report, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif

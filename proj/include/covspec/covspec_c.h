#ifndef COVSPEC_C_H
#define COVSPEC_C_H

/* C interface to the covspec library. Graphs are opaque handles; every
 * other input and result is a JSON document in a NUL-terminated string.
 * Rationals are "num/den" strings. Strings returned through an out
 * parameter are owned by the caller and released with cspec_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CSPEC_API __declspec(dllexport)
#else
#define CSPEC_API __attribute__((visibility("default")))
#endif

typedef struct cspec_graph cspec_graph;

typedef enum cspec_status {
  CSPEC_OK = 0,
  CSPEC_E_INVALID_ARGUMENT = 1, /* malformed input or violated precondition */
  CSPEC_E_PARSE = 2,            /* JSON or rational syntax */
  CSPEC_E_IO = 3,               /* file could not be read or written */
  CSPEC_E_CAP_EXCEEDED = 4,     /* class enumeration hit its caps */
  CSPEC_E_UNRESOLVED = 5,       /* no exact normal form for the quotient */
  CSPEC_E_NOT_FOUND = 6,        /* unknown zoo name */
  CSPEC_E_INTERNAL = 7
} cspec_status;

CSPEC_API const char* cspec_version(void);
/* Message of the last failure on the calling thread; never NULL. */
CSPEC_API const char* cspec_last_error(void);
CSPEC_API const char* cspec_status_name(cspec_status status);
CSPEC_API void cspec_string_free(char* s);

CSPEC_API cspec_status cspec_graph_load(const char* path, cspec_graph** out);
CSPEC_API cspec_status cspec_graph_from_json(const char* json, cspec_graph** out);
CSPEC_API cspec_status cspec_graph_to_json(const cspec_graph* g, char** out);
CSPEC_API void cspec_graph_free(cspec_graph* g);
CSPEC_API int cspec_graph_vertex_count(const cspec_graph* g);
CSPEC_API int cspec_graph_edge_count(const cspec_graph* g);

/* {"name": ..., "params": {...}} -> {"graph"|"family"|"sequence": ...} */
CSPEC_API cspec_status cspec_zoo_build(const char* request, char** out);
/* List of zoo names as a JSON array. */
CSPEC_API cspec_status cspec_zoo_names(char** out);

/* Options: cap, budget, R, center, format ("json" or "csv").
 * Without R this is the covering spectrum; with R the R cut-off spectrum. */
CSPEC_API cspec_status cspec_covspec(const cspec_graph* g, const char* options, char** out);
/* family: a family document; options: cap, budget, ladder, format. */
CSPEC_API cspec_status cspec_cutoff(const char* family, const char* options, char** out);
/* Options: cap. */
CSPEC_API cspec_status cspec_length_spec(const cspec_graph* g, const char* options, char** out);
/* Options: delta, radius, R, center, budget. Result has "ball" (a graph
 * document) and the isometry and deck checks. */
CSPEC_API cspec_status cspec_cover_ball(const cspec_graph* g, const char* options, char** out);
/* config: {"sequence": {...} | "zoo": {"name":..,"params":..}, "behavior", "R1", "R2", "scope", "cap", "budget"} */
CSPEC_API cspec_status cspec_ghrun(const char* config, char** out);
/* Options: loop (path document), delta, max_states, max_columns. */
CSPEC_API cspec_status cspec_oracle(const cspec_graph* g, const char* options, char** out);

#ifdef __cplusplus
}
#endif

#endif

#ifndef POTLAB_H
#define POTLAB_H

/*
 * C API for the potential-theory laboratory.
 *
 * All functions return a status code; detailed messages are available from
 * potlab_last_error() (thread-local, valid until the next call on the same
 * thread).  Strings returned through char** out-parameters are owned by the
 * caller and must be released with potlab_string_free().  Graph handles are
 * opaque and must be released with potlab_graph_free().
 */

#ifdef __cplusplus
extern "C" {
#endif

#define POTLAB_OK 0            /* success */
#define POTLAB_INVALID 1       /* invalid input (bad JSON, bad parameters) */
#define POTLAB_NONCONVERGED 2  /* numerical non-convergence; partial report written */
#define POTLAB_INTERNAL 3      /* unexpected internal failure */

typedef struct potlab_graph potlab_graph;

/* Library version string, e.g. "0.1.0".  Static storage; do not free. */
const char* potlab_version(void);

/* Last error message on this thread, or "" when the last call succeeded. */
const char* potlab_last_error(void);

/* Release a string returned by this API. */
void potlab_string_free(char* s);

/* Parse a graph document {"vertices": [...], "edges": [...]}. */
int potlab_graph_from_json(const char* json_text, potlab_graph** out);

/* Run a deterministic generator; params_json may be NULL for defaults.
 * Kinds: path, cycle, grid, tree, hyperbolic_disk_graph,
 * exact_growth_staircase, random. */
int potlab_graph_generate(const char* kind, const char* params_json, potlab_graph** out);

/* Serialize a graph back to its JSON document. */
int potlab_graph_to_json(const potlab_graph* g, char** out_text);

void potlab_graph_free(potlab_graph* g);

/* Run a command (modulus | capacity | classify | uniformize | witness | hn |
 * ends | geometry | generate) with a JSON parameter object.  `g` may be NULL
 * when the parameters carry "graph" / "graph_file" or the command needs no
 * graph.  *out_report receives the report document; it is written for every
 * status, including POTLAB_NONCONVERGED and POTLAB_INVALID. */
int potlab_run(const char* command, const char* params_json, const potlab_graph* g,
               char** out_report);

#ifdef __cplusplus
}
#endif

#endif /* POTLAB_H */

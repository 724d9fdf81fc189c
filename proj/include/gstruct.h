#ifndef GSTRUCT_H
#define GSTRUCT_H

#ifdef __cplusplus
extern "C" {
#endif

/* Status taxonomy shared by the library and the command line tool.
 * Semantic check failures (a Jacobi witness, a rejected complement) are
 * distinct from schema violations in the input document. */
typedef enum gs_status {
  GS_OK = 0,
  GS_E_VALIDATION = 2, /* a mathematical check failed */
  GS_E_SCHEMA = 3,     /* the document violates the input schema */
  GS_E_USAGE = 64,     /* bad command arguments */
  GS_E_IO = 66,        /* unreadable input file */
  GS_E_INTERNAL = 70   /* unexpected internal error */
} gs_status;

const char* gs_version(void);

/* A finished command report: a status plus text and JSON renderings.
 * Reports are never NULL; errors are reports too. Strings stay valid
 * until gs_report_free. */
typedef struct gs_report gs_report;

int gs_report_status(const gs_report* r);
const char* gs_report_text(const gs_report* r);
const char* gs_report_json(const gs_report* r);
void gs_report_free(gs_report* r);

/* Commands. `file` paths name JSON documents (see the schema notes in the
 * README). Integer flags are 0/1 booleans. */
gs_report* gs_cmd_validate(const char* file);
gs_report* gs_cmd_prolong(const char* file, int cap);
gs_report* gs_cmd_cohomology(const char* file, int q, int r_lo, int r_hi);
gs_report* gs_cmd_invariants(const char* file, int cap, const char* convention);
gs_report* gs_cmd_complements(const char* file, int cap,
                              const char* check_file /* NULL: no check */);
gs_report* gs_cmd_condition_c(const char* file, int cap /* < 1: automatic */);
gs_report* gs_cmd_model_check(const char* file, int identities, int corollaries,
                              int verdict);
gs_report* gs_cmd_gevrey(const char* demo, unsigned long seed, int order,
                         int samples);

/* Loaded algebra handle for embedding without the report layer. */
typedef struct gs_algebra gs_algebra;

/* NULL on failure; when errbuf is non-NULL it receives the diagnostic,
 * truncated to errbuf_len - 1 characters. */
gs_algebra* gs_algebra_load(const char* file, char* errbuf, int errbuf_len);
int gs_algebra_total_dim(const gs_algebra* a);
int gs_algebra_dim(const gs_algebra* a, int degree);
int gs_algebra_depth(const gs_algebra* a);
int gs_algebra_complete(const gs_algebra* a);
int gs_algebra_order(const gs_algebra* a); /* -2 when complete */
void gs_algebra_free(gs_algebra* a);

#ifdef __cplusplus
}
#endif

#endif /* GSTRUCT_H */

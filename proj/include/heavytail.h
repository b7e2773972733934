/* C interface to the heavytail library.
 *
 * All functions return ht_status unless stated otherwise; on failure the
 * thread-local message from ht_last_error() describes the problem. Handles
 * are opaque and must be released with the matching _free function. Strings
 * returned through char** are heap-allocated; release them with
 * ht_string_free.
 */
#ifndef HEAVYTAIL_H
#define HEAVYTAIL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ht_status {
  HT_OK = 0,
  HT_ERROR = 1,           /* unexpected internal failure */
  HT_EINVAL = 2,          /* validation / precondition error */
  HT_BOUND_VIOLATION = 3  /* verify found empirical violations */
} ht_status;

const char* ht_last_error(void);
/* status of the most recent failing call on this thread */
ht_status ht_last_status(void);
void ht_string_free(char* s);
const char* ht_version(void);

/* ---- tail models ------------------------------------------------------ */

typedef struct ht_model ht_model;

ht_status ht_model_create_json(const char* json, ht_model** out);
void ht_model_free(ht_model* m);
char* ht_model_to_json(const ht_model* m); /* NULL on error */

ht_status ht_model_tail(const ht_model* m, double x, double* out);
ht_status ht_model_tail_log(const ht_model* m, double log_x, double* out);
ht_status ht_model_quantile(const ht_model* m, double q, double* out);
ht_status ht_model_log_quantile(const ht_model* m, double q, double* out);
ht_status ht_model_moment(const ht_model* m, double p, double* out); /* inf ok */

typedef enum ht_regime {
  HT_REGIME_HEAVY = 0,
  HT_REGIME_INTERMEDIATE = 1,
  HT_REGIME_MODERATE = 2,
  HT_REGIME_SUPERHEAVY = 3
} ht_regime;

ht_status ht_model_classify(const ht_model* m, ht_regime* out);

/* Symmetric draws by inverse-tail transform. For superheavy models the
 * magnitudes overflow doubles, so values are returned as log magnitudes and
 * signs separately (signs may be NULL otherwise). log_domain reports which
 * representation was used. */
ht_status ht_model_sample(const ht_model* m, size_t n, uint64_t seed,
                          double* values, int8_t* signs, int* log_domain);

/* ---- characteristic-function additions -------------------------------- */

typedef struct ht_psi ht_psi;
typedef struct ht_psibar ht_psibar;

ht_status ht_psi_stable(double r, ht_psi** out);
ht_status ht_psi_power(double r, ht_psi** out);
ht_status ht_psi_from_model(const ht_model* m, ht_psi** out);
void ht_psi_free(ht_psi* p);

ht_status ht_psi_eval(const ht_psi* p, double t, double* out);
ht_status ht_psi_calibration(const ht_psi* p, double* out);
ht_status ht_psi_asymptotic(const ht_model* m, double t, double* out);

typedef enum ht_mi_md {
  HT_MD = 0,
  HT_MI = 1,
  HT_INDETERMINATE = 2
} ht_mi_md;

ht_status ht_classify_mi_md(const ht_model* m, ht_mi_md* out);

ht_status ht_psibar_create(const ht_psi* p, ht_psibar** out);
void ht_psibar_free(ht_psibar* pb);
ht_status ht_psibar_eval(const ht_psibar* pb, double t, double* out);

/* ---- norming ----------------------------------------------------------- */

ht_status ht_norming_exact(const ht_psi* p, uint64_t n, double* b, int* exists);
ht_status ht_norming_asymptotic(const ht_model* m, uint64_t n, double* b,
                                int* consistent);
ht_status ht_norming_moderate(uint64_t n, double* b);
/* w(n) = 1 + log n; returns log B_n (the linear value may overflow) */
ht_status ht_norming_superheavy(const ht_model* m, uint64_t n, double* log_b);

/* ---- grand Lebesgue machinery ------------------------------------------ */

typedef struct ht_nu ht_nu;

ht_status ht_nu_natural(const ht_model* m, double p_lo, ht_nu** out);
void ht_nu_free(ht_nu* nu);
ht_status ht_nu_eval(const ht_nu* nu, double p, double* out);
ht_status ht_tail_from_nu(const ht_nu* nu, double x, double* out);
ht_status ht_orlicz_weight_norm(const ht_psi* psi, const double* a, size_t len,
                                double* out, int* degenerate);

/* ---- bounds ------------------------------------------------------------ */

typedef struct ht_curve ht_curve;

ht_status ht_k_fn(double p, double* out);

typedef enum ht_rosenthal_mode {
  HT_ROSENTHAL_GENERAL = 0,
  HT_ROSENTHAL_SYMMETRIC = 1,
  HT_ROSENTHAL_MARTINGALE = 2
} ht_rosenthal_mode;

ht_status ht_rosenthal(double p, ht_rosenthal_mode mode, double* out);

/* theorem: thm21, thm22, cor21, heavy, intermediate, moderate, martingale,
 * interpolation, tnu, weighted. Extra parameters ride in the same JSON config
 * accepted by the CLI (model, beta, constant, weights, ...). */
ht_status ht_curve_create(const char* config_json, const char* theorem,
                          ht_curve** out);
void ht_curve_free(ht_curve* c);
ht_status ht_curve_eval(const ht_curve* c, double x, double* out);
ht_status ht_curve_x_min(const ht_curve* c, double* out);
char* ht_curve_tag(const ht_curve* c);

ht_status ht_bound_superheavy(const ht_model* m, double C, double x,
                              double* lower, double* upper);

/* smallest X with curve(X) = delta */
ht_status ht_solve_x(const ht_curve* c, double delta, double* out);

/* ---- command layer ------------------------------------------------------
 * Each command takes a JSON config and returns a JSON document
 *   {"summary": ..., "outputs": {"name.csv": "...", ...}, "exit_code": 0}
 * as a heap string (release with ht_string_free). NULL means failure. The
 * commands mirror the CLI subcommands. */
char* ht_cmd(const char* name, const char* config_json);

#ifdef __cplusplus
}
#endif

#endif /* HEAVYTAIL_H */

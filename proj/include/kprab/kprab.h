#ifndef KPRAB_KPRAB_H
#define KPRAB_KPRAB_H

/* C interface of the k-Prabhakar library.
 *
 * Every call returns a kprab_status; on failure kprab_last_error() holds the
 * message for the calling thread until its next failing call. Objects are
 * opaque handles released with the matching *_free function (NULL is fine).
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define KPRAB_API __declspec(dllexport)
#else
#define KPRAB_API __attribute__((visibility("default")))
#endif

typedef enum kprab_status {
    KPRAB_OK = 0,
    KPRAB_ERR_DOMAIN = 1,      /* argument outside the mathematical domain */
    KPRAB_ERR_CONVERGENCE = 2, /* series truncation, divergence, horizon */
    KPRAB_ERR_CONTRACT = 3,    /* bad handle, size mismatch, NULL output */
    KPRAB_ERR_EVALUATION = 4,  /* non-finite intermediate */
    KPRAB_ERR_IO = 5,
    KPRAB_ERR_INTERNAL = 6
} kprab_status;

typedef struct kprab_params {
    double k, alpha, mu, gamma, omega;
} kprab_params;

/* Pass NULL wherever a control is accepted to get rel_tol 1e-14, 500 terms. */
typedef struct kprab_series_control {
    double rel_tol;
    int max_terms;
} kprab_series_control;

typedef enum kprab_operator {
    KPRAB_OP_INTEGRAL = 0,
    KPRAB_OP_DERIVATIVE = 1,
    KPRAB_OP_REG_DERIVATIVE = 2,
    KPRAB_OP_HILFER = 3,
    KPRAB_OP_REG_HILFER = 4
} kprab_operator;

typedef enum kprab_transform_kind { KPRAB_LAPLACE = 0, KPRAB_SUMUDU = 1 } kprab_transform_kind;

typedef struct kprab_function kprab_function;
typedef struct kprab_reports kprab_reports;

KPRAB_API const char* kprab_last_error(void);
KPRAB_API const char* kprab_status_name(kprab_status s);
KPRAB_API const char* kprab_version(void);

/* 0 = OpenMP default. */
KPRAB_API kprab_status kprab_set_threads(int n);
KPRAB_API int kprab_get_threads(void);

/* ---- special functions ---- */

KPRAB_API kprab_status kprab_k_gamma(double z, double k, double* out);
KPRAB_API kprab_status kprab_ml_k(double z, const kprab_params* p, const kprab_series_control* ctrl,
                                  double* out);
KPRAB_API kprab_status kprab_kernel(double t, const kprab_params* p, const kprab_series_control* ctrl,
                                    double* out);

/* ---- sampled functions ---- */

/* Samples on origin + i*step, i < count. derivative may be NULL. */
KPRAB_API kprab_status kprab_function_create(double origin, double step, size_t count,
                                             const double* values, const double* derivative,
                                             kprab_function** out);
KPRAB_API void kprab_function_free(kprab_function* f);
KPRAB_API size_t kprab_function_size(const kprab_function* f);
KPRAB_API double kprab_function_origin(const kprab_function* f);
KPRAB_API double kprab_function_step(const kprab_function* f);
/* Non-zero for a singular sample set, where node 0 holds the amplitude of x^e. */
KPRAB_API double kprab_function_origin_exponent(const kprab_function* f);
/* Copies min(n, size) values. */
KPRAB_API kprab_status kprab_function_values(const kprab_function* f, double* out, size_t n);

/* ---- operators ---- */

/* nu is read only by the Hilfer kinds. */
KPRAB_API kprab_status kprab_apply(kprab_operator op, const kprab_function* f, const kprab_params* p,
                                   double nu, const kprab_series_control* ctrl, kprab_function** out);

/* ---- transforms ---- */

KPRAB_API kprab_status kprab_transform_kernel(kprab_transform_kind kind, double u,
                                              const kprab_params* p, double* out);
/* F is the transform of f at u. initial[] holds f^(n)(0+), frozen[] the
 * frozen integral terms; their lengths must match the operator. */
KPRAB_API kprab_status kprab_transform_operator(kprab_transform_kind kind, kprab_operator op, double u,
                                                const kprab_params* p, double nu, double F,
                                                const double* initial, size_t n_initial,
                                                const double* frozen, size_t n_frozen, double* out);
KPRAB_API kprab_status kprab_numerical_transform(kprab_transform_kind kind, const kprab_function* f,
                                                 double u, double tol, double* out);
/* Talbot inversion of the kernel's Laplace transform at t > 0. */
KPRAB_API kprab_status kprab_invert_kernel_laplace(double t, const kprab_params* p, int nodes,
                                                   double* out);

/* ---- solvers ---- */

typedef struct kprab_relaxation {
    kprab_params base;
    double nu;
    double lambda;
    double delta;
    double K_init;
} kprab_relaxation;

typedef struct kprab_series_info {
    int terms_used;
    double tail_estimate;
} kprab_series_info;

/* Grid [0, t_end] with `cells` cells. forcing may be NULL and otherwise
 * must live on that grid. info and residual may be NULL; a residual is
 * computed only when requested (max over x >= t_end/8). */
KPRAB_API kprab_status kprab_solve_relaxation(const kprab_relaxation* prob, const kprab_function* forcing,
                                              double t_end, size_t cells,
                                              const kprab_series_control* ctrl, kprab_function** y,
                                              kprab_series_info* info, double* residual);

typedef struct kprab_diffusion {
    kprab_params base;
    double nu;
    double K_diff;
} kprab_diffusion;

/* profile is the initial condition on a symmetric spatial grid. Modes use
 * step 2 pi / span and indices -modes..modes. modes = 0 keeps every mode up
 * to min(64, Nyquist) whose coefficient exceeds 1e-12 of the largest.
 * out receives n_times handles. */
KPRAB_API kprab_status kprab_solve_diffusion(const kprab_diffusion* prob, const kprab_function* profile,
                                             const double* times, size_t n_times, size_t modes,
                                             const kprab_series_control* ctrl, kprab_function** out);

/* ---- verification suite ---- */

typedef struct kprab_identity_case {
    const char* identity;      /* e.g. "Relation_3_7" */
    const char* test_function; /* e.g. "quad"; duality cases name an operator kind */
    double k, alpha, mu, gamma, omega, nu;
    double horizon; /* 0 = take t_end */
} kprab_identity_case;

/* cells = 0 uses the default 4096 (on [0, 2] unless a case sets a horizon). */
KPRAB_API kprab_status kprab_verify_default(size_t cells, const kprab_series_control* ctrl,
                                            kprab_reports** out);
KPRAB_API kprab_status kprab_verify_cases(const kprab_identity_case* cases, size_t n, double t_end,
                                          size_t cells, const kprab_series_control* ctrl,
                                          kprab_reports** out);
KPRAB_API void kprab_reports_free(kprab_reports* r);
KPRAB_API size_t kprab_reports_count(const kprab_reports* r);
KPRAB_API size_t kprab_reports_failed(const kprab_reports* r);
KPRAB_API const char* kprab_report_identity(const kprab_reports* r, size_t i);
KPRAB_API const char* kprab_report_test_function(const kprab_reports* r, size_t i);
KPRAB_API int kprab_report_passed(const kprab_reports* r, size_t i);
KPRAB_API double kprab_report_max_rel_err(const kprab_reports* r, size_t i);
KPRAB_API double kprab_report_refined_rel_err(const kprab_reports* r, size_t i);
KPRAB_API double kprab_report_threshold(const kprab_reports* r, size_t i);
KPRAB_API const char* kprab_report_diagnostic(const kprab_reports* r, size_t i);
/* The JSON text stays owned by the reports handle. */
KPRAB_API const char* kprab_reports_json(const kprab_reports* r);
KPRAB_API kprab_status kprab_reports_write_json(const kprab_reports* r, const char* path);

#ifdef __cplusplus
}
#endif

#endif

/*
 * circlaw C API.
 *
 * Opaque handles own library objects; every handle returned through an out
 * parameter must be released with the matching *_free function. Functions
 * return a circlaw_status; on failure circlaw_last_error() describes the
 * problem. The message buffer is thread-local and valid until the next
 * failing call on the same thread. All functions are safe to call
 * concurrently on distinct or shared (const) handles.
 */
#ifndef CIRCLAW_H
#define CIRCLAW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CIRCLAW_BUILDING_LIBRARY)
#    define CIRCLAW_API __declspec(dllexport)
#  else
#    define CIRCLAW_API __declspec(dllimport)
#  endif
#else
#  define CIRCLAW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum circlaw_status {
  CIRCLAW_OK = 0,
  CIRCLAW_ERR_INVALID_ARGUMENT = 1,
  CIRCLAW_ERR_INVALID_SPEC = 2,
  CIRCLAW_ERR_DOMAIN = 3,
  CIRCLAW_ERR_EIGENSOLVER = 4,
  CIRCLAW_ERR_BRANCH_FAILURE = 5,
  CIRCLAW_ERR_TOLERANCE = 6,
  CIRCLAW_ERR_RESOLUTION = 7,
  CIRCLAW_ERR_SINGULARITY = 8,
  CIRCLAW_ERR_INVARIANT = 9,
  CIRCLAW_ERR_NOT_IMPLEMENTED = 10,
  CIRCLAW_ERR_INTERNAL = 99
} circlaw_status;

typedef struct circlaw_complex {
  double re;
  double im;
} circlaw_complex;

typedef struct circlaw_distribution circlaw_distribution;
typedef struct circlaw_matrix circlaw_matrix;
typedef struct circlaw_spectrum circlaw_spectrum;

CIRCLAW_API const char* circlaw_version(void);
CIRCLAW_API const char* circlaw_last_error(void);
CIRCLAW_API const char* circlaw_status_name(circlaw_status status);

/* ---- ensemble ---------------------------------------------------------- */

/* Accepts "rademacher" (JSON string) or {"kind": "two-point-sparse", "c": 1}
 * or {"kind": "mixture", "components": [{"weight": w, "dist": ...}, ...]}. */
CIRCLAW_API circlaw_status circlaw_distribution_from_json(const char* json, circlaw_distribution** out);
CIRCLAW_API void circlaw_distribution_free(circlaw_distribution* dist);
/* Copies the NUL-terminated label into buf (truncating to cap); *needed
 * receives the full length including the terminator. */
CIRCLAW_API circlaw_status circlaw_distribution_label(const circlaw_distribution* dist, char* buf,
                                                      size_t cap, size_t* needed);
CIRCLAW_API circlaw_status circlaw_lindeberg_analytic(const circlaw_distribution* dist, size_t n,
                                                      double eta, double* out);

CIRCLAW_API circlaw_status circlaw_matrix_sample(const circlaw_distribution* dist, size_t n,
                                                 uint64_t seed, unsigned threads, circlaw_matrix** out);
/* entries: n*n values, row-major. */
CIRCLAW_API circlaw_status circlaw_matrix_from_entries(size_t n, const circlaw_complex* entries,
                                                       circlaw_matrix** out);
CIRCLAW_API void circlaw_matrix_free(circlaw_matrix* matrix);
CIRCLAW_API size_t circlaw_matrix_dim(const circlaw_matrix* matrix);
CIRCLAW_API circlaw_status circlaw_matrix_entries(const circlaw_matrix* matrix, circlaw_complex* out);

CIRCLAW_API circlaw_status circlaw_lindeberg_empirical(const circlaw_matrix* matrix, double eta,
                                                       double* out);

typedef struct circlaw_truncation_split {
  double s_n1;
  double s_n2;
  uint64_t count_large;
} circlaw_truncation_split;

CIRCLAW_API circlaw_status circlaw_truncation_split_compute(const circlaw_matrix* matrix,
                                                            circlaw_truncation_split* out);
CIRCLAW_API circlaw_status circlaw_grand_sum(const circlaw_matrix* matrix, double* out);
/* out: one grand sum per rung of the ladder. */
CIRCLAW_API circlaw_status circlaw_slln_trajectory(const circlaw_distribution* dist, uint64_t seed,
                                                   const size_t* ladder, size_t rungs,
                                                   unsigned threads, double* out);

/* ---- spectra ----------------------------------------------------------- */

CIRCLAW_API circlaw_status circlaw_spectrum_compute(const circlaw_matrix* matrix, circlaw_spectrum** out);
CIRCLAW_API circlaw_status circlaw_spectrum_from_eigenvalues(const circlaw_complex* eigenvalues, size_t n,
                                                             double trace_aa_star, circlaw_spectrum** out);
CIRCLAW_API void circlaw_spectrum_free(circlaw_spectrum* spectrum);
CIRCLAW_API size_t circlaw_spectrum_size(const circlaw_spectrum* spectrum);
CIRCLAW_API double circlaw_spectrum_trace(const circlaw_spectrum* spectrum);
CIRCLAW_API circlaw_status circlaw_spectrum_eigenvalues(const circlaw_spectrum* spectrum, circlaw_complex* out);

/* out: n ascending eigenvalues of H(z) = (A - zI)(A - zI)^*. */
CIRCLAW_API circlaw_status circlaw_hermitized_eigenvalues(const circlaw_matrix* matrix, circlaw_complex z,
                                                          double* out);
CIRCLAW_API circlaw_status circlaw_squared_singular_values(const circlaw_matrix* matrix, circlaw_complex z,
                                                           double* out);
/* Fraction of atoms <= x. */
CIRCLAW_API circlaw_status circlaw_empirical_cdf(const double* atoms, size_t n, double x, double* out);
CIRCLAW_API circlaw_status circlaw_tail_fraction(const circlaw_spectrum* spectrum, double radius,
                                                 double* fraction, double* bound);

/* ---- limiting law ------------------------------------------------------ */

CIRCLAW_API circlaw_status circlaw_delta_roots(circlaw_complex alpha, circlaw_complex z,
                                               circlaw_complex out[3]);

typedef struct circlaw_stieltjes {
  circlaw_complex alpha; /* after the real-axis offset, if any */
  circlaw_complex roots[3]; /* selected branch first */
  double residual;          /* fixed-point residual of roots[0] */
  double vieta_residual;    /* worst relative Vieta residual */
  int ambiguous;
} circlaw_stieltjes;

CIRCLAW_API circlaw_status circlaw_delta_branch(circlaw_complex alpha, circlaw_complex z,
                                                circlaw_stieltjes* out);
CIRCLAW_API circlaw_status circlaw_nu_support(circlaw_complex z, double* lower, double* upper);
CIRCLAW_API circlaw_status circlaw_nu_density(circlaw_complex z, const double* grid, size_t count,
                                              double delta_im, double* values);
CIRCLAW_API circlaw_status circlaw_nu_log_moment(circlaw_complex z, double* out);
CIRCLAW_API circlaw_status circlaw_nu_cdf(circlaw_complex z, double x, double* out);
CIRCLAW_API double circlaw_g_closed(double s, double t);
CIRCLAW_API circlaw_status circlaw_g_from_nu(double s, double t, double h, double* out);
CIRCLAW_API double circlaw_circular_charfn(double u, double v);
CIRCLAW_API circlaw_status circlaw_circular_radial_cdf(double r, double* out);
CIRCLAW_API circlaw_status circlaw_branch_sweep_points(size_t count, uint64_t seed, double im_max,
                                                       double z_max, circlaw_complex* alphas,
                                                       circlaw_complex* zs);

/* ---- characteristic function route ------------------------------------- */

typedef struct circlaw_region {
  double A;
  size_t ns;
  size_t nt;
  double epsilon;
} circlaw_region;

typedef enum circlaw_membership {
  CIRCLAW_INSIDE = 0,
  CIRCLAW_EXCLUDED = 1,
  CIRCLAW_OUTSIDE = 2
} circlaw_membership;

typedef struct circlaw_girko_estimate {
  circlaw_complex value;
  double error_budget;
  double quadrature_error;
  double tail_s;
  double tail_t;
  double singularity_bound;
  double kept_fraction;
} circlaw_girko_estimate;

CIRCLAW_API circlaw_status circlaw_region_resolving(double u, double v, double A, double epsilon,
                                                    double max_cell, circlaw_region* out);
CIRCLAW_API circlaw_status circlaw_g_n_sum(const circlaw_spectrum* spectrum, double s, double t, double* out);
CIRCLAW_API circlaw_status circlaw_region_membership(const circlaw_region* region,
                                                     const circlaw_spectrum* spectrum, double s, double t,
                                                     circlaw_membership* out);
CIRCLAW_API circlaw_status circlaw_charfn_direct(const circlaw_spectrum* spectrum, double u, double v,
                                                 circlaw_complex* out);
CIRCLAW_API circlaw_status circlaw_charfn_girko(const circlaw_spectrum* spectrum, double u, double v,
                                                const circlaw_region* region, unsigned threads,
                                                circlaw_girko_estimate* out);
CIRCLAW_API circlaw_status circlaw_tail_bounds(const circlaw_spectrum* spectrum, double u, double v, double A,
                                               double* bound_s, double* bound_t);
CIRCLAW_API circlaw_status circlaw_small_singularity_integral(const circlaw_spectrum* spectrum,
                                                              const circlaw_region* region, double eps,
                                                              double* out);

/* ---- truncated-sum bound ----------------------------------------------- */

typedef enum circlaw_nonneg_kind {
  CIRCLAW_NONNEG_EXPONENTIAL = 0,      /* p1 = rate */
  CIRCLAW_NONNEG_CONSTANT = 1,         /* p1 = value */
  CIRCLAW_NONNEG_SCALED_CHI_SQUARE = 2 /* p1 = dof, p2 = scale */
} circlaw_nonneg_kind;

typedef struct circlaw_nonneg_distribution {
  circlaw_nonneg_kind kind;
  double p1;
  double p2;
} circlaw_nonneg_distribution;

typedef struct circlaw_lln_report {
  size_t n;
  double a;
  size_t b;
  size_t trials;
  double mean;
  double standard_error;
  double bound;
  int violation;
} circlaw_lln_report;

CIRCLAW_API circlaw_status circlaw_lemma2_trial(const circlaw_nonneg_distribution* dist, size_t n, double a,
                                                size_t b, size_t trials, uint64_t seed, unsigned threads,
                                                circlaw_lln_report* out);

/* ---- distances --------------------------------------------------------- */

typedef struct circlaw_ks_result {
  double statistic;
  size_t n;
  double location;
} circlaw_ks_result;

typedef double (*circlaw_cdf_fn)(double x, void* user);

CIRCLAW_API circlaw_status circlaw_ks_1d(const double* atoms, size_t n, circlaw_cdf_fn cdf, void* user,
                                         circlaw_ks_result* out);
CIRCLAW_API circlaw_status circlaw_radial_ks(const circlaw_spectrum* spectrum, circlaw_ks_result* out);
CIRCLAW_API circlaw_status circlaw_angular_ks(const circlaw_spectrum* spectrum, circlaw_ks_result* out);
CIRCLAW_API circlaw_status circlaw_charfn_discrepancy(const circlaw_spectrum* spectrum, const double* u,
                                                      const double* v, size_t count, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CIRCLAW_H */

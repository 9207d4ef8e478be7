#include "circlaw/circlaw.h"

#include <cstring>
#include <new>
#include <string>

#include "circlaw/ensemble_json.hpp"
#include "circlaw/error.hpp"
#include "circlaw/girko.hpp"
#include "circlaw/limitlaw.hpp"
#include "circlaw/lln.hpp"
#include "circlaw/metrics.hpp"
#include "circlaw/spectra.hpp"

#ifndef CIRCLAW_VERSION_STRING
#define CIRCLAW_VERSION_STRING "0.0.0"
#endif

struct circlaw_distribution {
  circlaw::EntryDistribution dist;
};

struct circlaw_matrix {
  circlaw::Matrix x;
};

struct circlaw_spectrum {
  circlaw::ComplexSpectrum spectrum;
};

namespace {

using circlaw::Complex;
using circlaw::ErrorCode;

thread_local std::string last_error;

circlaw_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return CIRCLAW_ERR_INVALID_ARGUMENT;
    case ErrorCode::invalid_spec: return CIRCLAW_ERR_INVALID_SPEC;
    case ErrorCode::domain: return CIRCLAW_ERR_DOMAIN;
    case ErrorCode::eigensolver: return CIRCLAW_ERR_EIGENSOLVER;
    case ErrorCode::branch_failure: return CIRCLAW_ERR_BRANCH_FAILURE;
    case ErrorCode::tolerance: return CIRCLAW_ERR_TOLERANCE;
    case ErrorCode::resolution: return CIRCLAW_ERR_RESOLUTION;
    case ErrorCode::singularity: return CIRCLAW_ERR_SINGULARITY;
    case ErrorCode::invariant_violation: return CIRCLAW_ERR_INVARIANT;
    case ErrorCode::not_implemented: return CIRCLAW_ERR_NOT_IMPLEMENTED;
  }
  return CIRCLAW_ERR_INTERNAL;
}

template <class Fn>
circlaw_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return CIRCLAW_OK;
  } catch (const circlaw::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("json: ") + e.what();
    return CIRCLAW_ERR_INVALID_SPEC;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CIRCLAW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CIRCLAW_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return CIRCLAW_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) circlaw::fail(ErrorCode::invalid_argument, what);
}

Complex to_cpp(circlaw_complex c) { return {c.re, c.im}; }
circlaw_complex to_c(Complex c) { return {c.real(), c.imag()}; }

}  // namespace

extern "C" {

const char* circlaw_version(void) { return CIRCLAW_VERSION_STRING; }

const char* circlaw_last_error(void) { return last_error.c_str(); }

const char* circlaw_status_name(circlaw_status status) {
  switch (status) {
    case CIRCLAW_OK: return "ok";
    case CIRCLAW_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CIRCLAW_ERR_INVALID_SPEC: return "invalid-spec";
    case CIRCLAW_ERR_DOMAIN: return "domain";
    case CIRCLAW_ERR_EIGENSOLVER: return "eigensolver";
    case CIRCLAW_ERR_BRANCH_FAILURE: return "branch-failure";
    case CIRCLAW_ERR_TOLERANCE: return "tolerance";
    case CIRCLAW_ERR_RESOLUTION: return "resolution";
    case CIRCLAW_ERR_SINGULARITY: return "singularity";
    case CIRCLAW_ERR_INVARIANT: return "invariant-violation";
    case CIRCLAW_ERR_NOT_IMPLEMENTED: return "not-implemented";
    case CIRCLAW_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

/* ensemble */

circlaw_status circlaw_distribution_from_json(const char* json, circlaw_distribution** out) {
  return guarded([&] {
    require(json && out, "distribution_from_json: null argument");
    *out = nullptr;
    auto parsed = circlaw::parse_distribution(nlohmann::json::parse(json));
    *out = new circlaw_distribution{std::move(parsed)};
  });
}

void circlaw_distribution_free(circlaw_distribution* dist) { delete dist; }

circlaw_status circlaw_distribution_label(const circlaw_distribution* dist, char* buf, size_t cap,
                                          size_t* needed) {
  return guarded([&] {
    require(dist, "distribution_label: null distribution");
    const auto label = dist->dist.label();
    if (needed) *needed = label.size() + 1;
    if (buf && cap > 0) {
      const size_t len = std::min(cap - 1, label.size());
      std::memcpy(buf, label.data(), len);
      buf[len] = '\0';
    }
  });
}

circlaw_status circlaw_lindeberg_analytic(const circlaw_distribution* dist, size_t n, double eta, double* out) {
  return guarded([&] {
    require(dist && out, "lindeberg_analytic: null argument");
    *out = circlaw::lindeberg_analytic(dist->dist, n, eta);
  });
}

circlaw_status circlaw_matrix_sample(const circlaw_distribution* dist, size_t n, uint64_t seed,
                                     unsigned threads, circlaw_matrix** out) {
  return guarded([&] {
    require(dist && out, "matrix_sample: null argument");
    *out = nullptr;
    auto x = circlaw::sample_matrix({dist->dist, n, seed}, threads);
    *out = new circlaw_matrix{std::move(x)};
  });
}

circlaw_status circlaw_matrix_from_entries(size_t n, const circlaw_complex* entries, circlaw_matrix** out) {
  return guarded([&] {
    require(out && (entries || n == 0), "matrix_from_entries: null argument");
    *out = nullptr;
    circlaw::Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_cpp(entries[i * n + j]);
    *out = new circlaw_matrix{std::move(x)};
  });
}

void circlaw_matrix_free(circlaw_matrix* matrix) { delete matrix; }

size_t circlaw_matrix_dim(const circlaw_matrix* matrix) {
  return matrix ? static_cast<size_t>(matrix->x.rows()) : 0;
}

circlaw_status circlaw_matrix_entries(const circlaw_matrix* matrix, circlaw_complex* out) {
  return guarded([&] {
    require(matrix && out, "matrix_entries: null argument");
    const auto n = matrix->x.rows();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out[i * n + j] = to_c(matrix->x(i, j));
  });
}

circlaw_status circlaw_lindeberg_empirical(const circlaw_matrix* matrix, double eta, double* out) {
  return guarded([&] {
    require(matrix && out, "lindeberg_empirical: null argument");
    *out = circlaw::lindeberg_empirical(matrix->x, eta);
  });
}

circlaw_status circlaw_truncation_split_compute(const circlaw_matrix* matrix, circlaw_truncation_split* out) {
  return guarded([&] {
    require(matrix && out, "truncation_split: null argument");
    const auto s = circlaw::truncation_split(matrix->x);
    *out = {s.s_n1, s.s_n2, static_cast<uint64_t>(s.count_large)};
  });
}

circlaw_status circlaw_grand_sum(const circlaw_matrix* matrix, double* out) {
  return guarded([&] {
    require(matrix && out, "grand_sum: null argument");
    *out = circlaw::grand_sum(matrix->x);
  });
}

circlaw_status circlaw_slln_trajectory(const circlaw_distribution* dist, uint64_t seed, const size_t* ladder,
                                       size_t rungs, unsigned threads, double* out) {
  return guarded([&] {
    require(dist && (ladder || rungs == 0) && (out || rungs == 0), "slln_trajectory: null argument");
    const auto points = circlaw::slln_trajectory(dist->dist, seed, {ladder, rungs}, threads);
    for (size_t k = 0; k < points.size(); ++k) out[k] = points[k].grand_sum;
  });
}

/* spectra */

circlaw_status circlaw_spectrum_compute(const circlaw_matrix* matrix, circlaw_spectrum** out) {
  return guarded([&] {
    require(matrix && out, "spectrum_compute: null argument");
    *out = nullptr;
    auto s = circlaw::complex_eigenvalues(matrix->x);
    *out = new circlaw_spectrum{std::move(s)};
  });
}

circlaw_status circlaw_spectrum_from_eigenvalues(const circlaw_complex* eigenvalues, size_t n,
                                                 double trace_aa_star, circlaw_spectrum** out) {
  return guarded([&] {
    require(out && (eigenvalues || n == 0), "spectrum_from_eigenvalues: null argument");
    *out = nullptr;
    circlaw::ComplexSpectrum s;
    s.trace_aa_star = trace_aa_star;
    s.eigenvalues.reserve(n);
    for (size_t k = 0; k < n; ++k) s.eigenvalues.push_back(to_cpp(eigenvalues[k]));
    *out = new circlaw_spectrum{std::move(s)};
  });
}

void circlaw_spectrum_free(circlaw_spectrum* spectrum) { delete spectrum; }

size_t circlaw_spectrum_size(const circlaw_spectrum* spectrum) {
  return spectrum ? spectrum->spectrum.size() : 0;
}

double circlaw_spectrum_trace(const circlaw_spectrum* spectrum) {
  return spectrum ? spectrum->spectrum.trace_aa_star : 0.0;
}

circlaw_status circlaw_spectrum_eigenvalues(const circlaw_spectrum* spectrum, circlaw_complex* out) {
  return guarded([&] {
    require(spectrum && out, "spectrum_eigenvalues: null argument");
    for (size_t k = 0; k < spectrum->spectrum.size(); ++k) out[k] = to_c(spectrum->spectrum.eigenvalues[k]);
  });
}

circlaw_status circlaw_hermitized_eigenvalues(const circlaw_matrix* matrix, circlaw_complex z, double* out) {
  return guarded([&] {
    require(matrix && out, "hermitized_eigenvalues: null argument");
    const auto h = circlaw::hermitized_eigenvalues(matrix->x, to_cpp(z));
    std::copy(h.eigenvalues.begin(), h.eigenvalues.end(), out);
  });
}

circlaw_status circlaw_squared_singular_values(const circlaw_matrix* matrix, circlaw_complex z, double* out) {
  return guarded([&] {
    require(matrix && out, "squared_singular_values: null argument");
    const auto sv = circlaw::squared_singular_values(matrix->x, to_cpp(z));
    std::copy(sv.begin(), sv.end(), out);
  });
}

circlaw_status circlaw_empirical_cdf(const double* atoms, size_t n, double x, double* out) {
  return guarded([&] {
    require(out && (atoms || n == 0), "empirical_cdf: null argument");
    *out = circlaw::EmpiricalMeasure1D({atoms, atoms + n}).cdf(x);
  });
}

circlaw_status circlaw_tail_fraction(const circlaw_spectrum* spectrum, double radius, double* fraction,
                                     double* bound) {
  return guarded([&] {
    require(spectrum && fraction && bound, "tail_fraction: null argument");
    const auto t = circlaw::tail_fraction(spectrum->spectrum, radius);
    *fraction = t.fraction;
    *bound = t.bound;
  });
}

/* limiting law */

circlaw_status circlaw_delta_roots(circlaw_complex alpha, circlaw_complex z, circlaw_complex out[3]) {
  return guarded([&] {
    require(out, "delta_roots: null argument");
    const auto roots = circlaw::delta_roots(to_cpp(alpha), to_cpp(z));
    for (int k = 0; k < 3; ++k) out[k] = to_c(roots[static_cast<size_t>(k)]);
  });
}

circlaw_status circlaw_delta_branch(circlaw_complex alpha, circlaw_complex z, circlaw_stieltjes* out) {
  return guarded([&] {
    require(out, "delta_branch: null argument");
    const auto sol = circlaw::delta_branch(to_cpp(alpha), to_cpp(z));
    out->alpha = to_c(sol.alpha);
    for (int k = 0; k < 3; ++k) out->roots[k] = to_c(sol.roots[static_cast<size_t>(k)]);
    out->residual = sol.residual;
    out->vieta_residual = circlaw::vieta_residuals(sol.roots, sol.alpha, sol.z).max();
    out->ambiguous = sol.ambiguous ? 1 : 0;
  });
}

circlaw_status circlaw_nu_support(circlaw_complex z, double* lower, double* upper) {
  return guarded([&] {
    require(lower && upper, "nu_support: null argument");
    const auto s = circlaw::nu_support(to_cpp(z));
    *lower = s.lower;
    *upper = s.upper;
  });
}

circlaw_status circlaw_nu_density(circlaw_complex z, const double* grid, size_t count, double delta_im,
                                  double* values) {
  return guarded([&] {
    require((grid && values) || count == 0, "nu_density: null argument");
    const auto curve = circlaw::nu_density(to_cpp(z), {grid, count}, delta_im);
    std::copy(curve.values.begin(), curve.values.end(), values);
  });
}

circlaw_status circlaw_nu_log_moment(circlaw_complex z, double* out) {
  return guarded([&] {
    require(out, "nu_log_moment: null argument");
    *out = circlaw::nu_log_moment(to_cpp(z));
  });
}

circlaw_status circlaw_nu_cdf(circlaw_complex z, double x, double* out) {
  return guarded([&] {
    require(out, "nu_cdf: null argument");
    *out = circlaw::nu_cdf(to_cpp(z), x);
  });
}

double circlaw_g_closed(double s, double t) { return circlaw::g_closed(s, t); }

circlaw_status circlaw_g_from_nu(double s, double t, double h, double* out) {
  return guarded([&] {
    require(out, "g_from_nu: null argument");
    *out = circlaw::g_from_nu(s, t, h);
  });
}

double circlaw_circular_charfn(double u, double v) { return circlaw::circular_charfn(u, v); }

circlaw_status circlaw_circular_radial_cdf(double r, double* out) {
  return guarded([&] {
    require(out, "circular_radial_cdf: null argument");
    *out = circlaw::circular_radial_cdf(r);
  });
}

circlaw_status circlaw_branch_sweep_points(size_t count, uint64_t seed, double im_max, double z_max,
                                           circlaw_complex* alphas, circlaw_complex* zs) {
  return guarded([&] {
    require((alphas && zs) || count == 0, "branch_sweep_points: null argument");
    const auto pts = circlaw::branch_sweep_points(count, seed, im_max, z_max);
    for (size_t k = 0; k < pts.size(); ++k) {
      alphas[k] = to_c(pts[k].first);
      zs[k] = to_c(pts[k].second);
    }
  });
}

/* characteristic function route */

namespace {
circlaw::RegionSpec to_cpp(const circlaw_region& r) { return {r.A, r.ns, r.nt, r.epsilon}; }
}  // namespace

circlaw_status circlaw_region_resolving(double u, double v, double A, double epsilon, double max_cell,
                                        circlaw_region* out) {
  return guarded([&] {
    require(out, "region_resolving: null argument");
    require(max_cell > 0.0, "region_resolving: max_cell must be positive");
    const auto r = circlaw::RegionSpec::resolving(u, v, A, epsilon, max_cell);
    r.validate();
    *out = {r.A, r.ns, r.nt, r.epsilon};
  });
}

circlaw_status circlaw_g_n_sum(const circlaw_spectrum* spectrum, double s, double t, double* out) {
  return guarded([&] {
    require(spectrum && out, "g_n_sum: null argument");
    *out = circlaw::g_n_sum(spectrum->spectrum, s, t);
  });
}

circlaw_status circlaw_region_membership(const circlaw_region* region, const circlaw_spectrum* spectrum,
                                         double s, double t, circlaw_membership* out) {
  return guarded([&] {
    require(region && spectrum && out, "region_membership: null argument");
    switch (circlaw::region_membership(to_cpp(*region), spectrum->spectrum, s, t)) {
      case circlaw::Membership::inside: *out = CIRCLAW_INSIDE; break;
      case circlaw::Membership::excluded: *out = CIRCLAW_EXCLUDED; break;
      case circlaw::Membership::outside: *out = CIRCLAW_OUTSIDE; break;
    }
  });
}

circlaw_status circlaw_charfn_direct(const circlaw_spectrum* spectrum, double u, double v, circlaw_complex* out) {
  return guarded([&] {
    require(spectrum && out, "charfn_direct: null argument");
    *out = to_c(circlaw::charfn_direct(spectrum->spectrum, u, v));
  });
}

circlaw_status circlaw_charfn_girko(const circlaw_spectrum* spectrum, double u, double v,
                                    const circlaw_region* region, unsigned threads,
                                    circlaw_girko_estimate* out) {
  return guarded([&] {
    require(spectrum && region && out, "charfn_girko: null argument");
    const auto e = circlaw::charfn_girko(spectrum->spectrum, u, v, to_cpp(*region), threads);
    *out = {to_c(e.value), e.error_budget, e.quadrature_error, e.tails.bound_s,
            e.tails.bound_t, e.singularity_bound, e.kept_fraction};
  });
}

circlaw_status circlaw_tail_bounds(const circlaw_spectrum* spectrum, double u, double v, double A,
                                   double* bound_s, double* bound_t) {
  return guarded([&] {
    require(spectrum && bound_s && bound_t, "tail_bounds: null argument");
    const auto b = circlaw::tail_bounds(spectrum->spectrum, u, v, A);
    *bound_s = b.bound_s;
    *bound_t = b.bound_t;
  });
}

circlaw_status circlaw_small_singularity_integral(const circlaw_spectrum* spectrum, const circlaw_region* region,
                                                  double eps, double* out) {
  return guarded([&] {
    require(spectrum && region && out, "small_singularity_integral: null argument");
    *out = circlaw::small_singularity_integral(spectrum->spectrum, to_cpp(*region), eps);
  });
}

/* truncated-sum bound */

circlaw_status circlaw_lemma2_trial(const circlaw_nonneg_distribution* dist, size_t n, double a, size_t b,
                                    size_t trials, uint64_t seed, unsigned threads, circlaw_lln_report* out) {
  return guarded([&] {
    require(dist && out, "lemma2_trial: null argument");
    circlaw::NonnegDistribution d = circlaw::NonnegDistribution::constant(1.0);
    switch (dist->kind) {
      case CIRCLAW_NONNEG_EXPONENTIAL: d = circlaw::NonnegDistribution::exponential(dist->p1); break;
      case CIRCLAW_NONNEG_CONSTANT: d = circlaw::NonnegDistribution::constant(dist->p1); break;
      case CIRCLAW_NONNEG_SCALED_CHI_SQUARE:
        d = circlaw::NonnegDistribution::scaled_chi_square(dist->p1, dist->p2);
        break;
      default: circlaw::fail(ErrorCode::invalid_spec, "lemma2_trial: unknown distribution kind");
    }
    const auto r = circlaw::lemma2_trial(d, n, a, b, trials, seed, threads);
    *out = {r.n, r.a, r.b, r.trials, r.mean, r.standard_error, r.bound(), r.violation ? 1 : 0};
  });
}

/* distances */

circlaw_status circlaw_ks_1d(const double* atoms, size_t n, circlaw_cdf_fn cdf, void* user,
                             circlaw_ks_result* out) {
  return guarded([&] {
    require(cdf && out && (atoms || n == 0), "ks_1d: null argument");
    const auto r = circlaw::ks_1d(circlaw::EmpiricalMeasure1D({atoms, atoms + n}),
                                  [&](double x) { return cdf(x, user); });
    *out = {r.statistic, r.n, r.location};
  });
}

circlaw_status circlaw_radial_ks(const circlaw_spectrum* spectrum, circlaw_ks_result* out) {
  return guarded([&] {
    require(spectrum && out, "radial_ks: null argument");
    const auto r = circlaw::radial_ks(spectrum->spectrum);
    *out = {r.statistic, r.n, r.location};
  });
}

circlaw_status circlaw_angular_ks(const circlaw_spectrum* spectrum, circlaw_ks_result* out) {
  return guarded([&] {
    require(spectrum && out, "angular_ks: null argument");
    const auto r = circlaw::angular_ks(spectrum->spectrum);
    *out = {r.statistic, r.n, r.location};
  });
}

circlaw_status circlaw_charfn_discrepancy(const circlaw_spectrum* spectrum, const double* u, const double* v,
                                          size_t count, double* out) {
  return guarded([&] {
    require(spectrum && out && ((u && v) || count == 0), "charfn_discrepancy: null argument");
    circlaw::FrequencyGrid grid;
    grid.reserve(count);
    for (size_t k = 0; k < count; ++k) grid.emplace_back(u[k], v[k]);
    *out = circlaw::charfn_discrepancy(spectrum->spectrum, grid);
  });
}

}  // extern "C"

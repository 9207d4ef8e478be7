#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "circlaw/circlaw.h"

// Exercises the shared library through its C interface only.

namespace {

struct Dist {
  circlaw_distribution* p = nullptr;
  explicit Dist(const char* json) { REQUIRE(circlaw_distribution_from_json(json, &p) == CIRCLAW_OK); }
  ~Dist() { circlaw_distribution_free(p); }
};

struct Mat {
  circlaw_matrix* p = nullptr;
  ~Mat() { circlaw_matrix_free(p); }
};

struct Spec {
  circlaw_spectrum* p = nullptr;
  ~Spec() { circlaw_spectrum_free(p); }
};

double uniform_cdf(double x, void* user) {
  ++*static_cast<int*>(user);
  return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(circlaw_version()).size() > 0);
  CHECK(std::string(circlaw_status_name(CIRCLAW_OK)) == "ok");
  CHECK(std::string(circlaw_status_name(CIRCLAW_ERR_DOMAIN)) == "domain");
  CHECK(std::string(circlaw_status_name(static_cast<circlaw_status>(1234))) == "unknown");
}

TEST_CASE("distribution parsing and labels") {
  circlaw_distribution* d = nullptr;
  CHECK(circlaw_distribution_from_json("{not json", &d) == CIRCLAW_ERR_INVALID_SPEC);
  CHECK(d == nullptr);
  CHECK(std::string(circlaw_last_error()).size() > 0);
  CHECK(circlaw_distribution_from_json("\"no-such-law\"", &d) == CIRCLAW_ERR_INVALID_SPEC);
  CHECK(circlaw_distribution_from_json(nullptr, &d) == CIRCLAW_ERR_INVALID_ARGUMENT);

  Dist sparse(R"({"kind": "two-point-sparse", "c": 1})");
  size_t needed = 0;
  CHECK(circlaw_distribution_label(sparse.p, nullptr, 0, &needed) == CIRCLAW_OK);
  REQUIRE(needed > 4);
  std::vector<char> full(needed);
  CHECK(circlaw_distribution_label(sparse.p, full.data(), full.size(), nullptr) == CIRCLAW_OK);
  CHECK(std::strlen(full.data()) == needed - 1);
  char small[4];
  CHECK(circlaw_distribution_label(sparse.p, small, sizeof small, nullptr) == CIRCLAW_OK);
  CHECK(std::string(small) == std::string(full.data(), 3));

  double lind = 0.0;
  CHECK(circlaw_lindeberg_analytic(sparse.p, 1024, 0.5, &lind) == CIRCLAW_OK);
  CHECK(lind == 1.0);
}

TEST_CASE("null arguments are rejected, not dereferenced") {
  double x = 0.0;
  CHECK(circlaw_grand_sum(nullptr, &x) == CIRCLAW_ERR_INVALID_ARGUMENT);
  CHECK(circlaw_matrix_sample(nullptr, 4, 0, 1, nullptr) == CIRCLAW_ERR_INVALID_ARGUMENT);
  CHECK(circlaw_nu_log_moment({0.0, 0.0}, nullptr) == CIRCLAW_ERR_INVALID_ARGUMENT);
  CHECK(circlaw_radial_ks(nullptr, nullptr) == CIRCLAW_ERR_INVALID_ARGUMENT);
  CHECK(circlaw_ks_1d(nullptr, 3, uniform_cdf, nullptr, nullptr) == CIRCLAW_ERR_INVALID_ARGUMENT);
  CHECK(circlaw_matrix_dim(nullptr) == 0);
  circlaw_matrix_free(nullptr);
  circlaw_spectrum_free(nullptr);
  circlaw_distribution_free(nullptr);
}

TEST_CASE("matrix round trip, spectrum and hermitization") {
  Dist g("\"complex-gaussian\"");
  Mat m;
  REQUIRE(circlaw_matrix_sample(g.p, 6, 3, 2, &m.p) == CIRCLAW_OK);
  CHECK(circlaw_matrix_dim(m.p) == 6);
  std::vector<circlaw_complex> entries(36);
  REQUIRE(circlaw_matrix_entries(m.p, entries.data()) == CIRCLAW_OK);
  Mat copy;
  REQUIRE(circlaw_matrix_from_entries(6, entries.data(), &copy.p) == CIRCLAW_OK);
  double gs1 = 0, gs2 = 0;
  circlaw_grand_sum(m.p, &gs1);
  circlaw_grand_sum(copy.p, &gs2);
  CHECK(gs1 == gs2);

  Spec s;
  REQUIRE(circlaw_spectrum_compute(m.p, &s.p) == CIRCLAW_OK);
  CHECK(circlaw_spectrum_size(s.p) == 6);
  std::vector<circlaw_complex> eig(6);
  REQUIRE(circlaw_spectrum_eigenvalues(s.p, eig.data()) == CIRCLAW_OK);
  double sum_sq = 0.0;
  for (auto e : eig) sum_sq += e.re * e.re + e.im * e.im;
  CHECK(sum_sq <= circlaw_spectrum_trace(s.p) + 1e-10);

  std::vector<double> h(6), sv(6);
  REQUIRE(circlaw_hermitized_eigenvalues(m.p, {0.2, 0.1}, h.data()) == CIRCLAW_OK);
  REQUIRE(circlaw_squared_singular_values(m.p, {0.2, 0.1}, sv.data()) == CIRCLAW_OK);
  for (int k = 0; k < 6; ++k) CHECK(h[k] == doctest::Approx(sv[k]).epsilon(1e-10));
  double f = 0.0;
  REQUIRE(circlaw_empirical_cdf(h.data(), 6, h[2], &f) == CIRCLAW_OK);
  CHECK(f == doctest::Approx(0.5));

  circlaw_truncation_split split{};
  CHECK(circlaw_truncation_split_compute(m.p, &split) == CIRCLAW_OK);
  CHECK(split.s_n1 + split.s_n2 == doctest::Approx(gs1));
}

TEST_CASE("invalid matrix requests map onto status codes") {
  Dist r("\"rademacher\"");
  Mat m;
  CHECK(circlaw_matrix_sample(r.p, 0, 1, 1, &m.p) == CIRCLAW_ERR_INVALID_SPEC);
  CHECK(m.p == nullptr);
  CHECK(std::string(circlaw_last_error()).find("n") != std::string::npos);
}

TEST_CASE("limiting law through the C interface") {
  circlaw_complex roots[3];
  REQUIRE(circlaw_delta_roots({-1.0, 0.0}, {0.0, 0.0}, roots) == CIRCLAW_OK);
  CHECK(circlaw_delta_roots({0.0, 0.0}, {1.0, 0.0}, roots) == CIRCLAW_ERR_DOMAIN);

  circlaw_stieltjes st{};
  REQUIRE(circlaw_delta_branch({-1.0, 0.0}, {0.0, 0.0}, &st) == CIRCLAW_OK);
  CHECK(st.roots[0].re == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-6));
  CHECK(st.alpha.im > 0.0);
  CHECK(st.residual < 1e-9);
  CHECK(st.vieta_residual < 1e-9);
  CHECK(circlaw_delta_branch({1.0, -1.0}, {0.0, 0.0}, &st) == CIRCLAW_ERR_DOMAIN);

  double lo = 0, hi = 0;
  REQUIRE(circlaw_nu_support({0.0, 0.0}, &lo, &hi) == CIRCLAW_OK);
  CHECK(hi == doctest::Approx(4.0));
  const double grid[3] = {0.5, 1.0, 2.0};
  double vals[3];
  REQUIRE(circlaw_nu_density({0.0, 0.0}, grid, 3, 1e-6, vals) == CIRCLAW_OK);
  CHECK(vals[1] == doctest::Approx(std::sqrt(3.0) / (2.0 * M_PI)).epsilon(1e-4));
  CHECK(circlaw_nu_density({0.0, 0.0}, grid, 3, 1.0, vals) == CIRCLAW_ERR_INVALID_ARGUMENT);
  double lm = 0.0;
  REQUIRE(circlaw_nu_log_moment({0.0, 0.0}, &lm) == CIRCLAW_OK);
  CHECK(lm == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(circlaw_g_closed(2.0, 0.0) == 1.0);
  double g = 0.0;
  REQUIRE(circlaw_g_from_nu(2.0, 0.0, 1e-2, &g) == CIRCLAW_OK);
  CHECK(std::abs(g - 1.0) < 5e-2);
  CHECK(circlaw_circular_charfn(0.0, 0.0) == 1.0);
  double rc = 0.0;
  CHECK(circlaw_circular_radial_cdf(0.5, &rc) == CIRCLAW_OK);
  CHECK(rc == 0.25);
  std::vector<circlaw_complex> alphas(10), zs(10);
  REQUIRE(circlaw_branch_sweep_points(10, 1, 10.0, 3.0, alphas.data(), zs.data()) == CIRCLAW_OK);
  for (auto a : alphas) CHECK(a.im > 0.0);
}

TEST_CASE("characteristic-function route through the C interface") {
  const circlaw_complex one[1] = {{0.0, 0.0}};
  Spec s;
  REQUIRE(circlaw_spectrum_from_eigenvalues(one, 1, 0.0, &s.p) == CIRCLAW_OK);
  double g = 0.0;
  CHECK(circlaw_g_n_sum(s.p, 1.0, 0.0, &g) == CIRCLAW_OK);
  CHECK(g == 2.0);
  CHECK(circlaw_g_n_sum(s.p, 0.0, 0.0, &g) == CIRCLAW_ERR_SINGULARITY);

  circlaw_region region{};
  REQUIRE(circlaw_region_resolving(1.0, 1.0, 5.0, 0.05, 0.02, &region) == CIRCLAW_OK);
  circlaw_membership mem{};
  CHECK(circlaw_region_membership(&region, s.p, 0.01, 0.01, &mem) == CIRCLAW_OK);
  CHECK(mem == CIRCLAW_EXCLUDED);
  CHECK(circlaw_region_membership(&region, s.p, 9.0, 0.0, &mem) == CIRCLAW_OK);
  CHECK(mem == CIRCLAW_OUTSIDE);

  circlaw_girko_estimate est{};
  REQUIRE(circlaw_charfn_girko(s.p, 1.0, 1.0, &region, 2, &est) == CIRCLAW_OK);
  CHECK(std::hypot(est.value.re - 1.0, est.value.im) <= est.error_budget);
  CHECK(circlaw_charfn_girko(s.p, 0.0, 1.0, &region, 1, &est) == CIRCLAW_ERR_DOMAIN);
  circlaw_region coarse{2.5, 8, 8, 0.1};
  CHECK(circlaw_charfn_girko(s.p, 1.0, 1.0, &coarse, 1, &est) == CIRCLAW_ERR_RESOLUTION);

  double bs = 0, bt = 0;
  REQUIRE(circlaw_tail_bounds(s.p, 1.0, 1.0, 4.0, &bs, &bt) == CIRCLAW_OK);
  CHECK(bs == doctest::Approx(4.0 * M_PI * std::exp(-2.0)));
  CHECK(bt == doctest::Approx(32.0 / 15.0));
  double sing = 0.0;
  REQUIRE(circlaw_small_singularity_integral(s.p, &region, 0.1, &sing) == CIRCLAW_OK);
  CHECK(sing == doctest::Approx(0.8).epsilon(1e-3));
  circlaw_complex c{};
  REQUIRE(circlaw_charfn_direct(s.p, 3.0, 2.0, &c) == CIRCLAW_OK);
  CHECK(c.re == 1.0);
}

TEST_CASE("truncated-sum trials and SLLN through the C interface") {
  circlaw_nonneg_distribution e{CIRCLAW_NONNEG_EXPONENTIAL, 1.0, 0.0};
  circlaw_lln_report r{};
  REQUIRE(circlaw_lemma2_trial(&e, 200, 10.0, 4, 500, 3, 2, &r) == CIRCLAW_OK);
  CHECK(r.bound == 4.0);
  CHECK(r.trials == 500);
  circlaw_nonneg_distribution bad{CIRCLAW_NONNEG_EXPONENTIAL, 2.0, 0.0};
  CHECK(circlaw_lemma2_trial(&bad, 10, 1.0, 2, 10, 0, 1, &r) == CIRCLAW_ERR_INVALID_SPEC);

  Dist rad("\"rademacher\"");
  const size_t ladder[3] = {8, 16, 32};
  double sums[3];
  REQUIRE(circlaw_slln_trajectory(rad.p, 1, ladder, 3, 2, sums) == CIRCLAW_OK);
  for (double v : sums) CHECK(v == 1.0);
}

TEST_CASE("distances through the C interface") {
  const double atoms[4] = {0.125, 0.375, 0.625, 0.875};
  int calls = 0;
  circlaw_ks_result ks{};
  REQUIRE(circlaw_ks_1d(atoms, 4, uniform_cdf, &calls, &ks) == CIRCLAW_OK);
  CHECK(ks.statistic == doctest::Approx(0.125));
  CHECK(calls >= 4);

  const circlaw_complex zeros[3] = {{0, 0}, {0, 0}, {0, 0}};
  Spec s;
  REQUIRE(circlaw_spectrum_from_eigenvalues(zeros, 3, 0.0, &s.p) == CIRCLAW_OK);
  REQUIRE(circlaw_radial_ks(s.p, &ks) == CIRCLAW_OK);
  CHECK(ks.statistic == 1.0);
  const double u[2] = {1.0, 0.0}, v[2] = {0.0, 0.0};
  double disc = 0.0;
  REQUIRE(circlaw_charfn_discrepancy(s.p, u, v, 2, &disc) == CIRCLAW_OK);
  CHECK(disc == doctest::Approx(1.0 - circlaw_circular_charfn(1.0, 0.0)));
  double frac = 0, bound = 0;
  REQUIRE(circlaw_tail_fraction(s.p, 1.0, &frac, &bound) == CIRCLAW_OK);
  CHECK(frac == 0.0);
}

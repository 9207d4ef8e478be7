#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "circlaw/metrics.hpp"
#include "circlaw/spectra.hpp"
#include "oracles.hpp"

using namespace circlaw;
using oracle::raises;

namespace {

// Coefficients of det(xI - M), lowest order first, via Faddeev-LeVerrier in
// long double.
std::vector<std::complex<long double>> char_poly(const Matrix& m) {
  using CL = std::complex<long double>;
  const auto n = m.rows();
  Eigen::Matrix<CL, Eigen::Dynamic, Eigen::Dynamic> a = m.cast<CL>();
  Eigen::Matrix<CL, Eigen::Dynamic, Eigen::Dynamic> mk = Eigen::Matrix<CL, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  std::vector<CL> c(static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(n)] = 1.0L;
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = a * mk;
    mk.diagonal().array() += c[static_cast<std::size_t>(n - k + 1)];
    c[static_cast<std::size_t>(n - k)] = -(a * mk).trace() / static_cast<long double>(k);
  }
  c.pop_back();
  return c;
}

}  // namespace

TEST_CASE("complex_eigenvalues of trivial matrices") {
  SUBCASE("zero") {
    const auto s = complex_eigenvalues(Matrix::Zero(6, 6));
    REQUIRE(s.size() == 6);
    for (auto l : s.eigenvalues) CHECK(std::abs(l) == 0.0);
    CHECK(s.trace_aa_star == 0.0);
  }
  SUBCASE("sqrt(n) I") {
    const Matrix x = std::sqrt(9.0) * Matrix::Identity(9, 9);
    const auto s = complex_eigenvalues(x);
    for (auto l : s.eigenvalues) CHECK(std::abs(l - 1.0) < 1e-14);
  }
}

TEST_CASE("4 x 4 spectrum matches the characteristic polynomial roots") {
  const auto x = sample_matrix({EntryDistribution::complex_gaussian(), 4, 31});
  const auto s = complex_eigenvalues(x);
  const Matrix a = x / 2.0;
  std::vector<Complex> expected;
  for (auto r : oracle::poly_roots(char_poly(a))) expected.emplace_back(double(r.real()), double(r.imag()));
  CHECK(max_matched_distance(s.eigenvalues, expected) < 1e-8);
}

TEST_CASE("real matrices use the real solver and still match") {
  const auto x = sample_matrix({EntryDistribution::rademacher(), 4, 8});
  const auto s = complex_eigenvalues(x);
  std::vector<Complex> expected;
  for (auto r : oracle::poly_roots(char_poly(x / 2.0))) expected.emplace_back(double(r.real()), double(r.imag()));
  CHECK(max_matched_distance(s.eigenvalues, expected) < 1e-8);
}

TEST_CASE("trace and Schur invariants over random realizations") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t n = 40 + 10 * seed;
    const auto dist = seed % 2 ? EntryDistribution::real_gaussian() : EntryDistribution::complex_gaussian();
    const auto x = sample_matrix({dist, n, seed});
    const auto s = complex_eigenvalues(x);
    const Matrix a = x / std::sqrt(double(n));
    Complex sum = 0.0;
    double sum_sq = 0.0;
    for (auto l : s.eigenvalues) {
      sum += l;
      sum_sq += std::norm(l);
    }
    CHECK(std::abs(sum - a.trace()) < 1e-9 * double(n));
    CHECK(s.trace_aa_star == doctest::Approx((a * a.adjoint()).trace().real()).epsilon(1e-12));
    CHECK(sum_sq <= s.trace_aa_star + 1e-8 * double(n));
  }
}

TEST_CASE("spectrum is invariant under unitary conjugation") {
  const auto x = sample_matrix({EntryDistribution::complex_gaussian(), 12, 4});
  const auto q_src = sample_matrix({EntryDistribution::complex_gaussian(), 12, 5});
  const Matrix q = Eigen::HouseholderQR<Matrix>(q_src).householderQ();
  const Matrix y = q * x * q.adjoint();
  CHECK(max_matched_distance(complex_eigenvalues(x).eigenvalues, complex_eigenvalues(y).eigenvalues) < 1e-10);
}

TEST_CASE("hermitized_eigenvalues") {
  SUBCASE("zero matrix at z = 1 + i gives |z|^2") {
    const auto h = hermitized_eigenvalues(Matrix::Zero(5, 5), Complex(1.0, 1.0));
    for (double v : h.eigenvalues) CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("z = 0 gives squared singular values of X / sqrt(n)") {
    const auto x = sample_matrix({EntryDistribution::real_gaussian(), 10, 2});
    const auto h = hermitized_eigenvalues(x, 0.0);
    Eigen::JacobiSVD<Matrix> svd(x / std::sqrt(10.0));
    std::vector<double> sv;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) sv.push_back(std::pow(svd.singularValues()(k), 2));
    CHECK(max_sorted_gap(h.eigenvalues, sv) < 1e-12);
  }
  SUBCASE("8 x 8 at z = 0.5 against an independent SVD") {
    const auto x = sample_matrix({EntryDistribution::complex_gaussian(), 8, 9});
    const auto h = hermitized_eigenvalues(x, 0.5);
    const Matrix shifted = x / std::sqrt(8.0) - 0.5 * Matrix::Identity(8, 8);
    Eigen::JacobiSVD<Matrix> svd(shifted);
    std::vector<double> sv;
    for (Eigen::Index k = 0; k < 8; ++k) sv.push_back(std::pow(svd.singularValues()(k), 2));
    CHECK(max_sorted_gap(h.eigenvalues, sv) < 1e-8);
    CHECK(max_sorted_gap(h.eigenvalues, squared_singular_values(x, 0.5)) < 1e-8);
  }
  SUBCASE("sorted, nonnegative and summing to tr H") {
    const auto x = sample_matrix({EntryDistribution::rademacher(), 30, 6});
    const Complex z(0.3, -0.7);
    const auto h = hermitized_eigenvalues(x, z);
    CHECK(std::is_sorted(h.eigenvalues.begin(), h.eigenvalues.end()));
    CHECK(h.eigenvalues.front() >= 0.0);
    const Matrix b = x / std::sqrt(30.0) - z * Matrix::Identity(30, 30);
    double sum = 0.0;
    for (double v : h.eigenvalues) sum += v;
    CHECK(sum == doctest::Approx((b * b.adjoint()).trace().real()).epsilon(1e-12));
  }
  SUBCASE("singular A - zI clamps to an exact zero") {
    const auto h = hermitized_eigenvalues(std::sqrt(4.0) * Matrix::Identity(4, 4), 1.0);
    for (double v : h.eigenvalues) CHECK(v == 0.0);
  }
}

TEST_CASE("esd_nu step CDF") {
  const EmpiricalMeasure1D single({2.0});
  CHECK(single.cdf(1.999) == 0.0);
  CHECK(single.cdf(2.0) == 1.0);
  CHECK(single.cdf(5.0) == 1.0);
  const EmpiricalMeasure1D two({3.0, 1.0});
  CHECK(two.cdf(2.0) == 0.5);
  CHECK(two.cdf(0.0) == 0.0);
  CHECK(two.cdf(3.0) == 1.0);
}

TEST_CASE("esd_nu at z = 0 is close to the ratio-one Marchenko-Pastur law") {
  const auto x = sample_matrix({EntryDistribution::complex_gaussian(), 512, 12});
  const auto nu = esd_nu(hermitized_eigenvalues(x, 0.0));
  // Closed form CDF checked against quadrature of the density first
  // (x = y^2 removes the endpoint singularity).
  for (double q : {0.05, 0.5, 1.0, 2.0, 3.5}) {
    const double by_quadrature =
        oracle::simpson([](double y) { return 2.0 * y * oracle::mp_density(y * y); }, 1e-150, std::sqrt(q));
    REQUIRE(oracle::mp_cdf(q) == doctest::Approx(by_quadrature).epsilon(1e-8));
  }
  const auto ks = ks_1d(nu, oracle::mp_cdf);
  CHECK(ks.statistic < 0.08);
  // CDF is monotone from 0 to 1.
  double prev = 0.0;
  for (double t = -1.0; t < 6.0; t += 0.01) {
    CHECK(nu.cdf(t) >= prev);
    prev = nu.cdf(t);
  }
  CHECK(prev == 1.0);
}

TEST_CASE("esd_mu") {
  ComplexSpectrum zero{std::vector<Complex>(7, 0.0), 0.0};
  const auto mu = esd_mu(zero);
  CHECK(mu.cdf(0.0, 0.0) == 1.0);
  CHECK(mu.cdf(-1e-12, 0.0) == 0.0);
  CHECK(mu.fraction_within(0.0) == 1.0);
  ComplexSpectrum pts{{Complex(1, 2), Complex(-3, 0.5), Complex(0, -1)}, 0.0};
  CHECK(esd_mu(pts).cdf(INFINITY, INFINITY) == 1.0);
  CHECK(esd_mu(pts).cdf(0.0, 1.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("tail_fraction") {
  SUBCASE("all zero") {
    const auto t = tail_fraction({std::vector<Complex>(4, 0.0), 0.0}, 1.0);
    CHECK(t.fraction == 0.0);
    CHECK(t.bound == 0.0);
  }
  SUBCASE("single eigenvalue 3 at radius 2") {
    const auto t = tail_fraction({{Complex(3.0, 0.0)}, 9.0}, 2.0);
    CHECK(t.fraction == 1.0);
    CHECK(t.bound == doctest::Approx(9.0 / 4.0));
  }
  SUBCASE("spectrum inconsistent with its trace is an invariant violation") {
    CHECK(raises([] { tail_fraction({{Complex(3.0, 0.0)}, 1.0}, 2.0); }, ErrorCode::invariant_violation));
  }
  SUBCASE("Ginibre n = 512 at radius 2") {
    const auto x = sample_matrix({EntryDistribution::complex_gaussian(), 512, 3});
    const auto t = tail_fraction(complex_eigenvalues(x), 2.0);
    CHECK(t.fraction <= 0.25 * grand_sum(x) + 1e-8);
    CHECK(t.bound == doctest::Approx(grand_sum(x) / 4.0).epsilon(1e-12));
  }
}

TEST_CASE("multiset comparisons") {
  CHECK(max_sorted_gap({3.0, 1.0, 2.0}, {1.0, 2.5, 3.0}) == doctest::Approx(0.5));
  CHECK(std::isinf(max_sorted_gap({1.0}, {1.0, 2.0})));
  const std::vector<Complex> a{{0, 1}, {2, 0}, {5, 5}};
  const std::vector<Complex> b{{5, 5.1}, {0, 1}, {2, 0}};
  CHECK(max_matched_distance(a, b) == doctest::Approx(0.1));
}

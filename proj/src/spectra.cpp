#include "circlaw/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "circlaw/error.hpp"

namespace circlaw {

namespace {

constexpr double kClampRelative = 1e-10;

Matrix shifted(const Matrix& x, Complex z) {
  const auto n = x.rows();
  Matrix a = x / std::sqrt(static_cast<double>(n));
  a.diagonal().array() -= z;
  return a;
}

bool all_real(const Matrix& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (x(i, j).imag() != 0.0) return false;
  return true;
}

}  // namespace

EmpiricalMeasure1D::EmpiricalMeasure1D(std::vector<double> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end());
}

double EmpiricalMeasure1D::cdf(double x) const {
  if (atoms_.empty()) return 0.0;
  const auto count = std::upper_bound(atoms_.begin(), atoms_.end(), x) - atoms_.begin();
  return static_cast<double>(count) / static_cast<double>(atoms_.size());
}

EmpiricalMeasure2D::EmpiricalMeasure2D(std::vector<Complex> points) : points_(std::move(points)) {}

double EmpiricalMeasure2D::cdf(double x, double y) const {
  if (points_.empty()) return 0.0;
  const auto count = std::count_if(points_.begin(), points_.end(),
                                   [&](Complex p) { return p.real() <= x && p.imag() <= y; });
  return static_cast<double>(count) / static_cast<double>(points_.size());
}

double EmpiricalMeasure2D::fraction_within(double r) const {
  if (points_.empty()) return 0.0;
  const auto count =
      std::count_if(points_.begin(), points_.end(), [&](Complex p) { return std::abs(p) <= r; });
  return static_cast<double>(count) / static_cast<double>(points_.size());
}

ComplexSpectrum complex_eigenvalues(const Matrix& x) {
  if (x.rows() != x.cols()) fail(ErrorCode::invalid_argument, "complex_eigenvalues: matrix must be square");
  const auto n = x.rows();
  ComplexSpectrum out;
  if (n == 0) return out;
  const Matrix a = x / std::sqrt(static_cast<double>(n));
  out.trace_aa_star = a.squaredNorm();

  out.eigenvalues.resize(static_cast<std::size_t>(n));
  if (all_real(a)) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a.real(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      std::ostringstream os;
      os << "complex_eigenvalues: real Schur iteration did not converge (n = " << n
         << ", iteration budget = " << solver.getMaxIterations() << " per eigenvalue)";
      fail(ErrorCode::eigensolver, os.str());
    }
    for (Eigen::Index k = 0; k < n; ++k) out.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
  } else {
    Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      std::ostringstream os;
      os << "complex_eigenvalues: complex Schur iteration did not converge (n = " << n
         << ", iteration budget = " << solver.getMaxIterations() << " per eigenvalue)";
      fail(ErrorCode::eigensolver, os.str());
    }
    for (Eigen::Index k = 0; k < n; ++k) out.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
  }

  const double tol = 1e-8 * static_cast<double>(n) * std::max(1.0, out.trace_aa_star / static_cast<double>(n));
  Complex sum = 0.0;
  double sum_sq = 0.0;
  for (auto l : out.eigenvalues) {
    sum += l;
    sum_sq += std::norm(l);
  }
  if (std::abs(sum - a.trace()) > tol)
    fail(ErrorCode::invariant_violation, "complex_eigenvalues: eigenvalue sum differs from trace");
  if (sum_sq > out.trace_aa_star + tol)
    fail(ErrorCode::invariant_violation, "complex_eigenvalues: Schur inequality violated");
  return out;
}

HermitizedSpectrum hermitized_eigenvalues(const Matrix& x, Complex z) {
  if (x.rows() != x.cols()) fail(ErrorCode::invalid_argument, "hermitized_eigenvalues: matrix must be square");
  HermitizedSpectrum out{z, {}};
  if (x.rows() == 0) return out;
  const Matrix b = shifted(x, z);
  Matrix h = b * b.adjoint();
  h = (0.5 * (h + h.adjoint())).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::eigensolver, "hermitized_eigenvalues: tridiagonal QR did not converge (n = " +
                                     std::to_string(x.rows()) + ")");
  const auto& ev = solver.eigenvalues();
  const double norm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  out.eigenvalues.resize(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    double v = ev(k);
    if (v < 0.0) {
      if (v < -kClampRelative * norm) {
        std::ostringstream os;
        os << "hermitized_eigenvalues: eigenvalue " << v << " below clamp threshold "
           << -kClampRelative * norm;
        fail(ErrorCode::invariant_violation, os.str());
      }
      v = 0.0;
    }
    out.eigenvalues[static_cast<std::size_t>(k)] = v;
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
  return out;
}

std::vector<double> squared_singular_values(const Matrix& x, Complex z) {
  if (x.rows() != x.cols()) fail(ErrorCode::invalid_argument, "squared_singular_values: matrix must be square");
  if (x.rows() == 0) return {};
  Eigen::BDCSVD<Matrix> svd(shifted(x, z));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    const double s = svd.singularValues()(k);
    out.push_back(s * s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

EmpiricalMeasure1D esd_nu(const HermitizedSpectrum& h) { return EmpiricalMeasure1D(h.eigenvalues); }

EmpiricalMeasure2D esd_mu(const ComplexSpectrum& c) { return EmpiricalMeasure2D(c.eigenvalues); }

TailFraction tail_fraction(const ComplexSpectrum& c, double radius) {
  if (!(radius > 0.0)) fail(ErrorCode::invalid_argument, "tail_fraction: A must be positive");
  if (c.eigenvalues.empty()) return {0.0, 0.0};
  const auto n = static_cast<double>(c.size());
  const auto count = std::count_if(c.eigenvalues.begin(), c.eigenvalues.end(),
                                   [&](Complex l) { return std::abs(l) >= radius; });
  TailFraction t{static_cast<double>(count) / n, c.trace_aa_star / (n * radius * radius)};
  if (t.fraction > t.bound + 1e-8) {
    std::ostringstream os;
    os << "tail_fraction: " << t.fraction << " exceeds tr(AA*)/(n A^2) = " << t.bound
       << "; eigenvalues inconsistent with their matrix";
    fail(ErrorCode::invariant_violation, os.str());
  }
  return t;
}

double max_sorted_gap(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double gap = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) gap = std::max(gap, std::abs(a[k] - b[k]));
  return gap;
}

double max_matched_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (auto p : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(p - b[k]);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

}  // namespace circlaw

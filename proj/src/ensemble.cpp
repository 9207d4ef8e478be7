#include "circlaw/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "circlaw/error.hpp"
#include "circlaw/parallel.hpp"

namespace circlaw {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// Probability of each nonzero atom of two-point-sparse(c) at dimension n.
double sparse_atom_probability(double c, std::size_t n) {
  return 1.0 / (2.0 * c * c * static_cast<double>(n));
}

double sparse_atom(double c, std::size_t n) { return c * std::sqrt(static_cast<double>(n)); }

}  // namespace

EntryDistribution EntryDistribution::complex_gaussian() { return EntryDistribution(Kind::complex_gaussian); }
EntryDistribution EntryDistribution::real_gaussian() { return EntryDistribution(Kind::real_gaussian); }
EntryDistribution EntryDistribution::rademacher() { return EntryDistribution(Kind::rademacher); }
EntryDistribution EntryDistribution::uniform_centered() { return EntryDistribution(Kind::uniform_centered); }

EntryDistribution EntryDistribution::two_point_sparse(double c) {
  EntryDistribution d(Kind::two_point_sparse);
  d.sparsity_ = c;
  d.validate();
  return d;
}

EntryDistribution EntryDistribution::mixture(std::vector<Component> components) {
  EntryDistribution d(Kind::mixture);
  d.components_ = std::move(components);
  d.validate();
  return d;
}

bool EntryDistribution::is_real() const {
  switch (kind_) {
    case Kind::complex_gaussian: return false;
    case Kind::mixture:
      for (const auto& c : components_)
        if (!c.dist.is_real()) return false;
      return true;
    default: return true;
  }
}

void EntryDistribution::validate(std::size_t n) const {
  if (kind_ == Kind::two_point_sparse) {
    if (!(sparsity_ > 0.0) || !std::isfinite(sparsity_))
      fail(ErrorCode::invalid_spec, "two-point-sparse: c must be a positive finite number");
    if (n > 0 && sparse_atom_probability(sparsity_, n) > 0.5)
      fail(ErrorCode::invalid_spec,
           "two-point-sparse: c^2 n must be at least 1 for the atoms to carry unit variance");
  }
  if (kind_ == Kind::mixture) {
    if (components_.empty()) fail(ErrorCode::invalid_spec, "mixture: needs at least one component");
    double total = 0.0;
    for (const auto& c : components_) {
      if (!(c.weight > 0.0) || !std::isfinite(c.weight))
        fail(ErrorCode::invalid_spec, "mixture: weights must be positive");
      c.dist.validate(n);
      total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
      fail(ErrorCode::invalid_spec, "mixture: weights must sum to 1");
  }
}

Complex EntryDistribution::sample(SubStream& stream, std::size_t n) const {
  switch (kind_) {
    case Kind::complex_gaussian: {
      std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
      const double re = normal(stream);
      const double im = normal(stream);
      return {re, im};
    }
    case Kind::real_gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      return {normal(stream), 0.0};
    }
    case Kind::rademacher: return {(stream() >> 63) ? 1.0 : -1.0, 0.0};
    case Kind::uniform_centered: return {kSqrt3 * (2.0 * stream.uniform() - 1.0), 0.0};
    case Kind::two_point_sparse: {
      const double p = sparse_atom_probability(sparsity_, n);
      const double u = stream.uniform();
      if (u < p) return {sparse_atom(sparsity_, n), 0.0};
      if (u < 2.0 * p) return {-sparse_atom(sparsity_, n), 0.0};
      return {0.0, 0.0};
    }
    case Kind::mixture: {
      const double u = stream.uniform();
      double acc = 0.0;
      for (const auto& c : components_) {
        acc += c.weight;
        if (u < acc) return c.dist.sample(stream, n);
      }
      return components_.back().dist.sample(stream, n);
    }
  }
  return {};
}

double EntryDistribution::fourth_moment(std::size_t n) const {
  switch (kind_) {
    case Kind::complex_gaussian: return 2.0;  // |x|^2 ~ Exp(1)
    case Kind::real_gaussian: return 3.0;
    case Kind::rademacher: return 1.0;
    case Kind::uniform_centered: return 9.0 / 5.0;
    case Kind::two_point_sparse: return sparsity_ * sparsity_ * static_cast<double>(n);
    case Kind::mixture: {
      double m = 0.0;
      for (const auto& c : components_) m += c.weight * c.dist.fourth_moment(n);
      return m;
    }
  }
  return 0.0;
}

std::string EntryDistribution::label() const {
  switch (kind_) {
    case Kind::complex_gaussian: return "complex-gaussian";
    case Kind::real_gaussian: return "real-gaussian";
    case Kind::rademacher: return "rademacher";
    case Kind::uniform_centered: return "uniform-centered";
    case Kind::two_point_sparse: {
      std::ostringstream os;
      os << "two-point-sparse(" << sparsity_ << ")";
      return os.str();
    }
    case Kind::mixture: {
      std::ostringstream os;
      os << "mixture(";
      for (std::size_t k = 0; k < components_.size(); ++k) {
        if (k) os << ',';
        os << components_[k].dist.label() << ':' << components_[k].weight;
      }
      os << ')';
      return os.str();
    }
  }
  return "unknown";
}

Matrix sample_matrix(const EnsembleSpec& spec, unsigned threads) {
  if (spec.n == 0) fail(ErrorCode::invalid_spec, "sample_matrix: n must be at least 1");
  spec.dist.validate(spec.n);
  const std::size_t n = spec.n;
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      SubStream stream(spec.seed, i, j);
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = spec.dist.sample(stream, n);
    }
  });
  return x;
}

double lindeberg_empirical(const Matrix& x, double eta) {
  if (!(eta > 0.0)) fail(ErrorCode::invalid_argument, "lindeberg_empirical: eta must be positive");
  const auto n = static_cast<double>(x.rows());
  if (x.size() == 0) return 0.0;
  const double threshold = eta * std::sqrt(n);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double m = std::abs(x(i, j));
      if (m > threshold) sum += std::norm(x(i, j));
    }
  return sum / (n * n);
}

double lindeberg_analytic(const EntryDistribution& dist, std::size_t n, double eta) {
  if (!(eta > 0.0)) fail(ErrorCode::invalid_argument, "lindeberg_analytic: eta must be positive");
  if (n == 0) fail(ErrorCode::invalid_spec, "lindeberg_analytic: n must be at least 1");
  const double tau = eta * std::sqrt(static_cast<double>(n));
  switch (dist.kind()) {
    case EntryDistribution::Kind::complex_gaussian: {
      // |x|^2 ~ Exp(1): int_{tau^2}^inf y e^{-y} dy
      const double t2 = tau * tau;
      return (t2 + 1.0) * std::exp(-t2);
    }
    case EntryDistribution::Kind::real_gaussian: {
      const double phi = std::exp(-0.5 * tau * tau) / std::sqrt(2.0 * std::numbers::pi);
      return 2.0 * tau * phi + std::erfc(tau / std::numbers::sqrt2);
    }
    case EntryDistribution::Kind::rademacher: return tau < 1.0 ? 1.0 : 0.0;
    case EntryDistribution::Kind::uniform_centered:
      if (tau >= kSqrt3) return 0.0;
      return (3.0 * kSqrt3 - tau * tau * tau) / (3.0 * kSqrt3);
    case EntryDistribution::Kind::two_point_sparse:
      dist.validate(n);
      // The whole unit variance sits on the atoms.
      return sparse_atom(dist.sparsity(), n) > tau ? 1.0 : 0.0;
    case EntryDistribution::Kind::mixture: {
      double v = 0.0;
      for (const auto& c : dist.components()) v += c.weight * lindeberg_analytic(c.dist, n, eta);
      return v;
    }
  }
  fail(ErrorCode::not_implemented, "lindeberg_analytic: no closed form for " + dist.label());
}

TruncationSplit truncation_split(const Matrix& x) {
  TruncationSplit split;
  if (x.size() == 0) return split;
  const auto n = static_cast<double>(x.rows());
  const double threshold = std::pow(n, 0.75);
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double sq = std::norm(x(i, j));
      if (std::abs(x(i, j)) > threshold) {
        split.s_n1 += sq;
        ++split.count_large;
      } else {
        split.s_n2 += sq;
      }
    }
  split.s_n1 /= n * n;
  split.s_n2 /= n * n;
  return split;
}

double grand_sum(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  const auto n = static_cast<double>(x.rows());
  double sum = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) sum += std::norm(x(i, j));
  return sum / (n * n);
}

}  // namespace circlaw

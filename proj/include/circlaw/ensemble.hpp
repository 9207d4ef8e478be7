#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "circlaw/random.hpp"

namespace circlaw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Zero-mean, unit-variance law for a single matrix entry.
///
/// two-point-sparse(c) is the Lindeberg-violating construction used by the
/// lab: it takes the values +-c*sqrt(n) with probability 1/(2 c^2 n) each and
/// 0 otherwise, where n is the dimension of the matrix being sampled. All of
/// its variance sits at |x| = c*sqrt(n), so the Lindeberg functional stays at
/// 1 for every eta < c.
class EntryDistribution {
 public:
  enum class Kind {
    complex_gaussian,
    real_gaussian,
    rademacher,
    uniform_centered,
    two_point_sparse,
    mixture,
  };

  struct Component;

  static EntryDistribution complex_gaussian();
  static EntryDistribution real_gaussian();
  static EntryDistribution rademacher();
  static EntryDistribution uniform_centered();
  static EntryDistribution two_point_sparse(double c);
  static EntryDistribution mixture(std::vector<Component> components);

  Kind kind() const noexcept { return kind_; }
  double sparsity() const noexcept { return sparsity_; }
  const std::vector<Component>& components() const noexcept { return components_; }

  /// True when every draw is real (imaginary part exactly zero).
  bool is_real() const;

  /// Throws invalid_spec if the parameters break mean 0 / variance 1, or if
  /// the law cannot be realized at dimension n (n = 0 skips that check).
  void validate(std::size_t n = 0) const;

  /// Draws one entry for an n x n matrix.
  Complex sample(SubStream& stream, std::size_t n) const;

  /// E|x|^4, used for standard errors of the sample variance.
  double fourth_moment(std::size_t n) const;

  /// Stable human-readable name, e.g. "mixture(rademacher:0.5,uniform-centered:0.5)".
  std::string label() const;

 private:
  explicit EntryDistribution(Kind kind) : kind_(kind) {}

  Kind kind_;
  double sparsity_ = 1.0;
  std::vector<Component> components_;
};

struct EntryDistribution::Component {
  EntryDistribution dist;
  double weight;
};

struct EnsembleSpec {
  EntryDistribution dist;
  std::size_t n;
  std::uint64_t seed;
};

/// Entry (i, j) is drawn from SubStream(seed, i, j); the result does not
/// depend on the order of generation or on `threads`.
Matrix sample_matrix(const EnsembleSpec& spec, unsigned threads = 1);

/// (1/n^2) sum |x_ij|^2 1{|x_ij| > eta sqrt(n)}.
double lindeberg_empirical(const Matrix& x, double eta);

/// E|x|^2 1{|x| > eta sqrt(n)} for one entry; equals the Lindeberg
/// functional since all entries share the law.
double lindeberg_analytic(const EntryDistribution& dist, std::size_t n, double eta);

struct TruncationSplit {
  double s_n1 = 0.0;  // mass with |x| > n^{3/4}
  double s_n2 = 0.0;  // mass with |x| <= n^{3/4}
  std::size_t count_large = 0;
};

TruncationSplit truncation_split(const Matrix& x);

/// (1/n^2) sum |x_ij|^2.
double grand_sum(const Matrix& x);

}  // namespace circlaw

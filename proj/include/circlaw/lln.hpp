#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "circlaw/ensemble.hpp"

namespace circlaw {

/// Nonnegative laws for the truncated-sum expectation bound. Kept apart
/// from EntryDistribution: these are mean-1 variables, not centred entries.
class NonnegDistribution {
 public:
  enum class Kind { exponential, constant, scaled_chi_square };

  /// Exp(rate); mean 1/rate.
  static NonnegDistribution exponential(double rate = 1.0);
  /// Point mass at value.
  static NonnegDistribution constant(double value = 1.0);
  /// scale * chi^2(dof); mean dof * scale.
  static NonnegDistribution scaled_chi_square(double dof, double scale);

  Kind kind() const noexcept { return kind_; }
  double mean() const noexcept;
  /// Upper end of the support (infinity when unbounded).
  double support_max() const noexcept;
  double sample(SubStream& stream) const;
  std::string label() const;

 private:
  NonnegDistribution(Kind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}
  Kind kind_;
  double p1_;
  double p2_;
};

struct LLNTrialReport {
  std::size_t n = 0;
  double a = 0.0;
  std::size_t b = 0;
  std::size_t trials = 0;
  /// Mean over trials of S = sum_i x_i 1{x_i > a} 1{#{j : x_j > a} < b}.
  double mean = 0.0;
  double standard_error = 0.0;
  /// mean - 3 stderr > b.
  bool violation = false;

  double bound() const noexcept { return static_cast<double>(b); }
};

/// Monte Carlo estimate of E S for x_1..x_n i.i.d. from `dist`. Trial k
/// draws x_i from SubStream(seed, k, i). Throws invalid_spec when the mean
/// of `dist` is not 1, invalid_argument for a <= 0, b < 2, n or trials = 0.
LLNTrialReport lemma2_trial(const NonnegDistribution& dist, std::size_t n, double a, std::size_t b,
                            std::size_t trials, std::uint64_t seed, unsigned threads = 1);

struct SllnPoint {
  std::size_t n;
  double grand_sum;
};

/// One realization per rung of (1/n^2) sum |x_ij|^2, each sampled with the
/// same seed at its own dimension.
std::vector<SllnPoint> slln_trajectory(const EntryDistribution& dist, std::uint64_t seed,
                                       std::span<const std::size_t> n_ladder, unsigned threads = 1);

}  // namespace circlaw

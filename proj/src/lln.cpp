#include "circlaw/lln.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "circlaw/error.hpp"
#include "circlaw/parallel.hpp"

namespace circlaw {

NonnegDistribution NonnegDistribution::exponential(double rate) {
  if (!(rate > 0.0)) fail(ErrorCode::invalid_spec, "exponential: rate must be positive");
  return {Kind::exponential, rate, 0.0};
}

NonnegDistribution NonnegDistribution::constant(double value) {
  if (!(value >= 0.0)) fail(ErrorCode::invalid_spec, "constant: value must be nonnegative");
  return {Kind::constant, value, 0.0};
}

NonnegDistribution NonnegDistribution::scaled_chi_square(double dof, double scale) {
  if (!(dof > 0.0) || !(scale > 0.0))
    fail(ErrorCode::invalid_spec, "scaled-chi-square: dof and scale must be positive");
  return {Kind::scaled_chi_square, dof, scale};
}

double NonnegDistribution::mean() const noexcept {
  switch (kind_) {
    case Kind::exponential: return 1.0 / p1_;
    case Kind::constant: return p1_;
    case Kind::scaled_chi_square: return p1_ * p2_;
  }
  return 0.0;
}

double NonnegDistribution::support_max() const noexcept {
  return kind_ == Kind::constant ? p1_ : std::numeric_limits<double>::infinity();
}

double NonnegDistribution::sample(SubStream& stream) const {
  switch (kind_) {
    case Kind::exponential: return std::exponential_distribution<double>(p1_)(stream);
    case Kind::constant: return p1_;
    case Kind::scaled_chi_square: return p2_ * std::chi_squared_distribution<double>(p1_)(stream);
  }
  return 0.0;
}

std::string NonnegDistribution::label() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::exponential: os << "exponential(" << p1_ << ")"; break;
    case Kind::constant: os << "constant(" << p1_ << ")"; break;
    case Kind::scaled_chi_square: os << "scaled-chi-square(" << p1_ << "," << p2_ << ")"; break;
  }
  return os.str();
}

LLNTrialReport lemma2_trial(const NonnegDistribution& dist, std::size_t n, double a, std::size_t b,
                            std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (std::abs(dist.mean() - 1.0) > 1e-12)
    fail(ErrorCode::invalid_spec, "lemma2_trial: " + dist.label() + " does not have mean 1");
  if (!(a > 0.0)) fail(ErrorCode::invalid_argument, "lemma2_trial: a must be positive");
  if (b < 2) fail(ErrorCode::invalid_argument, "lemma2_trial: b must be an integer > 1");
  if (n == 0 || trials == 0) fail(ErrorCode::invalid_argument, "lemma2_trial: n and trials must be positive");

  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t k) {
    double exceed_sum = 0.0;
    std::size_t exceed_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      SubStream stream(seed, k, i);
      const double x = dist.sample(stream);
      if (x > a) {
        exceed_sum += x;
        ++exceed_count;
      }
    }
    values[k] = exceed_count < b ? exceed_sum : 0.0;
  });

  LLNTrialReport r;
  r.n = n;
  r.a = a;
  r.b = b;
  r.trials = trials;
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / static_cast<double>(trials);
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  const double var = trials > 1 ? ss / static_cast<double>(trials - 1) : 0.0;
  r.standard_error = std::sqrt(var / static_cast<double>(trials));
  r.violation = r.mean - 3.0 * r.standard_error > r.bound();
  return r;
}

std::vector<SllnPoint> slln_trajectory(const EntryDistribution& dist, std::uint64_t seed,
                                       std::span<const std::size_t> n_ladder, unsigned threads) {
  std::vector<SllnPoint> out;
  out.reserve(n_ladder.size());
  for (auto n : n_ladder) {
    const auto x = sample_matrix({dist, n, seed}, threads);
    out.push_back({n, grand_sum(x)});
  }
  return out;
}

}  // namespace circlaw

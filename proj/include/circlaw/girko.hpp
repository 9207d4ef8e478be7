#pragma once

#include <cstddef>
#include <vector>

#include "circlaw/spectra.hpp"

namespace circlaw {

/// Truncated integration rectangle T = {|s| <= A, |t| <= A^3} with an
/// ns x nt midpoint grid and the exclusion radius epsilon.
struct RegionSpec {
  double A = 2.5;
  std::size_t ns = 256;
  std::size_t nt = 2048;
  double epsilon = 0.25;

  /// A > 2, ns, nt >= 8, 0 < epsilon < 1; throws invalid_argument otherwise.
  void validate() const;

  double cell_s() const noexcept;
  double cell_t() const noexcept;

  /// Smallest grid that keeps cells below max_cell and resolves e^{i(us+vt)}
  /// with at least eight cells per period in each direction.
  static RegionSpec resolving(double u, double v, double A, double epsilon, double max_cell = 0.02);
};

/// Union of "drums" {|t - Im l_k| <= eps/2} intersected with {|z - l_k| <= eps}.
class ExclusionSet {
 public:
  ExclusionSet(const ComplexSpectrum& spectrum, double epsilon);

  bool contains(double s, double t) const;
  /// True when the closed cell [s0, s1] x [t0, t1] meets some drum.
  bool touches(double s0, double s1, double t0, double t1) const;

  double epsilon() const noexcept { return epsilon_; }

 private:
  template <class Fn>
  bool any_candidate(double t0, double t1, Fn&& fn) const;

  double epsilon_;
  std::vector<Complex> centers_;  // sorted by imaginary part
};

enum class Membership { inside, excluded, outside };

/// (2/n) sum_k (s - Re l_k) / |z - l_k|^2, the s-derivative of the log
/// potential of the empirical spectral measure. Throws singularity if (s, t)
/// coincides with an eigenvalue.
double g_n_sum(const ComplexSpectrum& spectrum, double s, double t);

Membership region_membership(const RegionSpec& region, const ComplexSpectrum& spectrum, double s,
                             double t);

/// (1/n) sum_k exp(i(u Re l_k + v Im l_k)).
Complex charfn_direct(const ComplexSpectrum& spectrum, double u, double v);

struct TailBounds {
  double bound_s;  // |s| >= A part
  double bound_t;  // |s| <= A, |t| >= A^3 part
};

TailBounds tail_bounds(const ComplexSpectrum& spectrum, double u, double v, double A);

struct GirkoEstimate {
  Complex value;
  /// prefactor * (bound_s + bound_t + 8 eps) + quadrature_error.
  double error_budget = 0.0;
  double quadrature_error = 0.0;
  TailBounds tails{};
  double singularity_bound = 0.0;  // 8 eps
  double prefactor = 0.0;          // (u^2 + v^2) / (4 |u| pi)
  /// Fraction of T's cells kept in T(eps).
  double kept_fraction = 0.0;
};

/// Integral route to the characteristic function of the ESD: midpoint
/// quadrature of g_n_sum e^{i(us+vt)} over the cells of T that do not touch
/// the exclusion set. The quadrature error is |I(grid) - I(grid / 2)|.
/// Throws domain if u v = 0 and resolution if the grid has fewer than eight
/// cells per oscillation period. Row sums are reduced in fixed order, so the
/// result is identical for any thread count.
GirkoEstimate charfn_girko(const ComplexSpectrum& spectrum, double u, double v,
                           const RegionSpec& region, unsigned threads = 1);

/// int_T |(2/n) sum_k (s - Re l_k)/|z - l_k|^2 1{|z - l_k| <= eps}| ds dt,
/// integrated in polar coordinates around each eigenvalue over the part of
/// its disc for which it is the nearest eigenvalue. Bounded by 8 eps.
double small_singularity_integral(const ComplexSpectrum& spectrum, const RegionSpec& region, double eps,
                                  std::size_t radial = 64, std::size_t angular = 256);

}  // namespace circlaw

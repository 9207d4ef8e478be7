#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "circlaw/ensemble.hpp"

namespace circlaw {

/// Imaginary offset used whenever the Stieltjes branch is requested at a
/// real alpha.
inline constexpr double kRealAxisOffset = 1e-7;

/// Roots of D^3 + 2 D^2 + ((alpha + 1 - |z|^2)/alpha) D + 1/alpha = 0.
/// Companion-matrix eigenvalues followed by a Newton polish. Throws domain
/// for alpha = 0 and tolerance if the Vieta identities fail at 1e-9.
std::array<Complex, 3> delta_roots(Complex alpha, Complex z);

/// Relative residuals of the three Vieta identities (sum = -2,
/// pairwise sum = (alpha + 1 - |z|^2)/alpha, product = -1/alpha), each
/// scaled by the magnitude of the terms involved.
struct VietaResiduals {
  double sum;
  double pairwise;
  double product;

  double max() const noexcept;
};

VietaResiduals vieta_residuals(const std::array<Complex, 3>& roots, Complex alpha, Complex z);

/// |D - 1 / (|z|^2/(1+D) - (1+D) alpha)|.
double fixed_point_residual(Complex delta, Complex alpha, Complex z);

struct StieltjesSolution {
  Complex alpha;
  Complex z;
  /// Selected branch first, then the two remaining roots.
  std::array<Complex, 3> roots;
  int selected_index = 0;
  /// More than one root passed the Stieltjes admissibility checks.
  bool ambiguous = false;
  double residual = 0.0;

  Complex delta() const noexcept { return roots[static_cast<std::size_t>(selected_index)]; }
};

/// Selects the root that is the Stieltjes transform of nu(., z).
///
/// A root is admissible when Im D > 0, Im(alpha D) >= 0 and
/// Im D <= 1/Im alpha, all of which hold for the transform of any
/// probability measure on [0, inf). A single admissible root is returned
/// directly. Otherwise the solution is flagged ambiguous and the branch is
/// tracked from Im alpha large (where only the true branch is admissible)
/// down to the requested point; if tracking fails the smallest fixed-point
/// residual wins. Real alpha is shifted by i * kRealAxisOffset.
/// Throws domain for alpha = 0 or Im alpha < 0, branch_failure if no root
/// has Im D > 0.
StieltjesSolution delta_branch(Complex alpha, Complex z);

/// Support [lower, upper] of nu(., z), from the critical values of the
/// inverse map alpha(D).
struct SupportInterval {
  double lower;
  double upper;
};

SupportInterval nu_support(Complex z);

/// Boundary value (1/pi) Im D(x + i0) computed from the complex-conjugate
/// root pair of the real cubic; 0 outside the support.
double nu_boundary_density(double x, Complex z);

struct DensityCurve {
  Complex z;
  std::vector<double> grid;
  std::vector<double> values;

  double trapezoid_mass() const;
};

/// f(x) = max(0, Im D(x + i delta_im)) / pi on an increasing grid of
/// nonnegative points. delta_im must lie in [1e-8, 1e-3].
DensityCurve nu_density(Complex z, std::span<const double> grid, double delta_im);

/// (2 + |z|)^2 + 1: generous right end of the support of nu(., z).
double density_window(Complex z);

/// Quadratically graded grid on [0, density_window(z)], denser near 0 where
/// the density can blow up like x^{-1/2}.
std::vector<double> density_grid(Complex z, std::size_t points);

/// int_0^inf ln x nu(dx, z) by tanh-sinh quadrature over the support
/// (substituting x = y^2 when the support touches 0). Throws tolerance if
/// the quadrature error estimate exceeds 1e-7.
double nu_log_moment(Complex z);

/// nu([0, x], z).
double nu_cdf(Complex z, double x);

/// 2s/(s^2+t^2) outside the unit disk, 2s inside.
double g_closed(double s, double t);

/// Central difference of nu_log_moment in s with step h in [1e-4, 1e-2].
double g_from_nu(double s, double t, double h = 1e-2);

/// (1/pi) int_{unit disk} e^{i(ux + vy)} = 2 J_1(rho) / rho, rho = |(u, v)|.
double circular_charfn(double u, double v);

/// min(r^2, 1).
double circular_radial_cdf(double r);

/// Reproducible (alpha, z) sample: Re alpha uniform on [-10, 10],
/// Im alpha uniform on (0, im_max], z uniform on the disk |z| <= z_max.
std::vector<std::pair<Complex, Complex>> branch_sweep_points(std::size_t count, std::uint64_t seed,
                                                             double im_max = 10.0,
                                                             double z_max = 3.0);

}  // namespace circlaw

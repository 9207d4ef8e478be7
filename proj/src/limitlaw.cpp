#include "circlaw/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "circlaw/error.hpp"

namespace circlaw {

namespace {

constexpr double kVietaTolerance = 1e-9;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Cubic {
  Complex b;  // (alpha + 1 - |z|^2) / alpha
  Complex c;  // 1 / alpha

  Cubic(Complex alpha, Complex z) {
    const double w = std::norm(z);
    b = (alpha + 1.0 - w) / alpha;
    c = 1.0 / alpha;
  }

  Complex value(Complex d) const { return ((d + 2.0) * d + b) * d + c; }
  Complex slope(Complex d) const { return (3.0 * d + 4.0) * d + b; }
};

// The variable is rescaled by a root bound so the companion entries stay
// O(1); near alpha = 0 the raw coefficients grow like 1/alpha and the QR
// iteration stalls.
std::array<Complex, 3> companion_roots(const Cubic& p) {
  const double scale = std::max({2.0, std::sqrt(std::abs(p.b)), std::cbrt(std::abs(p.c))});
  Eigen::Matrix3cd companion;
  companion << -2.0 / scale, -p.b / (scale * scale), -p.c / (scale * scale * scale),
                1.0,  0.0,  0.0,
                0.0,  1.0,  0.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::eigensolver, "delta_roots: companion eigensolver did not converge");
  std::array<Complex, 3> roots{};
  for (int k = 0; k < 3; ++k) roots[static_cast<std::size_t>(k)] = scale * solver.eigenvalues()(k);
  return roots;
}

// Newton steps are only kept when they shrink |p|; near multiple roots the
// companion value is already as good as double precision allows.
Complex polish(const Cubic& p, Complex d) {
  for (int it = 0; it < 3; ++it) {
    const Complex f = p.value(d);
    const Complex df = p.slope(d);
    if (f == 0.0 || df == 0.0) break;
    const Complex next = d - f / df;
    if (!(std::abs(p.value(next)) < std::abs(f))) break;
    d = next;
  }
  return d;
}

std::array<Complex, 3> solve_cubic(Complex alpha, Complex z) {
  const Cubic p(alpha, z);
  auto roots = companion_roots(p);
  for (auto& r : roots) r = polish(p, r);
  return roots;
}

bool admissible(Complex r, Complex alpha) {
  if (!(r.imag() > 0.0)) return false;
  const Complex ar = alpha * r;
  if (ar.imag() < -16.0 * kEps * std::abs(alpha) * std::abs(r)) return false;
  return r.imag() <= (1.0 + 1e-9) / alpha.imag();
}

std::vector<std::size_t> admissible_roots(const std::array<Complex, 3>& roots, Complex alpha) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < 3; ++k)
    if (admissible(roots[k], alpha)) out.push_back(k);
  return out;
}

std::size_t nearest(const std::array<Complex, 3>& roots, Complex target, double* margin) {
  std::array<double, 3> d{};
  for (std::size_t k = 0; k < 3; ++k) d[k] = std::abs(roots[k] - target);
  const auto best = static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
  double second = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < 3; ++k)
    if (k != best) second = std::min(second, d[k]);
  *margin = second / std::max(d[best], 1e-300);
  return best;
}

// Follows the Stieltjes branch along Re alpha = const from a height where it
// is the only admissible root down to the requested Im alpha. Returns the
// tracked value, or nothing if no unambiguous start was found.
bool track_branch(Complex alpha, Complex z, Complex* out) {
  const double target = alpha.imag();
  double height = std::max(10.0 * target, 4.0 * (std::abs(alpha) + std::norm(z) + 1.0));
  Complex current;
  bool started = false;
  for (int attempt = 0; attempt < 8 && !started; ++attempt, height *= 8.0) {
    const Complex start(alpha.real(), height);
    const auto roots = solve_cubic(start, z);
    const auto adm = admissible_roots(roots, start);
    if (adm.size() == 1) {
      current = roots[adm.front()];
      started = true;
    }
  }
  if (!started) return false;

  double y = height / 8.0;
  double ratio = 0.8;
  int guard = 0;
  while (y > target && guard++ < 20000) {
    const double next = std::max(target, y * ratio);
    const auto roots = solve_cubic(Complex(alpha.real(), next), z);
    double margin = 0.0;
    const auto k = nearest(roots, current, &margin);
    if (margin < 3.0 && ratio < 0.9999) {
      ratio = std::sqrt(ratio);
      continue;
    }
    current = roots[k];
    y = next;
    ratio = std::min(0.8, ratio * ratio);
  }
  if (y > target) return false;
  *out = current;
  return true;
}

double edge_of(double delta, double w) {
  const double d1 = delta + 1.0;
  return -((1.0 - w) * delta + 1.0) / (delta * d1 * d1);
}

template <class F>
double integrate_support(Complex z, double upper_limit, F&& weight) {
  const auto support = nu_support(z);
  const double hi = std::min(upper_limit, support.upper);
  if (hi <= support.lower) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator(12);
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  if (support.lower == 0.0) {
    // x = y^2 removes the x^{-1/2} singularity of the density at 0.
    auto integrand = [&](double y) {
      const double x = y * y;
      if (!(x > 0.0)) return 0.0;
      return weight(x) * nu_boundary_density(x, z) * 2.0 * y;
    };
    value = integrator.integrate(integrand, 0.0, std::sqrt(hi), 1e-11, &error, &l1);
  } else {
    auto integrand = [&](double x) { return weight(x) * nu_boundary_density(x, z); };
    value = integrator.integrate(integrand, support.lower, hi, 1e-11, &error, &l1);
  }
  if (!(error <= 1e-7) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "nu quadrature at z = " << z << ": error estimate " << error << " exceeds 1e-7";
    fail(ErrorCode::tolerance, os.str());
  }
  return value;
}

}  // namespace

double VietaResiduals::max() const noexcept { return std::max({sum, pairwise, product}); }

VietaResiduals vieta_residuals(const std::array<Complex, 3>& r, Complex alpha, Complex z) {
  const Cubic p(alpha, z);
  const Complex e1 = r[0] + r[1] + r[2];
  const Complex p01 = r[0] * r[1], p02 = r[0] * r[2], p12 = r[1] * r[2];
  const Complex e3 = r[0] * r[1] * r[2];
  VietaResiduals v{};
  v.sum = std::abs(e1 + 2.0) / std::max(2.0, std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]));
  v.pairwise = std::abs(p01 + p02 + p12 - p.b) /
               std::max({std::abs(p.b), std::abs(p01) + std::abs(p02) + std::abs(p12), 1e-300});
  v.product = std::abs(e3 + p.c) / std::max(std::abs(p.c), std::abs(e3));
  return v;
}

std::array<Complex, 3> delta_roots(Complex alpha, Complex z) {
  if (alpha == 0.0) fail(ErrorCode::domain, "delta_roots: alpha must be nonzero");
  const auto roots = solve_cubic(alpha, z);
  const auto v = vieta_residuals(roots, alpha, z);
  if (!(v.max() < kVietaTolerance)) {
    std::ostringstream os;
    os << "delta_roots: Vieta residual " << v.max() << " at alpha = " << alpha << ", z = " << z;
    fail(ErrorCode::tolerance, os.str());
  }
  return roots;
}

double fixed_point_residual(Complex delta, Complex alpha, Complex z) {
  const Complex one_plus = 1.0 + delta;
  if (one_plus == 0.0) return std::numeric_limits<double>::infinity();
  const Complex denom = std::norm(z) / one_plus - one_plus * alpha;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(delta - 1.0 / denom);
}

StieltjesSolution delta_branch(Complex alpha, Complex z) {
  if (alpha == 0.0) fail(ErrorCode::domain, "delta_branch: alpha must be nonzero");
  if (alpha.imag() < 0.0) fail(ErrorCode::domain, "delta_branch: alpha must lie in the closed upper half plane");
  if (alpha.imag() == 0.0) alpha += Complex(0.0, kRealAxisOffset);

  const auto roots = delta_roots(alpha, z);
  StieltjesSolution sol{alpha, z, roots, 0, false, 0.0};

  auto candidates = admissible_roots(roots, alpha);
  if (candidates.empty())
    for (std::size_t k = 0; k < 3; ++k)
      if (roots[k].imag() > 0.0) candidates.push_back(k);
  if (candidates.empty()) {
    std::ostringstream os;
    os << "delta_branch: no root with Im > 0 at alpha = " << alpha << ", z = " << z;
    fail(ErrorCode::branch_failure, os.str());
  }

  std::size_t chosen = candidates.front();
  if (candidates.size() > 1) {
    sol.ambiguous = true;
    Complex tracked;
    double margin = 0.0;
    if (track_branch(alpha, z, &tracked) &&
        std::find(candidates.begin(), candidates.end(), nearest(roots, tracked, &margin)) !=
            candidates.end()) {
      chosen = nearest(roots, tracked, &margin);
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (auto k : candidates) {
        const double r = fixed_point_residual(roots[k], alpha, z);
        if (r < best) {
          best = r;
          chosen = k;
        }
      }
    }
  }

  std::swap(sol.roots[0], sol.roots[chosen]);
  sol.residual = fixed_point_residual(sol.roots[0], alpha, z);
  return sol;
}

SupportInterval nu_support(Complex z) {
  const double w = std::norm(z);
  const double root = std::sqrt(1.0 + 8.0 * w);
  // Critical points of alpha(D) = -((1-w)D + 1) / (D (D+1)^2) solve
  // 2(1-w) D^2 + 3 D + 1 = 0; the root below is the cancellation-free one.
  const double upper = edge_of(-2.0 / (3.0 + root), w);
  double lower = 0.0;
  if (w > 1.0) lower = std::max(0.0, edge_of(-(3.0 + root) / (4.0 * (1.0 - w)), w));
  return {lower, upper};
}

double nu_boundary_density(double x, Complex z) {
  // Subnormal x would overflow the cubic's 1/x coefficient.
  if (!(x >= std::numeric_limits<double>::min())) return 0.0;
  const auto support = nu_support(z);
  if (x < support.lower || x > support.upper) return 0.0;
  const auto roots = solve_cubic(Complex(x, 0.0), z);
  double im = 0.0;
  for (const auto& r : roots) im = std::max(im, std::abs(r.imag()));
  return im / std::numbers::pi;
}

double DensityCurve::trapezoid_mass() const {
  double mass = 0.0;
  for (std::size_t k = 1; k < grid.size(); ++k)
    mass += 0.5 * (values[k] + values[k - 1]) * (grid[k] - grid[k - 1]);
  return mass;
}

DensityCurve nu_density(Complex z, std::span<const double> grid, double delta_im) {
  if (!(delta_im >= 1e-8 && delta_im <= 1e-3))
    fail(ErrorCode::invalid_argument, "nu_density: delta_im must lie in [1e-8, 1e-3]");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(grid[k] >= 0.0)) fail(ErrorCode::invalid_argument, "nu_density: grid points must be nonnegative");
    if (k > 0 && !(grid[k] > grid[k - 1]))
      fail(ErrorCode::invalid_argument, "nu_density: grid must be strictly increasing");
  }
  DensityCurve curve{z, std::vector<double>(grid.begin(), grid.end()), {}};
  curve.values.reserve(grid.size());
  for (double x : grid) {
    const auto sol = delta_branch(Complex(x, delta_im), z);
    curve.values.push_back(std::max(0.0, sol.delta().imag()) / std::numbers::pi);
  }
  return curve;
}

double density_window(Complex z) {
  const double r = 2.0 + std::abs(z);
  return r * r + 1.0;
}

std::vector<double> density_grid(Complex z, std::size_t points) {
  if (points < 2) fail(ErrorCode::invalid_argument, "density_grid: need at least 2 points");
  const double top = density_window(z);
  std::vector<double> grid(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(points - 1);
    grid[j] = top * u * u;
  }
  return grid;
}

double nu_log_moment(Complex z) {
  return integrate_support(z, std::numeric_limits<double>::infinity(),
                           [](double x) { return std::log(x); });
}

double nu_cdf(Complex z, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::clamp(integrate_support(z, x, [](double) { return 1.0; }), 0.0, 1.0);
}

double g_closed(double s, double t) {
  const double r2 = s * s + t * t;
  return r2 > 1.0 ? 2.0 * s / r2 : 2.0 * s;
}

double g_from_nu(double s, double t, double h) {
  if (!(h >= 1e-4 && h <= 1e-2)) fail(ErrorCode::invalid_argument, "g_from_nu: h must lie in [1e-4, 1e-2]");
  return (nu_log_moment(Complex(s + h, t)) - nu_log_moment(Complex(s - h, t))) / (2.0 * h);
}

double circular_charfn(double u, double v) {
  const double rho = std::hypot(u, v);
  if (rho < 1e-6) return 1.0 - rho * rho / 8.0;
  return 2.0 * std::cyl_bessel_j(1.0, rho) / rho;
}

double circular_radial_cdf(double r) {
  if (!(r >= 0.0)) fail(ErrorCode::invalid_argument, "circular_radial_cdf: r must be nonnegative");
  return std::min(r * r, 1.0);
}

std::vector<std::pair<Complex, Complex>> branch_sweep_points(std::size_t count, std::uint64_t seed,
                                                             double im_max, double z_max) {
  std::vector<std::pair<Complex, Complex>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    SubStream stream(seed, k, 0x5157);
    const double re_alpha = -10.0 + 20.0 * stream.uniform();
    const double im_alpha = im_max * (1.0 - stream.uniform());  // (0, im_max]
    const double radius = z_max * std::sqrt(stream.uniform());
    const double angle = 2.0 * std::numbers::pi * stream.uniform();
    out.emplace_back(Complex(re_alpha, im_alpha), std::polar(radius, angle));
  }
  return out;
}

}  // namespace circlaw

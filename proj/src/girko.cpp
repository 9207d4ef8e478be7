#include "circlaw/girko.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <type_traits>

#include "circlaw/error.hpp"
#include "circlaw/parallel.hpp"

namespace circlaw {

namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier-compensated sum in the order given.
template <class T>
T ordered_sum(const std::vector<T>& parts) {
  T sum{};
  T comp{};
  for (const auto& x : parts) {
    const T t = sum + x;
    if constexpr (std::is_same_v<T, double>) {
      comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    } else {
      const double tr = t.real(), ti = t.imag();
      const double cr = std::abs(sum.real()) >= std::abs(x.real()) ? (sum.real() - tr) + x.real()
                                                                   : (x.real() - tr) + sum.real();
      const double ci = std::abs(sum.imag()) >= std::abs(x.imag()) ? (sum.imag() - ti) + x.imag()
                                                                   : (x.imag() - ti) + sum.imag();
      comp += T(cr, ci);
    }
    sum = t;
  }
  return sum + comp;
}

struct GridIntegral {
  Complex integral;
  std::size_t kept = 0;
};

}  // namespace

void RegionSpec::validate() const {
  if (!(A > 2.0)) fail(ErrorCode::invalid_argument, "region: A must exceed 2");
  if (ns < 8 || nt < 8) fail(ErrorCode::invalid_argument, "region: ns and nt must be at least 8");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorCode::invalid_argument, "region: epsilon must lie in (0, 1)");
}

double RegionSpec::cell_s() const noexcept { return 2.0 * A / static_cast<double>(ns); }
double RegionSpec::cell_t() const noexcept { return 2.0 * A * A * A / static_cast<double>(nt); }

RegionSpec RegionSpec::resolving(double u, double v, double A, double epsilon, double max_cell) {
  auto cells = [&](double extent, double freq) {
    double h = max_cell;
    if (freq != 0.0) h = std::min(h, kPi / (4.0 * std::abs(freq)));
    auto count = static_cast<std::size_t>(std::ceil(2.0 * extent / h));
    count = std::max<std::size_t>(count, 8);
    return count + (count % 2);
  };
  RegionSpec r;
  r.A = A;
  r.epsilon = epsilon;
  r.ns = cells(A, u);
  r.nt = cells(A * A * A, v);
  return r;
}

ExclusionSet::ExclusionSet(const ComplexSpectrum& spectrum, double epsilon)
    : epsilon_(epsilon), centers_(spectrum.eigenvalues) {
  std::sort(centers_.begin(), centers_.end(), [](Complex a, Complex b) {
    return a.imag() < b.imag() || (a.imag() == b.imag() && a.real() < b.real());
  });
}

template <class Fn>
bool ExclusionSet::any_candidate(double t0, double t1, Fn&& fn) const {
  const double half = 0.5 * epsilon_;
  auto first = std::lower_bound(centers_.begin(), centers_.end(), t0 - half,
                                [](Complex c, double v) { return c.imag() < v; });
  for (auto it = first; it != centers_.end() && it->imag() <= t1 + half; ++it)
    if (fn(*it)) return true;
  return false;
}

bool ExclusionSet::contains(double s, double t) const {
  return any_candidate(t, t, [&](Complex c) {
    return std::abs(t - c.imag()) <= 0.5 * epsilon_ && std::abs(Complex(s, t) - c) <= epsilon_;
  });
}

bool ExclusionSet::touches(double s0, double s1, double t0, double t1) const {
  const double half = 0.5 * epsilon_;
  return any_candidate(t0, t1, [&](Complex c) {
    // Drum ∩ cell = disc ∩ (cell clipped to the drum's strip); the disc meets
    // that rectangle iff its nearest point lies within epsilon.
    const double lo = std::max(t0, c.imag() - half);
    const double hi = std::min(t1, c.imag() + half);
    if (lo > hi) return false;
    const double dt = std::clamp(c.imag(), lo, hi) - c.imag();
    const double ds = std::clamp(c.real(), s0, s1) - c.real();
    return ds * ds + dt * dt <= epsilon_ * epsilon_;
  });
}

double g_n_sum(const ComplexSpectrum& spectrum, double s, double t) {
  if (spectrum.eigenvalues.empty()) return 0.0;
  double sum = 0.0;
  for (const auto l : spectrum.eigenvalues) {
    const double ds = s - l.real();
    const double dt = t - l.imag();
    const double d2 = ds * ds + dt * dt;
    if (d2 == 0.0) {
      std::ostringstream os;
      os << "g_n_sum: (s, t) = (" << s << ", " << t << ") is an eigenvalue";
      fail(ErrorCode::singularity, os.str());
    }
    sum += ds / d2;
  }
  return 2.0 * sum / static_cast<double>(spectrum.size());
}

Membership region_membership(const RegionSpec& region, const ComplexSpectrum& spectrum, double s,
                             double t) {
  if (std::abs(s) > region.A || std::abs(t) > region.A * region.A * region.A) return Membership::outside;
  return ExclusionSet(spectrum, region.epsilon).contains(s, t) ? Membership::excluded : Membership::inside;
}

Complex charfn_direct(const ComplexSpectrum& spectrum, double u, double v) {
  if (spectrum.eigenvalues.empty()) return 1.0;
  Complex sum = 0.0;
  for (const auto l : spectrum.eigenvalues) sum += std::polar(1.0, u * l.real() + v * l.imag());
  return sum / static_cast<double>(spectrum.size());
}

TailBounds tail_bounds(const ComplexSpectrum& spectrum, double u, double v, double A) {
  (void)u;
  if (!(A > 2.0)) fail(ErrorCode::invalid_argument, "tail_bounds: A must exceed 2");
  if (v == 0.0) fail(ErrorCode::domain, "tail_bounds: v must be nonzero");
  const double av = std::abs(v);
  std::size_t beyond_half = 0;
  std::size_t beyond = 0;
  for (const auto l : spectrum.eigenvalues) {
    const double m = std::abs(l);
    if (m >= 0.5 * A) ++beyond_half;
    if (m >= A) ++beyond;
  }
  const double n = std::max<double>(1.0, static_cast<double>(spectrum.size()));
  TailBounds b{};
  b.bound_s = 4.0 * kPi / av * std::exp(-0.5 * av * A) +
              2.0 * kPi / (n * av) * static_cast<double>(beyond_half);
  b.bound_t = 8.0 * A / (A * A - 1.0) + 4.0 * kPi * A / n * static_cast<double>(beyond);
  return b;
}

namespace {

GridIntegral integrate_grid(const ComplexSpectrum& spectrum, double u, double v, double A,
                            std::size_t ns, std::size_t nt, const ExclusionSet& excl, unsigned threads) {
  const double tmax = A * A * A;
  const double hs = 2.0 * A / static_cast<double>(ns);
  const double ht = 2.0 * tmax / static_cast<double>(nt);
  std::vector<Complex> rows(nt);
  std::vector<std::size_t> kept(nt, 0);

  parallel_for(nt, threads, [&](std::size_t j) {
    const double t0 = -tmax + static_cast<double>(j) * ht;
    const double t1 = t0 + ht;
    const double t = 0.5 * (t0 + t1);
    const Complex phase_t = std::polar(1.0, v * t);
    Complex row = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
      const double s0 = -A + static_cast<double>(i) * hs;
      const double s1 = s0 + hs;
      if (excl.touches(s0, s1, t0, t1)) continue;
      const double s = 0.5 * (s0 + s1);
      row += g_n_sum(spectrum, s, t) * std::polar(1.0, u * s);
      ++kept[j];
    }
    rows[j] = row * phase_t * (hs * ht);
  });

  GridIntegral out{ordered_sum(rows), 0};
  for (auto k : kept) out.kept += k;
  return out;
}

}  // namespace

GirkoEstimate charfn_girko(const ComplexSpectrum& spectrum, double u, double v,
                           const RegionSpec& region, unsigned threads) {
  region.validate();
  if (u * v == 0.0) fail(ErrorCode::domain, "charfn_girko: requires u * v != 0");
  if (region.cell_s() > kPi / (4.0 * std::abs(u)) || region.cell_t() > kPi / (4.0 * std::abs(v))) {
    std::ostringstream os;
    os << "charfn_girko: grid " << region.ns << " x " << region.nt
       << " has fewer than 8 cells per period of e^{i(us+vt)} at (u, v) = (" << u << ", " << v << ")";
    fail(ErrorCode::resolution, os.str());
  }

  const ExclusionSet excl(spectrum, region.epsilon);
  const auto fine = integrate_grid(spectrum, u, v, region.A, region.ns, region.nt, excl, threads);
  const auto coarse = integrate_grid(spectrum, u, v, region.A, std::max<std::size_t>(region.ns / 2, 1),
                                     std::max<std::size_t>(region.nt / 2, 1), excl, threads);

  GirkoEstimate est;
  est.prefactor = (u * u + v * v) / (4.0 * std::abs(u) * kPi);
  const Complex factor = (u * u + v * v) / (Complex(0.0, 4.0 * u) * kPi);
  est.value = factor * fine.integral;
  est.quadrature_error = est.prefactor * std::abs(fine.integral - coarse.integral);
  est.tails = tail_bounds(spectrum, u, v, region.A);
  est.singularity_bound = 8.0 * region.epsilon;
  est.error_budget =
      est.prefactor * (est.tails.bound_s + est.tails.bound_t + est.singularity_bound) + est.quadrature_error;
  est.kept_fraction = static_cast<double>(fine.kept) / static_cast<double>(region.ns * region.nt);
  return est;
}

double small_singularity_integral(const ComplexSpectrum& spectrum, const RegionSpec& region, double eps,
                                  std::size_t radial, std::size_t angular) {
  if (!(eps > 0.0)) fail(ErrorCode::invalid_argument, "small_singularity_integral: eps must be positive");
  if (radial == 0 || angular == 0)
    fail(ErrorCode::invalid_argument, "small_singularity_integral: empty polar grid");
  const auto& lam = spectrum.eigenvalues;
  const std::size_t n = lam.size();
  if (n == 0) return 0.0;
  const double tmax = region.A * region.A * region.A;
  const double dr = eps / static_cast<double>(radial);
  const double dtheta = 2.0 * kPi / static_cast<double>(angular);
  const double scale = 2.0 / static_cast<double>(n);

  std::vector<double> per_disc(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> near;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k && std::abs(lam[j] - lam[k]) <= 2.0 * eps) near.push_back(j);

    double acc = 0.0;
    for (std::size_t ir = 0; ir < radial; ++ir) {
      const double r = (static_cast<double>(ir) + 0.5) * dr;
      for (std::size_t ia = 0; ia < angular; ++ia) {
        const double theta = (static_cast<double>(ia) + 0.5) * dtheta;
        const Complex z = lam[k] + std::polar(r, theta);
        if (std::abs(z.real()) > region.A || std::abs(z.imag()) > tmax) continue;
        // Each point is integrated once, from the disc of its nearest
        // eigenvalue (lowest index on ties).
        bool owned = true;
        double f = (z.real() - lam[k].real()) / (r * r);
        for (auto j : near) {
          const double d = std::abs(z - lam[j]);
          if (d < r || (d == r && j < k)) {
            owned = false;
            break;
          }
          if (d <= eps) f += (z.real() - lam[j].real()) / (d * d);
        }
        if (owned) acc += std::abs(scale * f) * r;
      }
    }
    per_disc[k] = acc * dr * dtheta;
  }
  return ordered_sum(per_disc);
}

}  // namespace circlaw

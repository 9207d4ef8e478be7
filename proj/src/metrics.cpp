#include "circlaw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "circlaw/girko.hpp"
#include "circlaw/limitlaw.hpp"

namespace circlaw {

KSResult ks_1d(const EmpiricalMeasure1D& sample, const std::function<double(double)>& cdf) {
  KSResult r;
  const auto atoms = sample.atoms();
  r.n = atoms.size();
  const auto n = static_cast<double>(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double f = cdf(atoms[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    const double d = std::max(above, below);
    if (d > r.statistic) {
      r.statistic = d;
      r.location = atoms[i];
    }
  }
  r.statistic = std::clamp(r.statistic, 0.0, 1.0);
  return r;
}

KSResult radial_ks(const ComplexSpectrum& spectrum) {
  std::vector<double> radii;
  radii.reserve(spectrum.size());
  for (auto l : spectrum.eigenvalues) radii.push_back(std::abs(l));
  return ks_1d(EmpiricalMeasure1D(std::move(radii)), circular_radial_cdf);
}

KSResult angular_ks(const ComplexSpectrum& spectrum) {
  constexpr double kPi = std::numbers::pi;
  std::vector<double> angles;
  angles.reserve(spectrum.size());
  for (auto l : spectrum.eigenvalues) {
    if (std::abs(l) <= 1e-8) continue;
    double theta = std::arg(l);  // [-pi, pi]
    if (theta == -kPi) theta = kPi;
    angles.push_back(theta);
  }
  return ks_1d(EmpiricalMeasure1D(std::move(angles)),
               [](double theta) { return std::clamp((theta + kPi) / (2.0 * kPi), 0.0, 1.0); });
}

FrequencyGrid integer_grid(int lo, int hi) {
  FrequencyGrid grid;
  for (int u = lo; u <= hi; ++u)
    for (int v = lo; v <= hi; ++v) grid.emplace_back(u, v);
  return grid;
}

double charfn_discrepancy(const ComplexSpectrum& spectrum, const FrequencyGrid& grid) {
  double worst = 0.0;
  for (const auto& [u, v] : grid)
    worst = std::max(worst, std::abs(charfn_direct(spectrum, u, v) - circular_charfn(u, v)));
  return worst;
}

}  // namespace circlaw

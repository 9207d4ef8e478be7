#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "circlaw/spectra.hpp"

namespace circlaw {

struct KSResult {
  double statistic = 0.0;  // in [0, 1]
  std::size_t n = 0;
  double location = 0.0;   // sample point where the supremum is attained
};

/// sup |F_n - F| over the sample points, checking both sides of each step.
KSResult ks_1d(const EmpiricalMeasure1D& sample, const std::function<double(double)>& cdf);

/// Moduli |l_k| against min(r^2, 1).
KSResult radial_ks(const ComplexSpectrum& spectrum);

/// Arguments in (-pi, pi] against the uniform law; eigenvalues with
/// |l| <= 1e-8 have no direction and are skipped.
KSResult angular_ks(const ComplexSpectrum& spectrum);

using FrequencyGrid = std::vector<std::pair<double, double>>;

/// All integer (u, v) with lo <= u, v <= hi.
FrequencyGrid integer_grid(int lo, int hi);

/// max over the grid of |charfn_direct - circular_charfn|.
double charfn_discrepancy(const ComplexSpectrum& spectrum, const FrequencyGrid& grid);

}  // namespace circlaw

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "circlaw/ensemble.hpp"

namespace circlaw {

/// Eigenvalues of A = X / sqrt(n) for one realization.
struct ComplexSpectrum {
  std::vector<Complex> eigenvalues;
  /// tr(A A^*) = (1/n) sum |x_ij|^2. Bounds sum |lambda_k|^2 (Schur).
  double trace_aa_star = 0.0;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Sorted nonnegative eigenvalues of H(z) = (A - zI)(A - zI)^*.
struct HermitizedSpectrum {
  Complex z;
  std::vector<double> eigenvalues;
};

/// Step measure with mass 1/n at each atom.
class EmpiricalMeasure1D {
 public:
  explicit EmpiricalMeasure1D(std::vector<double> atoms);

  /// Right-continuous CDF: fraction of atoms <= x.
  double cdf(double x) const;
  std::span<const double> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }

 private:
  std::vector<double> atoms_;
};

class EmpiricalMeasure2D {
 public:
  explicit EmpiricalMeasure2D(std::vector<Complex> points);

  /// Fraction of points with Re <= x and Im <= y.
  double cdf(double x, double y) const;
  /// Fraction of points with |p| <= r.
  double fraction_within(double r) const;
  std::span<const Complex> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  std::vector<Complex> points_;
};

/// Throws eigensolver on non-convergence, invariant_violation if the trace
/// or Schur checks fail beyond 1e-8 * n.
ComplexSpectrum complex_eigenvalues(const Matrix& x);

/// Self-adjoint solve of the explicitly symmetrized H(z). Eigenvalues in
/// [-1e-10 ||H||, 0) are clamped to 0; anything more negative is an error.
HermitizedSpectrum hermitized_eigenvalues(const Matrix& x, Complex z);

/// Squared singular values of A - zI, ascending. Independent cross-check for
/// hermitized_eigenvalues.
std::vector<double> squared_singular_values(const Matrix& x, Complex z);

EmpiricalMeasure1D esd_nu(const HermitizedSpectrum& h);
EmpiricalMeasure2D esd_mu(const ComplexSpectrum& c);

struct TailFraction {
  double fraction;  // (1/n) #{k : |lambda_k| >= A}
  double bound;     // tr(A A^*) / (n A^2)
};

/// Throws invariant_violation if fraction > bound + 1e-8.
TailFraction tail_fraction(const ComplexSpectrum& c, double radius);

/// Largest elementwise gap after sorting both sides; infinity on size mismatch.
double max_sorted_gap(std::vector<double> a, std::vector<double> b);

/// Greedy nearest-neighbour matching of two complex multisets; returns the
/// worst matched distance (infinity on size mismatch).
double max_matched_distance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace circlaw

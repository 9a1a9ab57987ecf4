#pragma once

#include <complex>
#include <span>
#include <vector>

namespace levysmile {

/// Divided differences of s ↦ e^{ts} on a node sequence z_0, z_1, ...
///
/// The leading differences f[z_0], f[z_0,z_1], ..., f[z_0..z_n] are read off
/// the first column of exp(tZ), where Z is lower bidiagonal with the nodes on
/// the diagonal and ones below it. The exponential is taken by
/// scaling-and-squaring a Taylor series after shifting by the node mean, so
/// coincident and nearly coincident nodes need no special casing: the
/// confluent limit t^n e^{tz}/n! comes out of the same computation.
///
/// Keeps its work buffers between calls; one instance per thread.
class ExpDividedDifferences {
 public:
  /// Writes f[z_0..z_j] into out[j] for j = 0..nodes.size()-1.
  void leading(double t, std::span<const std::complex<double>> nodes,
               std::span<std::complex<double>> out);

 private:
  std::vector<std::complex<double>> a_, term_, sum_, tmp_;
};

/// All leading divided differences of e^{ts}; see ExpDividedDifferences.
std::vector<std::complex<double>> exp_divided_differences(
    double t, std::span<const std::complex<double>> nodes);

/// f[z_0..z_n] for f(s) = e^{ts}; nodes must be nonempty.
std::complex<double> divided_diff_exp(double t, std::span<const std::complex<double>> nodes);

}  // namespace levysmile

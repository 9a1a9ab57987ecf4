#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace levysmile {

enum class QuadratureRule { GaussLegendrePanels, Simpson };

/// How the real part of the Fourier variable is integrated along the
/// contour λ = λ_r + i·contour_imag.
///
/// With n_nodes = 0 the integral is built from 32-point Gauss–Legendre
/// panels marched outward from λ_r = 0 until the outermost pair of panels
/// carries less than tol of the accumulated integral. The nominal half-width
/// (half_width, or a caller-supplied default when half_width = 0) is where
/// marching normally ends; it extends up to 16× further if the integrand is
/// still significant there. With n_nodes > 0 the grid over [−L, L] is fixed
/// and the outermost panel is checked against tail_tol instead.
struct QuadratureSpec {
  double contour_imag = -1.5;
  double half_width = 0.0;
  int n_nodes = 0;
  QuadratureRule rule = QuadratureRule::GaussLegendrePanels;
  double tol = 1e-12;
  double tail_tol = 1e-8;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

/// Result of integrating a vector-valued integrand over λ_r.
struct LineIntegral {
  std::vector<std::complex<double>> values;
  /// ∫|f| per output; the scale against which cancellation is judged.
  std::vector<double> abs_mass;
  double half_width = 0.0;
  std::size_t evaluations = 0;
  bool tail_resolved = true;
};

/// Integrand callback: fill out[0..n_out) with f(λ_r).
using LineIntegrand = std::function<void(double, std::span<std::complex<double>>)>;

/// Integrand properties that shape the automatic panel layout.
struct LineHints {
  /// Stands in for spec.half_width == 0.
  double half_width = 50.0;
  /// Bound on the oscillation rate in λ_r.
  double frequency = 1.0;
  /// Distance from λ_r = 0 on the contour to the nearest singularity of the
  /// integrand; panels near the origin shrink accordingly.
  double pole_distance = std::numeric_limits<double>::infinity();
};

/// Integrates f over the real line per `spec`.
LineIntegral integrate_line(const QuadratureSpec& spec, const LineHints& hints,
                            std::size_t n_out, const LineIntegrand& f);

/// Nodes and weights of the n-point Gauss–Legendre rule on [lo, hi].
void gauss_legendre(std::size_t n, double lo, double hi, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace levysmile

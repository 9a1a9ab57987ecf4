#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace levysmile {

struct NelderMeadOptions {
  int max_evaluations = 2000;
  /// Stop when the simplex values agree to f_tol and its vertices to x_tol
  /// (in box-normalized coordinates).
  double f_tol = 1e-14;
  double x_tol = 1e-7;
  /// Stop as soon as the best value drops to this level.
  double f_target = -std::numeric_limits<double>::infinity();
  /// Initial edge length as a fraction of each box side.
  double initial_step = 0.1;
  /// Fresh simplices built around the best point after convergence.
  int restarts = 1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free minimization inside the box [lower, upper]. Trial points
/// are projected onto the box before evaluation.
NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0,
                             std::span<const double> lower, std::span<const double> upper,
                             const NelderMeadOptions& options = {});

}  // namespace levysmile

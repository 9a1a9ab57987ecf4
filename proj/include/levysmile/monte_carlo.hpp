#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "levysmile/model.hpp"
#include "levysmile/series_pricer.hpp"

namespace levysmile {

struct McConfig {
  std::size_t n_paths = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 42;
  /// Paths reaching this log-price are absorbed and treated as defaulted.
  double y_floor = -10.0;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned n_threads = 0;

  void validate(double t) const;
};

struct PathOutcome {
  double y = 0.0;
  bool defaulted = false;
  bool absorbed = false;
};

struct McEstimate {
  double price = 0.0;
  double std_error = 0.0;
  std::size_t n_defaulted = 0;
  std::size_t n_absorbed = 0;
  std::size_t n_paths = 0;

  [[nodiscard]] double default_fraction() const {
    return n_paths == 0 ? 0.0 : static_cast<double>(n_defaulted) / static_cast<double>(n_paths);
  }
};

/// Euler scheme for the log-price with state-dependent Gaussian jumps and
/// hazard-rate default. Coefficients are frozen at the left end of each step;
/// default happens when ∫k(Y)ds exceeds an Exp(1) draw. Path i always uses
/// the same random stream, so results do not depend on the thread count.
std::vector<PathOutcome> simulate_terminal(const ModelParams& params, double t, double y,
                                           const McConfig& cfg);

using PathPayoff = std::function<double(const PathOutcome&)>;

/// Sample means and standard errors of several path functionals at once.
std::vector<McEstimate> mc_expectations(const ModelParams& params, double t, double y,
                                        std::span<const PathPayoff> payoffs, const McConfig& cfg);

/// Option value; defaulted paths pay (0 − e^k)^+ for calls, e^k for puts.
McEstimate mc_price(const ModelParams& params, const OptionSpec& opt, const McConfig& cfg);

std::vector<McEstimate> mc_price(const ModelParams& params, double t, double y,
                                 std::span<const double> strikes, OptionKind kind,
                                 const McConfig& cfg);

}  // namespace levysmile

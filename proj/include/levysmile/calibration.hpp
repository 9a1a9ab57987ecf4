#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "levysmile/model.hpp"
#include "levysmile/nelder_mead.hpp"
#include "levysmile/quadrature.hpp"

namespace levysmile {

struct VolQuote {
  int maturity_days = 0;
  double log_moneyness = 0.0;
  double implied_vol = 0.0;
};

/// Observed smile quotes; log-moneyness is k − y with y = 0.
struct VolSurface {
  std::vector<VolQuote> quotes;

  /// Distinct maturities in ascending order.
  [[nodiscard]] std::vector<int> maturities() const;
  /// Throws std::invalid_argument on nonpositive values, duplicates or an empty surface.
  void validate() const;
};

/// CSV with header `maturity_days,log_moneyness,implied_vol`. Errors name the
/// offending line.
VolSurface parse_surface(std::istream& in);
VolSurface load_surface(const std::filesystem::path& path);

struct QuoteFit {
  VolQuote quote;
  double model_vol = 0.0;
  /// implied_vol − model_vol, or 1.0 when the model price has no implied vol.
  double residual = 0.0;
  bool failed = false;
  std::string failure;
};

struct FitReport {
  double sse = 0.0;
  double rmse = 0.0;
  std::vector<QuoteFit> fits;
  std::size_t n_failed = 0;
};

/// Prices every quote with the order-N series (one Fourier pass per
/// maturity), inverts to implied vols and collects residuals. Maturities
/// are maturity_days / day_count years.
FitReport evaluate_fit(const ModelParams& params, const VolSurface& surface, int order,
                       const QuadratureSpec& quad = {}, double day_count = 365.0);

/// Σ (IV_obs − IV_model)², with a unit penalty for each failed quote.
double objective(const ModelParams& params, const VolSurface& surface, int order,
                 const QuadratureSpec& quad = {}, double day_count = 365.0);

struct FreeParameter {
  /// A model configuration key, or `m` / `s` for the shared jump law.
  std::string name;
  double initial = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct CalibrationSpec {
  /// Values of everything not listed in `free`.
  ModelParams base;
  std::vector<FreeParameter> free;
  /// Both jump measures use the same (m, s); only their intensities differ.
  bool shared_jumps = true;
  int order = 6;
  QuadratureSpec quad;
  NelderMeadOptions optimizer;
  double day_count = 365.0;

  void validate() const;
  /// base with the given free-parameter values written in.
  [[nodiscard]] ModelParams apply(std::span<const double> values) const;
};

struct CalibrationResult {
  ModelParams params;
  double sse = 0.0;
  double rmse = 0.0;
  std::vector<QuoteFit> fits;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

/// Fits all maturities at once by Nelder-Mead over the free parameters.
/// Running out of evaluations returns the best point with converged = false.
CalibrationResult calibrate(const VolSurface& surface, const CalibrationSpec& spec);

}  // namespace levysmile

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "levysmile/model.hpp"
#include "levysmile/polynomial.hpp"
#include "levysmile/quadrature.hpp"
#include "levysmile/series_pricer.hpp"

namespace levysmile {

/// Implied-volatility expansion σ^ε = a0 + Σ ε^k σ_k.
struct IVSeries {
  double sigma0 = 0.0;
  /// σ_1..σ_n; coefficients[0] is σ_1.
  std::vector<double> coefficients;
  /// σ^(0), ..., σ^(n).
  std::vector<double> partial_sums;
  /// Set when |ε^n σ_n| is non-decreasing over the last three orders.
  bool divergence_flag = false;
};

/// σ_k from the price terms u_k and the σ-derivatives of the Black-Scholes
/// price at a0:
///   σ_k = [u_k − Σ_{n=2}^k (1/n!) [ε^k](Σ_j σ_j ε^j)ⁿ ∂_σⁿu^BS] / ∂_σu^BS.
/// `u` holds u_1..u_n (unscaled by ε), `dsigma` holds ∂_σⁿu^BS for n = 0..n.
IVSeries sigma_series_from_terms(double a0, double eps, std::span<const double> u,
                                 std::span<const double> dsigma);

/// Needs nu0 absent and c0 = 0 so that the order-zero price is Black-Scholes at a0.
IVSeries sigma_series(const ModelParams& params, const OptionSpec& opt, int n_max,
                      const QuadratureSpec& quad = {});

std::vector<IVSeries> sigma_series(const ModelParams& params, double t, double y,
                                   std::span<const double> strikes, OptionKind kind, int n_max,
                                   const QuadratureSpec& quad = {});

/// Operator symbol χ(∂) for the closed-form path. Without q the model must be
/// a pure diffusion and χ(∂) = (a1²/2)(∂² − ∂); with q the local jump part is
/// replaced by its moment expansion Σ_{n=2}^q (I_n/n!)(∂ⁿ − ∂).
Polynomial chi_operator(const ModelParams& params, std::optional<int> q);

/// Operator polynomial in ∂ approximating u_order (order 1 or 2) after M time
/// terms; u_order = e^{order·βy} R(∂) u_0 with R returned here.
///   R_1 = Σ_{n=1}^M tⁿ/n! Δ1^{n−1} χ(∂)
///   R_2 = Σ_{n=2}^M tⁿ/n! h_{n−2}(Δ1, Δ2) χ(∂+β) χ(∂)
/// with Δj = φ(∂+jβ) − φ(∂) and h_m the complete homogeneous polynomial.
Polynomial operator_coeffs(const ModelParams& params, double t, int order, int M,
                           std::optional<int> q = std::nullopt);

/// ∂ⁿ g / g for g(y) = exp(y − d₊(y)²/2), d₊ = (y − k + a0²t/2)/(a0√t).
double hermite_ratio(int n, double t, double y, double k, double a0);

/// The same ratio as a polynomial in y, from P_{n+1} = P_n′ + P_n (1 − d₊/(a0√t)).
Polynomial hermite_ratio_polynomial(int n, double t, double k, double a0);

struct ClosedFormIV {
  double sigma = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

/// σ^(2,M) = a0 + ε σ_1^(M) + ε² σ_2^(M) for a call. No numerical integration.
ClosedFormIV sigma_closed_form_terms(const ModelParams& params, const OptionSpec& opt, int M,
                                     std::optional<int> q = std::nullopt);

double sigma_closed_form(const ModelParams& params, const OptionSpec& opt, int M,
                         std::optional<int> q = std::nullopt);

}  // namespace levysmile

#pragma once

#include <vector>

#include "levysmile/quadrature.hpp"
#include "levysmile/series_pricer.hpp"

namespace levysmile {

/// Zero-rate Black-Scholes inputs on spot e^y and strike e^k.
struct BSInputs {
  double sigma = 0.2;
  double t = 1.0;
  double y = 0.0;
  double k = 0.0;
  OptionKind kind = OptionKind::Call;

  void validate() const;
};

double bs_price(const BSInputs& in);

/// ∂u/∂σ = e^y √t n(d₊).
double bs_vega(const BSInputs& in);

/// Same price from the contour integral of e^{tφ^BS_λ}; a cross-check path.
double bs_price_fourier(const BSInputs& in, const QuadratureSpec& quad = {});

/// ∂_σⁿ u^BS for n = 0..n_max from one contour integral: the integrand factor
/// ∂_σⁿ e^{tφ^BS} = P_n e^{tφ^BS} with P_{n+1} = 2cσ P_n + 2cn P_{n−1},
/// c = −t(λ² + iλ)/2. Entry 0 is the price itself.
std::vector<double> bs_sigma_derivatives(const BSInputs& in, int n_max,
                                         const QuadratureSpec& quad = {});

double bs_sigma_derivative(const BSInputs& in, int n, const QuadratureSpec& quad = {});

/// Black-Scholes volatility reproducing `price`. Bisection down to a 1e-4
/// bracket, then Newton safeguarded by the bracket.
/// Throws NoArbitrageError outside the no-arbitrage band and when the price
/// sits within 1e-14·e^y of either bound.
double implied_vol(double price, double t, double y, double k, OptionKind kind);

}  // namespace levysmile

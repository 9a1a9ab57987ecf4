#include "levysmile/black_scholes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "levysmile/errors.hpp"

namespace levysmile {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Out-of-the-money leg only, so the value never comes from a difference of
// two numbers near e^y. sigma = 0 gives zero time value.
double time_value(double sigma, double t, double y, double k) {
  if (sigma <= 0.0) return 0.0;
  const double sd = sigma * std::sqrt(t);
  const double d_plus = (y - k) / sd + 0.5 * sd;
  const double d_minus = d_plus - sd;
  if (y <= k) return std::exp(y) * norm_cdf(d_plus) - std::exp(k) * norm_cdf(d_minus);
  return std::exp(k) * norm_cdf(-d_minus) - std::exp(y) * norm_cdf(-d_plus);
}

double intrinsic(double y, double k, OptionKind kind) {
  const double diff = std::exp(y) - std::exp(k);
  return kind == OptionKind::Call ? std::max(diff, 0.0) : std::max(-diff, 0.0);
}

double price_at(double sigma, double t, double y, double k, OptionKind kind) {
  return intrinsic(y, k, kind) + time_value(sigma, t, y, k);
}

}  // namespace

void BSInputs::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
  OptionSpec{t, y, k, kind}.validate();
}

double bs_price(const BSInputs& in) {
  in.validate();
  return price_at(in.sigma, in.t, in.y, in.k, in.kind);
}

double bs_vega(const BSInputs& in) {
  in.validate();
  const double sd = in.sigma * std::sqrt(in.t);
  const double d_plus = (in.y - in.k) / sd + 0.5 * sd;
  return std::exp(in.y - 0.5 * d_plus * d_plus) * std::sqrt(in.t / kTwoPi);
}

std::vector<double> bs_sigma_derivatives(const BSInputs& in, int n_max, const QuadratureSpec& quad) {
  in.validate();
  if (n_max < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (!(quad.contour_imag < -1.0)) throw std::invalid_argument("contour_imag must be < -1");

  const std::size_t width = static_cast<std::size_t>(n_max) + 1;
  const cplx i{0.0, 1.0};
  std::vector<cplx> p(width);
  const auto integrand = [&](double lr, std::span<cplx> out) {
    const cplx lambda{lr, quad.contour_imag};
    const cplx c = -0.5 * in.t * (lambda * lambda + i * lambda);
    const cplx base = -std::exp(in.k + i * lambda * (in.y - in.k)) /
                      (kTwoPi * (i * lambda + lambda * lambda)) *
                      std::exp(c * in.sigma * in.sigma);
    p[0] = 1.0;
    if (width > 1) p[1] = 2.0 * c * in.sigma;
    for (std::size_t n = 1; n + 1 < width; ++n) {
      p[n + 1] = 2.0 * c * in.sigma * p[n] + 2.0 * c * static_cast<double>(n) * p[n - 1];
    }
    for (std::size_t n = 0; n < width; ++n) out[n] = base * p[n];
  };
  LineHints hints;
  hints.half_width =
      std::max(50.0, std::sqrt(2.0 * std::log(1.0 / quad.tol) / (in.t * in.sigma * in.sigma)));
  hints.frequency = std::abs(in.k - in.y) + 1.0;
  hints.pole_distance = std::min(std::abs(quad.contour_imag), std::abs(quad.contour_imag + 1.0));
  const auto li = integrate_line(quad, hints, width, integrand);
  if (!li.tail_resolved) throw NumericalError("Black-Scholes Fourier integrand tail unresolved");

  std::vector<double> out(width);
  for (std::size_t n = 0; n < width; ++n) out[n] = li.values[n].real();
  // the parity shift is σ-independent
  if (in.kind == OptionKind::Put) out[0] -= std::exp(in.y) - std::exp(in.k);
  return out;
}

double bs_sigma_derivative(const BSInputs& in, int n, const QuadratureSpec& quad) {
  if (n < 1) throw std::invalid_argument("derivative order must be >= 1");
  return bs_sigma_derivatives(in, n, quad)[static_cast<std::size_t>(n)];
}

double bs_price_fourier(const BSInputs& in, const QuadratureSpec& quad) {
  return bs_sigma_derivatives(in, 0, quad).front();
}

double implied_vol(double price, double t, double y, double k, OptionKind kind) {
  OptionSpec{t, y, k, kind}.validate();
  if (!std::isfinite(price)) throw std::invalid_argument("price must be finite");
  const double lower = intrinsic(y, k, kind);
  const double upper = kind == OptionKind::Call ? std::exp(y) : std::exp(k);
  if (!(price > lower && price < upper)) {
    throw NoArbitrageError("price " + std::to_string(price) + " outside the no-arbitrage band (" +
                           std::to_string(lower) + ", " + std::to_string(upper) + ")");
  }
  const double guard = 1e-14 * std::exp(y);
  if (price - lower < guard || upper - price < guard) {
    throw NoArbitrageError("price within 1e-14 of a no-arbitrage bound; implied vol undetermined");
  }

  const double target = price - lower;
  const auto excess = [&](double s) { return time_value(s, t, y, k) - target; };

  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; excess(hi) < 0.0; ++i) {
    if (i > 60) throw NumericalError("implied vol bracket search failed");
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }

  double sigma = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = excess(sigma);
    if (f == 0.0) return sigma;
    (f < 0.0 ? lo : hi) = sigma;
    const double vega = bs_vega({sigma, t, y, k, kind});
    double next = vega > 0.0 ? sigma - f / vega : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - sigma);
    sigma = next;
    if (step <= 1e-15 * sigma || hi - lo <= 1e-16 * hi) return sigma;
  }
  if (std::abs(excess(sigma)) <= 1e-12 * std::exp(y)) return sigma;
  throw NumericalError("implied vol iteration did not converge");
}

}  // namespace levysmile

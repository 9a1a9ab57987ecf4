#include "levysmile/iv_expansion.hpp"

#include <cmath>
#include <stdexcept>

#include "levysmile/black_scholes.hpp"

namespace levysmile {

namespace {

void require_base_black_scholes(const ModelParams& p) {
  if (!p.nu0.absent() || p.c0 != 0.0) {
    throw std::invalid_argument(
        "implied-vol expansion needs nu0 absent and c0 = 0 (order-zero price must be Black-Scholes)");
  }
  p.require_diffusion();
}

// (a²/2)(x² − x)
Polynomial diffusion_symbol(double a) { return Polynomial{0.0, -0.5 * a * a, 0.5 * a * a}; }

}  // namespace

IVSeries sigma_series_from_terms(double a0, double eps, std::span<const double> u,
                                 std::span<const double> dsigma) {
  const std::size_t n_max = u.size();
  if (dsigma.size() < n_max + 1) throw std::invalid_argument("need dsigma up to order n");
  if (!(dsigma.size() > 1 && dsigma[1] > 0.0)) throw std::domain_error("vega must be positive");

  IVSeries out;
  out.sigma0 = a0;
  // s[j] = σ_j with s[0] = 0 so that Σ s_j ε^j has no constant term
  std::vector<double> s(n_max + 1, 0.0);
  std::vector<double> power(n_max + 1);
  std::vector<double> next(n_max + 1);
  for (std::size_t k = 1; k <= n_max; ++k) {
    double acc = u[k - 1];
    // power = (Σ s_j ε^j)^n truncated at ε^k; s_k is still 0 here
    power.assign(s.begin(), s.end());
    double factorial = 1.0;
    for (std::size_t n = 2; n <= k; ++n) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 1; i <= k; ++i) {
        for (std::size_t j = 1; i + j <= k; ++j) next[i + j] += power[i] * s[j];
      }
      power.swap(next);
      factorial *= static_cast<double>(n);
      acc -= power[k] * dsigma[n] / factorial;
    }
    s[k] = acc / dsigma[1];
  }

  out.coefficients.assign(s.begin() + 1, s.end());
  out.partial_sums.resize(n_max + 1);
  out.partial_sums[0] = a0;
  double scale = 1.0;
  std::vector<double> magnitude(n_max + 1, 0.0);
  for (std::size_t k = 1; k <= n_max; ++k) {
    scale *= eps;
    magnitude[k] = std::abs(scale * s[k]);
    out.partial_sums[k] = out.partial_sums[k - 1] + scale * s[k];
  }
  if (n_max >= 3) {
    const double a = magnitude[n_max - 2];
    const double b = magnitude[n_max - 1];
    const double c = magnitude[n_max];
    out.divergence_flag = c > 0.0 && a <= b && b <= c;
  }
  return out;
}

std::vector<IVSeries> sigma_series(const ModelParams& params, double t, double y,
                                   std::span<const double> strikes, OptionKind kind, int n_max,
                                   const QuadratureSpec& quad) {
  params.validate();
  require_base_black_scholes(params);
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");

  // u_k does not depend on ε, so price them at ε = 1. With ε = 0 the
  // perturbation is switched off and every u_k is zero.
  ModelParams unit = params;
  unit.eps = 1.0;
  const auto prices = params.eps == 0.0 ? std::vector<SeriesPrice>(strikes.size())
                                        : price_series(unit, t, y, strikes, kind, n_max, quad);

  std::vector<IVSeries> out;
  out.reserve(strikes.size());
  const std::vector<double> zeros(static_cast<std::size_t>(n_max), 0.0);
  for (std::size_t s = 0; s < strikes.size(); ++s) {
    const auto dsigma = bs_sigma_derivatives({params.a0, t, y, strikes[s], kind}, n_max, quad);
    const std::span<const double> u = params.eps == 0.0
        ? std::span<const double>(zeros)
        : std::span<const double>(prices[s].terms.data() + 1, static_cast<std::size_t>(n_max));
    out.push_back(sigma_series_from_terms(params.a0, params.eps, u, dsigma));
  }
  return out;
}

IVSeries sigma_series(const ModelParams& params, const OptionSpec& opt, int n_max,
                      const QuadratureSpec& quad) {
  const double k[] = {opt.k};
  return std::move(sigma_series(params, opt.t, opt.y, k, opt.kind, n_max, quad).front());
}

Polynomial chi_operator(const ModelParams& params, std::optional<int> q) {
  if (!params.nu0.absent() || params.c0 != 0.0 || params.c1 != 0.0) {
    throw std::invalid_argument("closed-form IV needs nu0 absent and c0 = c1 = 0");
  }
  Polynomial chi = diffusion_symbol(params.a1);
  if (!q) {
    if (!params.nu1.absent()) {
      throw std::invalid_argument("closed-form IV with local jumps needs a moment order q");
    }
    return chi;
  }
  if (*q < 2) throw std::invalid_argument("moment order q must be >= 2");
  if (params.nu1.absent()) return chi;
  double factorial = 1.0;
  for (int n = 2; n <= *q; ++n) {
    factorial *= n;
    const double w = levy_moment(params.nu1, n) / factorial;
    chi += Polynomial::monomial(static_cast<std::size_t>(n), w) - Polynomial{0.0, w};
  }
  return chi;
}

Polynomial operator_coeffs(const ModelParams& params, double t, int order, int M,
                           std::optional<int> q) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  if (order != 1 && order != 2) throw std::invalid_argument("order must be 1 or 2");
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  const Polynomial chi = chi_operator(params, q);
  const Polynomial phi = diffusion_symbol(params.a0);
  const Polynomial delta1 = phi.shifted(params.beta) - phi;

  Polynomial sum;
  if (order == 1) {
    Polynomial power{1.0};
    double coeff = 1.0;
    for (int n = 1; n <= M; ++n) {
      coeff *= t / n;
      sum += coeff * power;
      power = power * delta1;
    }
    return sum * chi;
  }

  const Polynomial delta2 = phi.shifted(2.0 * params.beta) - phi;
  // h_m(Δ1, Δ2) = Δ2^m + Δ1 h_{m−1}
  Polynomial h{1.0};
  Polynomial delta2_power{1.0};
  double coeff = t;
  for (int n = 2; n <= M; ++n) {
    coeff *= t / n;
    sum += coeff * h;
    delta2_power = delta2_power * delta2;
    h = delta2_power + delta1 * h;
  }
  return sum * chi.shifted(params.beta) * chi;
}

double hermite_ratio(int n, double t, double y, double k, double a0) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(t > 0.0) || !(a0 > 0.0)) throw std::invalid_argument("t and a0 must be > 0");
  // g = const · exp(−d₋²/2) in the variable d₋ = d₊ − a0√t, so
  // ∂ⁿg/g = (−1/(a0√t))ⁿ He_n(d₋) with the probabilists' Hermite He_n
  const double sd = a0 * std::sqrt(t);
  const double x = (y - k) / sd - 0.5 * sd;
  double prev = 1.0;
  double cur = x;
  if (n == 0) return 1.0;
  for (int m = 1; m < n; ++m) {
    const double nxt = x * cur - m * prev;
    prev = cur;
    cur = nxt;
  }
  return std::pow(-1.0 / sd, n) * cur;
}

Polynomial hermite_ratio_polynomial(int n, double t, double k, double a0) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(t > 0.0) || !(a0 > 0.0)) throw std::invalid_argument("t and a0 must be > 0");
  const double sd = a0 * std::sqrt(t);
  // 1 − d₊/(a0√t) as a polynomial in y
  const Polynomial factor{1.0 - (0.5 * a0 * a0 * t - k) / (sd * sd), -1.0 / (sd * sd)};
  Polynomial p{1.0};
  for (int m = 0; m < n; ++m) p = p.derivative() + p * factor;
  return p;
}

ClosedFormIV sigma_closed_form_terms(const ModelParams& params, const OptionSpec& opt, int M,
                                     std::optional<int> q) {
  params.validate();
  params.require_diffusion();
  opt.validate();
  if (opt.kind != OptionKind::Call) throw std::invalid_argument("closed-form IV is defined for calls");

  const double t = opt.t;
  const double a0 = params.a0;
  const auto contract = [&](const Polynomial& r) {
    const Polynomial b = r.divide_by_x2_minus_x();
    double acc = 0.0;
    for (std::size_t n = 0; n < b.coeffs().size(); ++n) {
      acc += b.coeffs()[n] * hermite_ratio(static_cast<int>(n), t, opt.y, opt.k, a0);
    }
    return acc / (t * a0);
  };

  ClosedFormIV out;
  out.sigma1 = std::exp(params.beta * opt.y) * contract(operator_coeffs(params, t, 1, M, q));
  const double lm = opt.k - opt.y;
  const double vega_ratio = lm * lm / (t * a0 * a0 * a0) - t * a0 / 4.0;
  out.sigma2 = std::exp(2.0 * params.beta * opt.y) * contract(operator_coeffs(params, t, 2, M, q)) -
               0.5 * out.sigma1 * out.sigma1 * vega_ratio;
  out.sigma = a0 + params.eps * out.sigma1 + params.eps * params.eps * out.sigma2;
  return out;
}

double sigma_closed_form(const ModelParams& params, const OptionSpec& opt, int M,
                         std::optional<int> q) {
  return sigma_closed_form_terms(params, opt, M, q).sigma;
}

}  // namespace levysmile

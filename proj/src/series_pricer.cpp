#include "levysmile/series_pricer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "levysmile/errors.hpp"

namespace levysmile {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResidueRel = 1e-6;
constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr double kResidueAbs = 1e-12;

// ⟨ψ_λ,h⟩ψ_λ(y) for the call payoff, folded into one exponential.
cplx call_kernel(double y, double k, cplx lambda) {
  const cplx i{0.0, 1.0};
  return -std::exp(k + i * lambda * (y - k)) / (kTwoPi * (i * lambda + lambda * lambda));
}

void require_call_contour(const QuadratureSpec& quad) {
  if (!(quad.contour_imag < -1.0)) {
    throw std::invalid_argument("call pricing needs contour_imag < -1, got " +
                                std::to_string(quad.contour_imag));
  }
}

void check_order(int order) {
  if (order < 0) throw std::invalid_argument("series order must be >= 0");
}

void check_tail(const LineIntegral& li) {
  if (!li.tail_resolved) {
    throw NumericalError("Fourier integrand still significant at |λ_r| = " +
                         std::to_string(li.half_width) + "; raise the half-width or node count");
  }
}

void check_residue(double re, double im, double mass) {
  if (std::abs(im) > kResidueRel * std::abs(re) + kResidueAbs * mass) {
    throw NumericalError("imaginary residue " + std::to_string(im) + " too large against value " +
                         std::to_string(re));
  }
}

LineHints hints_for(const ModelParams& p, double t, const QuadratureSpec& quad, double spread,
                    bool call_poles) {
  LineHints h;
  h.half_width = default_half_width(p, t, quad.tol);
  h.frequency = spread + 1.0 + t * std::abs(p.nu0.exp_compensator());
  // the call transform has poles at λ = 0 and λ = −i
  if (call_poles) h.pole_distance = std::min(std::abs(quad.contour_imag), std::abs(quad.contour_imag + 1.0));
  return h;
}

}  // namespace

void OptionSpec::validate() const {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("maturity t must be > 0");
  if (!std::isfinite(y) || !std::isfinite(k)) {
    throw std::invalid_argument("y and k must be finite");
  }
}

cplx call_transform(double k, cplx lambda) {
  if (!(lambda.imag() < -1.0)) {
    throw std::invalid_argument("call transform needs Im(lambda) < -1");
  }
  const cplx i{0.0, 1.0};
  return -std::exp(k - i * k * lambda) /
         (std::sqrt(kTwoPi) * (i * lambda + lambda * lambda));
}

SeriesKernel::SeriesKernel(const ModelParams& params, double t, int order)
    : symbols_(params), t_(t), beta_(params.beta), order_(order),
      nodes_(static_cast<std::size_t>(order) + 1), dd_(static_cast<std::size_t>(order) + 1) {
  check_order(order);
}

void SeriesKernel::evaluate(cplx lambda, std::span<cplx> out) {
  const cplx shift{0.0, -beta_};
  for (int j = 0; j <= order_; ++j) nodes_[j] = symbols_.phi(lambda + static_cast<double>(j) * shift);
  divided_.leading(t_, nodes_, dd_);
  cplx chi_product{1.0, 0.0};
  for (int n = 0; n <= order_; ++n) {
    out[n] = dd_[n] * chi_product;
    if (n < order_) chi_product *= symbols_.chi(lambda + static_cast<double>(n) * shift);
  }
}

double default_half_width(const ModelParams& params, double t, double tol) {
  params.require_diffusion();
  return std::max(50.0, std::sqrt(2.0 * std::log(1.0 / tol) / (t * params.a0 * params.a0)));
}

std::vector<SeriesPrice> price_series(const ModelParams& params, double t, double y,
                                      std::span<const double> strikes, OptionKind kind,
                                      int order, const QuadratureSpec& quad) {
  params.validate();
  params.require_diffusion();
  check_order(order);
  require_call_contour(quad);
  for (double k : strikes) OptionSpec{t, y, k, kind}.validate();

  const std::size_t width = static_cast<std::size_t>(order) + 1;
  const std::size_t n_out = strikes.size() * width;
  double spread = 0.0;
  for (double k : strikes) spread = std::max(spread, std::abs(k - y));

  // (ε e^{βy})^n
  std::vector<double> weight(width, 1.0);
  for (std::size_t n = 1; n < width; ++n) weight[n] = weight[n - 1] * params.eps * std::exp(params.beta * y);

  SeriesKernel kernel(params, t, order);
  std::vector<cplx> k_n(width);
  const auto integrand = [&](double lr, std::span<cplx> out) {
    const cplx lambda{lr, quad.contour_imag};
    kernel.evaluate(lambda, k_n);
    for (std::size_t s = 0; s < strikes.size(); ++s) {
      const cplx base = call_kernel(y, strikes[s], lambda);
      for (std::size_t n = 0; n < width; ++n) out[s * width + n] = base * weight[n] * k_n[n];
    }
  };
  const auto li = integrate_line(quad, hints_for(params, t, quad, spread, true), n_out, integrand);
  check_tail(li);

  std::vector<SeriesPrice> prices;
  prices.reserve(strikes.size());
  for (std::size_t s = 0; s < strikes.size(); ++s) {
    SeriesPrice sp;
    sp.order = order;
    sp.terms.resize(width);
    sp.roundoff.resize(width);
    double im = 0.0;
    double mass = 0.0;
    for (std::size_t n = 0; n < width; ++n) {
      const cplx v = li.values[s * width + n];
      sp.terms[n] = v.real();
      sp.roundoff[n] = kEpsilon * li.abs_mass[s * width + n];
      im += v.imag();
      mass += li.abs_mass[s * width + n];
    }
    double call = 0.0;
    for (double term : sp.terms) call += term;
    check_residue(call, im, mass);
    sp.imag_residue = std::abs(im);
    if (kind == OptionKind::Put) sp.terms[0] -= std::exp(y) - std::exp(strikes[s]);
    sp.value = 0.0;
    for (double term : sp.terms) sp.value += term;
    prices.push_back(std::move(sp));
  }
  return prices;
}

SeriesPrice price_series(const ModelParams& params, const OptionSpec& opt, int order,
                         const QuadratureSpec& quad) {
  const double k[] = {opt.k};
  return std::move(price_series(params, opt.t, opt.y, k, opt.kind, order, quad).front());
}

double price_exp_levy(const ModelParams& params, const OptionSpec& opt, const QuadratureSpec& quad) {
  params.validate();
  params.require_diffusion();
  opt.validate();
  require_call_contour(quad);
  const CharacteristicExponents symbols(params);
  const auto integrand = [&](double lr, std::span<cplx> out) {
    const cplx lambda{lr, quad.contour_imag};
    out[0] = call_kernel(opt.y, opt.k, lambda) * std::exp(opt.t * symbols.phi(lambda));
  };
  const auto li = integrate_line(quad, hints_for(params, opt.t, quad, std::abs(opt.k - opt.y), true), 1,
                                 integrand);
  check_tail(li);
  const double call = li.values[0].real();
  check_residue(call, li.values[0].imag(), li.abs_mass[0]);
  if (opt.kind == OptionKind::Put) return call - (std::exp(opt.y) - std::exp(opt.k));
  return call;
}

std::vector<DensityValue> fk_density(const ModelParams& params, double t, double y,
                                     std::span<const double> z, int order,
                                     const QuadratureSpec& quad) {
  params.validate();
  params.require_diffusion();
  check_order(order);
  OptionSpec{t, y, 0.0, OptionKind::Call}.validate();

  const std::size_t width = static_cast<std::size_t>(order) + 1;
  double spread = 0.0;
  for (double zi : z) spread = std::max(spread, std::abs(zi - y));
  std::vector<double> weight(width, 1.0);
  for (std::size_t n = 1; n < width; ++n) weight[n] = weight[n - 1] * params.eps * std::exp(params.beta * y);

  SeriesKernel kernel(params, t, order);
  std::vector<cplx> k_n(width);
  const cplx i{0.0, 1.0};
  const auto integrand = [&](double lr, std::span<cplx> out) {
    const cplx lambda{lr, quad.contour_imag};
    kernel.evaluate(lambda, k_n);
    for (std::size_t s = 0; s < z.size(); ++s) {
      const cplx base = std::exp(i * lambda * (y - z[s])) / kTwoPi;
      for (std::size_t n = 0; n < width; ++n) out[s * width + n] = base * weight[n] * k_n[n];
    }
  };
  const auto li = integrate_line(quad, hints_for(params, t, quad, spread, false), z.size() * width,
                                 integrand);
  check_tail(li);

  std::vector<DensityValue> result(z.size());
  for (std::size_t s = 0; s < z.size(); ++s) {
    auto& d = result[s];
    d.terms.resize(width);
    d.roundoff.resize(width);
    double im = 0.0;
    double mass = 0.0;
    for (std::size_t n = 0; n < width; ++n) {
      d.terms[n] = li.values[s * width + n].real();
      d.roundoff[n] = kEpsilon * li.abs_mass[s * width + n];
      d.value += d.terms[n];
      im += li.values[s * width + n].imag();
      mass += li.abs_mass[s * width + n];
    }
    check_residue(d.value, im, mass);
    d.imag_residue = std::abs(im);
  }
  return result;
}

double fk_density(const ModelParams& params, double t, double y, double z, int order,
                  const QuadratureSpec& quad) {
  const double zs[] = {z};
  return fk_density(params, t, y, zs, order, quad).front().value;
}

double survival_probability(const ModelParams& params, double t, double y, int order) {
  params.validate();
  check_order(order);
  OptionSpec{t, y, 0.0, OptionKind::Call}.validate();
  SeriesKernel kernel(params, t, order);
  std::vector<cplx> k_n(static_cast<std::size_t>(order) + 1);
  kernel.evaluate(cplx{0.0, 0.0}, k_n);
  const double w = params.eps * std::exp(params.beta * y);
  double total = 0.0;
  double scale = 1.0;
  for (const cplx& v : k_n) {
    total += scale * v.real();
    scale *= w;
  }
  return total;
}

double defaultable_value(const ModelParams& params, const OptionSpec& opt, int order,
                         const QuadratureSpec& quad) {
  return price_series(params, opt, order, quad).value;
}

double duhamel_u1_oracle(const ModelParams& params, const OptionSpec& opt, int time_nodes,
                         const QuadratureSpec& quad) {
  params.validate();
  params.require_diffusion();
  opt.validate();
  require_call_contour(quad);
  if (!params.nu0.absent() || params.c0 != 0.0) {
    throw std::invalid_argument("Duhamel oracle needs nu0 absent and c0 = 0");
  }
  if (time_nodes < 1) throw std::invalid_argument("time_nodes must be >= 1");

  std::vector<double> s_nodes;
  std::vector<double> s_weights;
  gauss_legendre(static_cast<std::size_t>(time_nodes), 0.0, opt.t, s_nodes, s_weights);

  const CharacteristicExponents symbols(params);
  const cplx shift{0.0, -params.beta};
  const double eta_y = std::exp(params.beta * opt.y);
  const auto integrand = [&](double lr, std::span<cplx> out) {
    const cplx lambda{lr, quad.contour_imag};
    const cplx phi0 = symbols.phi(lambda);
    const cplx phi1 = symbols.phi(lambda + shift);
    // P_s acts on ψ_λ, χ multiplies, e^{βy} moves the mode to ψ_{λ−iβ}, then P_{t−s}
    cplx time_integral{0.0, 0.0};
    for (std::size_t j = 0; j < s_nodes.size(); ++j) {
      time_integral += s_weights[j] * std::exp(s_nodes[j] * phi0 + (opt.t - s_nodes[j]) * phi1);
    }
    out[0] = call_kernel(opt.y, opt.k, lambda) * eta_y * symbols.chi(lambda) * time_integral;
  };
  const auto li = integrate_line(quad, hints_for(params, opt.t, quad, std::abs(opt.k - opt.y), true), 1,
                                 integrand);
  check_tail(li);
  return li.values[0].real();
}

}  // namespace levysmile

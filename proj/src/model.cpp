#include "levysmile/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace levysmile {

namespace {

constexpr cplx kI{0.0, 1.0};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double GaussianJumpMeasure::exp_compensator() const {
  if (absent()) return 0.0;
  return intensity * (std::expm1(mean + 0.5 * std * std) - mean);
}

cplx GaussianJumpMeasure::characteristic_integral(cplx lambda) const {
  if (absent()) return 0.0;
  const cplx il = kI * lambda;
  const cplx exponent = il * mean - 0.5 * lambda * lambda * std * std;
  return intensity * (std::exp(exponent) - 1.0 - il * mean);
}

void GaussianJumpMeasure::validate() const {
  require(std::isfinite(intensity) && intensity >= 0.0,
          "jump intensity must be finite and >= 0");
  require(std::isfinite(mean), "jump mean must be finite");
  // s only matters for a present measure
  require(absent() || (std::isfinite(std) && std > 0.0),
          "jump std must be > 0 when intensity > 0");
}

void ModelParams::validate() const {
  require(std::isfinite(a0) && a0 >= 0.0, "a0 must be >= 0");
  require(std::isfinite(a1) && a1 >= 0.0, "a1 must be >= 0");
  require(std::isfinite(c0) && c0 >= 0.0, "c0 must be >= 0");
  require(std::isfinite(c1) && c1 >= 0.0, "c1 must be >= 0");
  require(std::isfinite(eps) && eps >= 0.0, "eps must be >= 0");
  require(std::isfinite(beta), "beta must be finite");
  nu0.validate();
  nu1.validate();
}

void ModelParams::require_diffusion() const {
  validate();
  require(a0 > 0.0, "a0 must be > 0 for Fourier pricing");
}

double sigma_local(const ModelParams& p, double y) {
  return std::sqrt(p.a0 * p.a0 + p.eps * p.a1 * p.a1 * std::exp(p.beta * y));
}

double kill_local(const ModelParams& p, double y) {
  return p.c0 + p.eps * p.c1 * std::exp(p.beta * y);
}

double jump_intensity_local(const ModelParams& p, double y) {
  return p.nu0.intensity + p.eps * std::exp(p.beta * y) * p.nu1.intensity;
}

double drift_alpha(const ModelParams& p, double y) {
  const double w1 = p.eps * std::exp(p.beta * y);
  const double s = sigma_local(p, y);
  return kill_local(p, y) - 0.5 * s * s - p.nu0.exp_compensator() -
         w1 * p.nu1.exp_compensator();
}

CharacteristicExponents::CharacteristicExponents(const ModelParams& p)
    : base_{0.5 * p.a0 * p.a0, p.c0, p.nu0.exp_compensator(), p.nu0},
      local_{0.5 * p.a1 * p.a1, p.c1, p.nu1.exp_compensator(), p.nu1} {}

cplx CharacteristicExponents::eval(const Part& part, cplx lambda) {
  const cplx il = kI * lambda;
  return part.half_var * (-lambda * lambda - il) + part.kill * (il - 1.0) -
         il * part.compensator + part.jumps.characteristic_integral(lambda);
}

cplx phi(const ModelParams& p, cplx lambda) {
  return CharacteristicExponents(p).phi(lambda);
}

cplx chi(const ModelParams& p, cplx lambda) {
  return CharacteristicExponents(p).chi(lambda);
}

double levy_moment(const GaussianJumpMeasure& measure, int n) {
  if (n < 2) throw std::invalid_argument("levy_moment requires n >= 2");
  if (measure.absent()) return 0.0;
  const double m = measure.mean;
  const double v = measure.std * measure.std;
  // raw normal moments: M_j = m M_{j-1} + (j-1) s² M_{j-2}
  double prev = 1.0;
  double cur = m;
  for (int j = 2; j <= n; ++j) {
    const double next = m * cur + (j - 1) * v * prev;
    prev = cur;
    cur = next;
  }
  return measure.intensity * cur;
}

double epsilon_bound(const ModelParams& p, double A, double B, double eta_norm,
                     std::span<const double> lambda_grid) {
  require(A >= 0.0, "A must be >= 0");
  require(B > 0.0 && B <= 1.0, "B must lie in (0, 1]");
  require(eta_norm > 0.0, "eta_norm must be > 0");
  require(!lambda_grid.empty(), "lambda grid must be nonempty");
  const CharacteristicExponents ce(p);
  double best = std::numeric_limits<double>::infinity();
  for (double lam : lambda_grid) {
    const double c = std::abs(ce.chi(lam));
    if (c == 0.0) continue;
    const double f = std::abs(ce.phi(lam));
    const double ratio = (A * A + B * B * f * f) / (eta_norm * eta_norm * c * c);
    best = std::min(best, ratio);
  }
  if (!std::isfinite(best)) {
    throw std::domain_error("epsilon bound unconstrained: chi vanishes on the whole grid");
  }
  return std::sqrt(best);
}

double epsilon_bound(const ModelParams& p, double A, double B, double eta_norm) {
  constexpr int kPoints = 4001;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) grid[i] = -200.0 + 400.0 * i / (kPoints - 1);
  return epsilon_bound(p, A, B, eta_norm, grid);
}

}  // namespace levysmile

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "levysmile/divided_difference.hpp"
#include "levysmile/model.hpp"
#include "levysmile/quadrature.hpp"

namespace levysmile {

enum class OptionKind { Call, Put };

struct OptionSpec {
  double t = 1.0;
  double y = 0.0;
  double k = 0.0;
  OptionKind kind = OptionKind::Call;

  [[nodiscard]] double lm() const { return k - y; }
  [[nodiscard]] double lmmr() const { return (k - y) / t; }
  void validate() const;
};

struct SeriesPrice {
  double value = 0.0;
  /// ε^n·u_n for n = 0..order; terms[0] carries the put-call parity shift for puts.
  std::vector<double> terms;
  int order = 0;
  /// |imaginary part| of the integral before it was discarded.
  double imag_residue = 0.0;
  /// Per-term roundoff floor: machine epsilon times ∫|integrand|. The actual
  /// error is at least this large; orders where it rivals the term itself
  /// have cancelled below double precision and should not be trusted.
  std::vector<double> roundoff;
};

/// ⟨ψ_λ, (e^y − e^k)^+⟩ = −e^{k−ikλ}/(√(2π)(iλ+λ²)); needs Im λ < −1.
cplx call_transform(double k, cplx lambda);

/// Per-order spectral factors of the series at one Fourier argument:
///   K_n(λ) = e^{tφ}[φ_λ, φ_{λ−iβ}, ..., φ_{λ−inβ}] · Π_{j<n} χ_{λ−ijβ},
/// so that u_n = ∫ ⟨ψ_λ,h⟩ ψ_λ(y) e^{nβy} K_n(λ) dλ_r.
/// Holds scratch buffers; use one instance per thread.
class SeriesKernel {
 public:
  SeriesKernel(const ModelParams& params, double t, int order);

  /// Fills out[0..order].
  void evaluate(cplx lambda, std::span<cplx> out);

  [[nodiscard]] int order() const { return order_; }

 private:
  CharacteristicExponents symbols_;
  double t_;
  double beta_;
  int order_;
  std::vector<cplx> nodes_;
  std::vector<cplx> dd_;
  ExpDividedDifferences divided_;
};

/// Nominal truncation max(50, √(2 ln(1/tol)/(t a0²))).
double default_half_width(const ModelParams& params, double t, double tol);

/// N-th order series price u^(N). Puts use parity: put = call − (e^y − e^k).
/// Throws NumericalError when the tail is unresolved or the imaginary
/// residue exceeds 1e-6·|value|.
SeriesPrice price_series(const ModelParams& params, const OptionSpec& opt, int order,
                         const QuadratureSpec& quad = {});

/// Prices several strikes sharing (t, y, kind) from a single pass over the
/// Fourier grid. Results follow the order of `strikes`.
std::vector<SeriesPrice> price_series(const ModelParams& params, double t, double y,
                                      std::span<const double> strikes, OptionKind kind,
                                      int order, const QuadratureSpec& quad = {});

/// ε = 0 price from a direct e^{tφ_λ} integrand, independent of SeriesKernel.
double price_exp_levy(const ModelParams& params, const OptionSpec& opt,
                      const QuadratureSpec& quad = {});

struct DensityValue {
  double value = 0.0;
  std::vector<double> terms;
  double imag_residue = 0.0;
  std::vector<double> roundoff;
};

/// Feynman–Kac density p^(N)(t, y, z) at each z. Any contour_imag is valid
/// since the delta transform is entire.
std::vector<DensityValue> fk_density(const ModelParams& params, double t, double y,
                                     std::span<const double> z, int order,
                                     const QuadratureSpec& quad = {});

double fk_density(const ModelParams& params, double t, double y, double z, int order,
                  const QuadratureSpec& quad = {});

/// E[e^{−∫k(Y_s)ds}] to order N; closed form at λ = 0, no integration.
double survival_probability(const ModelParams& params, double t, double y, int order);

/// Pre-default value of the defaultable claim: calls pay nothing on
/// default, and the put value follows from parity.
double defaultable_value(const ModelParams& params, const OptionSpec& opt, int order,
                         const QuadratureSpec& quad = {});

/// u_1 by quadrature over the Duhamel time integral
///   u_1 = ∫_0^t P_{t−s}(η A_1 P_s h) ds,
/// with every operator applied on Fourier modes. Needs ν0 ≡ 0 and c0 = 0.
double duhamel_u1_oracle(const ModelParams& params, const OptionSpec& opt, int time_nodes,
                         const QuadratureSpec& quad = {});

}  // namespace levysmile

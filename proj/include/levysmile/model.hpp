#pragma once

#include <complex>
#include <span>

namespace levysmile {

using cplx = std::complex<double>;

/// Lévy measure Γ·N(m, s²)(dz): jumps arrive at rate Γ per year with
/// normally distributed log-size. Γ = 0 is the absent measure.
struct GaussianJumpMeasure {
  double intensity = 0.0;
  double mean = 0.0;
  double std = 1.0;

  [[nodiscard]] bool absent() const { return intensity == 0.0; }

  /// Γ·(e^{m+s²/2} − 1 − m) = ∫ν(dz)(e^z − 1 − z).
  [[nodiscard]] double exp_compensator() const;

  /// Γ·m = ∫ν(dz) z.
  [[nodiscard]] double first_moment() const { return intensity * mean; }

  /// ∫ν(dz)(e^{iλz} − 1 − iλz), entire in λ.
  [[nodiscard]] cplx characteristic_integral(cplx lambda) const;

  void validate() const;
};

/// Parameters of the CEV-like Lévy-type model with η(y) = e^{βy}:
///   σ²(y) = a0² + ε a1² e^{βy},  k(y) = c0 + ε c1 e^{βy},
///   ν(y,dz) = ν0(dz) + ε e^{βy} ν1(dz).
struct ModelParams {
  double a0 = 0.0;
  double a1 = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double eps = 0.0;
  double beta = 0.0;
  GaussianJumpMeasure nu0{};
  GaussianJumpMeasure nu1{};

  void validate() const;
  /// Throws std::invalid_argument unless a0 > 0 (Fourier integrand decay).
  void require_diffusion() const;
};

double sigma_local(const ModelParams& p, double y);
double kill_local(const ModelParams& p, double y);
double jump_intensity_local(const ModelParams& p, double y);

/// Martingale drift α(y) = k(y) − σ²(y)/2 − ∫ν(y,dz)(e^z − 1 − z).
double drift_alpha(const ModelParams& p, double y);

/// Symbols of A0 and A1 on the Fourier mode e^{iλy}. Immutable; cheap to copy.
class CharacteristicExponents {
 public:
  explicit CharacteristicExponents(const ModelParams& p);

  [[nodiscard]] cplx phi(cplx lambda) const { return eval(base_, lambda); }
  [[nodiscard]] cplx chi(cplx lambda) const { return eval(local_, lambda); }

 private:
  struct Part {
    double half_var;
    double kill;
    double compensator;
    GaussianJumpMeasure jumps;
  };
  static cplx eval(const Part& part, cplx lambda);

  Part base_;
  Part local_;
};

cplx phi(const ModelParams& p, cplx lambda);
cplx chi(const ModelParams& p, cplx lambda);

/// Γ·E[Zⁿ] for Z ~ N(m, s²); n ≥ 2.
double levy_moment(const GaussianJumpMeasure& measure, int n);

/// Largest ε admitted by the relative-boundedness condition
///   ε² ≤ inf_λ (A² + B²|φ_λ|²) / (‖η‖² |χ_λ|²),
/// with the infimum taken over the supplied real grid. Grid points with
/// χ_λ = 0 are skipped; throws std::domain_error if every point is skipped.
double epsilon_bound(const ModelParams& p, double A, double B, double eta_norm,
                     std::span<const double> lambda_grid);

/// Same bound on the default grid of 4001 points over [−200, 200].
double epsilon_bound(const ModelParams& p, double A, double B, double eta_norm);

}  // namespace levysmile

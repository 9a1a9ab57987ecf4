#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace levysmile {

/// Dense real polynomial c_0 + c_1 x + ... + c_n xⁿ. Used both for operator
/// symbols in ∂ and for polynomials in the log-price y.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial monomial(std::size_t degree, double coeff = 1.0);

  [[nodiscard]] std::span<const double> coeffs() const { return c_; }
  [[nodiscard]] double coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
  /// Degree of the zero polynomial is reported as 0.
  [[nodiscard]] std::size_t degree() const;
  [[nodiscard]] bool is_zero() const { return c_.empty(); }

  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] Polynomial derivative() const;
  /// p(x + shift).
  [[nodiscard]] Polynomial shifted(double shift) const;
  /// Quotient by x² − x. Throws std::domain_error unless the remainder
  /// vanishes relative to the coefficient scale.
  [[nodiscard]] Polynomial divide_by_x2_minus_x() const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  void trim();
  std::vector<double> c_;
};

Polynomial pow(const Polynomial& p, unsigned n);

}  // namespace levysmile

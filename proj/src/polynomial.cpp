#include "levysmile/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levysmile {

Polynomial::Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::monomial(std::size_t degree, double coeff) {
  std::vector<double> c(degree + 1, 0.0);
  c[degree] = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

std::size_t Polynomial::degree() const { return c_.empty() ? 0 : c_.size() - 1; }

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(double shift) const {
  // Horner in polynomial arithmetic: p(x+s) = (...(c_n (x+s) + c_{n-1})(x+s) + ...)
  const Polynomial lin{shift, 1.0};
  Polynomial acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * lin;
    acc += Polynomial{*it};
  }
  return acc;
}

Polynomial Polynomial::divide_by_x2_minus_x() const {
  if (c_.empty()) return {};
  // p(x) = (x² − x) q(x) means c_0 = 0 and c_i = q_{i−2} − q_{i−1}
  double scale = 0.0;
  for (double v : c_) scale = std::max(scale, std::abs(v));
  const std::size_t n = c_.size();
  if (n < 3) {
    if (std::abs(c_[0]) + (n > 1 ? std::abs(c_[1]) : 0.0) > 1e-12 * scale) {
      throw std::domain_error("polynomial not divisible by x^2 - x");
    }
    return {};
  }
  std::vector<double> q(n - 2, 0.0);
  // from the top: c_{i} = q_{i−2} − q_{i−1}
  for (std::size_t i = n - 1; i >= 2; --i) {
    const double next = (i - 1 < q.size()) ? q[i - 1] : 0.0;
    q[i - 2] = c_[i] + next;
  }
  const double r1 = c_[1] + q[0];
  if (std::abs(c_[0]) > 1e-12 * scale || std::abs(r1) > 1e-9 * scale) {
    throw std::domain_error("polynomial not divisible by x^2 - x");
  }
  return Polynomial(std::move(q));
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size(), 0.0);
  for (std::size_t i = 0; i < rhs.c_.size(); ++i) c_[i] += rhs.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size(), 0.0);
  for (std::size_t i = 0; i < rhs.c_.size(); ++i) c_[i] -= rhs.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (double& v : c_) v *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial pow(const Polynomial& p, unsigned n) {
  Polynomial acc{1.0};
  for (unsigned i = 0; i < n; ++i) acc = acc * p;
  return acc;
}

}  // namespace levysmile

#include "levysmile/divided_difference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levysmile {

namespace {

using cplx = std::complex<double>;

// Lower-triangular product c = a * b, dense row-major storage of size n*n.
void lower_multiply(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cplx acc = 0.0;
      for (std::size_t l = j; l <= i; ++l) acc += a[i * n + l] * b[l * n + j];
      c[i * n + j] = acc;
    }
  }
}

// c = a * B for lower-bidiagonal B with diagonal d and constant subdiagonal s.
void bidiagonal_multiply(std::size_t n, const cplx* a, const cplx* d, cplx s, cplx* c) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      cplx v = a[i * n + j] * d[j];
      if (j + 1 <= i) v += a[i * n + j + 1] * s;
      c[i * n + j] = v;
    }
  }
}

double lower_norm1(std::size_t n, const cplx* a) {
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = j; i < n; ++i) col += std::abs(a[i * n + j]);
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

void ExpDividedDifferences::leading(double t, std::span<const cplx> nodes,
                                    std::span<cplx> out) {
  const std::size_t n = nodes.size();
  if (n == 0) throw std::invalid_argument("divided difference needs at least one node");
  if (out.size() < n) throw std::invalid_argument("output span too small");

  if (n == 1) {
    out[0] = std::exp(t * nodes[0]);
    return;
  }

  cplx shift = 0.0;
  for (const cplx& z : nodes) shift += z;
  shift /= static_cast<double>(n);

  // A = t(Z − shift·I) is bidiagonal: keep its diagonal only
  a_.resize(n);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a_[i] = t * (nodes[i] - shift);
    norm = std::max(norm, std::abs(a_[i]) + (i + 1 < n ? t : 0.0));
  }

  constexpr double kTheta = 0.5;
  int squarings = 0;
  if (norm > kTheta) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta)));
  const double scale = std::ldexp(1.0, -squarings);
  for (cplx& v : a_) v *= scale;
  const cplx sub = t * scale;

  // Taylor series of exp(A) with ||A|| <= 1/2
  sum_.assign(n * n, 0.0);
  term_.assign(n * n, 0.0);
  tmp_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) sum_[i * n + i] = term_[i * n + i] = 1.0;
  for (int k = 1; k <= 40; ++k) {
    bidiagonal_multiply(n, term_.data(), a_.data(), sub, tmp_.data());
    const double inv = 1.0 / k;
    for (std::size_t i = 0; i < n * n; ++i) term_[i] = tmp_[i] * inv;
    for (std::size_t i = 0; i < n * n; ++i) sum_[i] += term_[i];
    if (lower_norm1(n, term_.data()) <= 1e-18 * lower_norm1(n, sum_.data())) break;
  }

  for (int s = 0; s < squarings; ++s) {
    lower_multiply(n, sum_.data(), sum_.data(), tmp_.data());
    std::swap(sum_, tmp_);
  }

  const cplx factor = std::exp(t * shift);
  for (std::size_t i = 0; i < n; ++i) out[i] = factor * sum_[i * n];
}

std::vector<cplx> exp_divided_differences(double t, std::span<const cplx> nodes) {
  std::vector<cplx> out(nodes.size());
  ExpDividedDifferences dd;
  dd.leading(t, nodes, out);
  return out;
}

cplx divided_diff_exp(double t, std::span<const cplx> nodes) {
  return exp_divided_differences(t, nodes).back();
}

}  // namespace levysmile

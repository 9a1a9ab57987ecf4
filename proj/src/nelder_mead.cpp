#include "levysmile/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace levysmile {

namespace {

using Point = std::vector<double>;

class BoxedObjective {
 public:
  BoxedObjective(const Objective& f, std::span<const double> lower, std::span<const double> upper)
      : f_(f), lower_(lower.begin(), lower.end()), upper_(upper.begin(), upper.end()),
        scratch_(lower.size()) {}

  // u lives in [0,1]^n; clamps in place
  double operator()(Point& u) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = std::clamp(u[i], 0.0, 1.0);
      scratch_[i] = lower_[i] + u[i] * (upper_[i] - lower_[i]);
    }
    ++evaluations;
    const double v = f_(scratch_);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  }

  Point to_box(const Point& u) const {
    Point x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = lower_[i] + u[i] * (upper_[i] - lower_[i]);
    return x;
  }

  int evaluations = 0;

 private:
  const Objective& f_;
  Point lower_;
  Point upper_;
  Point scratch_;
};

struct Simplex {
  std::vector<Point> v;
  std::vector<double> f;

  void sort() {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return f[a] < f[b]; });
    std::vector<Point> nv;
    std::vector<double> nf;
    for (auto i : idx) {
      nv.push_back(std::move(v[i]));
      nf.push_back(f[i]);
    }
    v = std::move(nv);
    f = std::move(nf);
  }
};

Point affine(const Point& a, const Point& b, double s) {
  // a + s (a − b)
  Point out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * (a[i] - b[i]);
  return out;
}

Simplex build(const Point& center, double fc, double step, BoxedObjective& obj) {
  Simplex s;
  s.v.push_back(center);
  s.f.push_back(fc);
  for (std::size_t i = 0; i < center.size(); ++i) {
    Point p = center;
    // step inward when the center sits on the upper face
    p[i] += p[i] + step <= 1.0 ? step : -step;
    const double fp = obj(p);
    s.v.push_back(std::move(p));
    s.f.push_back(fp);
  }
  s.sort();
  return s;
}

bool small(const Simplex& s, const NelderMeadOptions& o) {
  double spread = 0.0;
  double width = 0.0;
  for (std::size_t j = 1; j < s.v.size(); ++j) {
    spread = std::max(spread, std::abs(s.f[j] - s.f[0]));
    for (std::size_t i = 0; i < s.v[0].size(); ++i) {
      width = std::max(width, std::abs(s.v[j][i] - s.v[0][i]));
    }
  }
  return spread <= o.f_tol && width <= o.x_tol;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0,
                             std::span<const double> lower, std::span<const double> upper,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nothing to optimize");
  if (lower.size() != n || upper.size() != n) throw std::invalid_argument("bounds size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lower[i] < upper[i])) throw std::invalid_argument("empty box for parameter " + std::to_string(i));
    if (x0[i] < lower[i] || x0[i] > upper[i]) {
      throw std::invalid_argument("initial value outside bounds for parameter " + std::to_string(i));
    }
  }

  BoxedObjective obj(f, lower, upper);
  Point start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = (x0[i] - lower[i]) / (upper[i] - lower[i]);
  const double f_start = obj(start);
  Simplex s = build(start, f_start, options.initial_step, obj);

  NelderMeadResult result;
  int restarts_left = options.restarts;
  while (true) {
    if (s.f[0] <= options.f_target) {
      result.converged = true;
      break;
    }
    if (small(s, options)) {
      if (restarts_left-- > 0) {
        s = build(s.v[0], s.f[0], options.initial_step, obj);
        continue;
      }
      result.converged = true;
      break;
    }
    if (obj.evaluations >= options.max_evaluations) break;
    ++result.iterations;

    Point centroid(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += s.v[j][i] / static_cast<double>(n);
    }
    Point& worst = s.v[n];
    Point reflected = affine(centroid, worst, 1.0);
    const double fr = obj(reflected);
    if (fr < s.f[0]) {
      Point expanded = affine(centroid, worst, 2.0);
      const double fe = obj(expanded);
      if (fe < fr) {
        worst = std::move(expanded);
        s.f[n] = fe;
      } else {
        worst = std::move(reflected);
        s.f[n] = fr;
      }
    } else if (fr < s.f[n - 1]) {
      worst = std::move(reflected);
      s.f[n] = fr;
    } else {
      const bool outside = fr < s.f[n];
      Point contracted = outside ? affine(centroid, worst, 0.5) : affine(centroid, worst, -0.5);
      const double fc = obj(contracted);
      if (fc < std::min(fr, s.f[n])) {
        worst = std::move(contracted);
        s.f[n] = fc;
      } else {
        for (std::size_t j = 1; j <= n; ++j) {
          for (std::size_t i = 0; i < n; ++i) s.v[j][i] = s.v[0][i] + 0.5 * (s.v[j][i] - s.v[0][i]);
          s.f[j] = obj(s.v[j]);
        }
      }
    }
    s.sort();
  }

  result.x = obj.to_box(s.v[0]);
  result.f = s.f[0];
  result.evaluations = obj.evaluations;
  return result;
}

}  // namespace levysmile

#include "levysmile/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <stdexcept>

namespace levysmile {

namespace {

using cplx = std::complex<double>;
using Gauss32 = boost::math::quadrature::gauss<double, 32>;

constexpr int kPanelNodes = 32;
constexpr double kExtension = 16.0;

// Accumulates one 32-point panel on [lo, hi] into acc/mass; returns the
// per-output abs mass of this panel in `panel`.
void add_panel(double lo, double hi, std::size_t n_out, const LineIntegrand& f,
               std::vector<cplx>& buf, std::vector<cplx>& acc, std::vector<double>& mass,
               std::vector<double>& panel, std::size_t& evals) {
  const auto& x = Gauss32::abscissa();
  const auto& w = Gauss32::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  // boost stores the nonnegative half of the symmetric rule
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int signs = x[i] == 0.0 ? 1 : 2;
    for (int s = 0; s < signs; ++s) {
      const double node = mid + (s == 0 ? 1.0 : -1.0) * half * x[i];
      const double weight = half * w[i];
      f(node, buf);
      ++evals;
      for (std::size_t o = 0; o < n_out; ++o) {
        acc[o] += weight * buf[o];
        const double a = weight * std::abs(buf[o]);
        mass[o] += a;
        panel[o] += a;
      }
    }
  }
}

double panel_width_for(double frequency) {
  // 32 nodes resolve ~5 oscillation periods per panel comfortably
  const double w = 24.0 / std::max(frequency, 1e-3);
  return std::clamp(w, 0.25, 8.0);
}

bool converged(const std::vector<cplx>& acc, const std::vector<double>& mass,
               const std::vector<double>& panel, double tol) {
  for (std::size_t o = 0; o < acc.size(); ++o) {
    const double scale = std::max(std::abs(acc[o]), 1e-6 * mass[o]);
    if (panel[o] > tol * scale) return false;
  }
  return true;
}

LineIntegral march(const QuadratureSpec& spec, double nominal, const LineHints& hints,
                   std::size_t n_out, const LineIntegrand& f) {
  LineIntegral out;
  out.values.assign(n_out, 0.0);
  out.abs_mass.assign(n_out, 0.0);
  std::vector<cplx> buf(n_out);
  std::vector<double> panel(n_out);

  const double base = std::min(panel_width_for(hints.frequency), nominal);
  const double cap = kExtension * nominal;
  double reach = 0.0;
  bool done = false;
  int panels = 0;
  while (!done) {
    // a panel no wider than twice its distance to the singularity keeps the
    // Gauss-Legendre error far below tol
    const double width = std::min(base, 2.0 * std::hypot(reach, hints.pole_distance));
    std::fill(panel.begin(), panel.end(), 0.0);
    add_panel(reach, reach + width, n_out, f, buf, out.values, out.abs_mass, panel,
              out.evaluations);
    add_panel(-reach - width, -reach, n_out, f, buf, out.values, out.abs_mass, panel,
              out.evaluations);
    reach += width;
    ++panels;
    const bool small = panels > 2 && converged(out.values, out.abs_mass, panel, spec.tol);
    if (small) {
      done = true;
    } else if (reach >= cap) {
      out.tail_resolved = false;
      done = true;
    }
  }
  out.half_width = reach;
  return out;
}

LineIntegral fixed_grid(const QuadratureSpec& spec, double half_width, std::size_t n_out,
                        const LineIntegrand& f) {
  LineIntegral out;
  out.values.assign(n_out, 0.0);
  out.abs_mass.assign(n_out, 0.0);
  out.half_width = half_width;
  std::vector<cplx> buf(n_out);
  std::vector<double> edge(n_out, 0.0);

  if (spec.rule == QuadratureRule::GaussLegendrePanels) {
    const int per_side = std::max(1, (spec.n_nodes + 2 * kPanelNodes - 1) / (2 * kPanelNodes));
    const double width = half_width / per_side;
    std::vector<double> scratch(n_out);
    for (int j = 0; j < per_side; ++j) {
      std::fill(scratch.begin(), scratch.end(), 0.0);
      add_panel(j * width, (j + 1) * width, n_out, f, buf, out.values, out.abs_mass, scratch,
                out.evaluations);
      add_panel(-(j + 1) * width, -j * width, n_out, f, buf, out.values, out.abs_mass,
                scratch, out.evaluations);
      if (j == per_side - 1) edge = scratch;
    }
  } else {
    const int intervals = spec.n_nodes;
    const double h = 2.0 * half_width / intervals;
    // outermost tenth of the grid on each side serves as the tail probe
    const int probe = std::max(2, intervals / 20);
    for (int i = 0; i <= intervals; ++i) {
      const double x = -half_width + i * h;
      const double w = (i == 0 || i == intervals) ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
      f(x, buf);
      ++out.evaluations;
      for (std::size_t o = 0; o < n_out; ++o) {
        out.values[o] += w * buf[o];
        const double a = w * std::abs(buf[o]);
        out.abs_mass[o] += a;
        if (i < probe || i > intervals - probe) edge[o] += a;
      }
    }
  }
  out.tail_resolved = converged(out.values, out.abs_mass, edge, spec.tail_tol);
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!std::isfinite(contour_imag)) throw std::invalid_argument("contour_imag must be finite");
  if (!(half_width >= 0.0)) throw std::invalid_argument("half_width must be >= 0");
  if (n_nodes != 0) {
    if (n_nodes < 64 || n_nodes % 2 != 0) {
      throw std::invalid_argument("n_nodes must be an even integer >= 64 (or 0 for automatic)");
    }
  } else if (rule == QuadratureRule::Simpson) {
    throw std::invalid_argument("the Simpson rule needs an explicit n_nodes");
  }
  if (!(tol > 0.0) || !(tail_tol > 0.0)) throw std::invalid_argument("tolerances must be > 0");
}

LineIntegral integrate_line(const QuadratureSpec& spec, const LineHints& hints,
                            std::size_t n_out, const LineIntegrand& f) {
  spec.validate();
  const double nominal = spec.half_width > 0.0 ? spec.half_width : hints.half_width;
  if (!(nominal > 0.0)) throw std::invalid_argument("integration half-width must be > 0");
  if (spec.n_nodes == 0) return march(spec, nominal, hints, n_out, f);
  return fixed_grid(spec, nominal, n_out, f);
}

void gauss_legendre(std::size_t n, double lo, double hi, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
  nodes.clear();
  weights.clear();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (double x : zeros) {
    const double dp = boost::math::legendre_p_prime(static_cast<int>(n), x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes.push_back(mid + half * x);
    weights.push_back(half * w);
    if (x != 0.0) {
      nodes.push_back(mid - half * x);
      weights.push_back(half * w);
    }
  }
}

}  // namespace levysmile

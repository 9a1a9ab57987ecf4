// Acceptance checks, one line per criterion. Run with no arguments for all
// of them or with criterion ids (1..10, runtime) for a subset; the exit code
// is nonzero when any selected check fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "levysmile/black_scholes.hpp"
#include "levysmile/calibration.hpp"
#include "levysmile/iv_expansion.hpp"
#include "levysmile/model.hpp"
#include "levysmile/monte_carlo.hpp"
#include "levysmile/series_pricer.hpp"

using namespace levysmile;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

void require(Verdict& v, bool ok, const std::string& what) {
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += what;
  if (!ok) {
    v.pass = false;
    v.detail += " [miss]";
  }
}

void within_budget(Verdict& v, Clock::time_point start, double budget) {
  const double s = seconds_since(start);
  require(v, s < budget, fmt("runtime %.1fs < %.0fs", s, budget));
}

ModelParams sp500() {
  return {0.059, 0.057, 0.009, 0.010, 1.0, 0.410, {1.105, -0.076, 0.078}, {1.095, -0.076, 0.078}};
}

ModelParams impvol() {
  return {0.2, 0.1, 0.0, 0.0, 1.0, -1.25, {1.0, -0.2, 0.2}, {1.0, -0.1, 0.1}};
}

ModelParams impvol2() {
  return {0.3, 0.0, 0.0, 0.0, 4.0, -1.25, {}, {1.0, -0.4, 0.2}};
}

ModelParams density2() {
  return {0.2, 0.1, 0.0, 0.0, 1.0, -0.95, {1.0, -0.1, 0.15}, {1.0, -0.1, 0.15}};
}

ModelParams diffusion(double a0, double a1, double beta, double eps) {
  ModelParams p;
  p.a0 = a0;
  p.a1 = a1;
  p.beta = beta;
  p.eps = eps;
  return p;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

double bs_closed(double s, double t, double y, double k) {
  const double sd = s * std::sqrt(t);
  const double dp = (y - k) / sd + 0.5 * sd;
  const auto n = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  return std::exp(y) * n(dp) - std::exp(k) * n(dp - sd);
}

// IV^(N) at 142 days with the S&P 500 fit, rows N = 0..6
constexpr std::array<double, 10> kRefLm{-0.225, -0.180, -0.135, -0.090, -0.045, 0.000, 0.045, 0.090, 0.135, 0.180};
constexpr std::array<std::array<double, 10>, 7> kRefIv{{
    {.2420, .2162, .1933, .1719, .1486, .1222, .1014, .0929, .0963, .1046},
    {.2929, .2683, .2476, .2306, .2166, .2006, .1676, .1318, .1183, .1211},
    {.2960, .2709, .2479, .2265, .2049, .1841, .1743, .1558, .1341, .1307},
    {.2951, .2698, .2475, .2276, .2088, .1887, .1634, .1547, .1429, .1354},
    {.2953, .2701, .2475, .2272, .2077, .1877, .1694, .1483, .1437, .1379},
    {.2952, .2700, .2475, .2273, .2079, .1879, .1674, .1518, .1404, .1390},
    {.2952, .2700, .2475, .2273, .2080, .1878, .1675, .1519, .1403, .1391},
}};

// Smile IV^(N) for N = 0..6 at maturity t.
std::vector<std::vector<double>> reference_smiles(double t) {
  const std::vector<double> ks(kRefLm.begin(), kRefLm.end());
  std::vector<std::vector<double>> out;
  for (int n = 0; n <= 6; ++n) {
    const auto prices = price_series(sp500(), t, 0.0, ks, OptionKind::Call, n);
    std::vector<double> row;
    for (std::size_t i = 0; i < ks.size(); ++i) row.push_back(implied_vol(prices[i].value, t, 0.0, ks[i], OptionKind::Call));
    out.push_back(row);
  }
  return out;
}

double reference_gap(const std::vector<std::vector<double>>& iv) {
  double worst = 0.0;
  for (std::size_t n = 0; n < iv.size(); ++n) {
    for (std::size_t i = 0; i < kRefLm.size(); ++i) worst = std::max(worst, std::abs(iv[n][i] - kRefIv[n][i]));
  }
  return worst;
}

Verdict black_scholes_reduction() {
  const auto start = Clock::now();
  Verdict v;
  double worst = 0.0;
  const double y = 0.0;
  const auto strikes = linspace(-1.0, 1.0, 21);
  for (double a0 : {0.1, 0.2, 0.5}) {
    ModelParams p;
    p.a0 = a0;
    for (double t : {0.125, 1.0, 5.0}) {
      const auto prices = price_series(p, t, y, strikes, OptionKind::Call, 0);
      for (std::size_t i = 0; i < strikes.size(); ++i) {
        worst = std::max(worst, std::abs(prices[i].value - bs_closed(a0, t, y, strikes[i])) / std::exp(y));
      }
    }
  }
  require(v, worst <= 1e-8, fmt("max |u0 - BS|/e^y = %.2e <= 1e-8", worst));
  within_budget(v, start, 5.0);
  return v;
}

Verdict reference_regression() {
  const auto start = Clock::now();
  Verdict v;
  const auto iv = reference_smiles(142.0 / 365.0);
  const double gap = reference_gap(iv);
  require(v, gap <= 5e-3, fmt("ACT/365 max |IV - reference| = %.2e <= 5e-3", gap));
  if (gap > 5e-3) {
    const double alt = reference_gap(reference_smiles(142.0 / 252.0));
    v.detail += fmt(" (ACT/252 gives %.2e)", alt);
  }
  double d65 = 0.0;
  double d36 = 0.0;
  for (std::size_t i = 0; i < kRefLm.size(); ++i) {
    d65 = std::max(d65, std::abs(iv[6][i] - iv[5][i]));
    d36 = std::max(d36, std::abs(iv[3][i] - iv[6][i]));
  }
  require(v, std::abs(iv[6][5] - 0.1878) <= 5e-3, fmt("IV6(LM=0) = %.4f", iv[6][5]));
  require(v, d65 <= 1e-3, fmt("max |IV6 - IV5| = %.2e <= 1e-3", d65));
  require(v, d36 <= 1e-2, fmt("max |IV3 - IV6| = %.2e <= 1e-2", d36));
  within_budget(v, start, 30.0);
  return v;
}

Verdict monte_carlo_agreement() {
  const auto start = Clock::now();
  Verdict v;
  const auto p = impvol();
  const double t = 0.25;
  const double y = -0.1;
  std::vector<double> ks;
  for (double lmmr : linspace(-1.0, 1.0, 7)) ks.push_back(y + lmmr * t);
  McConfig cfg;
  cfg.n_paths = 200000;
  cfg.dt = 1e-3;
  const auto mc = mc_price(p, t, y, ks, OptionKind::Call, cfg);
  const auto series = price_series(p, t, y, ks, OptionKind::Call, 10);
  double worst = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double iv_series = implied_vol(series[i].value, t, y, ks[i], OptionKind::Call);
    const double iv_mc = implied_vol(mc[i].price, t, y, ks[i], OptionKind::Call);
    const double iv_se = mc[i].std_error / bs_vega({iv_mc, t, y, ks[i]});
    worst = std::max(worst, std::abs(iv_series - iv_mc) / iv_se);
  }
  require(v, worst <= 3.0, fmt("max |IV_series - IV_mc| / se = %.2f <= 3", worst));
  within_budget(v, start, 300.0);
  return v;
}

Verdict iv_series_convergence() {
  const auto start = Clock::now();
  Verdict v;
  const auto p = impvol2();
  const double t = 0.125;
  const double y = 0.1;
  std::vector<double> ks;
  for (double lmmr : linspace(-0.5, 1.0, 11)) ks.push_back(y + lmmr * t);
  const auto series = sigma_series(p, t, y, ks, OptionKind::Call, 5);
  const auto exact = price_series(p, t, y, ks, OptionKind::Call, 12);
  double e3 = 0.0;
  double e5 = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double s = implied_vol(exact[i].value, t, y, ks[i], OptionKind::Call);
    e3 = std::max(e3, std::abs(series[i].partial_sums[3] - s));
    e5 = std::max(e5, std::abs(series[i].partial_sums[5] - s));
  }
  require(v, e3 <= 1e-3, fmt("max |s3 - s_eps| = %.2e <= 1e-3", e3));
  require(v, e5 <= 2e-4, fmt("max |s5 - s_eps| = %.2e <= 2e-4", e5));
  std::vector<double> outside;
  for (double lmmr : {-2.0, -1.0, 3.5, 5.0}) outside.push_back(y + lmmr * t);
  int tripped = 0;
  for (const auto& s : sigma_series(p, t, y, outside, OptionKind::Call, 6)) tripped += s.divergence_flag ? 1 : 0;
  require(v, tripped > 0, fmt("divergence flag trips at %d of 4 LMMR outside [-0.5, 3]", tripped));
  within_budget(v, start, 60.0);
  return v;
}

Verdict closed_form_iv() {
  Verdict v;
  const auto p = diffusion(0.5, 0.3, -2.0, 1.0);
  const double t = 0.5;
  std::vector<double> lms;
  for (double lm : linspace(-0.5, 0.5, 21)) {
    if (lm > -0.5 + 1e-12) lms.push_back(lm);
  }
  const auto start = Clock::now();
  std::vector<double> cf;
  for (double lm : lms) cf.push_back(sigma_closed_form(p, {t, 0.0, lm}, 10));
  const double cf_seconds = seconds_since(start);
  const auto exact = price_series(p, t, 0.0, lms, OptionKind::Call, 12);
  double worst = 0.0;
  double worst_lm = 0.0;
  for (std::size_t i = 0; i < lms.size(); ++i) {
    const double gap = std::abs(cf[i] - implied_vol(exact[i].value, t, 0.0, lms[i], OptionKind::Call));
    if (gap > worst) {
      worst = gap;
      worst_lm = lms[i];
    }
  }
  require(v, worst <= 5e-3, fmt("max |s(2,10) - s_eps| = %.2e at LM %.2f <= 5e-3", worst, worst_lm));
  require(v, cf_seconds < 10.0, fmt("closed form %.3fs < 10s", cf_seconds));
  return v;
}

Verdict flat_shift_identity() {
  const auto start = Clock::now();
  Verdict v;
  double e1 = 0.0;
  double e2 = 0.0;
  double ratio = 0.0;
  for (const auto& [a0, a1] : {std::pair{0.5, 0.3}, std::pair{0.2, 0.1}}) {
    for (double t : {0.1, 0.5, 2.0}) {
      for (double k : {-0.3, 0.0, 0.25}) {
        const auto cf = sigma_closed_form_terms(diffusion(a0, a1, 0.0, 1.0), {t, 0.0, k}, 10);
        e1 = std::max(e1, std::abs(cf.sigma1 - a1 * a1 / (2.0 * a0)));
        e2 = std::max(e2, std::abs(cf.sigma2 + std::pow(a1, 4) / (8.0 * std::pow(a0, 3))));
        for (double eps : {0.1, 0.25, 0.5}) {
          const double s = sigma_closed_form(diffusion(a0, a1, 0.0, eps), {t, 0.0, k}, 10);
          const double bound = std::pow(eps, 3) * std::pow(a1, 6) / std::pow(a0, 5);
          ratio = std::max(ratio, std::abs(s - std::sqrt(a0 * a0 + eps * a1 * a1)) / bound);
        }
      }
    }
  }
  require(v, e1 <= 1e-10, fmt("max |s1 - a1^2/2a0| = %.1e", e1));
  require(v, e2 <= 1e-10, fmt("max |s2 + a1^4/8a0^3| = %.1e", e2));
  require(v, ratio <= 1.0, fmt("remainder / bound = %.3f <= 1", ratio));
  within_budget(v, start, 10.0);
  return v;
}

Verdict duhamel_oracle() {
  const auto start = Clock::now();
  Verdict v;
  const auto p = impvol2();
  const double t = 0.125;
  const double y = 0.1;
  double worst = 0.0;
  for (double lmmr : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
    const OptionSpec opt{t, y, y + lmmr * t};
    const double u1 = price_series(p, opt, 1).terms[1] / p.eps;
    const double oracle = duhamel_u1_oracle(p, opt, 48);
    worst = std::max(worst, std::abs(u1 - oracle) / std::abs(oracle));
  }
  require(v, worst <= 1e-6, fmt("max relative gap = %.2e <= 1e-6", worst));
  within_budget(v, start, 60.0);
  return v;
}

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

Verdict density_properties() {
  const auto start = Clock::now();
  Verdict v;
  const double t = 1.0;
  const double y = 0.6;
  const auto z = linspace(-3.0, 3.0, 1201);
  const double h = 6.0 / 1200.0;
  const auto d8 = fk_density(density2(), t, y, z, 8);
  std::vector<double> mass(z.size());
  std::vector<double> first(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    mass[i] = d8[i].value;
    first[i] = std::exp(z[i]) * d8[i].value;
  }
  const double m = trapezoid(mass, h);
  const double m1 = trapezoid(first, h);
  require(v, std::abs(m - 1.0) <= 1e-4, fmt("mass %.7f", m));
  require(v, std::abs(m1 - std::exp(y)) <= 1e-4, fmt("E e^Y - e^y = %.2e", m1 - std::exp(y)));

  auto killed = density2();
  killed.c0 = 0.02;
  killed.c1 = 0.03;
  const auto dk = fk_density(killed, t, y, z, 8);
  for (std::size_t i = 0; i < z.size(); ++i) mass[i] = dk[i].value;
  const double mk = trapezoid(mass, h);
  require(v, mk <= 1.0 + 1e-6, fmt("killed mass %.6f <= 1+1e-6", mk));

  const auto grid = linspace(-2.0, 2.0, 401);
  const auto d3 = fk_density(density2(), t, y, grid, 3);
  double sup = 0.0;
  double at = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // p^(2) is p^(3) without its last term
    const double gap = std::abs(d3[i].terms[3]);
    if (gap > sup) {
      sup = gap;
      at = grid[i];
    }
  }
  require(v, sup <= 1e-3, fmt("sup |p3 - p2| = %.2e at z=%.2f <= 1e-3", sup, at));
  within_budget(v, start, 60.0);
  return v;
}

Verdict calibration_round_trip() {
  const auto start = Clock::now();
  Verdict v;
  const auto truth = sp500();
  VolSurface surface;
  for (int days : {87, 115, 142}) {
    const double t = days / 365.0;
    const std::vector<double> ks(kRefLm.begin(), kRefLm.end());
    const auto prices = price_series(truth, t, 0.0, ks, OptionKind::Call, 6);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      surface.quotes.push_back({days, ks[i], implied_vol(prices[i].value, t, 0.0, ks[i], OptionKind::Call)});
    }
  }
  CalibrationSpec spec;
  spec.base = truth;
  const std::array names{"a0", "a1", "c0", "c1", "beta", "gamma0", "gamma1", "m", "s"};
  const std::array values{0.059, 0.057, 0.009, 0.010, 0.410, 1.105, 1.095, -0.076, 0.078};
  const std::array lower{0.005, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, -0.5, 0.01};
  const std::array upper{0.5, 0.5, 0.2, 0.2, 2.0, 5.0, 5.0, 0.5, 0.5};
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double factor = (i % 2 == 0) ? 1.2 : 0.8;
    spec.free.push_back({names[i], values[i] * factor, lower[i], upper[i]});
  }
  spec.optimizer.max_evaluations = 3000;
  // an order of magnitude below the required RMSE
  spec.optimizer.f_target = static_cast<double>(surface.quotes.size()) * 1e-10;
  const auto fit = calibrate(surface, spec);
  require(v, fit.rmse <= 1e-4, fmt("RMSE %.2e <= 1e-4 after %d evaluations", fit.rmse, fit.evaluations));

  const double base = objective(fit.params, surface, 6);
  double worst = 0.0;
  for (double c : {0.5, 2.0}) {
    ModelParams q = fit.params;
    q.eps /= c;
    q.a1 *= std::sqrt(c);
    q.c1 *= c;
    q.nu1.intensity *= c;
    worst = std::max(worst, std::abs(objective(q, surface, 6) - base));
  }
  require(v, worst <= 1e-10, fmt("eps-rescaling objective change %.1e <= 1e-10", worst));
  within_budget(v, start, 600.0);
  return v;
}

Verdict epsilon_bound_check() {
  const auto start = Clock::now();
  Verdict v;
  const auto p = diffusion(0.5, 0.3, -2.0, 1.0);
  const double analytic = epsilon_bound(p, 0.0, 1.0, 1.0);
  const double gap = std::abs(analytic - 0.25 / 0.09);
  require(v, gap <= 1e-12, fmt("|bound - a0^2/a1^2| = %.1e <= 1e-12", gap));
  std::vector<double> coarse;
  for (int i = -1000; i <= 1000; ++i) coarse.push_back(0.1 * i);
  std::vector<double> fine;
  for (int i = -10000; i <= 10000; ++i) fine.push_back(0.01 * i);
  const double b0 = epsilon_bound(sp500(), 1.0, 1.0, 2.0, coarse);
  const double b1 = epsilon_bound(sp500(), 1.0, 1.0, 2.0, fine);
  require(v, std::abs(b0 - b1) <= 1e-4, fmt("grid refinement change %.1e <= 1e-4 (bound %.6f)", std::abs(b0 - b1), b1));
  within_budget(v, start, 10.0);
  return v;
}

Verdict runtime_monotone() {
  Verdict v;
  const double t = 142.0 / 365.0;
  const std::vector<double> ks(kRefLm.begin(), kRefLm.end());
  std::vector<double> best;
  for (int n = 0; n <= 6; ++n) {
    double fastest = 1e300;
    for (int rep = 0; rep < 7; ++rep) {
      const auto start = Clock::now();
      const auto prices = price_series(sp500(), t, 0.0, ks, OptionKind::Call, n);
      for (std::size_t i = 0; i < ks.size(); ++i) implied_vol(prices[i].value, t, 0.0, ks[i], OptionKind::Call);
      fastest = std::min(fastest, seconds_since(start));
    }
    best.push_back(fastest);
  }
  bool monotone = true;
  std::string ratios;
  for (std::size_t n = 0; n < best.size(); ++n) {
    if (n > 0 && best[n] < best[n - 1]) monotone = false;
    ratios += fmt("%s%.2f", n ? " " : "", best[n] / best[0]);
  }
  require(v, monotone, "T_N/T_0 = " + ratios + " nondecreasing");
  return v;
}

struct Criterion {
  std::string id;
  std::string title;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"1", "Black-Scholes reduction", black_scholes_reduction},
      {"2", "IV^(N) reference smiles", reference_regression},
      {"3", "Monte Carlo agreement", monte_carlo_agreement},
      {"4", "IV-series convergence", iv_series_convergence},
      {"5", "closed-form IV", closed_form_iv},
      {"6", "flat-shift total-variance identity", flat_shift_identity},
      {"7", "Duhamel oracle", duhamel_oracle},
      {"8", "density properties", density_properties},
      {"9", "calibration round trip", calibration_round_trip},
      {"10", "eps-bound diagnostic", epsilon_bound_check},
      {"runtime", "runtime nondecreasing in N", runtime_monotone},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  criterion %s (%s): %s\n", v.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

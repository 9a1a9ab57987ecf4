#include "levysmile/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <variant>

#include "levysmile/black_scholes.hpp"
#include "levysmile/calibration.hpp"
#include "levysmile/config.hpp"
#include "levysmile/errors.hpp"
#include "levysmile/iv_expansion.hpp"
#include "levysmile/monte_carlo.hpp"
#include "levysmile/series_pricer.hpp"

namespace levysmile::cli {

namespace {

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void write_csv(const Table& t, std::ostream& os) {
  os << std::setprecision(10);
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      std::visit([&](const auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, bool>) {
          os << (v ? 1 : 0);
        } else {
          os << v;
        }
      }, row[c]);
    }
    os << '\n';
  }
}

nlohmann::json cell_json(const Cell& cell) {
  return std::visit([](const auto& v) -> nlohmann::json {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>) {
      if (!std::isfinite(v)) return nullptr;
    }
    return v;
  }, cell);
}

nlohmann::json table_json(const Table& t) {
  auto arr = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[t.columns[c]] = cell_json(row[c]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

const char* kind_name(OptionKind k) { return k == OptionKind::Call ? "call" : "put"; }

struct Options {
  std::string config;
  std::string out;
  /// Empty picks json for calibrate and csv elsewhere.
  std::string format;
  double t = 1.0;
  double y = 0.0;
  std::vector<double> k;
  std::vector<double> z;
  double z_min = -2.0;
  double z_max = 2.0;
  int z_points = 0;
  int order = 6;
  int m_terms = 10;
  std::optional<int> q;
  OptionKind kind = OptionKind::Call;
  std::size_t paths = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::string surface;
  std::vector<std::string> free;
  int max_evals = 3000;
  double day_count = 365.0;
  double bound_a = 0.0;
  double bound_b = 1.0;
  double eta_norm = 1.0;
  std::optional<double> contour_imag;
  int quad_nodes = 0;
  double quad_halfwidth = 0.0;
};

QuadratureSpec quadrature(const Options& o, double default_contour) {
  QuadratureSpec q;
  q.contour_imag = o.contour_imag.value_or(default_contour);
  q.n_nodes = o.quad_nodes;
  q.half_width = o.quad_halfwidth;
  q.validate();
  return q;
}

std::vector<double> strikes(const Options& o) {
  if (o.k.empty()) throw std::invalid_argument("--k needs at least one log-strike");
  return o.k;
}

Table cmd_price(const ModelParams& p, const Options& o) {
  const auto ks = strikes(o);
  const auto prices = price_series(p, o.t, o.y, ks, o.kind, o.order, quadrature(o, -1.5));
  Table t;
  t.columns = {"t", "y", "k", "kind", "N", "price", "imag_residue", "roundoff"};
  for (int n = 0; n <= o.order; ++n) t.columns.push_back("term_" + std::to_string(n));
  for (std::size_t i = 0; i < ks.size(); ++i) {
    std::vector<Cell> row{o.t, o.y, ks[i], std::string(kind_name(o.kind)),
                          static_cast<long long>(o.order), prices[i].value, prices[i].imag_residue,
                          std::accumulate(prices[i].roundoff.begin(), prices[i].roundoff.end(), 0.0)};
    for (double term : prices[i].terms) row.emplace_back(term);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_density(const ModelParams& p, const Options& o) {
  std::vector<double> zs = o.z;
  if (o.z_points > 0) {
    if (o.z_points < 2) throw std::invalid_argument("--z-points must be >= 2");
    for (int i = 0; i < o.z_points; ++i) {
      zs.push_back(o.z_min + (o.z_max - o.z_min) * i / (o.z_points - 1));
    }
  }
  if (zs.empty()) throw std::invalid_argument("give --z values or a --z-points grid");
  const auto dens = fk_density(p, o.t, o.y, zs, o.order, quadrature(o, 0.0));
  Table t;
  t.columns = {"t", "y", "z", "N", "density"};
  for (int n = 0; n <= o.order; ++n) t.columns.push_back("term_" + std::to_string(n));
  for (std::size_t i = 0; i < zs.size(); ++i) {
    std::vector<Cell> row{o.t, o.y, zs[i], static_cast<long long>(o.order), dens[i].value};
    for (double term : dens[i].terms) row.emplace_back(term);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_smile(const ModelParams& p, const Options& o) {
  const auto ks = strikes(o);
  const auto prices = price_series(p, o.t, o.y, ks, o.kind, o.order, quadrature(o, -1.5));
  Table t;
  t.columns = {"k", "LM", "LMMR", "price", "implied_vol"};
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double iv = std::nan("");
    try {
      iv = implied_vol(prices[i].value, o.t, o.y, ks[i], o.kind);
    } catch (const NoArbitrageError&) {
      // reported as an empty value
    }
    t.rows.push_back({ks[i], ks[i] - o.y, (ks[i] - o.y) / o.t, prices[i].value, iv});
  }
  return t;
}

Table cmd_iv_series(const ModelParams& p, const Options& o) {
  const auto ks = strikes(o);
  const auto series = sigma_series(p, o.t, o.y, ks, o.kind, o.order, quadrature(o, -1.5));
  Table t;
  t.columns = {"k", "LM", "LMMR"};
  for (int n = 0; n <= o.order; ++n) t.columns.push_back("sigma_partial_" + std::to_string(n));
  t.columns.push_back("divergence_flag");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    std::vector<Cell> row{ks[i], ks[i] - o.y, (ks[i] - o.y) / o.t};
    for (double s : series[i].partial_sums) row.emplace_back(s);
    row.emplace_back(series[i].divergence_flag);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_iv_approx(const ModelParams& p, const Options& o) {
  const auto ks = strikes(o);
  // local jumps enter through their moment expansion
  std::optional<int> q = o.q;
  if (!q && !p.nu1.absent()) q = 8;
  Table t;
  t.columns = {"k", "LM", "LMMR", "sigma_1", "sigma_2", "sigma_2M"};
  for (double k : ks) {
    const auto cf = sigma_closed_form_terms(p, {o.t, o.y, k, OptionKind::Call}, o.m_terms, q);
    t.rows.push_back({k, k - o.y, (k - o.y) / o.t, cf.sigma1, cf.sigma2, cf.sigma});
  }
  return t;
}

Table cmd_mc(const ModelParams& p, const Options& o) {
  const auto ks = strikes(o);
  McConfig cfg;
  cfg.n_paths = o.paths;
  cfg.dt = o.dt;
  cfg.seed = o.seed;
  cfg.n_threads = o.threads;
  const auto est = mc_price(p, o.t, o.y, ks, o.kind, cfg);
  Table t;
  t.columns = {"k", "kind", "price", "std_error", "default_fraction", "implied_vol", "iv_std_error"};
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double iv = std::nan("");
    double iv_se = std::nan("");
    try {
      iv = implied_vol(est[i].price, o.t, o.y, ks[i], o.kind);
      iv_se = est[i].std_error / bs_vega({iv, o.t, o.y, ks[i], o.kind});
    } catch (const NoArbitrageError&) {
    }
    t.rows.push_back({ks[i], std::string(kind_name(o.kind)), est[i].price, est[i].std_error,
                      est[i].default_fraction(), iv, iv_se});
  }
  return t;
}

Table cmd_survival(const ModelParams& p, const Options& o, std::ostream& err) {
  const double s = survival_probability(p, o.t, o.y, o.order);
  if (s < -1e-6 || s > 1.0 + 1e-6) {
    err << "warning: survival probability " << s << " outside [0, 1]; the series may not have converged\n";
  }
  return Table{{"t", "y", "N", "survival"}, {{o.t, o.y, static_cast<long long>(o.order), s}}};
}

Table cmd_eps_bound(const ModelParams& p, const Options& o) {
  const double bound = epsilon_bound(p, o.bound_a, o.bound_b, o.eta_norm);
  return Table{{"A", "B", "eta_norm", "eps_bound", "eps", "admissible"},
               {{o.bound_a, o.bound_b, o.eta_norm, bound, p.eps, p.eps <= bound}}};
}

const std::map<std::string, std::pair<double, double>>& default_bounds() {
  static const std::map<std::string, std::pair<double, double>> b = {
      {"a0", {1e-3, 2.0}},     {"a1", {0.0, 2.0}},      {"c0", {0.0, 1.0}},
      {"c1", {0.0, 1.0}},      {"eps", {0.0, 10.0}},    {"beta", {-5.0, 5.0}},
      {"gamma0", {0.0, 20.0}}, {"gamma1", {0.0, 20.0}}, {"m", {-1.0, 1.0}},
      {"s", {1e-3, 1.0}},      {"m0", {-1.0, 1.0}},     {"m1", {-1.0, 1.0}},
      {"s0", {1e-3, 1.0}},     {"s1", {1e-3, 1.0}}};
  return b;
}

nlohmann::json params_json(const ModelParams& p) {
  return {{"a0", p.a0},         {"a1", p.a1},         {"c0", p.c0},
          {"c1", p.c1},         {"eps", p.eps},       {"beta", p.beta},
          {"gamma0", p.nu0.intensity}, {"m0", p.nu0.mean}, {"s0", p.nu0.std},
          {"gamma1", p.nu1.intensity}, {"m1", p.nu1.mean}, {"s1", p.nu1.std}};
}

void cmd_calibrate(const ModelParams& p, const Options& o, std::ostream& os) {
  if (o.surface.empty()) throw std::invalid_argument("calibrate needs --surface");
  const VolSurface surface = load_surface(o.surface);
  CalibrationSpec spec;
  spec.base = p;
  spec.order = o.order;
  spec.quad = quadrature(o, -1.5);
  spec.optimizer.max_evaluations = o.max_evals;
  spec.day_count = o.day_count;
  for (const auto& name : o.free) {
    const auto it = default_bounds().find(name);
    if (it == default_bounds().end()) throw std::invalid_argument("cannot calibrate '" + name + "'");
    ModelParams probe = p;
    double initial = 0.0;
    if (name == "m") {
      initial = p.nu0.mean;
    } else if (name == "s") {
      initial = p.nu0.std;
    } else {
      initial = *model_parameter(probe, name);
    }
    spec.free.push_back({name, initial, it->second.first, it->second.second});
  }
  const CalibrationResult r = calibrate(surface, spec);

  Table residuals;
  residuals.columns = {"maturity_days", "log_moneyness", "implied_vol", "model_vol", "residual", "failed"};
  for (const auto& f : r.fits) {
    residuals.rows.push_back({static_cast<long long>(f.quote.maturity_days), f.quote.log_moneyness,
                              f.quote.implied_vol, f.model_vol, f.residual, f.failed});
  }
  if (o.format == "csv") {
    write_csv(residuals, os);
    return;
  }
  nlohmann::json j;
  j["params"] = params_json(r.params);
  j["sse"] = r.sse;
  j["rmse"] = r.rmse;
  j["evaluations"] = r.evaluations;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["residuals"] = table_json(residuals);
  os << std::setw(2) << j << '\n';
}

void add_quadrature_flags(CLI::App* sub, Options& o) {
  sub->add_option("--contour-imag", o.contour_imag, "Imaginary part of the Fourier contour");
  sub->add_option("--quad-nodes", o.quad_nodes, "Fixed node count (0 = adaptive)");
  sub->add_option("--quad-halfwidth", o.quad_halfwidth, "Truncation half-width (0 = automatic)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Series pricing and implied volatility for local Levy-type models", "levysmile"};
  app.require_subcommand(1, 1);
  Options o;
  const std::map<std::string, OptionKind> kinds{{"call", OptionKind::Call}, {"put", OptionKind::Put}};

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Model parameter file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Write output here instead of stdout");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };
  const auto maturity = [&](CLI::App* sub) {
    sub->add_option("--t", o.t, "Maturity in years")->required();
    sub->add_option("--y", o.y, "Initial log-price");
  };
  const auto strike_list = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "Log-strikes, comma separated")->delimiter(',')->required();
  };
  const auto kind_flag = [&](CLI::App* sub) {
    sub->add_option("--kind", o.kind, "call or put")->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));
  };

  auto* price = app.add_subcommand("price", "Series prices with per-order terms");
  common(price);
  maturity(price);
  strike_list(price);
  kind_flag(price);
  price->add_option("--N", o.order, "Series order");
  add_quadrature_flags(price, o);

  auto* density = app.add_subcommand("density", "Feynman-Kac transition density");
  common(density);
  maturity(density);
  density->add_option("--z", o.z, "Terminal log-prices, comma separated")->delimiter(',');
  density->add_option("--z-min", o.z_min, "Grid start");
  density->add_option("--z-max", o.z_max, "Grid end");
  density->add_option("--z-points", o.z_points, "Uniform grid size");
  density->add_option("--N", o.order, "Series order");
  add_quadrature_flags(density, o);

  auto* smile = app.add_subcommand("smile", "Implied vols of series prices");
  common(smile);
  maturity(smile);
  strike_list(smile);
  kind_flag(smile);
  smile->add_option("--N", o.order, "Series order");
  add_quadrature_flags(smile, o);

  auto* iv_series = app.add_subcommand("iv-series", "Implied-vol expansion partial sums");
  common(iv_series);
  maturity(iv_series);
  strike_list(iv_series);
  kind_flag(iv_series);
  iv_series->add_option("--N", o.order, "Highest expansion order");
  add_quadrature_flags(iv_series, o);

  auto* iv_approx = app.add_subcommand("iv-approx", "Closed-form second-order implied vol");
  common(iv_approx);
  maturity(iv_approx);
  strike_list(iv_approx);
  iv_approx->add_option("--M", o.m_terms, "Time-expansion terms");
  iv_approx->add_option("--q", o.q, "Jump moment order (default 8 when local jumps are on)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo prices");
  common(mc);
  maturity(mc);
  strike_list(mc);
  kind_flag(mc);
  mc->add_option("--paths", o.paths, "Number of paths");
  mc->add_option("--dt", o.dt, "Euler step in years");
  mc->add_option("--seed", o.seed, "Random seed");
  mc->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* survival = app.add_subcommand("survival", "Survival probability to maturity");
  common(survival);
  maturity(survival);
  survival->add_option("--N", o.order, "Series order");

  auto* calib = app.add_subcommand("calibrate", "Least-squares fit to an implied-vol surface");
  common(calib);
  calib->add_option("--surface", o.surface, "Surface CSV")->required()->check(CLI::ExistingFile);
  o.free = {"a0", "a1", "c0", "c1", "beta", "gamma0", "gamma1", "m", "s"};
  calib->add_option("--free", o.free, "Parameters to fit, comma separated")->delimiter(',');
  calib->add_option("--N", o.order, "Series order");
  calib->add_option("--max-evals", o.max_evals, "Objective evaluation budget");
  calib->add_option("--day-count", o.day_count, "Days per year for maturities");
  add_quadrature_flags(calib, o);

  auto* eps = app.add_subcommand("eps-bound", "Largest admissible perturbation size");
  common(eps);
  eps->add_option("--A", o.bound_a, "Constant A >= 0");
  eps->add_option("--B", o.bound_b, "Constant B in (0, 1]");
  eps->add_option("--eta-norm", o.eta_norm, "L2 norm of eta");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  if (o.format.empty()) o.format = calib->parsed() ? "json" : "csv";

  try {
    const ModelParams params = load_model_params(o.config);
    std::ofstream file;
    if (!o.out.empty()) {
      file.open(o.out);
      if (!file) throw std::runtime_error("cannot write '" + o.out + "'");
    }
    std::ostream& os = o.out.empty() ? out : file;

    if (calib->parsed()) {
      cmd_calibrate(params, o, os);
      return 0;
    }
    Table table;
    if (price->parsed()) table = cmd_price(params, o);
    else if (density->parsed()) table = cmd_density(params, o);
    else if (smile->parsed()) table = cmd_smile(params, o);
    else if (iv_series->parsed()) table = cmd_iv_series(params, o);
    else if (iv_approx->parsed()) table = cmd_iv_approx(params, o);
    else if (mc->parsed()) table = cmd_mc(params, o);
    else if (survival->parsed()) table = cmd_survival(params, o, err);
    else table = cmd_eps_bound(params, o);

    if (o.format == "json") {
      os << std::setw(2) << table_json(table) << '\n';
    } else {
      write_csv(table, os);
    }
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace levysmile::cli

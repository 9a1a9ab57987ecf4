#include "levysmile/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "levysmile/black_scholes.hpp"
#include "levysmile/config.hpp"
#include "levysmile/errors.hpp"
#include "levysmile/series_pricer.hpp"

namespace levysmile {

namespace {

constexpr double kPenalty = 1.0;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& text, int lineno, const char* field) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(lineno) + ": bad " + field + " '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<int> VolSurface::maturities() const {
  std::set<int> m;
  for (const auto& q : quotes) m.insert(q.maturity_days);
  return {m.begin(), m.end()};
}

void VolSurface::validate() const {
  if (quotes.empty()) throw std::invalid_argument("volatility surface is empty");
  std::set<std::pair<int, double>> seen;
  for (std::size_t i = 0; i < quotes.size(); ++i) {
    const auto& q = quotes[i];
    const std::string where = "quote " + std::to_string(i + 1);
    if (q.maturity_days <= 0) throw std::invalid_argument(where + ": maturity_days must be > 0");
    if (!(q.implied_vol > 0.0)) throw std::invalid_argument(where + ": implied_vol must be > 0");
    if (!std::isfinite(q.log_moneyness)) throw std::invalid_argument(where + ": bad log_moneyness");
    if (!seen.insert({q.maturity_days, q.log_moneyness}).second) {
      throw std::invalid_argument(where + ": duplicate (maturity, log_moneyness)");
    }
  }
}

VolSurface parse_surface(std::istream& in) {
  VolSurface s;
  std::string line;
  int lineno = 0;
  bool header = false;
  std::set<std::pair<int, double>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (!header) {
      if (cells != std::vector<std::string>{"maturity_days", "log_moneyness", "implied_vol"}) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": expected header 'maturity_days,log_moneyness,implied_vol'");
      }
      header = true;
      continue;
    }
    if (cells.size() != 3) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 3 fields, got " +
                       std::to_string(cells.size()));
    }
    VolQuote q;
    q.maturity_days = parse_number<int>(cells[0], lineno, "maturity_days");
    q.log_moneyness = parse_number<double>(cells[1], lineno, "log_moneyness");
    q.implied_vol = parse_number<double>(cells[2], lineno, "implied_vol");
    if (q.maturity_days <= 0) {
      throw ParseError("line " + std::to_string(lineno) + ": maturity_days must be > 0");
    }
    if (!(q.implied_vol > 0.0) || !std::isfinite(q.implied_vol)) {
      throw ParseError("line " + std::to_string(lineno) + ": implied_vol must be > 0");
    }
    if (!std::isfinite(q.log_moneyness)) {
      throw ParseError("line " + std::to_string(lineno) + ": log_moneyness must be finite");
    }
    if (!seen.insert({q.maturity_days, q.log_moneyness}).second) {
      throw ParseError("line " + std::to_string(lineno) + ": duplicate quote for maturity " +
                       cells[0] + " and log-moneyness " + cells[1]);
    }
    s.quotes.push_back(q);
  }
  if (!header) throw ParseError("surface file is empty");
  if (s.quotes.empty()) throw ParseError("surface file has a header but no quotes");
  return s;
}

VolSurface load_surface(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open surface file '" + path.string() + "'");
  try {
    return parse_surface(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

FitReport evaluate_fit(const ModelParams& params, const VolSurface& surface, int order,
                       const QuadratureSpec& quad, double day_count) {
  surface.validate();
  if (!(day_count > 0.0)) throw std::invalid_argument("day_count must be > 0");

  FitReport report;
  report.fits.resize(surface.quotes.size());
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < surface.quotes.size(); ++i) {
    groups[surface.quotes[i].maturity_days].push_back(i);
  }

  const auto fail = [&](std::size_t i, const std::string& why) {
    QuoteFit& f = report.fits[i];
    f.failed = true;
    f.failure = why;
    f.model_vol = std::nan("");
    f.residual = kPenalty;
  };

  for (const auto& [days, idx] : groups) {
    const double t = days / day_count;
    std::vector<double> strikes;
    strikes.reserve(idx.size());
    for (auto i : idx) strikes.push_back(surface.quotes[i].log_moneyness);
    for (auto i : idx) report.fits[i].quote = surface.quotes[i];

    std::vector<SeriesPrice> prices;
    try {
      prices = price_series(params, t, 0.0, strikes, OptionKind::Call, order, quad);
    } catch (const NumericalError& e) {
      for (auto i : idx) fail(i, e.what());
      continue;
    }
    for (std::size_t j = 0; j < idx.size(); ++j) {
      QuoteFit& f = report.fits[idx[j]];
      try {
        f.model_vol = implied_vol(prices[j].value, t, 0.0, strikes[j], OptionKind::Call);
        f.residual = f.quote.implied_vol - f.model_vol;
      } catch (const std::exception& e) {
        fail(idx[j], e.what());
      }
    }
  }

  for (const auto& f : report.fits) {
    report.sse += f.residual * f.residual;
    report.n_failed += f.failed ? 1 : 0;
  }
  report.rmse = std::sqrt(report.sse / static_cast<double>(report.fits.size()));
  return report;
}

double objective(const ModelParams& params, const VolSurface& surface, int order,
                 const QuadratureSpec& quad, double day_count) {
  return evaluate_fit(params, surface, order, quad, day_count).sse;
}

void CalibrationSpec::validate() const {
  if (free.empty()) throw std::invalid_argument("no free parameters to calibrate");
  if (order < 0) throw std::invalid_argument("series order must be >= 0");
  if (!(day_count > 0.0)) throw std::invalid_argument("day_count must be > 0");
  quad.validate();
  std::set<std::string> names;
  ModelParams probe = base;
  for (const auto& fp : free) {
    const bool shared = fp.name == "m" || fp.name == "s";
    if (shared && !shared_jumps) {
      throw std::invalid_argument("parameter '" + fp.name + "' needs shared jumps");
    }
    if (!shared && model_parameter(probe, fp.name) == nullptr) {
      throw std::invalid_argument("unknown parameter '" + fp.name + "'");
    }
    if (shared_jumps && (fp.name == "m0" || fp.name == "m1" || fp.name == "s0" || fp.name == "s1")) {
      throw std::invalid_argument("with shared jumps calibrate 'm'/'s' instead of '" + fp.name + "'");
    }
    if (!names.insert(fp.name).second) throw std::invalid_argument("duplicate parameter '" + fp.name + "'");
    if (!(fp.lower < fp.upper)) throw std::invalid_argument("empty bounds for '" + fp.name + "'");
    if (fp.initial < fp.lower || fp.initial > fp.upper) {
      throw std::invalid_argument("initial value of '" + fp.name + "' outside its bounds");
    }
  }
}

ModelParams CalibrationSpec::apply(std::span<const double> values) const {
  ModelParams p = base;
  if (shared_jumps) {
    p.nu1.mean = p.nu0.mean;
    p.nu1.std = p.nu0.std;
  }
  for (std::size_t i = 0; i < free.size(); ++i) {
    const std::string& name = free[i].name;
    if (name == "m") {
      p.nu0.mean = p.nu1.mean = values[i];
    } else if (name == "s") {
      p.nu0.std = p.nu1.std = values[i];
    } else {
      *model_parameter(p, name) = values[i];
    }
  }
  return p;
}

CalibrationResult calibrate(const VolSurface& surface, const CalibrationSpec& spec) {
  surface.validate();
  spec.validate();

  std::vector<double> x0;
  std::vector<double> lower;
  std::vector<double> upper;
  for (const auto& fp : spec.free) {
    x0.push_back(fp.initial);
    lower.push_back(fp.lower);
    upper.push_back(fp.upper);
  }

  const Objective f = [&](std::span<const double> x) {
    ModelParams p = spec.apply(x);
    try {
      p.validate();
      p.require_diffusion();
    } catch (const std::invalid_argument&) {
      return kPenalty * static_cast<double>(surface.quotes.size());
    }
    return objective(p, surface, spec.order, spec.quad, spec.day_count);
  };
  const NelderMeadResult nm = nelder_mead(f, x0, lower, upper, spec.optimizer);

  CalibrationResult result;
  result.params = spec.apply(nm.x);
  const FitReport fit = evaluate_fit(result.params, surface, spec.order, spec.quad, spec.day_count);
  result.sse = fit.sse;
  result.rmse = fit.rmse;
  result.fits = fit.fits;
  result.evaluations = nm.evaluations;
  result.iterations = nm.iterations;
  result.converged = nm.converged;
  return result;
}

}  // namespace levysmile

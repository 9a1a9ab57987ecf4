#include "levysmile/config.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "levysmile/errors.hpp"

namespace levysmile {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

double* model_parameter(ModelParams& p, std::string_view key) {
  static const std::map<std::string, double ModelParams::*, std::less<>> scalars = {
      {"a0", &ModelParams::a0}, {"a1", &ModelParams::a1}, {"c0", &ModelParams::c0},
      {"c1", &ModelParams::c1}, {"eps", &ModelParams::eps}, {"beta", &ModelParams::beta}};
  if (auto it = scalars.find(key); it != scalars.end()) return &(p.*(it->second));
  if (key == "gamma0") return &p.nu0.intensity;
  if (key == "m0") return &p.nu0.mean;
  if (key == "s0") return &p.nu0.std;
  if (key == "gamma1") return &p.nu1.intensity;
  if (key == "m1") return &p.nu1.mean;
  if (key == "s1") return &p.nu1.std;
  return nullptr;
}

ModelParams parse_model_params(std::istream& in) {
  ModelParams p;
  p.eps = 1.0;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    double* target = model_parameter(p, key);
    if (target == nullptr) {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw ParseError("line " + std::to_string(lineno) + ": bad number '" + value +
                       "' for key '" + key + "'");
    }
    *target = v;
  }
  if (!seen.contains("a0")) throw ParseError("missing required key 'a0'");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid model parameters: ") + e.what());
  }
  return p;
}

ModelParams load_model_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path.string() + "'");
  try {
    return parse_model_params(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_model_params(const ModelParams& p) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "a0 = " << p.a0 << "\na1 = " << p.a1 << "\nc0 = " << p.c0 << "\nc1 = " << p.c1
     << "\neps = " << p.eps << "\nbeta = " << p.beta << "\ngamma0 = " << p.nu0.intensity
     << "\nm0 = " << p.nu0.mean << "\ns0 = " << p.nu0.std << "\ngamma1 = " << p.nu1.intensity
     << "\nm1 = " << p.nu1.mean << "\ns1 = " << p.nu1.std << "\n";
  return os.str();
}

}  // namespace levysmile

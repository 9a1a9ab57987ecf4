#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

#include "levysmile/model.hpp"

namespace levysmile {

/// Parses a flat model file: one `key = value` per line, `#` starts a
/// comment. Keys: a0 a1 c0 c1 eps beta gamma0 m0 s0 gamma1 m1 s1. a0 is
/// required; eps defaults to 1, s0/s1 to 1, everything else to 0. Unknown
/// or repeated keys are rejected with the offending line number.
ModelParams parse_model_params(std::istream& in);

/// Field named by a configuration key, or nullptr for an unknown key.
double* model_parameter(ModelParams& p, std::string_view key);
ModelParams load_model_params(const std::filesystem::path& path);

/// Inverse of parse_model_params (17 significant digits).
std::string format_model_params(const ModelParams& p);

}  // namespace levysmile

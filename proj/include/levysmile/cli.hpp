#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace levysmile::cli {

/// Runs one command (`price`, `density`, `smile`, `iv-series`, `iv-approx`,
/// `mc`, `survival`, `calibrate`, `eps-bound`). `args` excludes the program name.
/// Returns the process exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levysmile::cli

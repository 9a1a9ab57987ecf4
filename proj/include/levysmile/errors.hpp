#pragma once

#include <stdexcept>
#include <string>

namespace levysmile {

/// Numerical procedure failed to reach its accuracy target (tail not
/// resolved, imaginary residue too large, iteration budget exhausted).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Option price outside the static no-arbitrage band, so no implied
/// volatility exists.
class NoArbitrageError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input file or command line could not be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace levysmile

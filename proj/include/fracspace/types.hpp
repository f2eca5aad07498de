#pragma once

#include <stdexcept>

namespace fracspace {

/// Invalid user-supplied configuration: out-of-range parameters, unknown
/// keys, mismatched dimensions.  Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not certify its accuracy: quadrature tail estimates
/// above tolerance, unresolvable bands, non-converging refinements.  Maps to
/// CLI exit code 3.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inclusive range of dyadic levels j (block scale 2^{-j}).
struct JRange {
  int lo = 0;
  int hi = -1;
  bool valid() const { return hi >= lo; }
  int count() const { return valid() ? hi - lo + 1 : 0; }
};

}  // namespace fracspace

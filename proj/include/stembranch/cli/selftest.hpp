#pragma once

#include <string>
#include <vector>

namespace stembranch::cli {

struct IdentityCheck {
  std::string function;
  std::string identity;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Recurrences, derivative formulas, closed-form special cases and large-z
/// behaviour of the special functions.
std::vector<IdentityCheck> specfun_selftest();

}  // namespace stembranch::cli

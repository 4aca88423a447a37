#pragma once

#include <string>
#include <vector>

#include "stembranch/model.hpp"

namespace stembranch::cli {

/// Shortest decimal string that reads back to the same double.
std::string fmt(double v);

/// "re+imi" / "re-imi", both parts shortest round-trip.
std::string fmt(Complex v);

/// "start:stop:steps" -> steps + 1 equally spaced points from start to stop
/// (a single point when steps is 0). Throws InvalidParameterError.
std::vector<double> parse_t_grid(const std::string& spec);

/// Strict full-string number parse; throws InvalidParameterError.
double parse_number(const std::string& text, const char* what);

}  // namespace stembranch::cli

#include "stembranch/cli/format.hpp"

#include <charconv>
#include <cmath>

#include "stembranch/errors.hpp"

namespace stembranch::cli {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(Complex v) {
  std::string im = fmt(v.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return fmt(v.real()) + im + "i";
}

double parse_number(const std::string& text, const char* what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw InvalidParameterError(std::string(what) + ": not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_t_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw InvalidParameterError("t-grid must be start:stop:steps, got '" + spec + "'");
  const double start = parse_number(spec.substr(0, c1), "t-grid start");
  const double stop = parse_number(spec.substr(c1 + 1, c2 - c1 - 1), "t-grid stop");
  const double steps = parse_number(spec.substr(c2 + 1), "t-grid steps");
  if (start < 0.0 || stop < start || steps < 0.0 || steps != std::floor(steps) || steps > 1e7)
    throw InvalidParameterError("t-grid needs 0 <= start <= stop and an integer steps >= 0");
  const auto n = static_cast<std::size_t>(steps);
  std::vector<double> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    out.push_back(n == 0 ? start : (i == n ? stop : start + (stop - start) * double(i) / double(n)));
  return out;
}

}  // namespace stembranch::cli

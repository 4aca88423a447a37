#include "stembranch/model.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "stembranch/errors.hpp"

namespace stembranch {

namespace {

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }
bool is_rate(double v) { return std::isfinite(v) && v > 0.0; }

Criticality compare_to_one(double mean_offspring_minus_one_sign) {
  if (mean_offspring_minus_one_sign == 0.0) return Criticality::Critical;
  return mean_offspring_minus_one_sign > 0.0 ? Criticality::SuperCritical
                                             : Criticality::SubCritical;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

ModelParams::ModelParams(double alpha, double p, double lambda_a, double lambda_b)
    : alpha_(alpha), p_(p), q_(1.0 - p), lambda_a_(lambda_a), lambda_b_(lambda_b) {
  if (!is_probability(alpha)) throw InvalidParameterError("alpha must lie in [0, 1]");
  if (!is_probability(p)) throw InvalidParameterError("p must lie in [0, 1]");
  if (!is_rate(lambda_a)) throw InvalidParameterError("lambda_a must be positive");
  if (!is_rate(lambda_b)) throw InvalidParameterError("lambda_b must be positive");
}

std::ostream& operator<<(std::ostream& os, const ModelParams& params) {
  return os << "alpha=" << params.alpha() << " p=" << params.p()
            << " lambda_a=" << params.lambda_a() << " lambda_b=" << params.lambda_b();
}

std::string_view to_string(Criticality c) noexcept {
  switch (c) {
    case Criticality::SubCritical: return "SubCritical";
    case Criticality::Critical: return "Critical";
    case Criticality::SuperCritical: return "SuperCritical";
  }
  return "?";
}

std::string_view to_string(TheoremBranch b) noexcept {
  switch (b) {
    case TheoremBranch::BiCritical_1a: return "BiCritical_1a";
    case TheoremBranch::NonCritA_CritB_1b: return "NonCritA_CritB_1b";
    case TheoremBranch::NonCritB_1c: return "NonCritB_1c";
    case TheoremBranch::OracleOnly: return "OracleOnly";
  }
  return "?";
}

CriticalityRegime classify(const ModelParams& params) noexcept {
  // Equality tests are exact: the parameters are inputs, not computed values.
  const double alpha = params.alpha();
  const double p = params.p();
  const double q = params.q();

  CriticalityRegime regime{};
  // Mean A offspring is 2(1-alpha); mean B offspring is 2q.
  regime.a_class = compare_to_one(0.5 - alpha);
  regime.b_class = compare_to_one(q - p);

  if (alpha < kBoundaryDelta || alpha > 1.0 - kBoundaryDelta || q < kBoundaryDelta) {
    regime.theorem_branch = TheoremBranch::OracleOnly;
  } else if (regime.b_class != Criticality::Critical) {
    regime.theorem_branch = TheoremBranch::NonCritB_1c;
  } else if (regime.a_class == Criticality::Critical) {
    regime.theorem_branch = TheoremBranch::BiCritical_1a;
  } else {
    regime.theorem_branch = TheoremBranch::NonCritA_CritB_1b;
  }
  return regime;
}

Complex progeny_pgf_a(Complex x, Complex y, const ModelParams& params) noexcept {
  const Complex s = (1.0 - params.alpha()) * x + params.alpha() * y;
  return s * s;
}

Complex progeny_pgf_b(Complex y, const ModelParams& params) noexcept {
  const Complex s = params.p() + params.q() * y;
  return s * s;
}

void ParamOverrides::merge(const ParamOverrides& other) {
  if (other.alpha) alpha = other.alpha;
  if (other.p) p = other.p;
  if (other.lambda_a) lambda_a = other.lambda_a;
  if (other.lambda_b) lambda_b = other.lambda_b;
}

ModelParams ParamOverrides::resolve() const {
  if (!alpha) throw InvalidParameterError("missing parameter: alpha");
  if (!p) throw InvalidParameterError("missing parameter: p");
  return ModelParams(*alpha, *p, lambda_a.value_or(1.0), lambda_b.value_or(1.0));
}

ParamOverrides parse_param_config(std::istream& in) {
  ParamOverrides out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameterError("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    }
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));

    double parsed = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw InvalidParameterError("config line " + std::to_string(line_no) +
                                  ": bad number '" + value + "'");
    }

    if (key == "alpha") {
      out.alpha = parsed;
    } else if (key == "p") {
      out.p = parsed;
    } else if (key == "lambda_a") {
      out.lambda_a = parsed;
    } else if (key == "lambda_b") {
      out.lambda_b = parsed;
    } else if (key == "q") {
      throw InvalidParameterError("q is derived as 1 - p and cannot be configured");
    } else {
      throw InvalidParameterError("config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
  return out;
}

}  // namespace stembranch

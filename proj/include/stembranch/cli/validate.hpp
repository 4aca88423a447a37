#pragma once

// Cross-validation harness: closed forms against the backward-equation
// integrator, the simulator and the fixed-point extinction probability.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stembranch/model.hpp"
#include "stembranch/oracle.hpp"

namespace stembranch::cli {

enum class CaseStatus { Pass, Fail, Skipped };

std::string_view to_string(CaseStatus s) noexcept;

struct ValidationCase {
  ValidationCase(std::string case_name, const ModelParams& p)
      : name(std::move(case_name)), params(p) {}

  std::string name;
  ModelParams params;
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> closed_value;  ///< absent when the closed form is undefined
  std::optional<double> ode_value;
  std::optional<oracle::EstimateWithCI> mc_estimate;
  std::optional<double> reference;     ///< limit / asymptote checks
  double tolerance = 0.0;
  double abs_discrepancy = 0.0;
  CaseStatus status = CaseStatus::Skipped;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationCase> cases;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  double runtime_s = 0.0;

  bool ok() const noexcept { return failed == 0; }
};

enum class Suite { Quick, Full };

/// quick: three regimes x four (x, y, t) points, closed vs ODE, plus the
/// limit / fixed-point identity per regime. full: the whole (x, y, t) grid on
/// five parameter sets, Monte Carlo extinction checks and the large-t rate
/// checks.
ValidationReport cross_validate(Suite suite);

nlohmann::json to_json(const ValidationReport& report);

}  // namespace stembranch::cli

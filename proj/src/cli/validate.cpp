#include "stembranch/cli/validate.hpp"

#include <chrono>
#include <cmath>

#include "stembranch/asymptotics.hpp"
#include "stembranch/errors.hpp"
#include "stembranch/pgf.hpp"

namespace stembranch::cli {

std::string_view to_string(CaseStatus s) noexcept {
  switch (s) {
    case CaseStatus::Pass: return "Pass";
    case CaseStatus::Fail: return "Fail";
    case CaseStatus::Skipped: return "Skipped";
  }
  return "?";
}

namespace {

constexpr double kClosedVsOde = 1e-6;

ValidationCase make_case(std::string name, const ModelParams& prm, double t = 0.0,
                         double x = 0.0, double y = 0.0) {
  ValidationCase c(std::move(name), prm);
  c.t = t;
  c.x = x;
  c.y = y;
  return c;
}

struct NamedParams {
  const char* name;
  ModelParams params;
};

ValidationCase closed_vs_ode(const NamedParams& np, double x, double y, double t) {
  auto c = make_case(np.name, np.params, t, x, y);
  c.tolerance = kClosedVsOde;
  c.ode_value = pgf::pgf_a_real(x, y, t, np.params, pgf::Method::Oracle);
  try {
    c.closed_value = pgf::real_part_checked(pgf::pgf_a(x, y, t, np.params, pgf::Method::ClosedForm).value);
  } catch (const Error& e) {
    c.status = CaseStatus::Skipped;
    c.note = std::string(e.name()) + ": " + e.what();
    return c;
  }
  c.abs_discrepancy = std::abs(*c.closed_value - *c.ode_value);
  c.status = c.abs_discrepancy <= c.tolerance ? CaseStatus::Pass : CaseStatus::Fail;
  return c;
}

ValidationCase limit_identity(const NamedParams& np) {
  auto c = make_case(std::string(np.name) + " limit vs fixed point", np.params);
  c.tolerance = 1e-10;
  try {
    c.closed_value = asymptotics::extinction_limit(np.params).limit;
  } catch (const Error& e) {
    c.status = CaseStatus::Skipped;
    c.note = std::string(e.name()) + ": " + e.what();
    return c;
  }
  c.reference = asymptotics::extinction_fixed_point(np.params);
  c.abs_discrepancy = std::abs(*c.closed_value - *c.reference);
  c.status = c.abs_discrepancy <= c.tolerance ? CaseStatus::Pass : CaseStatus::Fail;
  return c;
}

// Exact E(t) against the large-t form; the tolerance is a fraction of the
// decay term, or an absolute distance to the limit.
ValidationCase rate_case(const NamedParams& np, double t, double frac, double abs_tol) {
  auto c = make_case(std::string(np.name) + " large-t extinction", np.params, t);
  const auto res = asymptotics::extinction_limit(np.params);
  c.closed_value = pgf::pgf_a_real(0.0, 0.0, t, np.params);
  if (abs_tol > 0.0) {
    c.reference = res.limit;
    c.tolerance = abs_tol;
  } else {
    c.reference = res.asymptote(t);
    c.tolerance = frac * std::abs(res.limit - *c.reference);
  }
  c.abs_discrepancy = std::abs(*c.closed_value - *c.reference);
  c.status = c.abs_discrepancy <= c.tolerance ? CaseStatus::Pass : CaseStatus::Fail;
  return c;
}

ValidationCase monte_carlo(const NamedParams& np, double t, std::uint64_t reps) {
  auto c = make_case(std::string(np.name) + " Monte Carlo extinction", np.params, t);
  c.ode_value = pgf::pgf_a_real(0.0, 0.0, t, np.params, pgf::Method::Oracle);
  c.closed_value = pgf::pgf_a_real(0.0, 0.0, t, np.params);
  c.mc_estimate = oracle::estimate_extinction(np.params, t, reps, 12345);
  c.tolerance = c.mc_estimate->half_width_99;
  c.abs_discrepancy = std::abs(c.mc_estimate->value - *c.ode_value);
  const bool agree = std::abs(*c.closed_value - *c.ode_value) <= kClosedVsOde;
  c.status = agree && c.abs_discrepancy <= c.tolerance ? CaseStatus::Pass : CaseStatus::Fail;
  return c;
}

}  // namespace

ValidationReport cross_validate(Suite suite) {
  const auto start = std::chrono::steady_clock::now();
  ValidationReport r;
  const NamedParams bi{"bi-critical", {0.5, 0.5, 1.0, 1.0}};
  const NamedParams bi_real{"bi-critical real theta", {0.5, 0.5, 0.2, 1.0}};
  const NamedParams a_super{"A super-critical, B critical", {0.25, 0.5, 1.0, 1.0}};
  const NamedParams a_sub{"A sub-critical, B critical", {0.75, 0.5, 1.0, 1.0}};
  const NamedParams b_super{"B super-critical", {0.5, 0.3, 1.0, 1.0}};

  if (suite == Suite::Quick) {
    const double pts[4][3] = {{0.0, 0.0, 1.0}, {0.3, 0.3, 5.0}, {0.7, 0.3, 1.0}, {0.3, 0.7, 0.1}};
    for (const auto& np : {bi, a_super, b_super}) {
      for (const auto& p : pts) r.cases.push_back(closed_vs_ode(np, p[0], p[1], p[2]));
      r.cases.push_back(limit_identity(np));
    }
  } else {
    const double xs[] = {0.0, 0.3, 0.7, 1.0};
    const double ts[] = {0.1, 1.0, 5.0, 20.0};
    for (const auto& np : {bi_real, bi, a_super, a_sub, b_super}) {
      for (double x : xs)
        for (double y : xs)
          for (double t : ts) r.cases.push_back(closed_vs_ode(np, x, y, t));
      r.cases.push_back(limit_identity(np));
    }
    r.cases.push_back(rate_case(bi, 1e4, 0.05, 0.0));
    r.cases.push_back(rate_case(a_super, 1e3, 0.10, 0.0));
    r.cases.push_back(rate_case(a_super, 1e3, 0.0, 1e-3));
    r.cases.push_back(rate_case(b_super, 20.0, 0.0, 1e-5));
    r.cases.push_back(monte_carlo(bi, 25.0, 100'000));
    r.cases.push_back(monte_carlo(a_super, 10.0, 100'000));
    r.cases.push_back(monte_carlo(b_super, 10.0, 100'000));
  }

  for (const auto& c : r.cases) {
    if (c.status == CaseStatus::Pass) ++r.passed;
    else if (c.status == CaseStatus::Fail) ++r.failed;
    else ++r.skipped;
  }
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

nlohmann::json to_json(const ValidationReport& report) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json cases = json::array();
  for (const auto& c : report.cases) {
    json j{{"name", c.name},
           {"params",
            {{"alpha", c.params.alpha()},
             {"p", c.params.p()},
             {"lambda_a", c.params.lambda_a()},
             {"lambda_b", c.params.lambda_b()}}},
           {"t", c.t},
           {"x", c.x},
           {"y", c.y},
           {"closed_value", opt(c.closed_value)},
           {"ode_value", opt(c.ode_value)},
           {"reference", opt(c.reference)},
           {"abs_discrepancy", c.abs_discrepancy},
           {"tolerance", c.tolerance},
           {"status", to_string(c.status)}};
    if (c.mc_estimate)
      j["mc_estimate"] = {{"value", c.mc_estimate->value},
                          {"half_width_99", c.mc_estimate->half_width_99},
                          {"replicates", c.mc_estimate->replicates},
                          {"truncated", c.mc_estimate->truncated}};
    else
      j["mc_estimate"] = nullptr;
    if (!c.note.empty()) j["note"] = c.note;
    cases.push_back(std::move(j));
  }
  return {{"cases", std::move(cases)},
          {"summary", {{"Pass", report.passed}, {"Fail", report.failed}, {"Skipped", report.skipped}}},
          {"runtime_s", report.runtime_s}};
}

}  // namespace stembranch::cli

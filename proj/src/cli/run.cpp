#include "stembranch/cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "stembranch/asymptotics.hpp"
#include "stembranch/cli/format.hpp"
#include "stembranch/cli/selftest.hpp"
#include "stembranch/cli/validate.hpp"
#include "stembranch/errors.hpp"
#include "stembranch/moments.hpp"
#include "stembranch/oracle.hpp"
#include "stembranch/pgf.hpp"

namespace stembranch::cli {
namespace {

using nlohmann::json;

struct Shared {
  std::optional<double> alpha, p, lambda_a, lambda_b;
  std::string config;
  std::string out_path;
  std::string format = "csv";

  ModelParams params() const {
    ParamOverrides o;
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw InvalidParameterError("cannot open config file '" + config + "'");
      o = parse_param_config(in);
    }
    o.merge({alpha, p, lambda_a, lambda_b});
    return o.resolve();
  }
  bool json() const { return format == "json"; }
};

void csv_row(std::ostream& os, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << '\n';
}

// ---- classify ---------------------------------------------------------------

int do_classify(const Shared& sh, std::ostream& os) {
  const auto r = classify(sh.params());
  if (sh.json())
    os << json{{"theorem_branch", to_string(r.theorem_branch)},
               {"a_class", to_string(r.a_class)},
               {"b_class", to_string(r.b_class)}}
              .dump()
       << '\n';
  else
    os << to_string(r.theorem_branch) << '\n';
  return kOk;
}

// ---- moments ------------------------------------------------------------------

int do_moments(const Shared& sh, const std::string& grid, std::ostream& os) {
  const auto prm = sh.params();
  const auto ts = parse_t_grid(grid);
  json arr = json::array();
  if (!sh.json()) os << "t,E_A,E_B\n";
  for (double t : ts) {
    const auto m = expected_counts(prm, t);
    if (sh.json())
      arr.push_back({{"t", t}, {"E_A", m.e_a}, {"E_B", m.e_b}});
    else
      csv_row(os, {fmt(t), fmt(m.e_a), fmt(m.e_b)});
  }
  if (sh.json()) os << arr.dump() << '\n';
  return kOk;
}

// ---- pgf ------------------------------------------------------------------------

pgf::Method parse_method(const std::string& m) {
  if (m == "closed") return pgf::Method::ClosedForm;
  if (m == "ode") return pgf::Method::Oracle;
  return pgf::Method::Auto;
}

int do_pgf(const Shared& sh, double x, double y, double t, const std::string& method,
           std::ostream& os) {
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0))
    throw InvalidParameterError("--x and --y must lie in [0, 1]");
  if (!(t >= 0.0)) throw InvalidParameterError("--t must be >= 0");
  const auto prm = sh.params();
  const auto res = pgf::pgf_a(x, y, t, prm, parse_method(method));
  const double value = pgf::real_part_checked(res.value);

  // backward-equation residual with the method that produced the value
  constexpr double h = 1e-5;
  auto f = [&](double s) { return pgf::pgf_a(x, y, s, prm, res.used).value; };
  const Complex dfdt = t >= h ? (f(t + h) - f(t - h)) / (2.0 * h) : (f(t + h) - res.value) / h;
  const Complex fb = pgf::pgf_b(y, t, prm);
  const Complex rhs = prm.lambda_a() * (progeny_pgf_a(res.value, fb, prm) - res.value);
  const double residual = std::abs(dfdt - rhs);

  if (sh.json()) {
    json j{{"value", value}, {"method", pgf::to_string(res.used)}, {"residual", residual}};
    if (!res.fallback_reason.empty()) j["fallback_reason"] = res.fallback_reason;
    os << j.dump() << '\n';
  } else {
    os << "value,method,residual\n";
    csv_row(os, {fmt(value), std::string(pgf::to_string(res.used)), fmt(residual)});
  }
  return kOk;
}

// ---- extinction -------------------------------------------------------------------

int do_extinction(const Shared& sh, const std::string& method, const std::string& grid,
                  std::uint64_t replicates, std::uint64_t seed, std::ostream& os) {
  const auto prm = sh.params();
  const auto ts = parse_t_grid(grid);
  std::vector<asymptotics::CurvePoint> pts;
  if (method == "fixed-point") {
    const double v = asymptotics::extinction_fixed_point(prm);
    for (double t : ts) pts.push_back({t, v, 0.0});
  } else {
    asymptotics::CurveMethod m = asymptotics::CurveMethod::Exact;
    if (method == "asymptotic") m = asymptotics::CurveMethod::Asymptotic;
    if (method == "ode") m = asymptotics::CurveMethod::Ode;
    if (method == "mc") m = asymptotics::CurveMethod::MonteCarlo;
    asymptotics::CurveOptions opt;
    opt.replicates = replicates;
    opt.seed = seed;
    pts = asymptotics::extinction_curve(prm, ts, m, opt);
  }
  json arr = json::array();
  if (!sh.json()) os << "t,value,method\n";
  for (const auto& pt : pts) {
    if (sh.json()) {
      json j{{"t", pt.t}, {"value", pt.value}, {"method", method}};
      if (method == "mc") j["half_width_99"] = pt.half_width_99;
      arr.push_back(std::move(j));
    } else {
      csv_row(os, {fmt(pt.t), fmt(pt.value), method});
    }
  }
  if (sh.json()) os << arr.dump() << '\n';
  return kOk;
}

// ---- simulate -------------------------------------------------------------------------

oracle::SimulationCaps parse_caps(const std::string& spec) {
  oracle::SimulationCaps caps;
  if (spec.empty()) return caps;
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw InvalidParameterError("--caps must be MAX_CELLS:MAX_EVENTS");
  const double cells = parse_number(spec.substr(0, colon), "max cells");
  const double events = parse_number(spec.substr(colon + 1), "max events");
  if (cells < 1 || events < 1 || cells > 1e18 || events > 1e18)
    throw InvalidParameterError("caps must be positive");
  caps.max_cells = static_cast<std::uint64_t>(cells);
  caps.max_events = static_cast<std::uint64_t>(events);
  return caps;
}

int do_simulate(const Shared& sh, std::uint64_t replicates, double t_max, std::uint64_t seed,
                const std::string& caps_spec, const std::string& emit, std::ostream& os) {
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw InvalidParameterError("--t-max must be >= 0");
  if (replicates < 1) throw InvalidParameterError("--replicates must be >= 1");
  const auto prm = sh.params();
  const auto caps = parse_caps(caps_spec);
  if (emit == "trajectories") {
    for (std::uint64_t r = 0; r < replicates; ++r) {
      const auto tr = oracle::simulate(prm, t_max, oracle::replicate_seed(seed, r), caps);
      for (const auto& e : tr.events) {
        json j{{"t", e.t}, {"za", e.z_a}, {"zb", e.z_b}};
        if (replicates > 1) j["rep"] = r;
        os << j.dump() << '\n';
      }
    }
    return kOk;
  }
  const auto finals = oracle::sample_final_states(prm, t_max, replicates, seed, {caps, 0});
  json arr = json::array();
  if (!sh.json()) os << "replicate,seed,z_a,z_b,events,truncated\n";
  for (std::uint64_t r = 0; r < finals.size(); ++r) {
    const auto& f = finals[r];
    const auto s = oracle::replicate_seed(seed, r);
    if (sh.json())
      arr.push_back({{"replicate", r}, {"seed", s}, {"z_a", f.z_a}, {"z_b", f.z_b},
                     {"events", f.events}, {"truncated", f.truncated}});
    else
      csv_row(os, {std::to_string(r), std::to_string(s), std::to_string(f.z_a),
                   std::to_string(f.z_b), std::to_string(f.events), f.truncated ? "1" : "0"});
  }
  if (sh.json()) os << arr.dump() << '\n';
  return kOk;
}

// ---- invert ------------------------------------------------------------------------------

int do_invert(const Shared& sh, double t, int j_max, int k_max, std::ostream& os) {
  if (j_max < 0 || k_max < 0 || j_max > 4096 || k_max > 4096)
    throw InvalidParameterError("--j-max and --k-max must be in [0, 4096]");
  if (!(t >= 0.0)) throw InvalidParameterError("--t must be >= 0");
  const auto g = oracle::invert_pgf(sh.params(), t, j_max, k_max);
  if (sh.json()) {
    json rows = json::array();
    for (int j = 0; j <= j_max; ++j) {
      json row = json::array();
      for (int k = 0; k <= k_max; ++k) row.push_back(g.at(j, k));
      rows.push_back(std::move(row));
    }
    os << json{{"t", t}, {"probs", rows}, {"truncation_mass", g.truncation_mass}}.dump() << '\n';
    return kOk;
  }
  os << "j\\k";
  for (int k = 0; k <= k_max; ++k) os << ',' << k;
  os << '\n';
  for (int j = 0; j <= j_max; ++j) {
    os << j;
    for (int k = 0; k <= k_max; ++k) os << ',' << fmt(g.at(j, k));
    os << '\n';
  }
  os << "truncation_mass," << fmt(g.truncation_mass) << '\n';
  return kOk;
}

// ---- selftest / validate ------------------------------------------------------------------

int do_selftest(const Shared& sh, std::ostream& os) {
  const auto rows = specfun_selftest();
  bool ok = true;
  json arr = json::array();
  if (!sh.json()) os << "function,identity,max_rel_err,status\n";
  for (const auto& r : rows) {
    ok = ok && r.pass;
    if (sh.json())
      arr.push_back({{"function", r.function}, {"identity", r.identity},
                     {"max_rel_err", r.max_rel_err}, {"tolerance", r.tolerance},
                     {"status", r.pass ? "pass" : "fail"}});
    else
      csv_row(os, {r.function, "\"" + r.identity + "\"", fmt(r.max_rel_err), r.pass ? "pass" : "fail"});
  }
  if (sh.json()) os << arr.dump() << '\n';
  return ok ? kOk : kValidationFailed;
}

int do_validate(const Shared& sh, const std::string& suite, std::ostream& os) {
  const auto rep = cross_validate(suite == "full" ? Suite::Full : Suite::Quick);
  if (sh.json()) {
    os << to_json(rep).dump(2) << '\n';
  } else {
    auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    os << "name,alpha,p,lambda_a,lambda_b,t,x,y,closed,ode,mc,mc_half_width,reference,"
          "abs_discrepancy,status\n";
    for (const auto& c : rep.cases)
      csv_row(os, {"\"" + c.name + "\"", fmt(c.params.alpha()), fmt(c.params.p()),
                   fmt(c.params.lambda_a()), fmt(c.params.lambda_b()), fmt(c.t), fmt(c.x),
                   fmt(c.y), opt(c.closed_value), opt(c.ode_value),
                   c.mc_estimate ? fmt(c.mc_estimate->value) : "",
                   c.mc_estimate ? fmt(c.mc_estimate->half_width_99) : "", opt(c.reference),
                   fmt(c.abs_discrepancy), std::string(to_string(c.status))});
    os << "# pass=" << rep.passed << " fail=" << rep.failed << " skipped=" << rep.skipped
       << " runtime_s=" << fmt(rep.runtime_s) << '\n';
  }
  return rep.ok() ? kOk : kValidationFailed;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-type branching process (stem cells A feeding committed cells B)", "stembranch"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Shared sh;
  app.add_option("--alpha", sh.alpha, "probability an A progeny is committed to B");
  app.add_option("--p", sh.p, "probability a B progeny leaves the B compartment");
  app.add_option("--lambda-a", sh.lambda_a, "A division rate (default 1)");
  app.add_option("--lambda-b", sh.lambda_b, "B division rate (default 1)");
  app.add_option("--config", sh.config, "key=value parameter file; flags take precedence");
  app.add_option("--out", sh.out_path, "write output to this file instead of stdout");
  app.add_option("--format", sh.format, "output format")->check(CLI::IsMember({"csv", "json"}));

  auto* classify_cmd = app.add_subcommand("classify", "print the regime of the parameters");

  std::string t_grid = "0:10:10";
  auto* moments_cmd = app.add_subcommand("moments", "expected counts E_A(t), E_B(t)");
  moments_cmd->add_option("--t-grid", t_grid, "start:stop:steps");

  double x = 0.0, y = 0.0, t = 1.0;
  std::string pgf_method = "auto";
  auto* pgf_cmd = app.add_subcommand("pgf", "joint generating function F_A(x, y, t)");
  pgf_cmd->add_option("--x", x)->required();
  pgf_cmd->add_option("--y", y)->required();
  pgf_cmd->add_option("--t", t)->required();
  pgf_cmd->add_option("--method", pgf_method)->check(CLI::IsMember({"closed", "ode", "auto"}));

  std::string ext_method = "exact";
  std::uint64_t replicates = 10'000, seed = 1;
  auto* ext_cmd = app.add_subcommand("extinction", "extinction probability E(t)");
  ext_cmd->add_option("--method", ext_method)
      ->check(CLI::IsMember({"exact", "asymptotic", "ode", "mc", "fixed-point"}));
  ext_cmd->add_option("--t-grid", t_grid, "start:stop:steps");
  ext_cmd->add_option("--replicates", replicates, "Monte Carlo replicates (mc)");
  ext_cmd->add_option("--seed", seed, "master seed (mc)");

  double t_max = 1.0;
  std::string caps, emit = "summary";
  std::uint64_t sim_reps = 1;
  auto* sim_cmd = app.add_subcommand("simulate", "exact stochastic simulation");
  sim_cmd->add_option("--replicates", sim_reps);
  sim_cmd->add_option("--t-max", t_max)->required();
  sim_cmd->add_option("--seed", seed);
  sim_cmd->add_option("--caps", caps, "MAX_CELLS:MAX_EVENTS");
  sim_cmd->add_option("--emit", emit)->check(CLI::IsMember({"summary", "trajectories"}));

  int j_max = 15, k_max = 15;
  auto* inv_cmd = app.add_subcommand("invert", "joint pmf by roots-of-unity inversion");
  inv_cmd->add_option("--t", t)->required();
  inv_cmd->add_option("--j-max", j_max);
  inv_cmd->add_option("--k-max", k_max);

  bool specfun_flag = false;
  auto* self_cmd = app.add_subcommand("selftest", "special-function identity table");
  self_cmd->add_flag("--specfun", specfun_flag);

  std::string suite = "quick";
  auto* val_cmd = app.add_subcommand("validate", "closed form vs ODE vs simulation");
  val_cmd->add_option("--suite", suite)->check(CLI::IsMember({"quick", "full"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  std::ofstream file;
  if (!sh.out_path.empty()) {
    file.open(sh.out_path);
    if (!file) {
      err << "usage error: cannot open '" << sh.out_path << "' for writing\n";
      return kUsage;
    }
  }
  std::ostream& os = sh.out_path.empty() ? out : file;
  os.precision(17);

  try {
    if (*classify_cmd) return do_classify(sh, os);
    if (*moments_cmd) return do_moments(sh, t_grid, os);
    if (*pgf_cmd) return do_pgf(sh, x, y, t, pgf_method, os);
    if (*ext_cmd) return do_extinction(sh, ext_method, t_grid, replicates, seed, os);
    if (*sim_cmd) return do_simulate(sh, sim_reps, t_max, seed, caps, emit, os);
    if (*inv_cmd) return do_invert(sh, t, j_max, k_max, os);
    if (*self_cmd) return do_selftest(sh, os);
    if (*val_cmd) return do_validate(sh, suite, os);
  } catch (const InvalidParameterError& e) {
    err << "usage error: " << e.name() << ": " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what();
    try {
      err << " [" << sh.params() << ']';
    } catch (const Error&) {
    }
    err << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace stembranch::cli

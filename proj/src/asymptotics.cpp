#include "stembranch/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "stembranch/errors.hpp"
#include "stembranch/pgf.hpp"

namespace stembranch::asymptotics {

std::string_view to_string(RateClass r) noexcept {
  switch (r) {
    case RateClass::InverseSqrtT: return "inverse_sqrt_t";
    case RateClass::InverseT: return "inverse_t";
    case RateClass::Exponential: return "exponential";
  }
  return "?";
}

double ExtinctionResult::asymptote(double t) const {
  double g = 0.0;
  switch (rate_class) {
    case RateClass::InverseSqrtT: g = 1.0 / std::sqrt(t); break;
    case RateClass::InverseT: g = 1.0 / t; break;
    case RateClass::Exponential: g = std::exp(exponent * t); break;
  }
  return limit - rate_coefficient * g;
}

namespace {

// Smallest root of (1-alpha)^2 s^2 + (2c sB - 1) s + alpha^2 sB^2 = 0,
// written without cancellation.
double stem_fixed_point(double alpha, double sb) {
  const double c = alpha * (1.0 - alpha);
  const double a2 = alpha * alpha * sb * sb;
  return 2.0 * a2 / (1.0 - 2.0 * c * sb + std::sqrt(std::max(0.0, 1.0 - 4.0 * c * sb)));
}

ExtinctionResult supercritical_b(const ModelParams& prm) {
  const double alpha = prm.alpha(), p = prm.p(), q = prm.q();
  const double c = alpha * (1.0 - alpha), a1 = (1.0 - alpha) * (1.0 - alpha);
  const double r = prm.lambda_b() * (p - q);
  const auto rc = pgf::regime_constants(prm, 0.0, 0.0);
  const double mu = rc.mu.real();
  const double th1 = pgf::real_part_checked(rc.theta1);

  ExtinctionResult out;
  out.limit = stem_fixed_point(alpha, p * p / (q * q));
  out.rate_class = RateClass::Exponential;
  if (std::abs(th1 + 1.0) < 1e-9)
    throw DegenerateParameterError("theta1 = -1: both decay modes coincide");
  double k = 0.0;
  if (th1 > -1.0) {
    const double c0 = pgf::real_part_checked(rc.c_const);
    out.exponent = -r * th1;
    k = c0 * th1 * std::pow(p, -2.0 * th1) / (mu * a1);
  } else {
    const Complex th2 = rc.theta2, th3 = rc.theta3;
    const Complex u = 1.0 + rc.theta1 + th2;
    const Complex kp = (u * u - th3 * th3) / (4.0 * q * q * (1.0 + rc.theta1));
    const Complex phi0 =
        kp - (1.0 + th2) / (2.0 * q * q) + c * mu * (p * p - q * q) / (q * q * q * q);
    out.exponent = r;
    k = -p * p * pgf::real_part_checked(phi0) / (mu * a1);
  }
  out.rate_coefficient = -k;
  return out;
}

}  // namespace

ExtinctionResult extinction_limit(const ModelParams& params) {
  const auto regime = classify(params);
  const double alpha = params.alpha(), lb = params.lambda_b();
  switch (regime.theorem_branch) {
    case TheoremBranch::BiCritical_1a:
      return {1.0, RateClass::InverseSqrtT, 4.0 / std::sqrt(lb), 0.0};
    case TheoremBranch::NonCritA_CritB_1b:
      if (alpha < 0.5)
        return {alpha * alpha / ((1.0 - alpha) * (1.0 - alpha)), RateClass::InverseT,
                8.0 * alpha * alpha / ((1.0 - alpha) * (1.0 - 2.0 * alpha) * lb), 0.0};
      return {1.0, RateClass::InverseT, 8.0 * alpha / ((2.0 * alpha - 1.0) * lb), 0.0};
    case TheoremBranch::NonCritB_1c:
      if (regime.b_class == Criticality::SubCritical)
        throw UnsupportedRegimeError("B sub-critical with A non-critical: rate not available");
      return supercritical_b(params);
    case TheoremBranch::OracleOnly: break;
  }
  throw UnsupportedRegimeError("boundary parameters: use extinction_fixed_point or the ODE");
}

double extinction_fixed_point(const ModelParams& params) {
  const double p = params.p(), q = params.q();
  const double sb = q > p ? (p * p) / (q * q) : 1.0;
  return stem_fixed_point(params.alpha(), sb);
}

std::vector<CurvePoint> extinction_curve(const ModelParams& params, std::span<const double> times,
                                         CurveMethod method, const CurveOptions& options) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i]))
      throw InvalidParameterError("times must be finite and >= 0");
    if (i > 0 && times[i] < times[i - 1]) throw InvalidParameterError("times must be sorted");
  }
  std::vector<CurvePoint> out;
  out.reserve(times.size());
  switch (method) {
    case CurveMethod::Exact:
      for (double t : times) out.push_back({t, pgf::pgf_a_real(0.0, 0.0, t, params), 0.0});
      break;
    case CurveMethod::Ode: {
      const auto path = oracle::integrate_backward_path(0.0, 0.0, times, params);
      for (std::size_t i = 0; i < times.size(); ++i)
        out.push_back({times[i], pgf::real_part_checked(path[i].f_a), 0.0});
      break;
    }
    case CurveMethod::Asymptotic: {
      const auto res = extinction_limit(params);
      for (double t : times) {
        const double v = t > 0.0 ? res.asymptote(t) : 0.0;
        out.push_back({t, std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0), 0.0});
      }
      break;
    }
    case CurveMethod::MonteCarlo:
      for (double t : times) {
        const auto e =
            oracle::estimate_extinction(params, t, options.replicates, options.seed, options.mc);
        out.push_back({t, e.value, e.half_width_99});
      }
      break;
  }
  return out;
}

}  // namespace stembranch::asymptotics

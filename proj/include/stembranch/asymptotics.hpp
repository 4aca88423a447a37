#pragma once

// Extinction probability E(t) = F_A(0, 0, t) and its large-t behaviour.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "stembranch/model.hpp"
#include "stembranch/oracle.hpp"

namespace stembranch::asymptotics {

enum class RateClass { InverseSqrtT, InverseT, Exponential };

std::string_view to_string(RateClass r) noexcept;

/// E(t) ~ limit - rate_coefficient * g(t) with g(t) = t^{-1/2}, 1/t, or
/// exp(exponent * t) (exponent < 0) by rate_class.
struct ExtinctionResult {
  double limit = 0.0;
  RateClass rate_class = RateClass::Exponential;
  double rate_coefficient = 0.0;
  double exponent = 0.0;  ///< Exponential only

  double asymptote(double t) const;
};

/// Limit and approach rate.
///  * bi-critical: 1 - 4 / sqrt(lambda_b t)
///  * A non-critical, B critical: alpha < 1/2 tends to (alpha/(1-alpha))^2,
///    alpha > 1/2 to 1, both at rate 1/t
///  * B super-critical: the smallest fixed point, exponentially, with exponent
///    -lambda_b (p-q) theta1 for theta1 in (-1, 0) and lambda_b (p-q) for
///    theta1 < -1
/// B sub-critical with A non-critical and the boundary (oracle-only) regimes
/// raise UnsupportedRegimeError; theta1 = -1 raises DegenerateParameterError.
ExtinctionResult extinction_limit(const ModelParams& params);

/// lim E(t) from the fixed-point equations s_B = h_B(s_B),
/// s_A = h_A(s_A, s_B): the smallest roots in [0, 1]. Valid in every regime.
double extinction_fixed_point(const ModelParams& params);

enum class CurveMethod { Exact, Asymptotic, MonteCarlo, Ode };

struct CurveOptions {
  std::uint64_t replicates = 10'000;
  std::uint64_t seed = 1;
  oracle::MonteCarloOptions mc;
};

struct CurvePoint {
  double t;
  double value;
  double half_width_99;  ///< MonteCarlo only
};

/// E(t) on a sorted, non-negative time grid. Exact uses pgf_a in Auto mode,
/// Ode integrates once along the grid, Asymptotic evaluates the large-t form
/// clipped to [0, 1], MonteCarlo estimates each point with the same seed.
std::vector<CurvePoint> extinction_curve(const ModelParams& params, std::span<const double> times,
                                         CurveMethod method, const CurveOptions& options = {});

}  // namespace stembranch::asymptotics

#include "stembranch/moments.hpp"

#include <algorithm>
#include <cmath>

#include "stembranch/errors.hpp"

namespace stembranch {

MomentPair expected_counts(const ModelParams& params, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameterError("t must be >= 0");
  const double alpha = params.alpha();
  const double p = params.p();
  const double q = params.q();
  const double r_a = params.lambda_a() * (1.0 - 2.0 * alpha);
  const double r_b = params.lambda_b() * (q * q - p * p);
  // B-cells produced per A-event: AB gives one, BB gives two.
  const double feed = 2.0 * params.lambda_a() * alpha;

  const double e_a = std::exp(r_a * t);
  double e_b;
  const double gap = r_a - r_b;
  if (std::abs(gap) < kResonanceTolerance * std::max(params.lambda_a(), params.lambda_b())) {
    e_b = feed * t * e_a;
  } else {
    // e^{r_a t} - e^{r_b t} = e^{r_b t} expm1(gap t), accurate for small gaps.
    e_b = feed * std::exp(r_b * t) * std::expm1(gap * t) / gap;
  }
  return {e_a, e_b, t};
}

}  // namespace stembranch

#pragma once

#include "stembranch/model.hpp"

namespace stembranch {

struct MomentPair {
  double e_a;  ///< E[Z_A(t)]
  double e_b;  ///< E[Z_B(t)]
  double t;
};

/// Relative gap below which lambda_a(1-2 alpha) and lambda_b(q^2-p^2) are
/// treated as equal and E_B uses its confluent limit.
inline constexpr double kResonanceTolerance = 1e-9;

/// Expected counts starting from one A-cell:
///   E_A(t) = exp(r_a t),          r_a = lambda_a (1 - 2 alpha)
///   E_B(t) = 2 lambda_a alpha (e^{r_a t} - e^{r_b t}) / (r_a - r_b),
///                                 r_b = lambda_b (q^2 - p^2)
/// and E_B(t) = 2 lambda_a alpha t e^{r_a t} when r_a == r_b (this covers
/// the bi-critical E_B = lambda_a t). The feed 2 lambda_a alpha is the mean
/// number of B-cells created per unit time by one A-cell: an AB split adds
/// one, a BB split adds two. With alpha = 0 no B-cell ever appears.
/// Throws InvalidParameterError for t < 0.
MomentPair expected_counts(const ModelParams& params, double t);

}  // namespace stembranch

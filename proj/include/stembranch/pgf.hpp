#pragma once

// Exact joint generating function F_A(x, y, t) = E[x^Z_A(t) y^Z_B(t)] of the
// process started from one A-cell, and F_B(y, t) for one B-cell.
//
// Closed forms by regime (see classify()):
//   BiCritical_1a      modified Bessel functions of order theta at mu sqrt(w),
//                      theta = sqrt(1 - mu), mu = 4 lambda_a / lambda_b
//   NonCritA_CritB_1b  Whittaker M and W at theta w, theta = |1-2 alpha| mu
//   NonCritB_1c        Gauss 2F1 at z / q^2,  mu = lambda_a / (lambda_b (p-q))
// The time variable enters through w = lambda_b t / 4 + 1/(1-y) (1a, 1b) or
// z = P e^{lambda_b (p-q) t}, P = (p^2 - y q^2)/(1-y) (1c).
//
// All intermediate arithmetic is complex; theta and friends are imaginary on
// open parameter sets while F_A stays real for real (x, y).

#include <string>

#include "stembranch/model.hpp"
#include "stembranch/oracle.hpp"

namespace stembranch::pgf {

/// |1 - y| at or below this makes the w / z transforms singular.
inline constexpr double kSingularY = 1e-8;

struct RegimeConstants {
  TheoremBranch branch;
  Complex mu;
  Complex theta;   ///< 1a, 1b
  Complex theta1;  ///< 1b, 1c
  Complex theta2;  ///< 1b, 1c
  Complex theta3;  ///< 1c
  Complex c_const; ///< integration constant fixed by F_A(x, y, 0) = x; in 1a the
                   ///< weight of I against K, in 1b of W against M, in 1c of the
                   ///< z^{(1-theta1)/2} against the z^{(1+theta1)/2} solution
  Complex kappa;   ///< value of T'/T-type ratio imposed at t = 0
};

/// Constants of the closed form for initial values (x, y). Throws
/// DegenerateParameterError for OracleOnly parameters or when the two basis
/// solutions coincide (integer theta1 in 1c), and
/// SingularTransformError when |1 - y| <= kSingularY.
RegimeConstants regime_constants(const ModelParams& params, Complex x, Complex y);

struct TransformState {
  Complex w;
  Complex z;
  Complex p_big;
};

/// w = (lambda_b t (1-y)/4 + 1) / (1-y)
Complex transform_w(Complex y, double t, const ModelParams& params);

/// z = (p^2 - y q^2)/(1-y) * exp(lambda_b (p-q) t)
Complex transform_z(Complex y, double t, const ModelParams& params);

TransformState transforms(Complex y, double t, const ModelParams& params);

/// F_B(y, t). Critical B: (lambda_b t (1-y)/2 + 2y) / (lambda_b t (1-y)/2 + 2).
/// Otherwise (z - p^2)/(z - q^2), evaluated after multiplying through by
/// (1 - y) so that y = 1 is not singular.
Complex pgf_b(Complex y, double t, const ModelParams& params);

enum class Method { ClosedForm, Oracle, Auto };

std::string_view to_string(Method m) noexcept;

struct PgfResult {
  Complex value;
  Method used;                 ///< ClosedForm or Oracle
  std::string fallback_reason; ///< non-empty when Auto fell back to the oracle
};

/// Joint PGF F_A(x, y, t) for |x|, |y| <= 1 and t >= 0.
///
/// At y == 1 exactly, the closed form is the birth-death PGF of Z_A alone
/// (the w / z transforms are singular there). For 0 < |1 - y| <= kSingularY
/// the closed form is unavailable. At t == 0 every method but Oracle returns
/// x itself.
///
/// ClosedForm propagates SingularTransformError, DomainError,
/// ConvergenceError and DegenerateParameterError. Auto catches those (and
/// non-finite results, or for real x, y in [0, 1] a value outside [0, 1] or
/// with a non-negligible imaginary part) and returns the backward-equation
/// oracle instead, recording why.
PgfResult pgf_a(Complex x, Complex y, double t, const ModelParams& params,
                Method method = Method::Auto, const oracle::StepControl& ctl = {});

/// Real-valued F_A for real x, y in [0, 1]; the imaginary part of the
/// complex computation must satisfy |im| < 1e-8 max(1, |re|) or
/// ConsistencyError is thrown.
double pgf_a_real(double x, double y, double t, const ModelParams& params,
                  Method method = Method::Auto, Method* used = nullptr);

/// Cast with the |im| < 1e-8 max(1, |re|) guard.
double real_part_checked(Complex value);

}  // namespace stembranch::pgf

#include "stembranch/pgf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stembranch/errors.hpp"
#include "stembranch/specfun.hpp"

namespace stembranch::pgf {
namespace {

using specfun::bessel_i_scaled;
using specfun::bessel_k_scaled;
using specfun::cpow;
using specfun::gauss_2f1;
using specfun::kummer_m;
using specfun::tricomi_u;

constexpr double kImagGuard = 1e-8;
constexpr double kRangeSlack = 1e-9;
constexpr double kIntegerOrderTol = 1e-10;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Complex one_minus_y_checked(Complex y) {
  const Complex d = 1.0 - y;
  if (std::abs(d) <= kSingularY) throw SingularTransformError("transform singular at y = 1");
  return d;
}

// ---- 1a: Bessel basis in s = mu sqrt(w) -----------------------------------
// The solution is written as u = K(theta, s) + D I(theta, s) and enters only
// through u'/u. The pair {K, I} stays well conditioned for large s, where
// I(-theta) and I(theta) become numerically indistinguishable. Both are
// carried exponentially scaled.

struct Bessel1a {
  double mu;
  Complex theta;

  explicit Bessel1a(const ModelParams& prm)
      : mu(4.0 * prm.lambda_a() / prm.lambda_b()), theta(std::sqrt(Complex(1.0 - mu))) {}

  // k = e^s K, k1 = e^s K', i = e^-s I, i1 = e^-s I'
  struct Point {
    Complex k, k1, i, i1, s, sw;
  };

  Point at(Complex w) const {
    const Complex sw = std::sqrt(w);
    const Complex s = mu * sw;
    const Complex g = theta / s;
    const Complex k = bessel_k_scaled(theta, s), k_up = bessel_k_scaled(theta + 1.0, s);
    const Complex i = bessel_i_scaled(theta, s), i_up = bessel_i_scaled(theta + 1.0, s);
    return {k, g * k - k_up, i, g * i + i_up, s, sw};
  }

  Complex kappa(Complex x, Complex y) const {
    const Complex r = std::sqrt(1.0 - y);
    return (2.0 - y - x) / (2.0 * r) - r / mu;
  }
};

// ---- 1b: confluent basis in theta w ---------------------------------------
// The common Whittaker prefactor e^{-z/2} z^{theta2+1/2} cancels in every
// ratio below, so the bare 1F1 and U are used.

struct Whittaker1b {
  double mu, c, a1;
  Complex theta1, theta2, theta, a;

  explicit Whittaker1b(const ModelParams& prm)
      : mu(4.0 * prm.lambda_a() / prm.lambda_b()),
        c(prm.alpha() * (1.0 - prm.alpha())),
        a1((1.0 - prm.alpha()) * (1.0 - prm.alpha())) {
    const double d = std::abs(1.0 - 2.0 * prm.alpha());
    theta1 = -mu * c / d;
    theta2 = 0.5 * std::sqrt(Complex(1.0 - 4.0 * mu * c));
    theta = d * mu;
    a = 0.5 + theta1 + theta2;
  }

  struct Point {
    Complex m0, m1, w0, w1;
  };

  Point at(Complex w) const {
    const Complex z = theta * w;
    const Complex b = 1.0 + 2.0 * theta2;
    const Complex k0 = theta2 - theta1 + 0.5;
    const Complex k1 = k0 - 1.0;
    return {kummer_m(k0, b, z), kummer_m(k1, b, z), tricomi_u(k0, b, z), tricomi_u(k1, b, z)};
  }

  Complex kappa(Complex x, Complex y) const {
    const Complex d = 1.0 - y;
    return (-mu * a1 * x + 0.5 * mu * (1.0 - 2.0 * c * y) - 0.5 * theta + theta1 * d) / d;
  }
};

// ---- 1c: Gauss basis in z / q^2 --------------------------------------------
// Both solutions are divided by z^{(1+theta1)/2} and multiplied by z, which
// keeps them bounded as z -> 0.

struct Gauss1c {
  double p, q, c, a1, mu, r;
  Complex theta1, theta2, theta3, kp, km;

  explicit Gauss1c(const ModelParams& prm)
      : p(prm.p()), q(prm.q()), c(prm.alpha() * (1.0 - prm.alpha())),
        a1((1.0 - prm.alpha()) * (1.0 - prm.alpha())),
        mu(prm.lambda_a() / (prm.lambda_b() * (prm.p() - prm.q()))),
        r(prm.lambda_b() * (prm.p() - prm.q())) {
    theta1 = mu * std::sqrt(Complex(q * q - 4.0 * c * p * p)) / q;
    theta2 = std::sqrt(Complex(q * q + 4.0 * c * mu * (q - p))) / q;
    theta3 = mu * std::abs(1.0 - 2.0 * prm.alpha());
    if (std::abs(theta1.imag()) < kIntegerOrderTol &&
        std::abs(theta1.real() - std::round(theta1.real())) < kIntegerOrderTol)
      throw DegenerateParameterError("hypergeometric basis degenerate: theta1 is an integer");
    kp = k(theta1);
    km = k(-theta1);
  }

  Complex k(Complex s) const {
    const Complex u = 1.0 + s + theta2;
    return (u * u - theta3 * theta3) / (4.0 * q * q * (1.0 + s));
  }

  // P = z P_plus, Pm = z P_minus, Q, Qm as described above
  struct Point {
    Complex P, Pm, Q, Qm;
  };

  Point at(Complex z) const {
    const Complex u = z / (q * q);
    auto f = [&](Complex s, Complex shift) {
      const Complex a = 0.5 * (1.0 + s + theta2 + theta3) + shift;
      const Complex b = 0.5 * (1.0 + s + theta2 - theta3) + shift;
      return gauss_2f1(a, b, 1.0 + s + shift, u);
    };
    const Complex f0p = f(theta1, 0.0), f1p = f(theta1, 1.0);
    const Complex f0m = f(-theta1, 0.0), f1m = f(-theta1, 1.0);
    const Complex zr = cpow(z, -theta1);
    return {0.5 * (1.0 + theta1) * f0p + kp * z * f1p,
            zr * (0.5 * (1.0 - theta1) * f0m + km * z * f1m), f0p, zr * f0m};
  }

  // z-bar times the imposed log-derivative at t = 0
  Complex kappa_scaled(Complex x, Complex y) const {
    const Complex zb = p * p - y * q * q;
    return -mu * a1 * x - mu * c * y + 0.5 * (1.0 + mu) -
           (1.0 + theta2) * zb / (2.0 * (p - q));
  }
};

Complex closed_1a(Complex x, Complex y, double t, const ModelParams& prm,
                  RegimeConstants* rc = nullptr) {
  const Bessel1a b(prm);
  const Complex w0 = 1.0 / one_minus_y_checked(y);
  const Complex kap = b.kappa(x, y);
  const auto s = b.at(w0);
  // D = e^{-2 s0} cn / cd makes u'(s0) = kappa u(s0)
  const Complex cn = kap * s.k - s.k1;
  const Complex cd = s.i1 - kap * s.i;
  if (rc) {
    *rc = {TheoremBranch::BiCritical_1a, b.mu, b.theta, {}, {}, {},
           std::exp(-2.0 * s.s) * cn / cd, kap};
    return {};
  }
  const Complex w = transform_w(y, t, prm);
  const auto e = b.at(w);
  const Complex decay = std::exp(-2.0 * (e.s - s.s));
  const Complex ratio = (cd * decay * e.k1 + cn * e.i1) / (cd * decay * e.k + cn * e.i);
  return -4.0 / b.mu *
         (b.mu / (2.0 * e.sw) * ratio + 1.0 / (2.0 * w) - b.mu * (1.0 + w) / (4.0 * w));
}

Complex closed_1b(Complex x, Complex y, double t, const ModelParams& prm,
                  RegimeConstants* rc = nullptr) {
  const Whittaker1b b(prm);
  const Complex w0 = 1.0 / one_minus_y_checked(y);
  const Complex kap = b.kappa(x, y);
  const auto s = b.at(w0);
  const Complex cn = b.a * s.m1 - kap * s.m0;
  const Complex cd = kap * s.w0 + s.w1;
  if (rc) {
    *rc = {TheoremBranch::NonCritA_CritB_1b, b.mu, b.theta, b.theta1, b.theta2, {}, cn / cd, kap};
    return {};
  }
  const Complex w = transform_w(y, t, prm);
  const auto e = b.at(w);
  const Complex ratio = (cd * b.a * e.m1 - cn * e.w1) / (cd * e.m0 + cn * e.w0);
  return -1.0 / (b.mu * b.a1) *
         (0.5 * b.theta - b.theta1 / w + ratio / w -
          b.mu * (w + 2.0 * b.c * (1.0 - w)) / (2.0 * w));
}

Complex closed_1c(Complex x, Complex y, double t, const ModelParams& prm,
                  RegimeConstants* rc = nullptr) {
  const Gauss1c g(prm);
  const Complex zb = (g.p * g.p - y * g.q * g.q) / one_minus_y_checked(y);
  const Complex ks = g.kappa_scaled(x, y);
  const auto s = g.at(zb);
  const Complex cn = s.Q * ks - s.P;
  const Complex cd = s.Pm - s.Qm * ks;
  if (rc) {
    *rc = {TheoremBranch::NonCritB_1c, g.mu, {}, g.theta1, g.theta2, g.theta3, cn / cd, ks / zb};
    return {};
  }
  const Complex z = zb * std::exp(g.r * t);
  const auto e = g.at(z);
  const Complex zratio = (cd * e.P + cn * e.Pm) / (cd * e.Q + cn * e.Qm);
  const double p2 = g.p * g.p, q2 = g.q * g.q;
  const Complex h = (z - p2) / (z - q2);
  return -(zratio + z * (1.0 + g.theta2) / (2.0 * (z - q2)) -
           0.5 * (1.0 - g.mu * (2.0 * g.c * h - 1.0))) /
         (g.mu * g.a1);
}

// At y = 1 only the A-count is seen: a linear birth-death process with
// birth rate lambda_a (1-alpha)^2 and death rate lambda_a alpha^2 (AB
// divisions leave it unchanged).
Complex a_marginal(Complex x, double t, const ModelParams& prm) {
  const double al = prm.alpha();
  const double b = prm.lambda_a() * (1.0 - al) * (1.0 - al);
  const double d = prm.lambda_a() * al * al;
  if (b == d) {
    const Complex u = b * t * (1.0 - x);
    return (u + x) / (u + 1.0);
  }
  const double e = std::exp(-(b - d) * t);
  return (d * (x - 1.0) - (b * x - d) * e) / (b * (x - 1.0) - (b * x - d) * e);
}

Complex closed_form(Complex x, Complex y, double t, const ModelParams& prm,
                    RegimeConstants* rc = nullptr) {
  const auto branch = classify(prm).theorem_branch;
  if (!rc && y == Complex(1.0) && branch != TheoremBranch::OracleOnly) return a_marginal(x, t, prm);
  switch (branch) {
    case TheoremBranch::BiCritical_1a: return closed_1a(x, y, t, prm, rc);
    case TheoremBranch::NonCritA_CritB_1b: return closed_1b(x, y, t, prm, rc);
    case TheoremBranch::NonCritB_1c: return closed_1c(x, y, t, prm, rc);
    case TheoremBranch::OracleOnly: break;
  }
  throw DegenerateParameterError("parameters on the boundary; no closed form");
}

void check_inputs(Complex x, Complex y, double t) {
  constexpr double slack = 1e-12;
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameterError("t must be finite and >= 0");
  if (!finite(x) || !finite(y) || std::abs(x) > 1.0 + slack || std::abs(y) > 1.0 + slack)
    throw InvalidParameterError("x and y must lie in the closed unit disk");
}

bool is_real_unit(Complex v) { return v.imag() == 0.0 && v.real() >= 0.0 && v.real() <= 1.0; }

}  // namespace

RegimeConstants regime_constants(const ModelParams& params, Complex x, Complex y) {
  RegimeConstants rc{};
  closed_form(x, y, 0.0, params, &rc);
  return rc;
}

Complex transform_w(Complex y, double t, const ModelParams& params) {
  const Complex d = one_minus_y_checked(y);
  return (params.lambda_b() * t * d / 4.0 + 1.0) / d;
}

Complex transform_z(Complex y, double t, const ModelParams& params) {
  const Complex d = one_minus_y_checked(y);
  const double p = params.p(), q = params.q();
  return (p * p - y * q * q) / d * std::exp(params.lambda_b() * (p - q) * t);
}

TransformState transforms(Complex y, double t, const ModelParams& params) {
  const Complex w = transform_w(y, t, params);
  const Complex pb = transform_z(y, 0.0, params);
  return {w, pb * std::exp(params.lambda_b() * (params.p() - params.q()) * t), pb};
}

Complex pgf_b(Complex y, double t, const ModelParams& params) {
  const double p = params.p(), q = params.q(), lb = params.lambda_b();
  if (t == 0.0) return y;
  const Complex d = 1.0 - y;
  if (p == q) {
    const Complex u = lb * t * d / 2.0;
    return (u + 2.0 * y) / (u + 2.0);
  }
  const Complex top = (p * p - y * q * q) * std::exp(lb * (p - q) * t);
  const Complex den = top - q * q * d;
  if (den == Complex(0.0)) throw SingularTransformError("pgf_b: z = q^2");
  return (top - p * p * d) / den;
}

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::ClosedForm: return "closed";
    case Method::Oracle: return "ode";
    case Method::Auto: return "auto";
  }
  return "?";
}

double real_part_checked(Complex value) {
  if (!(std::abs(value.imag()) < kImagGuard * std::max(1.0, std::abs(value.real()))))
    throw ConsistencyError("imaginary part " + std::to_string(value.imag()) +
                           " not negligible against real part " + std::to_string(value.real()));
  return value.real();
}

PgfResult pgf_a(Complex x, Complex y, double t, const ModelParams& params, Method method,
                const oracle::StepControl& ctl) {
  check_inputs(x, y, t);
  auto oracle_value = [&] { return oracle::integrate_backward(x, y, t, params, ctl).f_a; };
  if (method == Method::Oracle) return {oracle_value(), Method::Oracle, {}};
  // the initial condition, exactly rather than up to cancellation in the closed forms
  if (t == 0.0) return {x, Method::ClosedForm, {}};
  if (method == Method::ClosedForm) return {closed_form(x, y, t, params), Method::ClosedForm, {}};

  std::string reason;
  try {
    const Complex v = closed_form(x, y, t, params);
    if (!finite(v)) {
      reason = "non-finite closed-form value";
    } else if (is_real_unit(x) && is_real_unit(y)) {
      const double re = real_part_checked(v);
      if (re < -kRangeSlack || re > 1.0 + kRangeSlack)
        reason = "closed-form value " + std::to_string(re) + " outside [0, 1]";
      else
        return {v, Method::ClosedForm, {}};
    } else {
      return {v, Method::ClosedForm, {}};
    }
  } catch (const Error& e) {
    reason = std::string(e.name()) + ": " + e.what();
  }
  return {oracle_value(), Method::Oracle, reason};
}

double pgf_a_real(double x, double y, double t, const ModelParams& params, Method method,
                  Method* used) {
  const auto r = pgf_a(Complex(x), Complex(y), t, params, method);
  if (used) *used = r.used;
  return real_part_checked(r.value);
}

}  // namespace stembranch::pgf

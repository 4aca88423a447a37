#include "stembranch/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stembranch/errors.hpp"

namespace stembranch::specfun {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_finite(Complex z, const char* what) {
  if (!finite(z)) throw DomainError(std::string(what) + ": non-finite argument");
}

Complex checked(Complex value, const char* what) {
  if (!finite(value)) throw ConvergenceError(std::string(what) + ": overflow");
  return value;
}

// Sums sum_k t_k where t_0 = first and t_k = t_{k-1} * ratio(k). Stops after
// three consecutive negligible terms once k >= min_k, or immediately when a
// term is exactly zero (terminating series).
template <class Ratio>
Complex sum_series(Complex first, Ratio&& ratio, double min_k, const SeriesControl& ctl,
                   const char* what) {
  Complex term = first;
  Complex sum = first;
  int small = 0;
  for (int k = 1; k <= ctl.max_terms; ++k) {
    term *= ratio(k);
    if (term == Complex(0.0)) return sum;
    sum += term;
    if (!finite(sum)) throw ConvergenceError(std::string(what) + ": overflow");
    if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
      if (++small >= 3 && k >= min_k) return sum;
    } else {
      small = 0;
    }
  }
  throw ConvergenceError(std::string(what) + ": series did not converge within " +
                         std::to_string(ctl.max_terms) + " terms");
}

// 1F1 by direct summation; no transformation.
Complex kummer_series(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  const double min_k = std::max({std::abs(z), -a.real(), -b.real(), 0.0});
  return sum_series(
      1.0, [&](int k) { return (a + (k - 1.0)) / ((b + (k - 1.0)) * static_cast<double>(k)) * z; },
      min_k, ctl, "kummer_m");
}

Complex tricomi_connection(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  const Complex first = gamma(1.0 - b) * rgamma(a - b + 1.0);
  const Complex second = gamma(b - 1.0) * rgamma(a);
  Complex value = 0.0;
  if (first != Complex(0.0)) value += first * kummer_m(a, b, z, ctl);
  if (second != Complex(0.0)) {
    value += second * cpow(z, 1.0 - b) * kummer_m(a - b + 1.0, 2.0 - b, z, ctl);
  }
  return value;
}

// Asymptotic expansion of U for large |z|; returns false if the terms start
// growing before reaching the tolerance.
bool tricomi_asymptotic(Complex a, Complex b, Complex z, const SeriesControl& ctl,
                        Complex& out) {
  const Complex c = a - b + 1.0;
  Complex term = 1.0;
  Complex sum = 1.0;
  double previous = 1.0;
  for (int k = 1; k <= ctl.max_terms; ++k) {
    term *= -(a + (k - 1.0)) * (c + (k - 1.0)) / (static_cast<double>(k) * z);
    const double size = std::abs(term);
    if (size == 0.0) break;
    if (size > previous) return false;
    sum += term;
    if (size <= ctl.rel_tol * std::abs(sum)) break;
    previous = size;
    if (k == ctl.max_terms) return false;
  }
  out = cpow(z, -a) * sum;
  return true;
}

// U for Re z > 0 and Re a >= 1 from
//   U(a, b, z) = 1/G(a) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt
// with the exp-sinh substitution t = exp(pi/2 sinh u) and the trapezoid
// rule, halving the step until successive estimates agree.
Complex tricomi_quadrature(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  constexpr double half_pi = 0.5 * std::numbers::pi;
  constexpr double u_max = 6.5;
  auto f = [&](double u) -> Complex {
    const double s = half_pi * std::sinh(u);
    if (s > 700.0) return 0.0;
    const double t = std::exp(s);
    const Complex log_v = -z * t + (a - 1.0) * s + (b - a - 1.0) * std::log1p(t);
    if (log_v.real() < -745.0) return 0.0;
    return std::exp(log_v) * (half_pi * std::cosh(u) * t);
  };
  double h = 0.5;
  Complex sum = f(0.0);
  for (double u = h; u <= u_max; u += h) sum += f(u) + f(-u);
  Complex estimate = sum * h;
  for (int level = 0; level < 8; ++level) {
    h *= 0.5;
    for (double u = h; u <= u_max; u += 2.0 * h) sum += f(u) + f(-u);
    const Complex next = sum * h;
    const bool done = std::abs(next - estimate) <= ctl.rel_tol * std::abs(next);
    estimate = next;
    if (done && level >= 2) return estimate * rgamma(a);
  }
  throw ConvergenceError("tricomi_u: quadrature did not converge");
}

// Shift a up to Re a >= 1, integrate twice, and recur back down with
//   U(a-1) = (2a - b + z) U(a) - a (a - b + 1) U(a+1),
// which is stable in this direction (U is the minimal solution as a grows).
Complex tricomi_by_integral(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  const int n = a.real() >= 1.0 ? 0 : static_cast<int>(std::ceil(1.0 - a.real()));
  Complex top = a + static_cast<double>(n);
  Complex u0 = tricomi_quadrature(top, b, z, ctl);
  if (n == 0) return u0;
  Complex u1 = tricomi_quadrature(top + 1.0, b, z, ctl);
  for (int k = 0; k < n; ++k) {
    const Complex down = (2.0 * top - b + z) * u0 - top * (top - b + 1.0) * u1;
    u1 = u0;
    u0 = down;
    top -= 1.0;
  }
  return u0;
}

}  // namespace

Complex bessel_i(Complex a, Complex z, const SeriesControl& ctl) {
  check_finite(a, "bessel_i");
  check_finite(z, "bessel_i");
  if (a.imag() == 0.0 && a.real() < 0.0 && a.real() == std::round(a.real())) a = -a;
  if (z == Complex(0.0)) {
    if (a == Complex(0.0)) return 1.0;
    if (a.real() > 0.0) return 0.0;
    throw DomainError("bessel_i: z = 0 with Re(order) <= 0");
  }
  const Complex half = 0.5 * z;
  const Complex quarter_sq = half * half;
  const Complex first = cpow(half, a) * rgamma(a + 1.0);
  const double min_k = std::max({0.5 * std::abs(z), -a.real(), 0.0});
  return sum_series(
      first, [&](int k) { return quarter_sq / (static_cast<double>(k) * (a + static_cast<double>(k))); },
      min_k, ctl, "bessel_i");
}

Complex bessel_i_deriv(Complex a, Complex z, const SeriesControl& ctl) {
  return 0.5 * (bessel_i(a - 1.0, z, ctl) + bessel_i(a + 1.0, z, ctl));
}

Complex bessel_i_scaled(Complex a, Complex z, const SeriesControl& ctl) {
  check_finite(a, "bessel_i_scaled");
  check_finite(z, "bessel_i_scaled");
  if (std::abs(z) <= kBesselSeriesLimit) return checked(std::exp(-z) * bessel_i(a, z, ctl), "bessel_i_scaled");
  if (z.real() <= 0.0) throw DomainError("bessel_i_scaled: large argument needs Re z > 0");
  // I(a,z) e^{-z} sqrt(2 pi z) ~ sum_k (-1)^k prod_{j<=k} (4a^2 - (2j-1)^2) / (k! (8z)^k);
  // the omitted e^{-2z} companion is far below rel_tol here.
  const Complex mu = 4.0 * a * a;
  Complex term = 1.0, sum = 1.0;
  double previous = 1.0;
  for (int k = 1; k <= ctl.max_terms; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * z);
    const double size = std::abs(term);
    if (size > previous) throw ConvergenceError("bessel_i_scaled: asymptotic series diverged");
    sum += term;
    if (size <= ctl.rel_tol * std::abs(sum)) break;
    previous = size;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

Complex bessel_k_scaled(Complex a, Complex z, const SeriesControl& ctl) {
  check_finite(a, "bessel_k_scaled");
  check_finite(z, "bessel_k_scaled");
  if (z.real() <= 0.0) throw DomainError("bessel_k_scaled: requires Re z > 0");
  const Complex u = tricomi_u(a + 0.5, 2.0 * a + 1.0, 2.0 * z, ctl);
  return checked(std::sqrt(std::numbers::pi) * cpow(2.0 * z, a) * u, "bessel_k_scaled");
}

Complex kummer_m(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  check_finite(a, "kummer_m");
  check_finite(b, "kummer_m");
  check_finite(z, "kummer_m");
  if (near_nonpositive_integer(b)) throw DomainError("kummer_m: b is a non-positive integer");
  if (z.real() < 0.0) {
    // Kummer's transformation avoids the alternating series.
    return checked(std::exp(z) * kummer_series(b - a, b, -z, ctl), "kummer_m");
  }
  return kummer_series(a, b, z, ctl);
}

Complex tricomi_u(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  check_finite(a, "tricomi_u");
  check_finite(b, "tricomi_u");
  check_finite(z, "tricomi_u");
  if (z == Complex(0.0)) throw DomainError("tricomi_u: z = 0");
  if (a == Complex(0.0)) return 1.0;

  if (std::abs(z) >= 15.0) {
    Complex value;
    if (tricomi_asymptotic(a, b, z, ctl, value)) return value;
  }

  if (z.real() > 0.0) return checked(tricomi_by_integral(a, b, z, ctl), "tricomi_u");

  const double nearest = std::round(b.real());
  if (std::abs(b.imag()) < 1e-4 && std::abs(b.real() - nearest) < 1e-4) {
    // The connection formula is 0 * inf at integer b. Symmetric differences
    // around b cancel the odd terms; Richardson removes the d^2 term.
    constexpr double d = 1e-3;
    auto symmetric = [&](double h) {
      return 0.5 * (tricomi_connection(a, b + h, z, ctl) + tricomi_connection(a, b - h, z, ctl));
    };
    const Complex value = (4.0 * symmetric(d) - symmetric(2.0 * d)) / 3.0;
    if (!finite(value)) throw DegenerateParameterError("tricomi_u: integer-b limit failed");
    return value;
  }
  return checked(tricomi_connection(a, b, z, ctl), "tricomi_u");
}

Complex whittaker_m(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  const Complex m = kummer_m(b - a + 0.5, 1.0 + 2.0 * b, z, ctl);
  return checked(std::exp(-0.5 * z) * cpow(z, b + 0.5) * m, "whittaker_m");
}

Complex whittaker_w(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  const Complex u = tricomi_u(b - a + 0.5, 1.0 + 2.0 * b, z, ctl);
  return checked(std::exp(-0.5 * z) * cpow(z, b + 0.5) * u, "whittaker_w");
}

Complex whittaker_m_deriv(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  if (z == Complex(0.0)) throw DomainError("whittaker_m_deriv: z = 0");
  return (0.5 - a / z) * whittaker_m(a, b, z, ctl) +
         (0.5 + a + b) / z * whittaker_m(a + 1.0, b, z, ctl);
}

Complex whittaker_w_deriv(Complex a, Complex b, Complex z, const SeriesControl& ctl) {
  if (z == Complex(0.0)) throw DomainError("whittaker_w_deriv: z = 0");
  return (0.5 - a / z) * whittaker_w(a, b, z, ctl) - whittaker_w(a + 1.0, b, z, ctl) / z;
}

Complex gauss_2f1(Complex a, Complex b, Complex c, Complex z, const SeriesControl& ctl) {
  check_finite(a, "gauss_2f1");
  check_finite(b, "gauss_2f1");
  check_finite(c, "gauss_2f1");
  check_finite(z, "gauss_2f1");
  if (near_nonpositive_integer(c)) {
    throw DegenerateParameterError("gauss_2f1: c is a non-positive integer");
  }
  if (std::abs(z) >= 1.0 - kGaussUnitDiskMargin) {
    throw DomainError("gauss_2f1: |z| outside the series disk");
  }
  const double min_k = std::max({-a.real(), -b.real(), -c.real(), 0.0});
  return sum_series(
      1.0,
      [&](int k) {
        const double km1 = k - 1.0;
        return (a + km1) * (b + km1) / ((c + km1) * static_cast<double>(k)) * z;
      },
      min_k, ctl, "gauss_2f1");
}

Complex gauss_2f1_deriv(Complex a, Complex b, Complex c, Complex z, const SeriesControl& ctl) {
  if (near_nonpositive_integer(c)) {
    throw DegenerateParameterError("gauss_2f1_deriv: c is a non-positive integer");
  }
  return a * b / c * gauss_2f1(a + 1.0, b + 1.0, c + 1.0, z, ctl);
}

}  // namespace stembranch::specfun

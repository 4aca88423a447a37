#pragma once

// Complex-parameter special functions used by the closed-form generating
// functions.
//
// Conventions shared by every function here:
//  * all non-integer powers use the principal branch, z^s = exp(s Log z);
//  * series are truncated once three consecutive terms fall below
//    rel_tol * |partial sum| (and the terms are past their peak);
//  * failures raise ConvergenceError, DomainError or DegenerateParameterError
//    from errors.hpp, never a silent NaN.

#include "stembranch/model.hpp"

namespace stembranch::specfun {

struct SeriesControl {
  double rel_tol = 1e-12;
  int max_terms = 10000;
};

/// Principal-branch power. 0^s is 1 for s == 0, 0 for Re s > 0, DomainError
/// otherwise.
Complex cpow(Complex z, Complex s);

/// Gamma function on the complex plane (Lanczos, g = 7, with reflection).
/// Throws DomainError at the poles.
Complex gamma(Complex z);

/// 1 / Gamma(z); entire, exactly zero at non-positive integers.
Complex rgamma(Complex z);

/// Modified Bessel function of the first kind I(a, z), power series.
/// Negative integer orders use I(-n, z) = I(n, z).
Complex bessel_i(Complex a, Complex z, const SeriesControl& ctl = {});

/// d/dz I(a, z) = (I(a-1, z) + I(a+1, z)) / 2
Complex bessel_i_deriv(Complex a, Complex z, const SeriesControl& ctl = {});

/// |z| above which bessel_i_scaled switches to its asymptotic series.
inline constexpr double kBesselSeriesLimit = 500.0;

/// e^{-z} I(a, z). Power series up to |z| = kBesselSeriesLimit, the large-z
/// asymptotic series beyond (Re z > 0 required there).
Complex bessel_i_scaled(Complex a, Complex z, const SeriesControl& ctl = {});

/// e^{z} K(a, z) = sqrt(pi) (2z)^a U(a + 1/2, 2a + 1, 2z) for Re z > 0.
Complex bessel_k_scaled(Complex a, Complex z, const SeriesControl& ctl = {});

/// Kummer's confluent hypergeometric function 1F1(a; b; z). Uses Kummer's
/// transformation for Re z < 0. DomainError if b is a non-positive integer.
Complex kummer_m(Complex a, Complex b, Complex z, const SeriesControl& ctl = {});

/// Tricomi's confluent hypergeometric function U(a, b, z).
///
/// Large |z| uses the asymptotic expansion z^-a sum (a)_k (a-b+1)_k / k! (-z)^-k
/// when it reaches rel_tol before its terms start to grow. Otherwise, for
/// Re z > 0, the integral 1/G(a) int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt is
/// evaluated by exp-sinh quadrature at a + n (Re(a + n) >= 1) and carried back
/// to a by the three-term recurrence in a. For Re z <= 0 the two-1F1
/// connection formula
///   U = G(1-b)/G(a-b+1) 1F1(a,b,z) + G(b-1)/G(a) z^(1-b) 1F1(a-b+1,2-b,z)
/// is used; for b within 1e-4 of an integer it is evaluated at b +- d,
/// b +- 2d (d = 1e-3) and Richardson-extrapolated to b.
Complex tricomi_u(Complex a, Complex b, Complex z, const SeriesControl& ctl = {});

/// Whittaker M_{a,b}(z) = e^{-z/2} z^{b+1/2} 1F1(b-a+1/2; 1+2b; z).
Complex whittaker_m(Complex a, Complex b, Complex z, const SeriesControl& ctl = {});

/// Whittaker W_{a,b}(z) = e^{-z/2} z^{b+1/2} U(b-a+1/2, 1+2b, z).
Complex whittaker_w(Complex a, Complex b, Complex z, const SeriesControl& ctl = {});

/// M'(a,b,z) = (1/2 - a/z) M(a,b,z) + (1/2 + a + b)/z M(a+1,b,z)
Complex whittaker_m_deriv(Complex a, Complex b, Complex z, const SeriesControl& ctl = {});

/// W'(a,b,z) = (1/2 - a/z) W(a,b,z) - W(a+1,b,z)/z
Complex whittaker_w_deriv(Complex a, Complex b, Complex z, const SeriesControl& ctl = {});

/// Radius beyond which gauss_2f1 refuses to sum its series.
inline constexpr double kGaussUnitDiskMargin = 1e-3;

/// Gauss hypergeometric 2F1(a, b; c; z) by its power series, |z| < 1 - margin.
/// DomainError outside that disk; DegenerateParameterError if c is a
/// non-positive integer.
Complex gauss_2f1(Complex a, Complex b, Complex c, Complex z, const SeriesControl& ctl = {});

/// d/dz 2F1(a, b; c; z) = (a b / c) 2F1(a+1, b+1; c+1; z)
Complex gauss_2f1_deriv(Complex a, Complex b, Complex c, Complex z,
                        const SeriesControl& ctl = {});

/// True if z is within `tol` of a non-positive integer on the real axis.
bool near_nonpositive_integer(Complex z, double tol = 0.0) noexcept;

}  // namespace stembranch::specfun

#include <array>
#include <cmath>
#include <numbers>

#include "stembranch/errors.hpp"
#include "stembranch/specfun.hpp"

namespace stembranch::specfun {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Gamma for Re z >= 0.5.
Complex lanczos_gamma(Complex z) {
  z -= 1.0;
  Complex x = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    x += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  }
  const Complex t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// sin(pi z) with the argument reduced to the nearest integer first so that
// values near the poles keep their relative accuracy.
Complex sin_pi(Complex z) {
  const double n = std::round(z.real());
  const Complex r = z - n;
  const Complex s = std::sin(std::numbers::pi * r);
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

}  // namespace

bool near_nonpositive_integer(Complex z, double tol) noexcept {
  if (std::abs(z.imag()) > tol) return false;
  const double n = std::round(z.real());
  return n <= 0.0 && std::abs(z.real() - n) <= tol;
}

Complex gamma(Complex z) {
  if (near_nonpositive_integer(z)) throw DomainError("gamma: pole at non-positive integer");
  if (z.real() < 0.5) {
    return std::numbers::pi / (sin_pi(z) * lanczos_gamma(1.0 - z));
  }
  return lanczos_gamma(z);
}

Complex rgamma(Complex z) {
  if (near_nonpositive_integer(z)) return 0.0;
  if (z.real() < 0.5) {
    return sin_pi(z) * lanczos_gamma(1.0 - z) / std::numbers::pi;
  }
  return 1.0 / lanczos_gamma(z);
}

Complex cpow(Complex z, Complex s) {
  if (z == Complex(0.0)) {
    if (s == Complex(0.0)) return 1.0;
    if (s.real() > 0.0) return 0.0;
    throw DomainError("cpow: zero raised to a power with non-positive real part");
  }
  return std::exp(s * std::log(z));
}

}  // namespace stembranch::specfun

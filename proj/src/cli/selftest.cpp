#include "stembranch/cli/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "stembranch/specfun.hpp"

namespace stembranch::cli {
namespace {

using namespace specfun;

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double rel(Complex got, Complex want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// central difference along the real axis of z
Complex fd(const std::function<Complex(Complex)>& f, Complex z, double h = 1e-5) {
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

struct Collector {
  std::vector<IdentityCheck> rows;
  void add(std::string fn, std::string id, double err, double tol) {
    rows.push_back({std::move(fn), std::move(id), err, tol, err <= tol});
  }
};

void bessel_checks(Collector& c) {
  std::mt19937_64 eng(20240611);
  std::uniform_real_distribution<double> ua(-5.0, 5.0), ur(0.1, 20.0), uphi(-0.6, 0.6);
  double rec = 0.0, der = 0.0;
  for (int i = 0; i < 200; ++i) {
    Complex a = i % 4 == 0 ? Complex(0.0, ua(eng)) : Complex(ua(eng), i % 4 == 1 ? ua(eng) : 0.0);
    const Complex z = std::polar(ur(eng), uphi(eng));
    const Complex lo = bessel_i(a - 1.0, z), hi = bessel_i(a + 1.0, z), mid = bessel_i(a, z);
    const double scale = std::max({std::abs(lo), std::abs(hi), std::abs(2.0 * a / z * mid)});
    rec = std::max(rec, std::abs(lo - hi - 2.0 * a / z * mid) / scale);
    const Complex d = bessel_i_deriv(a, z);
    der = std::max(der, rel(d, fd([&](Complex s) { return bessel_i(a, s); }, z)));
  }
  c.add("bessel_i", "I(a-1)-I(a+1)=2a/z I(a)", rec, 1e-10);
  c.add("bessel_i", "I'(a)=(I(a-1)+I(a+1))/2 vs finite difference", der, 1e-6);

  const double half = std::sqrt(2.0 / std::numbers::pi) * std::sinh(1.0);
  c.add("bessel_i", "I(1/2,1)=sqrt(2/pi) sinh 1", rel(bessel_i(0.5, 1.0), half), 1e-12);
  c.add("bessel_i", "I(0,0)=1", rel(bessel_i(0.0, 0.0), 1.0), 1e-15);
  c.add("bessel_i", "I(-3,z)=I(3,z)", rel(bessel_i(-3.0, 2.5), bessel_i(3.0, 2.5)), 1e-14);

  const Complex orders[] = {0.0, 1.0, 2.0, Complex(0.0, 0.5)};
  // tolerances 10%, 5%, 2.5% at z = 50, 100, 200, i.e. 0.1 * 50 / z; the
  // deviation must also shrink monotonically
  for (Complex a : orders) {
    double prev = INFINITY, worst = 0.0;
    for (double z : {50.0, 100.0, 200.0}) {
      const Complex r = bessel_i(a, z) * std::sqrt(2.0 * std::numbers::pi * z) * std::exp(-z);
      const double dev = std::abs(r - 1.0);
      worst = std::max(worst, dev <= prev ? dev * z / 50.0 : INFINITY);
      prev = dev;
    }
    const std::string order =
        a.imag() != 0.0 ? fmt_short(a.imag()) + "i" : fmt_short(a.real());
    c.add("bessel_i", "I(" + order + ",z) sqrt(2 pi z) e^-z -> 1, 10% x 50/z", worst, 0.10);
  }
}

void confluent_checks(Collector& c) {
  c.add("kummer_m", "1F1(a,b,0)=1", rel(kummer_m(0.7, 1.9, 0.0), 1.0), 1e-15);
  c.add("kummer_m", "1F1(1,1,1)=e", rel(kummer_m(1.0, 1.0, 1.0), std::exp(1.0)), 1e-13);
  c.add("kummer_m", "1F1(a,b,-z)=e^-z 1F1(b-a,b,z)",
        rel(kummer_m(0.4, 2.2, -7.0), std::exp(-7.0) * kummer_m(1.8, 2.2, 7.0)), 1e-11);
  {
    double worst = 0.0;
    for (double z : {50.0, 100.0, 200.0}) {
      const Complex lead = gamma(3.0) / gamma(2.0) * std::exp(z) * std::pow(z, -1.0);
      worst = std::max(worst, std::abs(kummer_m(2.0, 3.0, z) / lead - 1.0) * z / 50.0);
    }
    c.add("kummer_m", "1F1(2,3,z)/(G(3)/G(2) e^z/z) -> 1, 5% x 50/z", worst, 0.05);
  }
  c.add("tricomi_u", "U(0,b,z)=1", rel(tricomi_u(0.0, 1.3, 2.0), 1.0), 1e-12);
  c.add("tricomi_u", "U(1,2,1)=1", rel(tricomi_u(1.0, 2.0, 1.0), 1.0), 1e-8);
  c.add("tricomi_u", "U(a,a+1,z)=z^-a", rel(tricomi_u(0.3, 1.3, 2.5), std::pow(2.5, -0.3)), 1e-10);
  {
    double worst = 0.0;
    for (double z : {50.0, 100.0, 200.0}) {
      worst = std::max(worst, std::abs(tricomi_u(0.5, 1.5, z) * std::sqrt(z) - 1.0) * z / 100.0);
      worst = std::max(worst, std::abs(tricomi_u(1.0, 0.5, z) * z - 1.0) * z / 100.0);
    }
    c.add("tricomi_u", "U(a,b,z) z^a -> 1, 2% x 100/z", worst, 0.02);
  }
  {
    const Complex a = 0.3, b = 0.7, z = 0.5;
    const Complex pre = std::exp(-0.5 * z) * std::pow(z, b + 0.5);
    c.add("whittaker_m", "M/(e^-z/2 z^(b+1/2)) = 1F1(b-a+1/2,1+2b,z)",
          rel(whittaker_m(a, b, z) / pre, kummer_m(b - a + 0.5, 1.0 + 2.0 * b, z)), 1e-13);
    c.add("whittaker_m", "M' identity vs finite difference",
          rel(whittaker_m_deriv(a, b, z), fd([&](Complex s) { return whittaker_m(a, b, s); }, z)),
          1e-6);
    c.add("whittaker_w", "W' identity vs finite difference",
          rel(whittaker_w_deriv(a, b, z), fd([&](Complex s) { return whittaker_w(a, b, s); }, z)),
          1e-6);
  }
}

void gauss_checks(Collector& c) {
  c.add("gauss_2f1", "2F1(a,b,c,0)=1", rel(gauss_2f1(0.3, 0.4, 1.5, 0.0), 1.0), 1e-15);
  c.add("gauss_2f1", "2F1(1,1,2,1/2)=2 ln 2", rel(gauss_2f1(1.0, 1.0, 2.0, 0.5), 2.0 * std::log(2.0)),
        1e-11);
  c.add("gauss_2f1", "2F1' identity vs finite difference",
        rel(gauss_2f1_deriv(0.5, 0.5, 1.5, 0.25),
            fd([](Complex s) { return gauss_2f1(0.5, 0.5, 1.5, s); }, 0.25)),
        1e-6);
  c.add("gamma", "G(1/2)=sqrt(pi)", rel(gamma(0.5), std::sqrt(std::numbers::pi)), 1e-13);
  c.add("gamma", "G(z+1)=z G(z)",
        rel(gamma(Complex(1.3, 0.8)), Complex(0.3, 0.8) * gamma(Complex(0.3, 0.8))), 1e-12);
}

void symmetry_checks(Collector& c) {
  const Complex a(0.4, 0.9), b(1.3, -0.2), cc(1.7, 0.3);
  double worst = 0.0;
  auto chk = [&](Complex f, Complex g) { worst = std::max(worst, rel(f, std::conj(g))); };
  chk(bessel_i(std::conj(a), 3.0), bessel_i(a, 3.0));
  chk(kummer_m(std::conj(a), std::conj(b), 2.0), kummer_m(a, b, 2.0));
  chk(tricomi_u(std::conj(a), std::conj(b), 2.0), tricomi_u(a, b, 2.0));
  chk(gauss_2f1(std::conj(a), std::conj(b), std::conj(cc), 0.4), gauss_2f1(a, b, cc, 0.4));
  c.add("all", "f(conj params, real z) = conj f(params, z)", worst, 1e-12);

  double im = 0.0;
  auto imag_ratio = [&](Complex v) { im = std::max(im, std::abs(v.imag()) / std::abs(v.real())); };
  imag_ratio(bessel_i(1.3, 4.0));
  imag_ratio(kummer_m(0.4, 1.3, 4.0));
  imag_ratio(tricomi_u(0.4, 1.3, 4.0));
  imag_ratio(gauss_2f1(0.4, 1.3, 1.7, 0.6));
  c.add("all", "real parameters, real z > 0: |im| < 1e-12 |re|", im, 1e-12);
}

}  // namespace

std::vector<IdentityCheck> specfun_selftest() {
  Collector c;
  bessel_checks(c);
  confluent_checks(c);
  gauss_checks(c);
  symmetry_checks(c);
  return c.rows;
}

}  // namespace stembranch::cli

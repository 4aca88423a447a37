#include <doctest.h>

#include <cmath>

#include "stembranch/errors.hpp"
#include "stembranch/moments.hpp"

using namespace stembranch;

namespace {

// RK4 on dE_A/dt = r_a E_A, dE_B/dt = feed E_A + r_b E_B, with the feed counted
// directly from the A-progeny outcomes
MomentPair moment_ode(const ModelParams& m, double t) {
  const double ra = m.lambda_a() * (1 - 2 * m.alpha());
  const double rb = m.lambda_b() * (m.q() * m.q() - m.p() * m.p());
  const double a_ = m.alpha();
  const double feed = m.lambda_a() * (1 * 2 * a_ * (1 - a_) + 2 * a_ * a_);
  const int n = 20000;
  const double h = t / n;
  double a = 1, b = 0;
  auto fa = [&](double ea) { return ra * ea; };
  auto fb = [&](double ea, double eb) { return feed * ea + rb * eb; };
  for (int i = 0; i < n; ++i) {
    const double ka1 = fa(a), kb1 = fb(a, b);
    const double ka2 = fa(a + h / 2 * ka1), kb2 = fb(a + h / 2 * ka1, b + h / 2 * kb1);
    const double ka3 = fa(a + h / 2 * ka2), kb3 = fb(a + h / 2 * ka2, b + h / 2 * kb2);
    const double ka4 = fa(a + h * ka3), kb4 = fb(a + h * ka3, b + h * kb3);
    a += h / 6 * (ka1 + 2 * ka2 + 2 * ka3 + ka4);
    b += h / 6 * (kb1 + 2 * kb2 + 2 * kb3 + kb4);
  }
  return {a, b, t};
}

}  // namespace

TEST_CASE("documented values") {
  const auto bi = expected_counts(ModelParams(0.5, 0.5, 1, 1), 2.0);
  CHECK(bi.e_a == doctest::Approx(1.0));
  CHECK(bi.e_b == doctest::Approx(2.0));
  const auto zero = expected_counts(ModelParams(0.3, 0.2, 2, 3), 0.0);
  CHECK(zero.e_a == 1.0);
  CHECK(zero.e_b == 0.0);
  const auto sup = expected_counts(ModelParams(0.25, 0.5, 1, 1), 1.0);
  CHECK(sup.e_a == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
  CHECK(sup.e_b == doctest::Approx(std::exp(0.5) - 1).epsilon(1e-14));
  CHECK_THROWS_AS(expected_counts(ModelParams(0.3, 0.2, 1, 1), -1.0), InvalidParameterError);
}

TEST_CASE("agreement with the moment equations") {
  const ModelParams grid[] = {{0.5, 0.5, 1, 1},   {0.25, 0.5, 1, 1}, {0.75, 0.5, 2, 1},
                              {0.5, 0.3, 1, 1},   {0.3, 0.2, 0.7, 1.3}, {0.2, 0.8, 1, 3},
                              {0.0, 0.3, 1, 1},   {1.0, 0.6, 1, 1}};
  for (const auto& m : grid)
    for (double t : {0.5, 2.0, 6.0}) {
      const auto got = expected_counts(m, t);
      const auto want = moment_ode(m, t);
      CHECK(got.e_a == doctest::Approx(want.e_a).epsilon(1e-10));
      CHECK(got.e_b == doctest::Approx(want.e_b).epsilon(1e-10));

      // residual of the moment equations by central differences
      const double h = 1e-5;
      const auto up = expected_counts(m, t + h), dn = expected_counts(m, t - h);
      const double ra = m.lambda_a() * (1 - 2 * m.alpha());
      const double rb = m.lambda_b() * (m.q() * m.q() - m.p() * m.p());
      const double da = (up.e_a - dn.e_a) / (2 * h), db = (up.e_b - dn.e_b) / (2 * h);
      CHECK(std::abs(da - ra * got.e_a) <= 1e-5 * std::max(1.0, std::abs(da)));
      CHECK(std::abs(db - 2 * m.lambda_a() * m.alpha() * got.e_a - rb * got.e_b) <=
            1e-5 * std::max(1.0, std::abs(db)));
    }
}

TEST_CASE("resonance limit is continuous") {
  // lambda_a (1 - 2 alpha) = 0.5 = lambda_b (q^2 - p^2) with lambda_b = 1.25
  const ModelParams res(0.25, 0.3, 1.0, 1.25);
  for (double t : {0.5, 3.0}) {
    const auto mid = expected_counts(res, t);
    CHECK(mid.e_b == doctest::Approx(2 * 0.25 * t * std::exp(0.5 * t)).epsilon(1e-12));
    for (double d : {-1e-7, 1e-7}) {
      const auto near = expected_counts(ModelParams(0.25, 0.3, 1.0, 1.25 + d), t);
      CHECK(near.e_b == doctest::Approx(mid.e_b).epsilon(1e-3));
    }
    CHECK(mid.e_b == doctest::Approx(moment_ode(res, t).e_b).epsilon(1e-10));
  }
}

TEST_CASE("no B-cells without differentiation") {
  for (double t : {0.5, 5.0}) CHECK(expected_counts(ModelParams(0.0, 0.3, 1, 1), t).e_b == 0.0);
}

TEST_CASE("positivity") {
  for (double t : {0.0, 0.1, 10.0, 100.0}) {
    const auto m = expected_counts(ModelParams(0.9, 0.9, 1, 1), t);
    CHECK(m.e_a > 0.0);
    CHECK(m.e_b >= 0.0);
    CHECK((m.e_b == 0.0) == (t == 0.0));
  }
}

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "stembranch/asymptotics.hpp"
#include "stembranch/errors.hpp"
#include "stembranch/pgf.hpp"

using namespace stembranch;
using namespace stembranch::asymptotics;

namespace {

// Plain iteration s <- h(s) from s = 0 converges monotonically to the smallest
// fixed point. Slow near criticality, so only used away from it.
double iterated_fixed_point(const ModelParams& m) {
  double sa = 0, sb = 0;
  for (int i = 0; i < 200000; ++i) {
    const double nb = std::pow(m.p() + m.q() * sb, 2);
    const double na = std::pow((1 - m.alpha()) * sa + m.alpha() * sb, 2);
    if (std::abs(na - sa) < 1e-16 && std::abs(nb - sb) < 1e-16) break;
    sa = na;
    sb = nb;
  }
  return sa;
}

}  // namespace

TEST_CASE("fixed point examples") {
  CHECK(extinction_fixed_point(ModelParams(0.5, 0.5, 1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(extinction_fixed_point(ModelParams(1.0, 0.3, 1, 1)) ==
        doctest::Approx(std::pow(9.0 / 49.0, 2)).epsilon(1e-12));
  CHECK(extinction_fixed_point(ModelParams(0.0, 0.3, 1, 1)) == 0.0);
  CHECK(extinction_fixed_point(ModelParams(0.25, 0.5, 1, 1)) == doctest::Approx(1.0 / 9).epsilon(1e-12));
  CHECK(extinction_fixed_point(ModelParams(0.5, 0.3, 1, 1)) == doctest::Approx(0.009310).epsilon(1e-3));
}

TEST_CASE("fixed point against plain iteration") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  for (int i = 0; i < 60; ++i) {
    const double a = u(rng), p = u(rng);
    // stay clear of criticality, where iteration converges only like 1/n
    if (std::abs(a - 0.5) < 0.05 || std::abs(p - 0.5) < 0.05) continue;
    const ModelParams m(a, p, 1, 1);
    INFO("alpha=" << a << " p=" << p);
    CHECK(extinction_fixed_point(m) == doctest::Approx(iterated_fixed_point(m)).epsilon(1e-9));
  }
}

TEST_CASE("theorem limits agree with the fixed point") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.01, 0.99), lam(0.2, 5.0);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const bool crit_b = i % 3 == 0;
    const double a = i % 5 == 0 ? 0.5 : u(rng);
    const double p = crit_b ? 0.5 : 0.01 + 0.48 * u(rng);
    const ModelParams m(a, p, lam(rng), lam(rng));
    try {
      const auto r = extinction_limit(m);
      INFO(m);
      CHECK(r.limit == doctest::Approx(extinction_fixed_point(m)).epsilon(1e-10));
      ++checked;
    } catch (const DegenerateParameterError&) {
    }
  }
  CHECK(checked > 150);
}

TEST_CASE("documented limits and rate classes") {
  const auto bi = extinction_limit(ModelParams(0.5, 0.5, 1, 4));
  CHECK(bi.limit == 1.0);
  CHECK(bi.rate_class == RateClass::InverseSqrtT);
  CHECK(bi.rate_coefficient == doctest::Approx(2.0));

  const auto sup_a = extinction_limit(ModelParams(0.25, 0.5, 1, 1));
  CHECK(sup_a.limit == doctest::Approx(1.0 / 9).epsilon(1e-14));
  CHECK(sup_a.rate_class == RateClass::InverseT);
  CHECK(sup_a.rate_coefficient == doctest::Approx(8 * 0.0625 / (0.75 * 0.5)));

  const auto sub_a = extinction_limit(ModelParams(0.75, 0.5, 1, 2));
  CHECK(sub_a.limit == 1.0);
  CHECK(sub_a.rate_class == RateClass::InverseT);
  CHECK(sub_a.rate_coefficient == doctest::Approx(8 * 0.75 / (0.5 * 2)));

  const auto c = extinction_limit(ModelParams(0.5, 0.3, 1, 1));
  CHECK(c.limit == doctest::Approx(2 * (1 - 0.5 * 0.09 / 0.49 - std::sqrt(0.4) / 0.7)).epsilon(1e-12));
  CHECK(c.rate_class == RateClass::Exponential);
  CHECK(c.exponent < 0.0);
}

TEST_CASE("uncovered regimes are refused") {
  CHECK_THROWS_AS(extinction_limit(ModelParams(0.3, 0.7, 1, 1)), UnsupportedRegimeError);
  CHECK_THROWS_AS(extinction_limit(ModelParams(0.0, 0.3, 1, 1)), UnsupportedRegimeError);
  CHECK_THROWS_AS(extinction_limit(ModelParams(0.3, 1.0, 1, 1)), UnsupportedRegimeError);
  // theta1 = lambda_a sqrt(q^2 - 4 alpha(1-alpha) p^2) / (lambda_b (p - q) q) = -1
  CHECK_THROWS_AS(extinction_limit(ModelParams(0.5, 0.3, 0.28 / std::sqrt(0.4), 1)),
                  DegenerateParameterError);
  // the fixed point still answers in every regime: sub-critical A and B die out,
  // while a super-critical A-lineage survives on its own
  CHECK(extinction_fixed_point(ModelParams(0.7, 0.7, 1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(extinction_fixed_point(ModelParams(0.3, 0.7, 1, 1)) == doctest::Approx(0.183673).epsilon(1e-5));
}

TEST_CASE("asymptotic curve") {
  const ModelParams bi(0.5, 0.5, 1, 4);
  const std::vector<double> ts = {0.0, 400.0};
  const auto curve = extinction_curve(bi, ts, CurveMethod::Asymptotic);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].value == 0.0);
  CHECK(curve[1].value == doctest::Approx(0.9).epsilon(1e-14));
  CHECK_THROWS_AS(extinction_curve(ModelParams(0.3, 0.7, 1, 1), ts, CurveMethod::Asymptotic),
                  UnsupportedRegimeError);
  const std::vector<double> unsorted = {1.0, 0.5};
  CHECK_THROWS_AS(extinction_curve(bi, unsorted, CurveMethod::Exact), InvalidParameterError);
  const std::vector<double> negative = {-1.0};
  CHECK_THROWS_AS(extinction_curve(bi, negative, CurveMethod::Exact), InvalidParameterError);
}

TEST_CASE("exact curve is monotone and bounded by the fixed point") {
  const ModelParams sets[] = {{0.5, 0.5, 1, 1}, {0.25, 0.5, 1, 1}, {0.5, 0.3, 1, 1},
                              {0.3, 0.7, 1, 1}, {0.7, 0.4, 2, 0.5}, {0.2, 0.2, 0.5, 1.5}};
  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) ts.push_back(0.5 * i);
  for (const auto& m : sets) {
    INFO(m);
    const auto exact = extinction_curve(m, ts, CurveMethod::Exact);
    const auto ode = extinction_curve(m, ts, CurveMethod::Ode);
    const double bound = extinction_fixed_point(m);
    CHECK(exact[0].value == 0.0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(exact[i].value <= bound + 1e-9);
      CHECK(exact[i].value == doctest::Approx(ode[i].value).epsilon(1e-6));
      if (i > 0) CHECK(exact[i].value >= exact[i - 1].value - 1e-12);
    }
  }
}

TEST_CASE("inverse-time limit is approached") {
  const ModelParams m(0.25, 0.5, 1, 1);
  const std::vector<double> ts = {200.0};
  CHECK(std::abs(extinction_curve(m, ts, CurveMethod::Exact)[0].value - 1.0 / 9) < 1e-2);
}

TEST_CASE("square-root rate in the bi-critical case") {
  const ModelParams m(0.5, 0.5, 1, 1);
  const std::vector<double> ts = {1e2, 1e3, 1e4};
  const auto curve = extinction_curve(m, ts, CurveMethod::Exact);
  double prev = 1e9;
  for (const auto& pt : curve) {
    const double dev = std::abs((1 - pt.value) * std::sqrt(pt.t) - 4.0) / 4.0;
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("inverse-time coefficient") {
  const ModelParams m(0.25, 0.5, 1, 1);
  const auto r = extinction_limit(m);
  const std::vector<double> ts = {1e3};
  const double e = extinction_curve(m, ts, CurveMethod::Exact)[0].value;
  CHECK((r.limit - e) * 1e3 == doctest::Approx(r.rate_coefficient).epsilon(0.1));
}

TEST_CASE("exponential rate with theta1 in (-1, 0)") {
  const ModelParams m(0.5, 0.1, 0.3, 1);
  const auto r = extinction_limit(m);
  REQUIRE(r.rate_class == RateClass::Exponential);
  std::vector<double> ts;
  for (int i = 0; i <= 15; ++i) ts.push_back(5.0 + i);
  const auto curve = extinction_curve(m, ts, CurveMethod::Ode);
  // least-squares slope of log|L - E(t)|
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(ts.size());
  for (const auto& pt : curve) {
    const double ly = std::log(std::abs(r.limit - pt.value));
    sx += pt.t;
    sy += ly;
    sxx += pt.t * pt.t;
    sxy += pt.t * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(r.exponent).epsilon(0.05));
  // the asymptote itself tracks the curve at the far end
  CHECK(std::abs(r.asymptote(20.0) - curve.back().value) < 0.05 * std::abs(r.limit - curve.back().value));
}

TEST_CASE("continuity as alpha approaches one") {
  const ModelParams m(0.999, 0.3, 1, 1);
  const double want = std::pow(0.3, 4) / std::pow(0.7, 4);
  CHECK(std::abs(extinction_limit(m).limit - want) < 1e-2);
}

TEST_CASE("Monte Carlo curve brackets the exact curve") {
  const ModelParams m(0.5, 0.3, 1, 1);
  const std::vector<double> ts = {0.0, 2.0, 6.0};
  CurveOptions opt;
  opt.replicates = 20000;
  opt.seed = 5;
  const auto mc = extinction_curve(m, ts, CurveMethod::MonteCarlo, opt);
  const auto exact = extinction_curve(m, ts, CurveMethod::Exact);
  CHECK(mc[0].value == 0.0);
  for (std::size_t i = 1; i < ts.size(); ++i)
    CHECK(std::abs(mc[i].value - exact[i].value) <= mc[i].half_width_99 + 1e-12);
  CHECK(to_string(RateClass::InverseT) == std::string("inverse_t"));
}

#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "stembranch/errors.hpp"
#include "stembranch/moments.hpp"
#include "stembranch/oracle.hpp"
#include "stembranch/pgf.hpp"

using namespace stembranch;
using namespace stembranch::oracle;

namespace {

// Gillespie without thinning: B-cells fire at the full rate lambda_b and the
// B -> B outcome is kept as a (silent) event.
std::pair<std::uint64_t, std::uint64_t> unthinned_final_state(const ModelParams& m, double t_max,
                                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const double a = m.alpha(), p = m.p(), q = m.q();
  std::uint64_t za = 1, zb = 0;
  double t = 0;
  for (;;) {
    const double ra = m.lambda_a() * static_cast<double>(za);
    const double rate = ra + m.lambda_b() * static_cast<double>(zb);
    if (rate == 0) break;
    t += expo(rng) / rate;
    if (t > t_max) break;
    const double v = u(rng);
    if (u(rng) * rate < ra) {
      if (v < (1 - a) * (1 - a)) {
        ++za;
      } else if (v < 1 - a * a) {
        ++zb;
      } else {
        --za;
        zb += 2;
      }
    } else {
      if (v < q * q) {
        ++zb;
      } else if (v < q * q + 2 * p * q) {
        // B -> B: counts unchanged
      } else {
        --zb;
      }
    }
  }
  return {za, zb};
}

// Two-sample chi-square homogeneity test on equal-size samples. Bins with
// fewer than 10 pooled observations are merged into one.
double two_sample_p_value(const std::map<std::pair<std::uint64_t, std::uint64_t>, int>& n1,
                          const std::map<std::pair<std::uint64_t, std::uint64_t>, int>& n2) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<int, int>> joint;
  for (const auto& [k, v] : n1) joint[k].first += v;
  for (const auto& [k, v] : n2) joint[k].second += v;
  std::vector<std::pair<int, int>> bins;
  std::pair<int, int> rest{0, 0};
  for (const auto& [k, v] : joint) {
    if (v.first + v.second >= 10) {
      bins.push_back(v);
    } else {
      rest.first += v.first;
      rest.second += v.second;
    }
  }
  if (rest.first + rest.second > 0) bins.push_back(rest);
  double stat = 0;
  for (const auto& [a, b] : bins) stat += double(a - b) * double(a - b) / double(a + b);
  const boost::math::chi_squared dist(static_cast<double>(bins.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("backward equations: initial condition and fixed point") {
  const ModelParams m(0.3, 0.4, 1.5, 0.7);
  const Complex x(0.2, 0.3), y(-0.5, 0.1);
  const auto s0 = integrate_backward(x, y, 0.0, m);
  CHECK(s0.f_a == x);
  CHECK(s0.f_b == y);
  for (double t : {0.5, 5.0, 30.0}) {
    const auto one = integrate_backward(1.0, 1.0, t, m);
    CHECK(std::abs(one.f_a - 1.0) < 1e-15);
    CHECK(std::abs(one.f_b - 1.0) < 1e-15);
  }
  CHECK_THROWS_AS(integrate_backward(x, y, -1.0, m), InvalidParameterError);
}

TEST_CASE("backward equations: B component matches its closed form") {
  const ModelParams sets[] = {{0.3, 0.4, 1, 1}, {0.5, 0.5, 1, 2}, {0.7, 0.8, 2, 0.5}};
  const Complex ys[] = {0.0, 0.6, Complex(0.3, -0.8), Complex(-1.0, 0.0)};
  for (const auto& m : sets)
    for (const Complex y : ys)
      for (double t : {0.3, 4.0}) {
        const auto s = integrate_backward(0.5, y, t, m);
        CHECK(std::abs(s.f_b - pgf::pgf_b(y, t, m)) < 1e-9);
      }
}

TEST_CASE("backward equations: bi-critical extinction at t = 5") {
  const ModelParams m(0.5, 0.5, 1, 1);
  const auto s = integrate_backward(0.0, 0.0, 5.0, m);
  CHECK(std::abs(s.f_a - pgf::pgf_a(0.0, 0.0, 5.0, m, pgf::Method::ClosedForm).value) < 1e-6);
}

TEST_CASE("backward equations stay in the unit disk") {
  const ModelParams sets[] = {{0.5, 0.5, 1, 1}, {0.2, 0.3, 2, 1}, {0.8, 0.7, 1, 3}};
  std::vector<double> ts;
  for (int i = 1; i <= 60; ++i) ts.push_back(0.25 * i);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0.0, 1.0), ang(-M_PI, M_PI);
  for (const auto& m : sets)
    for (int i = 0; i < 8; ++i) {
      const Complex x = std::polar(std::sqrt(r(rng)), ang(rng));
      const Complex y = i == 0 ? Complex(-1.0) : std::polar(std::sqrt(r(rng)), ang(rng));
      for (const auto& s : integrate_backward_path(x, y, ts, m)) {
        CHECK(std::abs(s.f_a) <= 1.0 + 1e-12);
        CHECK(std::abs(s.f_b) <= 1.0 + 1e-12);
      }
    }
}

TEST_CASE("path integration agrees with single runs") {
  const ModelParams m(0.4, 0.45, 1.2, 0.9);
  const std::vector<double> ts = {0.0, 0.7, 2.0, 6.5};
  const auto path = integrate_backward_path(0.1, 0.4, ts, m);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto single = integrate_backward(0.1, 0.4, ts[i], m);
    CHECK(std::abs(path[i].f_a - single.f_a) < 1e-9);
  }
  const std::vector<double> bad = {1.0, 0.5};
  CHECK_THROWS_AS(integrate_backward_path(0.1, 0.4, bad, m), InvalidParameterError);
}

TEST_CASE("step control underflow") {
  StepControl ctl;
  ctl.tol_per_unit_time = 0.0;
  ctl.min_step = 1e-4;
  CHECK_THROWS_AS(integrate_backward(0.3, 0.2, 1.0, ModelParams(0.3, 0.4, 1, 1), ctl),
                  StepUnderflowError);
}

TEST_CASE("simulation: zero horizon and absorbing chain") {
  const auto tr = simulate(ModelParams(0.3, 0.4, 1, 1), 0.0, 42);
  REQUIRE(tr.events.size() == 1);
  CHECK(tr.events[0] == TrajectoryEvent{0.0, 1, 0});
  CHECK(tr.seed == 42);
  CHECK_FALSE(tr.truncated);

  // alpha = 1: the A-cell becomes BB; p = 1: every B dies at its first event
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto path = simulate(ModelParams(1.0, 1.0, 1, 1), 1e6, seed);
    REQUIRE(path.events.size() == 4);
    CHECK(path.events[1].z_a == 0);
    CHECK(path.events[1].z_b == 2);
    CHECK(path.events[2].z_b == 1);
    CHECK(path.events.back().z_a == 0);
    CHECK(path.events.back().z_b == 0);
  }
}

TEST_CASE("simulation: path invariants") {
  const ModelParams m(0.35, 0.4, 1, 1.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tr = simulate(m, 4.0, seed);
    for (std::size_t i = 1; i < tr.events.size(); ++i) {
      const auto& a = tr.events[i - 1];
      const auto& b = tr.events[i];
      CHECK(b.t > a.t);
      CHECK(b.t <= 4.0);
      const auto da = static_cast<long long>(b.z_a) - static_cast<long long>(a.z_a);
      const auto db = static_cast<long long>(b.z_b) - static_cast<long long>(a.z_b);
      const bool a_event = (da == 1 && db == 0) || (da == 0 && db == 1) || (da == -1 && db == 2);
      const bool b_event = da == 0 && (db == 1 || db == -1);
      CHECK((a_event || b_event));
    }
    const auto fin = simulate_final_state(m, 4.0, seed);
    CHECK(fin.z_a == tr.events.back().z_a);
    CHECK(fin.z_b == tr.events.back().z_b);
    CHECK(fin.events + 1 == tr.events.size());
  }
}

TEST_CASE("simulation: determinism, caps and thread independence") {
  const ModelParams m(0.3, 0.3, 1, 1);
  const auto a = simulate(m, 5.0, 7), b = simulate(m, 5.0, 7);
  CHECK(a.events == b.events);
  CHECK(simulate(m, 5.0, 8).events != a.events);

  SimulationCaps caps;
  caps.max_cells = 20;
  const auto capped = simulate(m, 50.0, 7, caps);
  CHECK(capped.truncated);
  CHECK(capped.events.back().z_a + capped.events.back().z_b == 21);
  caps = {};
  caps.max_events = 3;
  CHECK(simulate_final_state(m, 50.0, 7, caps).events == 3);
  caps.max_events = 0;
  CHECK_THROWS_AS(simulate(m, 1.0, 1, caps), InvalidParameterError);

  MonteCarloOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const auto s1 = sample_final_states(m, 3.0, 500, 11, one);
  const auto s4 = sample_final_states(m, 3.0, 500, 11, four);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].z_a == s4[i].z_a);
    CHECK(s1[i].z_b == s4[i].z_b);
  }
  CHECK(replicate_seed(11, 0) != replicate_seed(11, 1));
  CHECK(replicate_seed(11, 0) != replicate_seed(12, 0));
}

TEST_CASE("simulation: means match expected counts") {
  const ModelParams m(0.25, 0.5, 1, 1);
  const auto states = sample_final_states(m, 1.0, 100000, 2024);
  double sa = 0, sb = 0, sa2 = 0, sb2 = 0;
  for (const auto& s : states) {
    sa += double(s.z_a);
    sb += double(s.z_b);
    sa2 += double(s.z_a) * double(s.z_a);
    sb2 += double(s.z_b) * double(s.z_b);
  }
  const double n = double(states.size());
  const double ma = sa / n, mb = sb / n;
  const double se_a = std::sqrt((sa2 / n - ma * ma) / n), se_b = std::sqrt((sb2 / n - mb * mb) / n);
  const auto want = expected_counts(m, 1.0);
  CHECK(std::abs(ma - std::exp(0.5)) < 3 * se_a);
  CHECK(std::abs(mb - want.e_b) < 3 * se_b);
}

TEST_CASE("thinning does not change the distribution") {
  const ModelParams m(0.3, 0.45, 1, 1.5);
  const int reps = 10000;
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> thinned, full;
  for (const auto& s : sample_final_states(m, 1.5, reps, 77)) ++thinned[{s.z_a, s.z_b}];
  std::mt19937_64 rng(1234);
  for (int i = 0; i < reps; ++i) ++full[unthinned_final_state(m, 1.5, rng)];
  CHECK(two_sample_p_value(thinned, full) > 0.01);
}

TEST_CASE("estimators") {
  const ModelParams bi(0.5, 0.5, 1, 1);
  const auto zero = estimate_extinction(bi, 0.0, 1000, 1);
  CHECK(zero.value == 0.0);
  CHECK(zero.half_width_99 == 0.0);

  const auto one = estimate_pgf(bi, 1.0, 1.0, 3.0, 1000, 1);
  CHECK(one.value == 1.0);
  CHECK(one.half_width_99 == 0.0);

  const auto ext = estimate_extinction(bi, 2.0, 5000, 9);
  const auto ext_pgf = estimate_pgf(bi, 0.0, 0.0, 2.0, 5000, 9);
  CHECK(ext.value == ext_pgf.value);
  CHECK(ext.replicates == 5000);

  const auto absorbed = estimate_extinction(ModelParams(1.0, 1.0, 1, 1), 10.0, 1000, 3);
  CHECK(absorbed.value >= 0.99);

  // calibration over several seeds rather than one 99% interval: the mean
  // z-score must be consistent with 0 and at most two intervals may miss
  const double exact = pgf::pgf_a_real(0.5, 0.5, 2.0, bi);
  double zsum = 0;
  int misses = 0;
  const int seeds = 10;
  for (int seed = 1; seed <= seeds; ++seed) {
    const auto est = estimate_pgf(bi, 0.5, 0.5, 2.0, 100000, seed);
    const double z = (est.value - exact) / (est.half_width_99 / kNormalQuantile995);
    zsum += z;
    if (std::abs(z) > kNormalQuantile995) ++misses;
  }
  CHECK(std::abs(zsum / std::sqrt(double(seeds))) < kNormalQuantile995);
  CHECK(misses <= 2);

  CHECK_THROWS_AS(estimate_extinction(bi, 1.0, 99, 1), InvalidParameterError);
  CHECK_THROWS_AS(estimate_pgf(bi, 1.5, 0.5, 1.0, 1000, 1), InvalidParameterError);
}

TEST_CASE("inversion: initial state and consistency") {
  const ModelParams bi(0.5, 0.5, 1, 1);
  const auto g0 = invert_pgf(bi, 0.0, 5, 5);
  for (int j = 0; j <= 5; ++j)
    for (int k = 0; k <= 5; ++k) CHECK(g0.at(j, k) == doctest::Approx(j == 1 && k == 0 ? 1.0 : 0.0));

  const auto g = invert_pgf(bi, 1.0, 15, 15);
  const double sum = std::accumulate(g.probs.begin(), g.probs.end(), 0.0);
  CHECK(sum + g.truncation_mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.truncation_mass < 1e-3);
  CHECK(g.truncation_mass > -1e-8);
  CHECK(std::abs(g.at(0, 0) - pgf::pgf_a_real(0.0, 0.0, 1.0, bi)) < 1e-6);
  for (double v : g.probs) CHECK(v >= 0.0);

  // summing the grid over k with weights y^k reproduces the 1-D inversion at y
  const ModelParams m(0.35, 0.45, 1, 1);
  const auto gm = invert_pgf(m, 0.8, 12, 40);
  for (double y : {1.0, 0.5}) {
    const auto marg = invert_pgf_a_marginal(m, 0.8, y, 12);
    for (int j = 0; j <= 12; ++j) {
      double acc = 0;
      for (int k = 0; k <= 40; ++k) acc += gm.at(j, k) * std::pow(y, k);
      CHECK(std::abs(acc - marg[j]) < 1e-8);
    }
  }
  CHECK_THROWS_AS(invert_pgf(bi, 1.0, -1, 3), InvalidParameterError);
}

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "stembranch/errors.hpp"
#include "stembranch/oracle.hpp"

namespace stembranch::oracle {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  // [0, 1) with 53 random bits; portable unlike std::uniform_real_distribution.
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct EventModel {
  double lambda_a;
  double lambda_b_eff;
  double p_aa;        // A -> AA
  double p_aa_or_ab;  // A -> AA or AB
  double p_bb;        // thinned B event is BB

  explicit EventModel(const ModelParams& params) {
    const double a = params.alpha();
    const double p2 = params.p() * params.p();
    const double q2 = params.q() * params.q();
    lambda_a = params.lambda_a();
    lambda_b_eff = params.lambda_b() * (p2 + q2);
    p_aa = (1.0 - a) * (1.0 - a);
    p_aa_or_ab = p_aa + 2.0 * a * (1.0 - a);
    p_bb = q2 / (p2 + q2);
  }
};

// Runs one realisation; `on_event` sees every state including the initial one.
template <class OnEvent>
FinalState run(const ModelParams& params, double t_max, std::uint64_t seed,
               const SimulationCaps& caps, OnEvent&& on_event) {
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw InvalidParameterError("t_max must be >= 0");
  const EventModel model(params);
  Uniform uniform(seed);
  FinalState state;
  double t = 0.0;
  on_event(t, state.z_a, state.z_b);
  for (;;) {
    const double rate_a = model.lambda_a * static_cast<double>(state.z_a);
    const double rate = rate_a + model.lambda_b_eff * static_cast<double>(state.z_b);
    if (rate == 0.0) break;
    t += -std::log1p(-uniform()) / rate;
    if (t > t_max) break;
    if (uniform() * rate < rate_a) {
      const double u = uniform();
      if (u < model.p_aa) {
        ++state.z_a;
      } else if (u < model.p_aa_or_ab) {
        ++state.z_b;
      } else {
        --state.z_a;
        state.z_b += 2;
      }
    } else if (uniform() < model.p_bb) {
      ++state.z_b;
    } else {
      --state.z_b;
    }
    ++state.events;
    on_event(t, state.z_a, state.z_b);
    if (state.z_a + state.z_b > caps.max_cells || state.events >= caps.max_events) {
      state.truncated = true;
      break;
    }
  }
  return state;
}

void check_positive_caps(const SimulationCaps& caps) {
  if (caps.max_cells == 0 || caps.max_events == 0) {
    throw InvalidParameterError("simulation caps must be positive");
  }
}

}  // namespace

std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return splitmix64(master_seed ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

Trajectory simulate(const ModelParams& params, double t_max, std::uint64_t seed,
                    const SimulationCaps& caps) {
  check_positive_caps(caps);
  Trajectory out;
  out.seed = seed;
  const FinalState last = run(params, t_max, seed, caps,
                              [&](double t, std::uint64_t a, std::uint64_t b) {
                                out.events.push_back({t, a, b});
                              });
  out.truncated = last.truncated;
  return out;
}

FinalState simulate_final_state(const ModelParams& params, double t_max, std::uint64_t seed,
                                const SimulationCaps& caps) {
  check_positive_caps(caps);
  return run(params, t_max, seed, caps, [](double, std::uint64_t, std::uint64_t) {});
}

std::vector<FinalState> sample_final_states(const ModelParams& params, double t,
                                            std::uint64_t replicates, std::uint64_t master_seed,
                                            const MonteCarloOptions& options) {
  check_positive_caps(options.caps);
  std::vector<FinalState> out(replicates);
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = static_cast<unsigned>(
      std::clamp<std::uint64_t>(threads, 1, std::max<std::uint64_t>(replicates, 1)));

  // Replicates are strided across workers; each slot is written by exactly
  // one worker, so the output is independent of scheduling.
  auto work = [&](unsigned worker) {
    for (std::uint64_t r = worker; r < replicates; r += threads) {
      out[r] = simulate_final_state(params, t, replicate_seed(master_seed, r), options.caps);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  return out;
}

EstimateWithCI estimate_extinction(const ModelParams& params, double t,
                                   std::uint64_t replicates, std::uint64_t master_seed,
                                   const MonteCarloOptions& options) {
  if (replicates < 100) throw InvalidParameterError("estimate_extinction: replicates must be >= 100");
  const auto states = sample_final_states(params, t, replicates, master_seed, options);
  EstimateWithCI est;
  est.replicates = replicates;
  std::uint64_t extinct = 0;
  for (const auto& s : states) {
    if (s.truncated) {
      ++est.truncated;
    } else if (s.z_a == 0 && s.z_b == 0) {
      ++extinct;
    }
  }
  const double n = static_cast<double>(replicates);
  est.value = static_cast<double>(extinct) / n;
  est.half_width_99 = kNormalQuantile995 * std::sqrt(est.value * (1.0 - est.value) / n);
  return est;
}

EstimateWithCI estimate_pgf(const ModelParams& params, double x, double y, double t,
                            std::uint64_t replicates, std::uint64_t master_seed,
                            const MonteCarloOptions& options) {
  if (replicates < 100) throw InvalidParameterError("estimate_pgf: replicates must be >= 100");
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw InvalidParameterError("estimate_pgf: x and y must lie in [0, 1]");
  }
  const auto states = sample_final_states(params, t, replicates, master_seed, options);
  EstimateWithCI est;
  est.replicates = replicates;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& s : states) {
    if (s.truncated) ++est.truncated;
    const double v = std::pow(x, static_cast<double>(s.z_a)) * std::pow(y, static_cast<double>(s.z_b));
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(replicates);
  est.value = sum / n;
  const double var = std::max(0.0, (sum_sq - n * est.value * est.value) / (n - 1.0));
  est.half_width_99 = kNormalQuantile995 * std::sqrt(var / n);
  return est;
}

}  // namespace stembranch::oracle

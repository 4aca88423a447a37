#pragma once

// Verification engines that share no code with the closed forms:
// complex RK4 on the backward equations, exact CTMC simulation, and lattice
// inversion of the generating function.

#include <cstdint>
#include <span>
#include <vector>

#include "stembranch/model.hpp"

namespace stembranch::oracle {

// ---------------------------------------------------------------------------
// Backward equations
//   dF_A/dt = -lambda_a F_A + lambda_a h_A(F_A, F_B),  F_A(0) = x
//   dF_B/dt = -lambda_b F_B + lambda_b h_B(F_B),       F_B(0) = y

struct StepControl {
  double max_step = 1e-3;
  double tol_per_unit_time = 1e-9;
  double min_step = 1e-12;
};

struct BackwardState {
  Complex f_a;
  Complex f_b;
};

/// Classical RK4 with step h = min(max_step, t/100). The run is repeated at
/// h/2; if the Richardson error estimate exceeds tol_per_unit_time * t the
/// step keeps halving (StepUnderflowError below min_step). Returns the
/// Richardson-extrapolated solution.
BackwardState integrate_backward(Complex x, Complex y, double t, const ModelParams& params,
                                 const StepControl& ctl = {});

/// Same integration carried through a sorted list of times; element i is the
/// solution at times[i].
std::vector<BackwardState> integrate_backward_path(Complex x, Complex y,
                                                   std::span<const double> times,
                                                   const ModelParams& params,
                                                   const StepControl& ctl = {});

// ---------------------------------------------------------------------------
// Stochastic simulation

struct SimulationCaps {
  std::uint64_t max_cells = 10'000'000;
  std::uint64_t max_events = 100'000'000;
};

struct TrajectoryEvent {
  double t;
  std::uint64_t z_a;
  std::uint64_t z_b;

  friend bool operator==(const TrajectoryEvent&, const TrajectoryEvent&) = default;
};

struct Trajectory {
  std::vector<TrajectoryEvent> events;
  std::uint64_t seed = 0;
  bool truncated = false;
};

struct FinalState {
  std::uint64_t z_a = 1;
  std::uint64_t z_b = 0;
  std::uint64_t events = 0;
  bool truncated = false;
};

/// Stream seed of replicate `index` under `master_seed` (splitmix64 mixing).
std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// One exact realisation from a single A-cell up to t_max, driven by an
/// mt19937_64 seeded with `seed`. B -> B divisions (probability 2pq) do not
/// change the counts and are thinned out: B-cells fire at rate
/// lambda_b (p^2 + q^2) and become BB with probability q^2 / (p^2 + q^2).
/// The first event is always (0, 1, 0).
Trajectory simulate(const ModelParams& params, double t_max, std::uint64_t seed,
                    const SimulationCaps& caps = {});

/// State at t_max of the realisation simulate() would produce for `seed`,
/// without recording the path.
FinalState simulate_final_state(const ModelParams& params, double t_max, std::uint64_t seed,
                                const SimulationCaps& caps = {});

struct MonteCarloOptions {
  SimulationCaps caps;
  unsigned threads = 0;  ///< 0 = std::thread::hardware_concurrency()
};

/// Final states of `replicates` realisations; replicate r uses
/// replicate_seed(master_seed, r). The result does not depend on `threads`.
std::vector<FinalState> sample_final_states(const ModelParams& params, double t,
                                            std::uint64_t replicates, std::uint64_t master_seed,
                                            const MonteCarloOptions& options = {});

struct EstimateWithCI {
  double value = 0.0;
  double half_width_99 = 0.0;
  std::uint64_t replicates = 0;
  std::uint64_t truncated = 0;  ///< replicates that hit the caps
};

inline constexpr double kNormalQuantile995 = 2.5758293035489004;

/// Fraction of replicates with Z_A = Z_B = 0 at t, normal-approximation 99%
/// interval. Capped replicates count as not extinct. Requires
/// replicates >= 100.
EstimateWithCI estimate_extinction(const ModelParams& params, double t,
                                   std::uint64_t replicates, std::uint64_t master_seed,
                                   const MonteCarloOptions& options = {});

/// Sample mean of x^Z_A y^Z_B at t with a 99% interval; x, y in [0, 1].
EstimateWithCI estimate_pgf(const ModelParams& params, double x, double y, double t,
                            std::uint64_t replicates, std::uint64_t master_seed,
                            const MonteCarloOptions& options = {});

// ---------------------------------------------------------------------------
// Joint pmf by inversion on roots of unity

struct PmfGrid {
  int j_max = 0;
  int k_max = 0;
  double t = 0.0;
  std::vector<double> probs;  ///< row-major, (j_max + 1) x (k_max + 1)
  double truncation_mass = 0.0;

  double at(int j, int k) const { return probs[static_cast<std::size_t>(j) * (k_max + 1) + k]; }
};

/// P(Z_A = j, Z_B = k) for j <= j_max, k <= k_max via a 2-D DFT of F_A at
/// M x N roots of unity (M, N the next powers of two >= 2 (max + 1)), with
/// F_A from integrate_backward. Entries are clamped at zero and
/// truncation_mass = 1 - sum(entries).
PmfGrid invert_pgf(const ModelParams& params, double t, int j_max, int k_max,
                   const StepControl& ctl = {});

/// One-dimensional inversion of x -> F_A(x, y, t) for fixed real y; element j
/// is sum_k P(Z_A = j, Z_B = k) y^k.
std::vector<double> invert_pgf_a_marginal(const ModelParams& params, double t, double y,
                                          int j_max, const StepControl& ctl = {});

}  // namespace stembranch::oracle

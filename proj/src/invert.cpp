#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "stembranch/errors.hpp"
#include "stembranch/oracle.hpp"

namespace stembranch::oracle {

namespace {

std::size_t lattice_size(int max_index) {
  return std::bit_ceil(2 * (static_cast<std::size_t>(max_index) + 1));
}

Complex root_of_unity(std::size_t k, std::size_t n) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
}

}  // namespace

PmfGrid invert_pgf(const ModelParams& params, double t, int j_max, int k_max,
                   const StepControl& ctl) {
  if (j_max < 0 || k_max < 0) throw InvalidParameterError("invert_pgf: grid bounds must be >= 0");
  const std::size_t m = lattice_size(j_max);
  const std::size_t n = lattice_size(k_max);

  // values[a][b] = F_A(w_M^a, w_N^b, t)
  std::vector<Complex> values(m * n);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      values[a * n + b] = integrate_backward(root_of_unity(a, m), root_of_unity(b, n), t, params, ctl).f_a;
    }
  }

  const std::size_t cols = static_cast<std::size_t>(k_max) + 1;
  std::vector<Complex> partial(m * cols);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t k = 0; k < cols; ++k) {
      Complex acc = 0.0;
      for (std::size_t b = 0; b < n; ++b) acc += values[a * n + b] * root_of_unity((n - (b * k) % n) % n, n);
      partial[a * cols + k] = acc;
    }
  }

  PmfGrid grid;
  grid.j_max = j_max;
  grid.k_max = k_max;
  grid.t = t;
  grid.probs.assign((static_cast<std::size_t>(j_max) + 1) * cols, 0.0);
  const double scale = 1.0 / static_cast<double>(m * n);
  double total = 0.0;
  for (std::size_t j = 0; j <= static_cast<std::size_t>(j_max); ++j) {
    for (std::size_t k = 0; k < cols; ++k) {
      Complex acc = 0.0;
      for (std::size_t a = 0; a < m; ++a) acc += partial[a * cols + k] * root_of_unity((m - (a * j) % m) % m, m);
      const double v = std::max(0.0, scale * acc.real());
      grid.probs[j * cols + k] = v;
      total += v;
    }
  }
  grid.truncation_mass = 1.0 - total;
  return grid;
}

std::vector<double> invert_pgf_a_marginal(const ModelParams& params, double t, double y,
                                          int j_max, const StepControl& ctl) {
  if (j_max < 0) throw InvalidParameterError("invert_pgf_a_marginal: j_max must be >= 0");
  const std::size_t m = lattice_size(j_max);
  std::vector<Complex> values(m);
  for (std::size_t a = 0; a < m; ++a) values[a] = integrate_backward(root_of_unity(a, m), y, t, params, ctl).f_a;
  std::vector<double> out(static_cast<std::size_t>(j_max) + 1);
  for (std::size_t j = 0; j < out.size(); ++j) {
    Complex acc = 0.0;
    for (std::size_t a = 0; a < m; ++a) acc += values[a] * root_of_unity((m - (a * j) % m) % m, m);
    out[j] = std::max(0.0, acc.real() / static_cast<double>(m));
  }
  return out;
}

}  // namespace stembranch::oracle

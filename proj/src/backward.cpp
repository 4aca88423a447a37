#include <cmath>
#include <string>

#include "stembranch/errors.hpp"
#include "stembranch/oracle.hpp"

namespace stembranch::oracle {

namespace {

struct Rhs {
  double lambda_a;
  double lambda_b;
  double one_minus_alpha;
  double alpha;
  double p;
  double q;

  explicit Rhs(const ModelParams& params)
      : lambda_a(params.lambda_a()),
        lambda_b(params.lambda_b()),
        one_minus_alpha(1.0 - params.alpha()),
        alpha(params.alpha()),
        p(params.p()),
        q(params.q()) {}

  BackwardState operator()(const BackwardState& s) const {
    const Complex mix = one_minus_alpha * s.f_a + alpha * s.f_b;
    const Complex b = p + q * s.f_b;
    return {lambda_a * (mix * mix - s.f_a), lambda_b * (b * b - s.f_b)};
  }
};

BackwardState axpy(const BackwardState& s, double h, const BackwardState& k) {
  return {s.f_a + h * k.f_a, s.f_b + h * k.f_b};
}

BackwardState rk4(const Rhs& rhs, BackwardState s, double dt, long steps) {
  const double h = dt / static_cast<double>(steps);
  for (long i = 0; i < steps; ++i) {
    const BackwardState k1 = rhs(s);
    const BackwardState k2 = rhs(axpy(s, 0.5 * h, k1));
    const BackwardState k3 = rhs(axpy(s, 0.5 * h, k2));
    const BackwardState k4 = rhs(axpy(s, h, k3));
    s.f_a += h / 6.0 * (k1.f_a + 2.0 * k2.f_a + 2.0 * k3.f_a + k4.f_a);
    s.f_b += h / 6.0 * (k1.f_b + 2.0 * k2.f_b + 2.0 * k3.f_b + k4.f_b);
  }
  return s;
}

double distance(const BackwardState& a, const BackwardState& b) {
  return std::max(std::abs(a.f_a - b.f_a), std::abs(a.f_b - b.f_b));
}

BackwardState advance(const Rhs& rhs, const BackwardState& start, double dt,
                      const StepControl& ctl) {
  if (dt == 0.0) return start;
  const double h0 = std::min(ctl.max_step, dt / 100.0);
  long steps = static_cast<long>(std::ceil(dt / h0));
  BackwardState coarse = rk4(rhs, start, dt, steps);
  for (;;) {
    const BackwardState fine = rk4(rhs, start, dt, 2 * steps);
    // RK4 is fourth order: the fine solution's error is ~ |fine - coarse| / 15.
    const double err = distance(fine, coarse) / 15.0;
    if (err <= ctl.tol_per_unit_time * dt) {
      return {fine.f_a + (fine.f_a - coarse.f_a) / 15.0, fine.f_b + (fine.f_b - coarse.f_b) / 15.0};
    }
    steps *= 2;
    if (dt / static_cast<double>(2 * steps) < ctl.min_step) {
      throw StepUnderflowError("integrate_backward: required step below " +
                               std::to_string(ctl.min_step));
    }
    coarse = fine;
  }
}

}  // namespace

BackwardState integrate_backward(Complex x, Complex y, double t, const ModelParams& params,
                                 const StepControl& ctl) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameterError("t must be >= 0");
  return advance(Rhs(params), {x, y}, t, ctl);
}

std::vector<BackwardState> integrate_backward_path(Complex x, Complex y,
                                                   std::span<const double> times,
                                                   const ModelParams& params,
                                                   const StepControl& ctl) {
  const Rhs rhs(params);
  std::vector<BackwardState> out;
  out.reserve(times.size());
  BackwardState state{x, y};
  double now = 0.0;
  for (const double t : times) {
    if (!(t >= now) || !std::isfinite(t)) {
      throw InvalidParameterError("integrate_backward_path: times must be sorted and >= 0");
    }
    state = advance(rhs, state, t - now, ctl);
    now = t;
    out.push_back(state);
  }
  return out;
}

}  // namespace stembranch::oracle

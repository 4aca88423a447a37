#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string_view>

namespace stembranch {

using Complex = std::complex<double>;

/// Parameters of the two-type process: A-cells (stem) divide at rate
/// lambda_a into AA/AB/BB with probabilities (1-alpha)^2, 2 alpha(1-alpha),
/// alpha^2; B-cells divide at rate lambda_b and each of the two progeny stays
/// a B-cell with probability q = 1 - p, so B -> BB with probability q^2 and
/// B -> (nothing) with probability p^2.
///
/// Note on reading p: p is the per-progeny probability of leaving the B
/// compartment (differentiation). "B sub-critical" therefore means p > q.
class ModelParams {
 public:
  /// Throws InvalidParameterError unless 0 <= alpha, p <= 1 and both rates
  /// are positive and finite.
  ModelParams(double alpha, double p, double lambda_a, double lambda_b);

  double alpha() const noexcept { return alpha_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double lambda_a() const noexcept { return lambda_a_; }
  double lambda_b() const noexcept { return lambda_b_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double alpha_;
  double p_;
  double q_;
  double lambda_a_;
  double lambda_b_;
};

std::ostream& operator<<(std::ostream& os, const ModelParams& params);

enum class Criticality { SubCritical, Critical, SuperCritical };

enum class TheoremBranch { BiCritical_1a, NonCritA_CritB_1b, NonCritB_1c, OracleOnly };

struct CriticalityRegime {
  Criticality a_class;
  Criticality b_class;
  TheoremBranch theorem_branch;

  friend bool operator==(const CriticalityRegime&, const CriticalityRegime&) = default;
};

std::string_view to_string(Criticality c) noexcept;
std::string_view to_string(TheoremBranch b) noexcept;

/// Parameters closer than this to alpha in {0, 1} or q = 0 are routed to the
/// ODE oracle; the closed forms divide by (1-alpha)^2 and q^2.
inline constexpr double kBoundaryDelta = 1e-6;

CriticalityRegime classify(const ModelParams& params) noexcept;

/// h_A(x, y) = ((1-alpha) x + alpha y)^2
Complex progeny_pgf_a(Complex x, Complex y, const ModelParams& params) noexcept;

/// h_B(y) = (p + q y)^2
Complex progeny_pgf_b(Complex y, const ModelParams& params) noexcept;

/// Partially specified parameter set as read from a key=value config file or
/// command-line flags. q is derived and never accepted as input.
struct ParamOverrides {
  std::optional<double> alpha;
  std::optional<double> p;
  std::optional<double> lambda_a;
  std::optional<double> lambda_b;

  /// Fields set in `other` replace fields in *this.
  void merge(const ParamOverrides& other);

  /// Missing rates default to 1; missing alpha or p is an error.
  ModelParams resolve() const;
};

/// Reads `key = value` lines. Blank lines and lines starting with '#' are
/// ignored. Recognised keys: alpha, p, lambda_a, lambda_b. Throws
/// InvalidParameterError on unknown keys, a `q` key, or malformed numbers.
ParamOverrides parse_param_config(std::istream& in);

}  // namespace stembranch

#pragma once

// Coefficient families for one-step integrators that use the first and
// second derivative of the state:
//
//   x_t = a_prev*x_{t-h} + b_now*x'_t + b_prev*x'_{t-h}
//                        + c_now*x''_t + c_prev*x''_{t-h}
//
// Kinds A and B are tuned so that the discretization is exact for a sinusoid
// at omega_select. C and D are the classical Obreshkov members; TR and BE are
// the trapezoidal and backward Euler baselines.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace freqint {

enum class IntegratorKind { A, B, C, D, TR, BE };

inline constexpr std::array<IntegratorKind, 6> kAllKinds{
    IntegratorKind::A, IntegratorKind::B,  IntegratorKind::C,
    IntegratorKind::D, IntegratorKind::TR, IntegratorKind::BE};

std::string_view to_string(IntegratorKind kind);
std::optional<IntegratorKind> parse_kind(std::string_view name);

/// True for the kinds whose coefficients depend on omega_select (A and B).
constexpr bool uses_omega_select(IntegratorKind kind) {
  return kind == IntegratorKind::A || kind == IntegratorKind::B;
}

struct CoefficientSet {
  double a_prev = 1.0;  // dimensionless
  double b_now = 0.0;   // s
  double b_prev = 0.0;  // s
  double c_now = 0.0;   // s^2
  double c_prev = 0.0;  // s^2
  double h = 0.0;       // s
  IntegratorKind kind = IntegratorKind::BE;
  double omega_select = 0.0;  // rad/s, 0 when the kind ignores it

  /// omega_select * h; 0 for kinds that do not use omega_select.
  double theta() const { return omega_select * h; }

  /// No derivative history is used (b_prev == c_prev == 0), so the step is
  /// safe to take right after a discontinuity.
  bool discontinuity_safe() const { return b_prev == 0.0 && c_prev == 0.0; }
};

struct StepVerdict {
  bool valid = false;
  double bound = 0.0;  // exclusive upper bound on h; +inf when none applies
};

/// Step-size bound that keeps each family stable: h < 2*pi/omega_select for
/// A, h < pi/omega_select for B, unbounded for the rest.
StepVerdict validate_step_size(IntegratorKind kind, double omega_select,
                               double h);

/// Raised when h violates the stability bound of its family.
class StepSizeError : public std::invalid_argument {
 public:
  StepSizeError(IntegratorKind kind, double h, double bound);
  double bound() const { return bound_; }

 private:
  double bound_;
};

/// Builds the coefficient set of `kind` at step `h`. omega_select is only
/// read for A and B and is stored as 0 otherwise.
///
/// Throws std::invalid_argument for non-positive or non-finite h, or a
/// non-positive omega_select on A/B; StepSizeError for a bound violation.
CoefficientSet build_coefficients(IntegratorKind kind, double omega_select,
                                  double h);

/// 1 - x*cot(x), evaluated by its Bernoulli series for |x| < 0.5 where the
/// direct form cancels.
double one_minus_x_cot_x(double x);
double x_cot_x(double x);

/// Below this theta (x = theta/2 < 0.5), kind A uses the series.
inline constexpr double kSeriesThreshold = 1.0;

}  // namespace freqint

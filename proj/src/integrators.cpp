#include "freqint/integrators.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace freqint {

namespace {

std::string describe_bound(IntegratorKind kind, double h, double bound) {
  std::ostringstream os;
  os.precision(17);
  os << "step size h = " << h << " s violates the stability bound of integrator "
     << to_string(kind) << ": h must be < " << bound << " s";
  return os.str();
}

void require_positive_finite(double value, const char* what) {
  if (!std::isfinite(value) || value <= 0.0) {
    std::ostringstream os;
    os.precision(17);
    os << what << " must be positive and finite (got " << value << ")";
    throw std::invalid_argument(os.str());
  }
}

// (1 - x cot x) = sum_{n>=1} 2^{2n} |B_{2n}| x^{2n} / (2n)!; this is the sum
// from n = 2 divided by x^4. Terms shrink by (x/pi)^2.
double cot_series_tail(double x2) {
  static constexpr std::array<double, 12> kTerms{
      1.0 / 45.0,
      2.0 / 945.0,
      1.0 / 4725.0,
      2.0 / 93555.0,
      1382.0 / 638512875.0,
      4.0 / 18243225.0,
      3617.0 / 162820783125.0,
      2.2507846516808994e-09,
      2.2805151204592183e-10,
      2.3106432599002624e-11,
      2.3411706819824882e-12,
      2.3721017400233653e-13,
  };
  double acc = 0.0;
  for (auto it = kTerms.rbegin(); it != kTerms.rend(); ++it) acc = acc * x2 + *it;
  return acc;
}

}  // namespace

std::string_view to_string(IntegratorKind kind) {
  switch (kind) {
    case IntegratorKind::A: return "A";
    case IntegratorKind::B: return "B";
    case IntegratorKind::C: return "C";
    case IntegratorKind::D: return "D";
    case IntegratorKind::TR: return "TR";
    case IntegratorKind::BE: return "BE";
  }
  return "?";
}

std::optional<IntegratorKind> parse_kind(std::string_view name) {
  for (auto kind : kAllKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

StepSizeError::StepSizeError(IntegratorKind kind, double h, double bound)
    : std::invalid_argument(describe_bound(kind, h, bound)), bound_(bound) {}

StepVerdict validate_step_size(IntegratorKind kind, double omega_select,
                               double h) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  StepVerdict verdict{false, inf};
  switch (kind) {
    case IntegratorKind::A:
      verdict.bound = 2.0 * std::numbers::pi / omega_select;
      break;
    case IntegratorKind::B:
      verdict.bound = std::numbers::pi / omega_select;
      break;
    default:
      break;
  }
  verdict.valid = std::isfinite(h) && h > 0.0 && h < verdict.bound;
  return verdict;
}

double one_minus_x_cot_x(double x) {
  if (std::abs(x) < 0.5 * kSeriesThreshold) {
    const double x2 = x * x;
    return x2 * (1.0 / 3.0 + x2 * cot_series_tail(x2));
  }
  return 1.0 - x / std::tan(x);
}

double x_cot_x(double x) { return 1.0 - one_minus_x_cot_x(x); }

CoefficientSet build_coefficients(IntegratorKind kind, double omega_select,
                                  double h) {
  require_positive_finite(h, "step size h");
  if (uses_omega_select(kind)) {
    require_positive_finite(omega_select, "omega_select");
    const auto verdict = validate_step_size(kind, omega_select, h);
    if (!verdict.valid) throw StepSizeError(kind, h, verdict.bound);
  }

  CoefficientSet c;
  c.a_prev = 1.0;
  c.h = h;
  c.kind = kind;
  c.omega_select = uses_omega_select(kind) ? omega_select : 0.0;

  const double h2 = h * h;
  switch (kind) {
    case IntegratorKind::A: {
      const double theta = omega_select * h;
      const double half = 0.5 * theta;
      const double c_prev =
          theta < kSeriesThreshold
              ? h2 / 12.0 * (1.0 + 3.0 * half * half * cot_series_tail(half * half))
              : one_minus_x_cot_x(half) / (omega_select * omega_select);
      c.b_now = 0.5 * h;
      c.b_prev = 0.5 * h;
      c.c_prev = c_prev;
      c.c_now = -c_prev;
      break;
    }
    case IntegratorKind::B: {
      const double theta = omega_select * h;
      const double s = std::sin(0.5 * theta);
      c.b_now = std::sin(theta) / omega_select;
      // cos(theta) - 1 written as -2 sin^2(theta/2) keeps all digits near 0.
      c.c_now = -2.0 * s * s / (omega_select * omega_select);
      break;
    }
    case IntegratorKind::C:
      c.b_now = 0.5 * h;
      c.b_prev = 0.5 * h;
      c.c_now = -h2 / 12.0;
      c.c_prev = h2 / 12.0;
      break;
    case IntegratorKind::D:
      c.b_now = h;
      c.c_now = -0.5 * h2;
      break;
    case IntegratorKind::TR:
      c.b_now = 0.5 * h;
      c.b_prev = 0.5 * h;
      break;
    case IntegratorKind::BE:
      c.b_now = h;
      break;
  }
  return c;
}

}  // namespace freqint

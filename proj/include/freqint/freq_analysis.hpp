#pragma once

// Frequency-domain error of a coefficient set. Substituting x = X e^{st}
// into the discretization leaves the relative error
//
//   E(s) = 1 - (a_prev e^{-sh} + b_now s + b_prev s e^{-sh}
//               + c_now s^2 + c_prev s^2 e^{-sh})
//
// whose roots on the imaginary axis are the frequencies the integrator
// reproduces exactly.

#include <complex>
#include <cstddef>
#include <vector>

#include "freqint/integrators.hpp"

namespace freqint {

using Complex = std::complex<double>;

Complex relative_error_at(const CoefficientSet& coeffs, Complex s);

/// Highest derivative order error_derivative_at supports.
inline constexpr int kMaxErrorDerivative = 4;

/// Analytic order-th derivative of E with respect to s, order in 1..4.
/// Throws std::invalid_argument for any other order.
Complex error_derivative_at(const CoefficientSet& coeffs, Complex s, int order);

/// Any order >= 0 (order 0 is E itself). Used internally by the root checks,
/// which need one order past the highest claimed multiplicity.
Complex error_derivative_any_order(const CoefficientSet& coeffs, Complex s,
                                   int order);

struct ErrorSample {
  double omega = 0.0;  // rad/s
  Complex error;
  double magnitude = 0.0;
};

enum class Spacing { linear, log };

struct SweepGrid {
  double omega_min = 0.0;
  double omega_max = 0.0;
  std::size_t n_points = 0;
  Spacing spacing = Spacing::linear;
};

/// 2001 linear points over [0, 2*omega_select], or [0, 2*pi/h] for kinds
/// without omega_select.
SweepGrid default_sweep_grid(const CoefficientSet& coeffs);

/// E(j*omega) on the requested grid, omega increasing. Log spacing needs
/// omega_min > 0. Throws std::invalid_argument on an invalid grid.
std::vector<ErrorSample> magnitude_sweep(const CoefficientSet& coeffs,
                                         const SweepGrid& grid);

struct RootReport {
  Complex location;  // 1/s
  int claimed_multiplicity = 0;
  /// |E^(k)(location)| / h^k for k = 0..claimed_multiplicity-1.
  std::vector<double> derivative_magnitudes;
  std::vector<bool> order_pass;
  /// Scaled magnitude of the first derivative that should not vanish.
  double next_order_magnitude = 0.0;
  bool next_order_nonzero = false;
  double threshold = 0.0;

  bool passed() const;
};

/// The designed roots of each family:
///   A: +-j*omega_select single, 0 triple    B: +-j*omega_select and 0 single
///   C: 0 quintuple    D, TR: 0 triple    BE: 0 double
/// Each scaled derivative below the root's multiplicity must fall under
/// `tolerance * (1 + sum of h-scaled coefficient magnitudes)`, and the next
/// one must exceed it.
std::vector<RootReport> verify_root_design(IntegratorKind kind,
                                           const CoefficientSet& coeffs,
                                           double tolerance);

}  // namespace freqint

#pragma once

// Transient performance: how the per-step gain behaves for fast, real,
// decaying eigenvalues. A negative gain rings (numerical oscillation); a gain
// near 1 lets a fast transient linger for many steps.

#include <span>
#include <string_view>
#include <vector>

#include "freqint/integrators.hpp"

namespace freqint {

/// Real amplification factor for a real lambda < 0 (1/s).
/// Throws std::invalid_argument for lambda >= 0 and SingularDenominatorError
/// on a pole.
double transient_gain(const CoefficientSet& coeffs, double lambda);

enum class TransientTag { oscillatory, sluggish, fast_decay };

std::string_view to_string(TransientTag tag);

struct TransientClass {
  TransientTag tag = TransientTag::fast_decay;
  double gain = 0.0;
  double exact_gain = 0.0;  // e^{lambda*h}
  double threshold = 0.0;   // gains at or above this are sluggish
};

/// Gains at or above max(10*e^{lambda*h}, kSluggishFloor) count as sluggish.
inline constexpr double kSluggishFloor = 0.25;

double sluggish_threshold(double lambda_h);

/// Diagnostic label only; never feeds back into a simulation.
TransientClass classify_transient(double gain, double lambda, double h);

struct PositivityCertificate {
  bool applicable = false;  // false for TR and BE
  /// b_prev^2 - 4*c_prev of the numerator polynomial (A and C).
  double discriminant = 0.0;
  bool numerator_is_unity = false;  // B and D
  std::vector<double> lambda_h;     // sampled grid
  std::vector<double> gains;
  double min_gain = 0.0;
  double max_gain = 0.0;
  bool passed = false;
};

/// Log grid of negative real lambda*h over [-1e6, -1e-3] used by the
/// certificate, `n` points.
std::vector<double> default_lambda_h_grid(std::size_t n = 181);

/// Checks the no-oscillation guarantee of kinds A-D: the numerator of g has
/// no real root (negative discriminant for A and C, identically 1 for B and
/// D) and every sampled gain lies in (0, 1).
PositivityCertificate positivity_certificate(
    IntegratorKind kind, const CoefficientSet& coeffs,
    std::span<const double> lambda_h_grid = {});

}  // namespace freqint

#pragma once

// Per-step amplification on the scalar test equation x' = lambda*x:
//
//   g = (1 + b_prev*lambda + c_prev*lambda^2) / (1 - b_now*lambda - c_now*lambda^2)

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "freqint/freq_analysis.hpp"
#include "freqint/integrators.hpp"

namespace freqint {

/// Raised when lambda sits on a pole of the amplification factor.
class SingularDenominatorError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Complex amplification(const CoefficientSet& coeffs, Complex lambda);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

enum class CellClass { stable, marginal, unstable, singular };

/// |g| < 1 stable, == 1 marginal, > 1 unstable, +inf singular.
CellClass classify_cell(double magnitude);

/// |g| sampled over a grid of mu = lambda*h with theta = omega_select*h fixed
/// by the coefficient set. Singular cells hold +inf.
struct StabilityMap {
  std::vector<double> re_axis;  // Re(lambda*h), one row each
  std::vector<double> im_axis;  // Im(lambda*h), one column each
  std::vector<double> magnitude;  // row-major, re_axis.size() x im_axis.size()
  double theta = 0.0;
  IntegratorKind kind = IntegratorKind::BE;

  double at(std::size_t row, std::size_t col) const {
    return magnitude[row * im_axis.size() + col];
  }
};

/// Inclusive linear grids on both axes. Rows are independent, so `workers`
/// only changes wall time; the result is bit-identical for any value.
/// Throws std::invalid_argument for an empty or reversed range or n < 2.
StabilityMap stability_map(const CoefficientSet& coeffs, Interval re_range,
                           Interval im_range, std::size_t n_re,
                           std::size_t n_im, unsigned workers = 1);

/// Re(lambda) < 0 and |Re(lambda)| > |Im(lambda)|, the region where kind B is
/// guaranteed stable. The boundary is excluded.
bool wedge_contains(Complex lambda);

struct LStabilityReport {
  std::vector<double> probes;      // negative real lambda*h values
  std::vector<double> magnitudes;  // |g| at each probe
  bool passed = false;
};

/// Probes must be negative lambda*h values of increasing magnitude. Passes
/// when |g| strictly decreases across the probes and the last |g| is at most
/// 1/|mu| (decay toward zero rather than toward a nonzero limit).
LStabilityReport check_l_stability(const CoefficientSet& coeffs,
                                   std::span<const double> probe_mu);

}  // namespace freqint

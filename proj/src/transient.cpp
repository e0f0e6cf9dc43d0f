#include "freqint/transient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "freqint/stability.hpp"

namespace freqint {

double transient_gain(const CoefficientSet& c, double lambda) {
  if (!(lambda < 0.0)) {
    std::ostringstream os;
    os << "transient gain needs a negative real lambda (got " << lambda << ")";
    throw std::invalid_argument(os.str());
  }
  const double den = 1.0 - lambda * (c.b_now + lambda * c.c_now);
  if (den == 0.0) {
    std::ostringstream os;
    os << "transient gain is singular at lambda = " << lambda;
    throw SingularDenominatorError(os.str());
  }
  return (c.a_prev + lambda * (c.b_prev + lambda * c.c_prev)) / den;
}

std::string_view to_string(TransientTag tag) {
  switch (tag) {
    case TransientTag::oscillatory: return "oscillatory";
    case TransientTag::sluggish: return "sluggish";
    case TransientTag::fast_decay: return "fast_decay";
  }
  return "?";
}

double sluggish_threshold(double lambda_h) {
  return std::max(10.0 * std::exp(lambda_h), kSluggishFloor);
}

TransientClass classify_transient(double gain, double lambda, double h) {
  TransientClass out;
  out.gain = gain;
  out.exact_gain = std::exp(lambda * h);
  out.threshold = sluggish_threshold(lambda * h);
  if (gain < 0.0) {
    out.tag = TransientTag::oscillatory;
  } else if (gain >= out.threshold) {
    out.tag = TransientTag::sluggish;
  } else {
    out.tag = TransientTag::fast_decay;
  }
  return out;
}

std::vector<double> default_lambda_h_grid(std::size_t n) {
  std::vector<double> grid(n);
  const double lo = std::log10(1e-3);
  const double hi = std::log10(1e6);
  for (std::size_t k = 0; k < n; ++k) {
    const double frac = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
    grid[k] = -std::pow(10.0, lo + (hi - lo) * frac);
  }
  return grid;
}

PositivityCertificate positivity_certificate(IntegratorKind kind,
                                             const CoefficientSet& c,
                                             std::span<const double> grid) {
  PositivityCertificate cert;
  cert.discriminant = c.b_prev * c.b_prev - 4.0 * c.c_prev;
  cert.numerator_is_unity = c.a_prev == 1.0 && c.b_prev == 0.0 && c.c_prev == 0.0;

  std::vector<double> fallback;
  if (grid.empty()) {
    fallback = default_lambda_h_grid();
    grid = fallback;
  }
  cert.lambda_h.assign(grid.begin(), grid.end());
  for (double mu : grid) cert.gains.push_back(transient_gain(c, mu / c.h));
  const auto [lo, hi] = std::minmax_element(cert.gains.begin(), cert.gains.end());
  cert.min_gain = *lo;
  cert.max_gain = *hi;

  bool structural = false;
  switch (kind) {
    case IntegratorKind::A:
    case IntegratorKind::C:
      cert.applicable = true;
      structural = cert.discriminant < 0.0;
      break;
    case IntegratorKind::B:
    case IntegratorKind::D:
      cert.applicable = true;
      structural = cert.numerator_is_unity;
      break;
    case IntegratorKind::TR:
    case IntegratorKind::BE:
      cert.applicable = false;
      break;
  }
  cert.passed = cert.applicable && structural && cert.min_gain > 0.0 &&
                cert.max_gain < 1.0;
  return cert;
}

}  // namespace freqint

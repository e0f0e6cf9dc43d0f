#include "freqint/freq_analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace freqint {

namespace {

struct DesignedRoot {
  Complex location;
  int multiplicity;
};

std::vector<DesignedRoot> designed_roots(IntegratorKind kind, double omega) {
  const Complex j_omega{0.0, omega};
  switch (kind) {
    case IntegratorKind::A:
      return {{j_omega, 1}, {std::conj(j_omega), 1}, {0.0, 3}};
    case IntegratorKind::B:
      return {{j_omega, 1}, {std::conj(j_omega), 1}, {0.0, 1}};
    case IntegratorKind::C:
      return {{0.0, 5}};
    case IntegratorKind::D:
    case IntegratorKind::TR:
      return {{0.0, 3}};
    case IntegratorKind::BE:
      return {{0.0, 2}};
  }
  return {};
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Complex relative_error_at(const CoefficientSet& c, Complex s) {
  const Complex decay = std::exp(-s * c.h);
  const Complex history = c.a_prev + s * (c.b_prev + s * c.c_prev);
  const Complex current = s * (c.b_now + s * c.c_now);
  return 1.0 - (decay * history + current);
}

Complex error_derivative_any_order(const CoefficientSet& c, Complex s,
                                   int order) {
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (order == 0) return relative_error_at(c, s);

  // E = 1 - e^{-sh} P(s) - Q(s), P = a + b_prev s + c_prev s^2,
  // Q = b_now s + c_now s^2. Leibniz on e^{-sh} P; P has three nonzero
  // derivatives.
  const Complex p[3] = {c.a_prev + s * (c.b_prev + s * c.c_prev),
                        c.b_prev + 2.0 * c.c_prev * s, 2.0 * c.c_prev};
  const Complex decay = std::exp(-s * c.h);
  Complex product = 0.0;
  for (int j = 0; j <= std::min(order, 2); ++j) {
    product += binomial(order, j) * std::pow(-c.h, order - j) * p[j];
  }
  product *= decay;

  Complex q = 0.0;
  if (order == 1) q = c.b_now + 2.0 * c.c_now * s;
  if (order == 2) q = 2.0 * c.c_now;
  return -product - q;
}

Complex error_derivative_at(const CoefficientSet& c, Complex s, int order) {
  if (order < 1 || order > kMaxErrorDerivative) {
    throw std::invalid_argument("unsupported derivative order " +
                                std::to_string(order) + " (expected 1..4)");
  }
  return error_derivative_any_order(c, s, order);
}

SweepGrid default_sweep_grid(const CoefficientSet& c) {
  const double top = c.omega_select > 0.0 ? 2.0 * c.omega_select
                                          : 2.0 * std::numbers::pi / c.h;
  return {0.0, top, 2001, Spacing::linear};
}

std::vector<ErrorSample> magnitude_sweep(const CoefficientSet& c,
                                         const SweepGrid& grid) {
  if (!(grid.omega_min >= 0.0) || !(grid.omega_min < grid.omega_max) ||
      !std::isfinite(grid.omega_max) || grid.n_points < 2) {
    throw std::invalid_argument(
        "sweep grid needs 0 <= omega_min < omega_max and at least 2 points");
  }
  if (grid.spacing == Spacing::log && grid.omega_min <= 0.0) {
    throw std::invalid_argument("log-spaced sweep needs omega_min > 0");
  }

  std::vector<ErrorSample> out(grid.n_points);
  const double last = static_cast<double>(grid.n_points - 1);
  const double log_lo = grid.spacing == Spacing::log ? std::log(grid.omega_min) : 0.0;
  const double log_hi = grid.spacing == Spacing::log ? std::log(grid.omega_max) : 0.0;
  for (std::size_t k = 0; k < grid.n_points; ++k) {
    const double frac = static_cast<double>(k) / last;
    double omega;
    if (k == 0) {
      omega = grid.omega_min;
    } else if (k + 1 == grid.n_points) {
      omega = grid.omega_max;
    } else if (grid.spacing == Spacing::linear) {
      omega = grid.omega_min + (grid.omega_max - grid.omega_min) * frac;
    } else {
      omega = std::exp(log_lo + (log_hi - log_lo) * frac);
    }
    const Complex e = relative_error_at(c, Complex{0.0, omega});
    out[k] = {omega, e, std::abs(e)};
  }
  return out;
}

bool RootReport::passed() const {
  for (bool ok : order_pass) {
    if (!ok) return false;
  }
  return next_order_nonzero;
}

std::vector<RootReport> verify_root_design(IntegratorKind kind,
                                           const CoefficientSet& c,
                                           double tolerance) {
  const double h = c.h;
  const double coeff_scale = std::abs(c.a_prev) + std::abs(c.b_now) / h +
                             std::abs(c.b_prev) / h +
                             std::abs(c.c_now) / (h * h) +
                             std::abs(c.c_prev) / (h * h);
  const double threshold = tolerance * (1.0 + coeff_scale);

  std::vector<RootReport> reports;
  for (const auto& root : designed_roots(kind, c.omega_select)) {
    RootReport r;
    r.location = root.location;
    r.claimed_multiplicity = root.multiplicity;
    r.threshold = threshold;
    for (int k = 0; k <= root.multiplicity; ++k) {
      const double scaled =
          std::abs(error_derivative_any_order(c, root.location, k)) /
          std::pow(h, k);
      if (k < root.multiplicity) {
        r.derivative_magnitudes.push_back(scaled);
        r.order_pass.push_back(scaled < threshold);
      } else {
        r.next_order_magnitude = scaled;
        r.next_order_nonzero = scaled > threshold;
      }
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace freqint

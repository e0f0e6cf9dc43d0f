#include "freqint/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace freqint {

namespace {

std::vector<double> linspace(Interval range, std::size_t n) {
  std::vector<double> v(n);
  const double last = static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = k + 1 == n ? range.hi
                      : range.lo + (range.hi - range.lo) *
                                       (static_cast<double>(k) / last);
  }
  return v;
}

void require_range(Interval r, const char* axis) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi)) {
    std::ostringstream os;
    os << axis << " range must satisfy lo < hi (got [" << r.lo << ", " << r.hi
       << "])";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Complex amplification(const CoefficientSet& c, Complex lambda) {
  const Complex den = 1.0 - lambda * (c.b_now + lambda * c.c_now);
  if (den == 0.0) {
    std::ostringstream os;
    os << "amplification factor is singular at lambda = " << lambda;
    throw SingularDenominatorError(os.str());
  }
  const Complex num = c.a_prev + lambda * (c.b_prev + lambda * c.c_prev);
  return num / den;
}

CellClass classify_cell(double magnitude) {
  if (std::isinf(magnitude)) return CellClass::singular;
  if (magnitude < 1.0) return CellClass::stable;
  if (magnitude == 1.0) return CellClass::marginal;
  return CellClass::unstable;
}

StabilityMap stability_map(const CoefficientSet& c, Interval re_range,
                           Interval im_range, std::size_t n_re,
                           std::size_t n_im, unsigned workers) {
  require_range(re_range, "Re(lambda*h)");
  require_range(im_range, "Im(lambda*h)");
  if (n_re < 2 || n_im < 2) {
    throw std::invalid_argument("stability map needs at least 2 points per axis");
  }

  StabilityMap map;
  map.re_axis = linspace(re_range, n_re);
  map.im_axis = linspace(im_range, n_im);
  map.magnitude.assign(n_re * n_im, 0.0);
  map.theta = c.theta();
  map.kind = c.kind;

  auto fill_rows = [&](std::size_t first, std::size_t stride) {
    for (std::size_t row = first; row < n_re; row += stride) {
      for (std::size_t col = 0; col < n_im; ++col) {
        const Complex lambda = Complex{map.re_axis[row], map.im_axis[col]} / c.h;
        double mag;
        try {
          mag = std::abs(amplification(c, lambda));
        } catch (const SingularDenominatorError&) {
          mag = std::numeric_limits<double>::infinity();
        }
        map.magnitude[row * n_im + col] = mag;
      }
    }
  };

  const std::size_t n_workers =
      std::clamp<std::size_t>(workers, 1, n_re);
  if (n_workers == 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
      pool.emplace_back(fill_rows, w, n_workers);
    }
  }
  return map;
}

bool wedge_contains(Complex lambda) {
  return lambda.real() < 0.0 && std::abs(lambda.real()) > std::abs(lambda.imag());
}

LStabilityReport check_l_stability(const CoefficientSet& c,
                                   std::span<const double> probe_mu) {
  LStabilityReport report;
  report.probes.assign(probe_mu.begin(), probe_mu.end());
  for (double mu : probe_mu) {
    report.magnitudes.push_back(std::abs(amplification(c, Complex{mu / c.h, 0.0})));
  }
  if (report.magnitudes.empty()) return report;

  bool decreasing = true;
  for (std::size_t k = 1; k < report.magnitudes.size(); ++k) {
    decreasing = decreasing && report.magnitudes[k] < report.magnitudes[k - 1];
  }
  const double last_mu = std::abs(report.probes.back());
  report.passed = decreasing && report.magnitudes.back() * last_mu <= 1.0;
  return report;
}

}  // namespace freqint

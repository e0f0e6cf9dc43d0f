#include "freqint/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace freqint {

void LinearSystem::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols()) {
    throw std::invalid_argument("system matrix A must be square and non-empty");
  }
  if (B.rows() != A.rows()) {
    throw std::invalid_argument("input matrix B must have as many rows as A");
  }
  if (!u || !u_dot) {
    throw std::invalid_argument("system input u and its derivative u_dot must be set");
  }
}

Stepper::Stepper(const LinearSystem& system, const CoefficientSet& coeffs)
    : system_(system), coeffs_(coeffs) {
  system_.validate();
  const Matrix& A = system_.A;
  a2_ = A * A;
  ab_ = A * system_.B;
  const Matrix lhs = Matrix::Identity(A.rows(), A.cols()) - coeffs_.b_now * A -
                     coeffs_.c_now * a2_;
  lu_.compute(lhs);
  if (!lu_.isInvertible()) {
    std::ostringstream os;
    os << "step matrix I - b_now*A - c_now*A^2 is singular for integrator "
       << to_string(coeffs_.kind) << " at h = " << coeffs_.h;
    throw SingularStepMatrixError(os.str());
  }
}

Vector Stepper::step(const Vector& x_prev, double t_prev) const {
  const Matrix& A = system_.A;
  const Matrix& B = system_.B;
  const CoefficientSet& c = coeffs_;
  const double t = t_prev + c.h;

  const Vector u_prev = system_.u(t_prev);
  const Vector u_now = system_.u(t);

  Vector rhs = c.a_prev * x_prev;
  if (c.b_prev != 0.0 || c.c_prev != 0.0) {
    const Vector du_prev = system_.u_dot(t_prev);
    const Vector bu_prev = B * u_prev;
    rhs += c.b_prev * (A * x_prev + bu_prev);
    rhs += c.c_prev * (a2_ * x_prev + ab_ * u_prev + B * du_prev);
  }
  rhs += c.b_now * (B * u_now);
  if (c.c_now != 0.0) {
    rhs += c.c_now * (ab_ * u_now + B * system_.u_dot(t));
  }
  return lu_.solve(rhs);
}

Vector step(const LinearSystem& system, const CoefficientSet& coeffs,
            const Vector& x_prev, double t_prev) {
  return Stepper(system, coeffs).step(x_prev, t_prev);
}

void SwitchPolicy::validate() const {
  if (startup_kind != IntegratorKind::B && startup_kind != IntegratorKind::D) {
    throw std::invalid_argument("switch policy startup integrator must be B or D");
  }
  if (main_kind != IntegratorKind::A && main_kind != IntegratorKind::C) {
    throw std::invalid_argument("switch policy main integrator must be A or C");
  }
  if (startup_steps <= 0) {
    throw std::invalid_argument("switch policy needs a positive startup_steps");
  }
}

std::size_t step_count(double h, double t_end) {
  const double ratio = t_end / h;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::floor(ratio));
}

Trace simulate(const LinearSystem& system, IntegratorKind kind,
               double omega_select, double h, double t_end, const Vector& x0,
               const std::optional<SwitchPolicy>& policy) {
  system.validate();
  if (x0.size() != system.n()) {
    throw std::invalid_argument("initial state size does not match system order");
  }
  if (!std::isfinite(t_end) || !(t_end >= h)) {
    throw std::invalid_argument("simulation needs t_end >= h");
  }
  if (policy) {
    policy->validate();
    if (policy->main_kind != kind) {
      throw std::invalid_argument("switch policy main integrator differs from the requested kind");
    }
  }

  const Stepper main_stepper(system, build_coefficients(kind, omega_select, h));
  std::optional<Stepper> startup_stepper;
  if (policy) {
    startup_stepper.emplace(system,
                            build_coefficients(policy->startup_kind, omega_select, h));
  }

  const std::size_t steps = step_count(h, t_end);
  Trace trace;
  trace.t0 = 0.0;
  trace.h = h;
  trace.values.reserve(steps + 1);
  trace.values.push_back(x0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const bool startup =
        startup_stepper && k <= static_cast<std::size_t>(policy->startup_steps);
    const Stepper& stepper = startup ? *startup_stepper : main_stepper;
    trace.values.push_back(stepper.step(trace.values.back(), trace.time(k - 1)));
  }
  return trace;
}

TestCaseParams TestCaseParams::case1() {
  TestCaseParams p;
  p.x0 = -p.a * p.b / (p.omega_syn * p.omega_syn + p.a * p.a);
  return p;
}

TestCaseParams TestCaseParams::case2() {
  TestCaseParams p;
  p.x0 = 2.0;
  return p;
}

TestCaseParams TestCaseParams::for_case(int case_id) {
  if (case_id == 1) return case1();
  if (case_id == 2) return case2();
  throw std::invalid_argument("case id must be 1 or 2 (got " +
                              std::to_string(case_id) + ")");
}

double analytic_case_solution(const TestCaseParams& p, double t) {
  const double w = p.omega_syn;
  const double den = w * w + p.a * p.a;
  return (p.x0 + p.a * p.b / den) * std::exp(p.a * t) +
         p.b * (w / den * std::sin(w * t) - p.a / den * std::cos(w * t));
}

LinearSystem scalar_test_system(const TestCaseParams& p) {
  LinearSystem sys;
  sys.A = Matrix::Constant(1, 1, p.a);
  sys.B = Matrix::Constant(1, 1, p.b);
  const double w = p.omega_syn;
  sys.u = [w](double t) { return Vector::Constant(1, std::cos(w * t)); };
  sys.u_dot = [w](double t) { return Vector::Constant(1, -w * std::sin(w * t)); };
  return sys;
}

Trace analytic_trace(const TestCaseParams& p, double h, std::size_t samples) {
  Trace trace;
  trace.t0 = 0.0;
  trace.h = h;
  trace.values.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    trace.values.push_back(Vector::Constant(1, analytic_case_solution(p, trace.time(k))));
  }
  return trace;
}

double error_percent(const Trace& num, const Trace& ref) {
  if (num.t0 != ref.t0 || num.h != ref.h || num.size() != ref.size() ||
      num.values.empty()) {
    throw std::invalid_argument("traces must share t0, h and length");
  }
  double diff2 = 0.0;
  double ref2 = 0.0;
  for (std::size_t k = 0; k < num.size(); ++k) {
    if (num.values[k].size() != ref.values[k].size()) {
      throw std::invalid_argument("trace state sizes differ");
    }
    diff2 += (num.values[k] - ref.values[k]).squaredNorm();
    ref2 += ref.values[k].squaredNorm();
  }
  if (ref2 == 0.0) throw std::invalid_argument("reference trace has zero norm");
  return 100.0 * std::sqrt(diff2) / std::sqrt(ref2);
}

double run_case(int case_id, IntegratorKind kind, double h) {
  const TestCaseParams params = TestCaseParams::for_case(case_id);
  const Trace num = simulate(scalar_test_system(params), kind, params.omega_syn,
                             h, 1.0, Vector::Constant(1, params.x0));
  return error_percent(num, analytic_trace(params, h, num.size()));
}

CaseTable run_case_table(int case_id, unsigned workers) {
  TestCaseParams::for_case(case_id);  // validates the id up front

  CaseTable table;
  table.case_id = case_id;
  table.step_us.assign(kTableStepsUs.begin(), kTableStepsUs.end());
  table.percent.assign(table.step_us.size(), {});

  const std::size_t cells = table.step_us.size() * kAllKinds.size();
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t cell = next++; cell < cells; cell = next++) {
      const std::size_t row = cell / kAllKinds.size();
      const std::size_t col = cell % kAllKinds.size();
      table.percent[row][col] =
          run_case(case_id, kAllKinds[col], table.step_us[row] * 1e-6);
    }
  };

  const unsigned n_workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(cells));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }
  return table;
}

Signal finite_diff_input_derivative(Signal u, FdScheme scheme, double h_fd) {
  if (!(h_fd > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (scheme == FdScheme::backward) {
    return [u = std::move(u), h_fd](double t) -> Vector {
      return (u(t) - u(t - h_fd)) / h_fd;
    };
  }
  return [u = std::move(u), h_fd](double t) -> Vector {
    return (u(t + h_fd) - u(t - h_fd)) / (2.0 * h_fd);
  };
}

}  // namespace freqint

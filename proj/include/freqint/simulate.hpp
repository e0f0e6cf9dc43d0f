#pragma once

// Fixed-step simulation of linear systems x' = A x + B u(t) with any
// integrator in the catalog. The second derivative comes from the system
// itself, x'' = A^2 x + A B u + B u', so every step needs u and u' at both
// ends of the interval.

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "freqint/integrators.hpp"

namespace freqint {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Signal = std::function<Vector(double)>;

struct LinearSystem {
  Matrix A;  // n x n
  Matrix B;  // n x m
  Signal u;
  Signal u_dot;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }

  /// Checks shapes (square A, matching B rows, callable signals).
  void validate() const;
};

/// Step matrix I - b_now*A - c_now*A^2 cannot be inverted.
class SingularStepMatrixError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One integrator bound to (a copy of) one system. The step matrix is
/// factored once at construction and reused for every step.
class Stepper {
 public:
  Stepper(const LinearSystem& system, const CoefficientSet& coeffs);

  Vector step(const Vector& x_prev, double t_prev) const;

  const CoefficientSet& coefficients() const { return coeffs_; }

 private:
  LinearSystem system_;
  CoefficientSet coeffs_;
  Matrix a2_;  // A^2
  Matrix ab_;  // A*B
  Eigen::FullPivLU<Matrix> lu_;
};

/// Single step that factors the step matrix on every call.
Vector step(const LinearSystem& system, const CoefficientSet& coeffs,
            const Vector& x_prev, double t_prev);

struct Trace {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<Vector> values;  // state at t0 + k*h

  double time(std::size_t k) const { return t0 + static_cast<double>(k) * h; }
  std::size_t size() const { return values.size(); }
};

/// Run the first `startup_steps` steps with a discontinuity-safe integrator
/// (B or D), then hand over to the accurate main integrator (A or C).
struct SwitchPolicy {
  IntegratorKind startup_kind = IntegratorKind::B;
  IntegratorKind main_kind = IntegratorKind::A;
  int startup_steps = 5;

  void validate() const;
};

/// Number of steps taken for a march from 0 to t_end: floor(t_end/h), with a
/// relative guard so that t_end = N*h computed in floating point gives N.
std::size_t step_count(double h, double t_end);

/// Fixed-step march from t = 0 to the last k*h <= t_end. The trace holds x0
/// plus one sample per step. With a policy, `kind` must equal its main_kind.
Trace simulate(const LinearSystem& system, IntegratorKind kind,
               double omega_select, double h, double t_end, const Vector& x0,
               const std::optional<SwitchPolicy>& policy = std::nullopt);

/// Scalar test system x' = a x + b cos(omega_syn t).
struct TestCaseParams {
  double a = -5.0;
  double b = 300.0;
  double omega_syn = 120.0 * std::numbers::pi;
  double x0 = 0.0;

  /// x0 chosen so the system starts in sinusoidal steady state.
  static TestCaseParams case1();
  /// x0 = 2: an initial transient decaying at rate a.
  static TestCaseParams case2();
  static TestCaseParams for_case(int case_id);
};

/// Closed-form solution of the scalar test system.
double analytic_case_solution(const TestCaseParams& params, double t);

/// Analytic u = cos(omega_syn t), u' = -omega_syn sin(omega_syn t).
LinearSystem scalar_test_system(const TestCaseParams& params);

Trace analytic_trace(const TestCaseParams& params, double h, std::size_t samples);

/// 100 * ||num - ref||_2 / ||ref||_2 over every sample, t = 0 included.
/// Throws std::invalid_argument on mismatched sampling or a zero reference.
double error_percent(const Trace& numerical, const Trace& reference);

/// Percent error of `kind` on test case 1 or 2, simulated to 1 s with
/// omega_select = omega_syn.
double run_case(int case_id, IntegratorKind kind, double h);

inline constexpr std::array<double, 6> kTableStepsUs{125, 250, 500, 1000, 2000, 4000};

struct CaseTable {
  int case_id = 0;
  std::vector<double> step_us;
  /// percent[row][col], rows follow step_us, columns follow kAllKinds.
  std::vector<std::array<double, 6>> percent;
};

/// All 36 cells of a benchmark table. Cells are independent simulations run
/// on up to `workers` threads; the result does not depend on `workers`.
CaseTable run_case_table(int case_id, unsigned workers = 1);

enum class FdScheme { backward, central };

/// Wraps u into a numerical derivative. The backward scheme only reads
/// u(t) and u(t - h_fd).
Signal finite_diff_input_derivative(Signal u, FdScheme scheme, double h_fd);

}  // namespace freqint

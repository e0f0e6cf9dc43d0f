#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "benchmark_tables.hpp"
#include "freqint/simulate.hpp"
#include "freqint/stability.hpp"
#include "oracles.hpp"

using namespace freqint;

namespace {

constexpr double kOmega60 = 120.0 * std::numbers::pi;

LinearSystem free_scalar(double lambda) {
  LinearSystem sys;
  sys.A = Matrix::Constant(1, 1, lambda);
  sys.B = Matrix::Zero(1, 1);
  sys.u = [](double) { return Vector::Zero(1); };
  sys.u_dot = sys.u;
  return sys;
}

TestCaseParams stiff_case2() {
  TestCaseParams p = TestCaseParams::case2();
  p.a = -5000.0;
  return p;
}

double percent_for(const TestCaseParams& p, IntegratorKind kind, double h,
                   const std::optional<SwitchPolicy>& policy = std::nullopt) {
  const Trace num = simulate(scalar_test_system(p), kind, p.omega_syn, h, 1.0,
                             Vector::Constant(1, p.x0), policy);
  return error_percent(num, analytic_trace(p, h, num.size()));
}

}  // namespace

TEST_CASE("scalar zero-input steps follow powers of g") {
  for (auto kind : kAllKinds) {
    const auto c = build_coefficients(kind, kOmega60, 1e-3);
    for (double lambda : {-3.0, -700.0, -2.5e4}) {
      const double g = amplification(c, Complex{lambda, 0.0}).real();
      const Trace tr = simulate(free_scalar(lambda), kind, kOmega60, c.h, 40 * c.h,
                                Vector::Constant(1, 1.25));
      REQUIRE(tr.size() == 41);
      CHECK(tr.values[1](0) == doctest::Approx(g * 1.25).epsilon(1e-13));
      for (std::size_t n = 1; n < tr.size(); ++n) {
        const double expect = std::pow(g, static_cast<double>(n)) * 1.25;
        CHECK(tr.values[n](0) == doctest::Approx(expect).epsilon(1e-12 * n));
      }
    }
  }
}

TEST_CASE("A reproduces the steady state in one large step") {
  const auto p = TestCaseParams::case1();
  const double h = 2e-3;
  const auto c = build_coefficients(IntegratorKind::A, p.omega_syn, h);
  const double got = step(scalar_test_system(p), c, Vector::Constant(1, p.x0), 0.0)(0);
  const double expect = analytic_case_solution(p, h);
  CHECK(std::abs(got - expect) < 1e-9 * std::abs(expect));
}

TEST_CASE("zero system keeps its state") {
  LinearSystem sys;
  sys.A = Matrix::Zero(2, 2);
  sys.B = Matrix::Zero(2, 1);
  sys.u = [](double t) { return Vector::Constant(1, std::sin(t)); };
  sys.u_dot = [](double t) { return Vector::Constant(1, std::cos(t)); };
  Vector x0(2);
  x0 << 0.3, -4.0;
  for (auto kind : kAllKinds) {
    const auto c = build_coefficients(kind, kOmega60, 1e-3);
    CHECK(step(sys, c, x0, 0.7) == x0);
  }
}

TEST_CASE("trace sampling") {
  const auto sys = free_scalar(-1.0);
  const Trace one = simulate(sys, IntegratorKind::C, kOmega60, 0.01, 0.01, Vector::Ones(1));
  CHECK(one.size() == 2);
  CHECK(one.values[0](0) == 1.0);
  CHECK(one.time(1) == 0.01);

  CHECK(step_count(1e-3, 1.0) == 1000);
  CHECK(step_count(125e-6, 1.0) == 8000);
  CHECK(step_count(0.3, 1.0) == 3);
  CHECK(step_count(0.1, 0.3) == 3);  // 0.3/0.1 is 2.9999999999999996
  const Trace partial = simulate(sys, IntegratorKind::BE, kOmega60, 0.3, 1.0, Vector::Ones(1));
  CHECK(partial.size() == 4);

  CHECK_THROWS_AS(simulate(sys, IntegratorKind::C, kOmega60, 0.1, 0.05, Vector::Ones(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate(sys, IntegratorKind::C, kOmega60, 0.1, 1.0, Vector::Ones(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate(sys, IntegratorKind::B, kOmega60, 0.01, 1.0, Vector::Ones(1)),
                  StepSizeError);
}

TEST_CASE("system validation") {
  LinearSystem sys = free_scalar(-1.0);
  sys.B = Matrix::Zero(2, 1);
  CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
  sys = free_scalar(-1.0);
  sys.A = Matrix::Zero(1, 2);
  CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
  sys = free_scalar(-1.0);
  sys.u_dot = nullptr;
  CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
}

TEST_CASE("singular step matrix") {
  // BE: I - h*A vanishes for A = 1/h
  const auto c = build_coefficients(IntegratorKind::BE, kOmega60, 0.5);
  CHECK_THROWS_AS(Stepper(free_scalar(2.0), c), SingularStepMatrixError);
  CHECK_THROWS_AS(step(free_scalar(2.0), c, Vector::Ones(1), 0.0), SingularStepMatrixError);
}

TEST_CASE("analytic solution") {
  for (int id : {1, 2}) {
    const auto p = TestCaseParams::for_case(id);
    CHECK(analytic_case_solution(p, 0.0) == doctest::Approx(p.x0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(TestCaseParams::for_case(3), std::invalid_argument);

  // case 1 is a pure sinusoid: the value repeats every period
  const auto p1 = TestCaseParams::case1();
  const double period = 2.0 * std::numbers::pi / p1.omega_syn;
  for (double t : {0.0, 0.0031, 0.2, 0.77}) {
    CHECK(analytic_case_solution(p1, t + 5.0 * period) ==
          doctest::Approx(analytic_case_solution(p1, t)).epsilon(1e-9));
  }
  // case 2 settles onto it
  const auto p2 = TestCaseParams::case2();
  CHECK(std::abs(analytic_case_solution(p2, 0.0) - analytic_case_solution(p1, 0.0)) > 1.0);
  CHECK(std::abs(analytic_case_solution(p2, 5.0) - analytic_case_solution(p1, 5.0)) < 1e-10);
  const double d1 = analytic_case_solution(p2, 0.2) - analytic_case_solution(p1, 0.2);
  const double d2 = analytic_case_solution(p2, 0.4) - analytic_case_solution(p1, 0.4);
  CHECK(d2 / d1 == doctest::Approx(std::exp(-5.0 * 0.2)).epsilon(1e-9));
}

TEST_CASE("error metric") {
  const auto p = TestCaseParams::case2();
  const Trace ref = analytic_trace(p, 1e-3, 50);
  CHECK(error_percent(ref, ref) == 0.0);

  Trace scaled = ref;
  for (auto& v : scaled.values) v *= 1.01;
  CHECK(error_percent(scaled, ref) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(error_percent(analytic_trace(p, 1e-3, 49), ref), std::invalid_argument);
  CHECK_THROWS_AS(error_percent(analytic_trace(p, 2e-3, 50), ref), std::invalid_argument);
  Trace zero = ref;
  for (auto& v : zero.values) v.setZero();
  CHECK_THROWS_AS(error_percent(ref, zero), std::invalid_argument);
}

TEST_CASE("benchmark spot values") {
  CHECK(bench::matches(run_case(1, IntegratorKind::BE, 125e-6), 2.5803));
  CHECK(bench::matches(run_case(1, IntegratorKind::D, 1000e-6), 2.3723));
  CHECK(bench::matches(run_case(1, IntegratorKind::C, 4000e-6), 0.7593));
  CHECK(run_case(1, IntegratorKind::B, 4000e-6) < bench::kZeroBound);
  CHECK(bench::matches(run_case(2, IntegratorKind::B, 2000e-6), 5.1240));
  CHECK(bench::matches(run_case(2, IntegratorKind::TR, 4000e-6), 13.0036));
  CHECK(run_case(2, IntegratorKind::A, 4000e-6) <= 2e-4);
  for (double us : kTableStepsUs) CHECK(run_case(1, IntegratorKind::A, us * 1e-6) < 5e-5);
}

TEST_CASE("case table does not depend on the worker count") {
  const CaseTable serial = run_case_table(2, 1);
  const CaseTable parallel = run_case_table(2, 7);
  CHECK(serial.case_id == 2);
  CHECK(serial.step_us == parallel.step_us);
  CHECK(serial.percent == parallel.percent);
  CHECK_THROWS_AS(run_case_table(0), std::invalid_argument);
}

TEST_CASE("TR rings on a stiff pole") {
  const auto p = stiff_case2();
  const double h = 2e-3;
  const Trace num = simulate(scalar_test_system(p), IntegratorKind::TR, p.omega_syn, h, 0.05,
                             Vector::Constant(1, p.x0));
  const Trace ref = analytic_trace(p, h, num.size());
  for (std::size_t k = 1; k + 1 < 10; ++k) {
    const double e0 = num.values[k](0) - ref.values[k](0);
    const double e1 = num.values[k + 1](0) - ref.values[k + 1](0);
    CHECK(e0 * e1 < 0.0);
  }
  for (auto kind : {IntegratorKind::B, IntegratorKind::D}) {
    const Trace other = simulate(scalar_test_system(p), kind, p.omega_syn, h, 0.05,
                                 Vector::Constant(1, p.x0));
    CHECK(std::abs(other.values[3](0) - ref.values[3](0)) <
          std::abs(num.values[3](0) - ref.values[3](0)));
  }
}

TEST_CASE("startup with B damps the stiff transient for A") {
  const auto p = stiff_case2();
  const double h = 2e-3;
  const double pure = percent_for(p, IntegratorKind::A, h);
  const double switched = percent_for(p, IntegratorKind::A, h, SwitchPolicy{});
  CHECK(switched <= pure);
  CHECK(switched < 0.1 * pure);

  const double pure_c = percent_for(p, IntegratorKind::C, h);
  const double switched_c =
      percent_for(p, IntegratorKind::C, h, SwitchPolicy{IntegratorKind::D, IntegratorKind::C, 5});
  CHECK(switched_c <= pure_c);
}

TEST_CASE("switch policy validation") {
  const auto p = TestCaseParams::case2();
  const auto sys = scalar_test_system(p);
  const Vector x0 = Vector::Constant(1, p.x0);
  CHECK_THROWS_AS(simulate(sys, IntegratorKind::C, kOmega60, 1e-3, 1.0, x0, SwitchPolicy{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SwitchPolicy({IntegratorKind::TR, IntegratorKind::A, 5}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(SwitchPolicy({IntegratorKind::B, IntegratorKind::BE, 5}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(SwitchPolicy({IntegratorKind::B, IntegratorKind::A, 0}).validate(),
                  std::invalid_argument);

  // the startup kind is used exactly for the first startup_steps steps
  const SwitchPolicy policy{IntegratorKind::D, IntegratorKind::A, 3};
  const Trace mixed = simulate(sys, IntegratorKind::A, kOmega60, 1e-3, 0.01, x0, policy);
  const auto d = build_coefficients(IntegratorKind::D, kOmega60, 1e-3);
  const auto a = build_coefficients(IntegratorKind::A, kOmega60, 1e-3);
  Vector x = x0;
  for (int k = 0; k < 10; ++k) {
    x = step(sys, k < 3 ? d : a, x, k * 1e-3);
    CHECK(mixed.values[k + 1] == x);
  }
}

TEST_CASE("factorization reuse is bit-identical to refactoring") {
  std::mt19937_64 rng(oracle::kSeed);
  std::normal_distribution<double> normal;
  Matrix m(4, 4);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = normal(rng);
  Matrix skew(4, 4);
  for (Eigen::Index i = 0; i < skew.size(); ++i) skew(i) = normal(rng);
  LinearSystem sys;
  sys.A = -(m * m.transpose() + Matrix::Identity(4, 4)) * 50.0 + (skew - skew.transpose()) * 100.0;
  sys.B = Matrix(4, 2);
  for (Eigen::Index i = 0; i < sys.B.size(); ++i) sys.B(i) = normal(rng);
  sys.u = [](double t) {
    Vector v(2);
    v << std::cos(kOmega60 * t), 1.0;
    return v;
  };
  sys.u_dot = [](double t) {
    Vector v(2);
    v << -kOmega60 * std::sin(kOmega60 * t), 0.0;
    return v;
  };
  REQUIRE((sys.A.eigenvalues().real().array() < 0.0).all());

  Vector x0(4);
  x0 << 1.0, -2.0, 0.5, 3.0;
  for (auto kind : kAllKinds) {
    const double h = 5e-4;
    const Trace fast = simulate(sys, kind, kOmega60, h, 0.05, x0);
    const auto c = build_coefficients(kind, kOmega60, h);
    Vector x = x0;
    for (std::size_t k = 1; k < fast.size(); ++k) {
      x = step(sys, c, x, fast.time(k - 1));
      CHECK(fast.values[k] == x);
    }
  }
}

TEST_CASE("finite-difference input derivative") {
  const Signal constant = [](double) { return Vector::Constant(2, 4.2); };
  for (auto scheme : {FdScheme::backward, FdScheme::central}) {
    const Signal du = finite_diff_input_derivative(constant, scheme, 1e-3);
    CHECK(du(0.37) == Vector::Zero(2));
  }

  const Signal u = [](double t) { return Vector::Constant(1, std::cos(kOmega60 * t)); };
  const double t = 1e-3;
  const double exact = -kOmega60 * std::sin(kOmega60 * t);
  const double central = finite_diff_input_derivative(u, FdScheme::central, 1e-6)(t)(0);
  CHECK(std::abs(central - exact) <= 1e-6 * std::abs(exact));

  // the backward scheme never looks ahead of t
  double latest = -1.0;
  const Signal probe = [&latest](double s) {
    latest = std::max(latest, s);
    return Vector::Zero(1);
  };
  finite_diff_input_derivative(probe, FdScheme::backward, 1e-3)(0.5);
  CHECK(latest == 0.5);

  CHECK_THROWS_AS(finite_diff_input_derivative(u, FdScheme::central, 0.0), std::invalid_argument);
}

TEST_CASE("a numerical input derivative spoils the exactness of A") {
  const auto p = TestCaseParams::case1();
  const double h = 2e-3;
  LinearSystem sys = scalar_test_system(p);
  sys.u_dot = finite_diff_input_derivative(sys.u, FdScheme::backward, h);
  const Trace num = simulate(sys, IntegratorKind::A, p.omega_syn, h, 1.0, Vector::Constant(1, p.x0));
  CHECK(error_percent(num, analytic_trace(p, h, num.size())) >= 5e-5);
  CHECK(run_case(1, IntegratorKind::A, h) < 5e-5);
}

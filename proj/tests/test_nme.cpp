#include <doctest.h>

#include <cmath>
#include <vector>

#include "semiflow/core.hpp"
#include "semiflow/instances.hpp"
#include "semiflow/nme.hpp"

using namespace semiflow;

namespace {

nme::State scalar_state(Complex a, Complex b, Complex p, Complex q) {
  auto wrap = [](Complex v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return m;
  };
  return {wrap(a), wrap(b), wrap(p), wrap(q)};
}

Matrix scalar_matrix(Complex v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

TEST_SUITE("nme") {

TEST_CASE("operator on scalar states") {
  const auto x = scalar_state(1.0, 1.0, 0.0, 3.0);
  const auto out = nme::nme_operator(x, x);
  CHECK(std::abs(out.A(0, 0) - Complex{1.0 / 3.0}) < 1e-15);
  CHECK(std::abs(out.B(0, 0) - Complex{1.0 / 3.0}) < 1e-15);
  CHECK(std::abs(out.P(0, 0) - Complex{1.0 / 3.0}) < 1e-15);
  CHECK(std::abs(out.Q(0, 0) - Complex{8.0 / 3.0}) < 1e-15);
}

TEST_CASE("zero A decouples the Q component") {
  const auto xa = scalar_state(0.0, 0.5, 0.0, 2.0);
  const auto xb = scalar_state(0.0, 0.7, 0.1, 3.0);
  const auto out = nme::nme_operator(xa, xb);
  CHECK(out.A.norm() == 0.0);
  CHECK(std::abs(out.Q(0, 0) - xb.Q(0, 0)) < 1e-15);
}

TEST_CASE("associativity on diagonally dominant 4x4 triples") {
  Rng rng(109);
  nme::Operator op(random_nme_state(4, rng));
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const auto x = random_nme_state(4, rng, 0.2);
    const auto y = random_nme_state(4, rng, 0.2);
    const auto z = random_nme_state(4, rng, 0.2);
    worst = std::max(worst, check_associativity(op, x, y, z));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("scalar golden solve") {
  SolverConfig cfg;
  cfg.tol = 1e-13;
  cfg.mode = IterationMode::Plain;
  cfg.max_outer = 100;
  const auto [x, report] =
      nme::solve(scalar_matrix(3.0), scalar_matrix(1.0), scalar_matrix(1.0),
                 cfg);
  CHECK(report.status == SolveStatus::Converged);
  const double golden = 0.5 * (3.0 + std::sqrt(5.0));
  CHECK(std::abs(x(0, 0) - golden) <= 1e-12);

  cfg.mode = IterationMode::Accelerated;
  cfg.order = 2;
  const auto [xa, report_a] =
      nme::solve(scalar_matrix(3.0), scalar_matrix(1.0), scalar_matrix(1.0),
                 cfg);
  CHECK(report_a.status == SolveStatus::Converged);
  CHECK(std::abs(xa(0, 0) - golden) <= 1e-12);
  CHECK(report_a.steps() < report.steps());
}

TEST_CASE("zero A returns Q immediately") {
  Rng rng(113);
  const Matrix q = random_matrix(3, 3, rng) + 3.0 * identity(3);
  SolverConfig cfg;
  const auto [x, report] =
      nme::solve(q, Matrix::Zero(3, 3), random_matrix(3, 3, rng), cfg);
  CHECK(report.status == SolveStatus::Converged);
  CHECK(report.residuals.size() == 1);
  CHECK((x - q).norm() == 0.0);
}

TEST_CASE("zero B returns Q") {
  SolverConfig cfg;
  const auto [x, report] = nme::solve(scalar_matrix(2.0), scalar_matrix(1.0),
                                      scalar_matrix(0.0), cfg);
  CHECK(report.status == SolveStatus::Converged);
  CHECK(std::abs(x(0, 0) - Complex{2.0}) < 1e-15);
}

TEST_CASE("singular Q is a precondition error") {
  SolverConfig cfg;
  CHECK_THROWS_AS(nme::solve(scalar_matrix(0.0), scalar_matrix(1.0),
                             scalar_matrix(1.0), cfg),
                  PreconditionError);
}

TEST_CASE("a singular accepted iterate raises SingularIterateError") {
  // Q = A = B = 1: the first step lands on Q_2 = 1 - 1/1 = 0, which cannot
  // be inverted by the residual check.
  SolverConfig cfg;
  cfg.mode = IterationMode::Plain;
  CHECK_THROWS_AS(nme::solve(scalar_matrix(1.0), scalar_matrix(1.0),
                             scalar_matrix(1.0), cfg),
                  SingularIterateError);
}

TEST_CASE("lemma identities on scalar triples") {
  Rng rng(127);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto draw = [&] {
      return scalar_state(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), 0.0,
                          rng.uniform(2.0, 4.0));
    };
    const auto errors = nme::lemma_identity_errors(draw(), draw(), draw());
    for (double e : errors) worst = std::max(worst, e);
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("lemma identities under self-composition") {
  const auto x = scalar_state(0.4, -0.7, 0.0, 2.5);
  const auto errors = nme::lemma_identity_errors(x, x, x);
  for (double e : errors) CHECK(e <= 1e-13);
}

TEST_CASE("lemma identities at matrix scale") {
  Rng rng(131);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto xa = random_nme_state(6, rng, 0.2);
    const auto xb = random_nme_state(6, rng, 0.2);
    const auto xc = random_nme_state(6, rng, 0.2);
    const auto errors = nme::lemma_identity_errors(xa, xb, xc);
    for (double e : errors) worst = std::max(worst, e);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("composite map consistency on a constructed instance") {
  Rng rng(137);
  const auto instance = constructed_nme_instance(5, rng);
  nme::State state{instance.a, instance.b,
                   Matrix::Zero(5, 5), instance.q};
  nme::Operator op(state);
  // After k steps the composite map still reproduces the exact solution:
  // Q_{k+1} - A_{k+1} (X - P_{k+1})^{-1} B_{k+1} = X.
  auto current = state;
  for (int k = 0; k < 6; ++k) {
    current = op.apply(current, state);
    const Matrix reconstructed =
        current.Q -
        current.A *
            lu_factor(instance.solution - current.P).solve(current.B);
    CHECK((reconstructed - instance.solution).norm() /
              instance.solution.norm() <=
          1e-9);
  }
}

TEST_CASE("constructed instances are recovered at depth") {
  Rng rng(139);
  const auto instance = constructed_nme_instance(6, rng);
  SolverConfig cfg;
  cfg.tol = 1e-12;
  cfg.mode = IterationMode::Accelerated;
  cfg.order = 2;
  const auto [x, report] = nme::solve(instance.q, instance.a, instance.b, cfg);
  CHECK(report.status == SolveStatus::Converged);
  CHECK(report.final_residual() <= 1e-10);
  (void)x;
}

TEST_CASE("acceleration exactness against plain iterates") {
  Rng rng(149);
  const auto instance = constructed_nme_instance(5, rng);
  nme::State initial{instance.a, instance.b, Matrix::Zero(5, 5), instance.q};
  nme::Operator op(initial);

  std::vector<nme::State> plain{initial};
  auto state = initial;
  for (int k = 1; k < 10; ++k) {
    state = op.apply(state, initial);
    plain.push_back(state);
  }
  SolverConfig cfg;
  cfg.mode = IterationMode::Accelerated;
  cfg.order = 3;
  cfg.tol = 1e-30;
  cfg.max_outer = 2;
  std::vector<nme::State> accel;
  IterateObserver<nme::State> record =
      [&](const nme::State& s, std::int64_t) { accel.push_back(s); };
  accelerated_iterate(op, initial, cfg, record);
  REQUIRE(accel.size() == 3);
  CHECK(state_relative_error(accel[1], plain[2]) <= 1e-9);   // index 3
  CHECK(state_relative_error(accel[2], plain[8]) <= 1e-9);   // index 9
}

}  // TEST_SUITE

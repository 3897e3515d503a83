#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "semiflow/core.hpp"
#include "semiflow/dare.hpp"
#include "semiflow/instances.hpp"

using namespace semiflow;

namespace {

dare::State scalar_state(Complex a, Complex g, Complex h) {
  auto wrap = [](Complex v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return m;
  };
  return {wrap(a), wrap(g), wrap(h)};
}

double min_hermitian_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(m));
  REQUIRE(eig.info() == Eigen::Success);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

TEST_SUITE("dare") {

TEST_CASE("operator on scalar states") {
  const auto x = scalar_state(1.0, 1.0, 1.0);
  const auto out = dare::dare_operator(x, x);
  CHECK(std::abs(out.A(0, 0) - Complex{0.5}) < 1e-15);
  CHECK(std::abs(out.G(0, 0) - Complex{1.5}) < 1e-15);
  CHECK(std::abs(out.H(0, 0) - Complex{1.5}) < 1e-15);
}

TEST_CASE("zero A freezes the H component") {
  Rng rng(151);
  const auto xa = dare::State{Matrix::Zero(3, 3), random_psd(3, rng),
                              random_psd(3, rng)};
  const auto xb = dare::State{Matrix::Zero(3, 3), random_psd(3, rng),
                              random_psd(3, rng)};
  const auto out = dare::dare_operator(xa, xb);
  CHECK(out.A.norm() == 0.0);
  CHECK((out.G - xb.G).norm() <= 1e-15);
  CHECK((out.H - xa.H).norm() <= 1e-15);
}

TEST_CASE("doubling consistency: F(X2, X2) equals plain X4") {
  const auto x1 = scalar_state(1.0, 1.0, 1.0);
  const auto x2 = dare::dare_operator(x1, x1);
  const auto doubled = dare::dare_operator(x2, x2);
  CHECK(std::abs(doubled.A(0, 0) - Complex{1.0 / 13.0}) < 1e-14);
  CHECK(std::abs(doubled.G(0, 0) - Complex{21.0 / 13.0}) < 1e-14);
  CHECK(std::abs(doubled.H(0, 0) - Complex{21.0 / 13.0}) < 1e-14);

  auto plain = x1;
  for (int k = 0; k < 3; ++k) plain = dare::dare_operator(plain, x1);
  CHECK(state_relative_error(doubled, plain) <= 1e-14);
}

TEST_CASE("scalar golden solve") {
  SolverConfig cfg;
  cfg.tol = 1e-13;
  cfg.mode = IterationMode::Accelerated;
  cfg.order = 2;
  Matrix one(1, 1);
  one(0, 0) = 1.0;
  const auto [x, report] = dare::solve(one, one, one, cfg);
  CHECK(report.status == SolveStatus::Converged);
  CHECK(std::abs(x(0, 0) - 0.5 * (1.0 + std::sqrt(5.0))) <= 1e-12);
}

TEST_CASE("zero A converges to H in one row") {
  Rng rng(157);
  const Matrix g = random_psd(4, rng);
  const Matrix h = random_psd(4, rng);
  SolverConfig cfg;
  const auto [x, report] = dare::solve(Matrix::Zero(4, 4), g, h, cfg);
  CHECK(report.status == SolveStatus::Converged);
  CHECK(report.residuals.size() == 1);
  CHECK((x - h).norm() <= 1e-14);
}

TEST_CASE("non-Hermitian inputs are rejected") {
  Rng rng(163);
  const Matrix skew = random_matrix(3, 3, rng);
  SolverConfig cfg;
  CHECK_THROWS_AS(
      dare::solve(random_matrix(3, 3, rng), skew, random_psd(3, rng), cfg),
      PreconditionError);
}

TEST_CASE("random PSD instance: doubling residual and mode agreement") {
  Rng rng(167);
  const Matrix a = random_matrix(10, 10, rng);
  const Matrix g = random_psd(10, rng);
  const Matrix h = random_psd(10, rng);

  SolverConfig accel;
  accel.mode = IterationMode::Accelerated;
  accel.order = 2;
  accel.tol = 1e-12;
  accel.max_outer = 10;
  const auto [x_fast, fast_report] = dare::solve(a, g, h, accel);
  CHECK(fast_report.status == SolveStatus::Converged);
  CHECK(fast_report.final_residual() <= 1e-10);
  CHECK(fast_report.steps() <= 10);

  SolverConfig plain;
  plain.mode = IterationMode::Plain;
  plain.tol = 1e-12;
  plain.max_outer = 2000;
  const auto [x_slow, slow_report] = dare::solve(a, g, h, plain);
  CHECK(slow_report.status == SolveStatus::Converged);
  CHECK(relative_error(x_fast, x_slow) <= 1e-9);
}

TEST_CASE("lemma identities on scalar triples") {
  Rng rng(173);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto draw = [&] {
      return scalar_state(rng.uniform(-1.0, 1.0), rng.uniform(0.1, 2.0),
                          rng.uniform(0.1, 2.0));
    };
    const auto errors = dare::lemma_identity_errors(draw(), draw(), draw());
    for (double e : errors) worst = std::max(worst, e);
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("lemma identities under self-composition") {
  const auto x = scalar_state(0.8, 0.3, 1.2);
  const auto errors = dare::lemma_identity_errors(x, x, x);
  for (double e : errors) CHECK(e <= 1e-13);
}

TEST_CASE("lemma identities at matrix scale") {
  Rng rng(179);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto xa = random_dare_state(6, rng);
    const auto xb = random_dare_state(6, rng);
    const auto xc = random_dare_state(6, rng);
    const auto errors = dare::lemma_identity_errors(xa, xb, xc);
    for (double e : errors) worst = std::max(worst, e);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("raw updates stay Hermitian to measurement precision") {
  Rng rng(181);
  dare::State state{random_matrix(6, 6, rng), random_psd(6, rng),
                    random_psd(6, rng)};
  for (int k = 0; k < 10; ++k) {
    const auto raw = dare::dare_operator_raw(state, state);
    const double g_drift =
        (raw.G - raw.G.adjoint()).norm() / std::max(1.0, raw.G.norm());
    const double h_drift =
        (raw.H - raw.H.adjoint()).norm() / std::max(1.0, raw.H.norm());
    CHECK(g_drift <= 1e-11);
    CHECK(h_drift <= 1e-11);
    state = dare::dare_operator(state, state);  // enforced variant
  }
}

TEST_CASE("H is monotone along the plain iteration for definite data") {
  Rng rng(191);
  dare::State initial{random_matrix(6, 6, rng),
                      random_psd(6, rng) + 0.1 * identity(6),
                      random_psd(6, rng) + 0.1 * identity(6)};
  dare::Operator op(initial);
  auto state = initial;
  for (int k = 0; k < 12; ++k) {
    const auto next = op.apply(state, initial);
    CHECK(min_hermitian_eigenvalue(next.H - state.H) >= -1e-12);
    state = next;
  }
}

TEST_CASE("digit count at least 1.7x per doubling step below 1e-2") {
  Rng rng(193);
  const Matrix a = random_matrix(8, 8, rng);
  const Matrix g = random_psd(8, rng);
  const Matrix h = random_psd(8, rng);
  SolverConfig cfg;
  cfg.mode = IterationMode::Accelerated;
  cfg.order = 2;
  cfg.tol = 1e-11;
  cfg.max_outer = 20;
  const auto [x, report] = dare::solve(a, g, h, cfg);
  (void)x;
  CHECK(report.status == SolveStatus::Converged);
  int pairs = 0;
  for (std::size_t k = 0; k + 1 < report.residuals.size(); ++k) {
    const double current = report.residuals[k];
    const double next = report.residuals[k + 1];
    // Pairs whose later entry saturates at the double-precision floor say
    // nothing about the convergence order.
    if (current >= 1e-2 || next <= 1e-13) continue;
    ++pairs;
    CHECK(-std::log10(next) >= 1.7 * -std::log10(current));
  }
  CHECK(pairs >= 1);
}

}  // TEST_SUITE

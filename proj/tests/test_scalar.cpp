#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "semiflow/check_suites.hpp"
#include "semiflow/core.hpp"
#include "semiflow/instances.hpp"
#include "semiflow/scalar.hpp"
#include "semiflow/stein.hpp"

using namespace semiflow;
using scalar::LinearProblem;
using scalar::PairProblem;
using scalar::RationalProblem;

TEST_SUITE("scalar") {

TEST_CASE("linear coefficient recursion") {
  const auto squared = scalar::linear_accel_step({0.5, 0.0}, {1.0, 0.0}, 2);
  CHECK(std::abs(squared.first - Complex{0.25}) < 1e-15);
  CHECK(std::abs(squared.second - Complex{1.5}) < 1e-15);

  const auto cubed = scalar::linear_accel_step({0.5, 0.0}, {1.0, 0.0}, 3);
  CHECK(std::abs(cubed.first - Complex{0.125}) < 1e-15);
  CHECK(std::abs(cubed.second - Complex{1.75}) < 1e-15);

  const auto fixed = scalar::linear_accel_step({0.0, 0.0}, {3.0, 0.5}, 4);
  CHECK(fixed.first == Complex{0.0, 0.0});
  CHECK(std::abs(fixed.second - Complex{3.0, 0.5}) < 1e-15);

  CHECK_THROWS_AS(scalar::linear_accel_step({1.0, 0.0}, {1.0, 0.0}, 2),
                  DegenerateCoefficientError);
}

TEST_CASE("accelerated linear sequence for r = 2 hits the plain subsequence") {
  const LinearProblem prob{{0.5, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
  const auto seq = scalar::linear_accel_sequence(prob, 2, 4);
  REQUIRE(seq.size() == 4);
  CHECK(std::abs(seq[0] - Complex{0.0}) <= 1e-13);
  CHECK(std::abs(seq[1] - Complex{1.0}) <= 1e-13);
  CHECK(std::abs(seq[2] - Complex{1.75}) <= 1e-13);
  CHECK(std::abs(seq[3] - Complex{1.984375}) <= 1e-13);
}

TEST_CASE("accelerated linear sequence for r = 3") {
  const LinearProblem prob{{0.5, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
  const auto seq = scalar::linear_accel_sequence(prob, 3, 3);
  REQUIRE(seq.size() == 3);
  CHECK(std::abs(seq[1] - Complex{1.5}) <= 1e-13);   // plain x3
  CHECK(std::abs(seq[2] - Complex{1.9921875}) <= 1e-13);  // plain x9
}

TEST_CASE("exact accelerated error under the index pairing xhat_k = x_(r^(k-1))") {
  const LinearProblem prob{{0.5, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
  CHECK(scalar::linear_exact_error(prob, 2, 1) == doctest::Approx(2.0));
  // k = 3 pairs with plain x4 = 1.75, so the error is 0.5^3 * 2 = 0.25.
  CHECK(scalar::linear_exact_error(prob, 2, 3) == doctest::Approx(0.25));
  const auto seq = scalar::linear_accel_sequence(prob, 2, 4);
  for (int k = 1; k <= 4; ++k) {
    CHECK(std::abs(seq[k - 1] - prob.fixed_point()) ==
          doctest::Approx(scalar::linear_exact_error(prob, 2, k)));
  }

  const LinearProblem degenerate{{0.0, 0.0}, {2.0, 0.0}, {2.0, 0.0}};
  CHECK(scalar::linear_exact_error(degenerate, 3, 1) == 0.0);
  CHECK(scalar::linear_exact_error(degenerate, 3, 4) == 0.0);
}

// Measured on the coefficient recursion itself: the quotient ratio
// |xhat_{k+1} - x*| / |xhat_k - x*|^r settles at (|a| / |x1 - x*|)^(r-1),
// which is 0.25 for a = 0.5, b = 1, x1 = 0, r = 2.
TEST_CASE("linear q-ratio limit of the recursion sequence") {
  const LinearProblem prob{{0.5, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
  const auto seq = scalar::linear_accel_sequence(prob, 2, 6);
  const Complex star = prob.fixed_point();
  // Beyond k = 5 the error 2 * 0.5^(2^k - 1) drops below the spacing of
  // doubles around the fixed point and the measured ratio collapses to 0.
  for (int k = 3; k <= 5; ++k) {
    const double ratio =
        std::abs(seq[k] - star) / std::pow(std::abs(seq[k - 1] - star), 2.0);
    CHECK(ratio == doctest::Approx(0.25).epsilon(1e-6));
  }
}

// The asserted constant |a|^(r^2-r) / |x1 - x*|^(r-1) = 0.125 describes a
// different index pairing than the recursion produces; the measured limit is
// 0.25 (previous test). Kept as an expected failure to document the gap.
TEST_CASE("linear q-ratio against the closed-form constant" *
          doctest::should_fail()) {
  const LinearProblem prob{{0.5, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
  const auto seq = scalar::linear_accel_sequence(prob, 2, 7);
  const Complex star = prob.fixed_point();
  const double claimed = std::pow(0.5, 2) / std::abs(prob.x1 - star);
  const double ratio =
      std::abs(seq[6] - star) / std::pow(std::abs(seq[5] - star), 2.0);
  CHECK(std::abs(ratio - claimed) <= 0.01 * claimed);
}

TEST_CASE("rational closed form h_r") {
  CHECK(std::abs(scalar::rational_h({3.0, 0.0}, {2.0, 0.0}, 2) -
                 Complex{2.25}) < 1e-15);
  CHECK(std::abs(scalar::rational_h({3.0, 0.0}, {0.0, 0.0}, 3) -
                 Complex{1.0}) < 1e-15);
  CHECK(std::abs(scalar::rational_h({2.25, 0.0}, {2.0, 0.0}, 2) -
                 Complex{2.025}) < 1e-15);
}

TEST_CASE("rational breakdown set") {
  // x = 1, a = 2: x^2 = (x - a)^2 = 1.
  CHECK_THROWS_AS(scalar::rational_h({1.0, 0.0}, {2.0, 0.0}, 2),
                  BreakdownError);
}

TEST_CASE("rational closed form tracks the accelerated sequence") {
  const RationalProblem prob{{2.0, 0.0}, {3.0, 0.0}};
  const auto seq = scalar::rational_accel_sequence(prob, 2, 3);
  CHECK(std::abs(seq[0] - Complex{3.0}) < 1e-15);
  CHECK(std::abs(seq[1] - Complex{2.25}) < 1e-15);
  CHECK(std::abs(seq[2] - Complex{2.025}) < 1e-15);
  for (int k = 1; k <= 3; ++k) {
    const Complex closed =
        scalar::rational_accel_closed_form(prob.b, prob.a, 2, k);
    CHECK(std::abs(closed - seq[k - 1]) <= 1e-12);
  }
}

TEST_CASE("pair closed form H_r") {
  const auto first = scalar::pair_H({1.0, 0.0}, {2.0, 0.0}, 2);
  CHECK(std::abs(first.first - Complex{1.0 / 3.0}) < 1e-15);
  CHECK(std::abs(first.second - Complex{4.0 / 3.0}) < 1e-15);

  const Complex c{0.7, 0.1};
  const auto equal = scalar::pair_H(c, c, 5);
  CHECK(std::abs(equal.first - c / 5.0) < 1e-15);
  CHECK(std::abs(equal.second - c / 5.0) < 1e-15);

  const auto second = scalar::pair_H(first.first, first.second, 2);
  CHECK(std::abs(second.first - Complex{1.0 / 15.0}) <= 1e-13);
  CHECK(std::abs(second.second - Complex{16.0 / 15.0}) <= 1e-13);

  CHECK_THROWS_AS(scalar::pair_H({1.0, 0.0}, {-1.0, 0.0}, 2), BreakdownError);
}

TEST_CASE("closed forms agree with manual compositions") {
  const auto outcomes = scalar_oracle_suite(2024, 200);
  for (const auto& outcome : outcomes) {
    INFO(outcome.name, " max error ", outcome.max_error);
    CHECK(outcome.pass);
  }
}

TEST_CASE("1x1 matrix path reproduces the scalar linear path") {
  // The linear map x -> a x + b is the 1x1 Stein equation X = A X B + C with
  // A = a, B = 1, C = b; the Smith C component started from C = b is exactly
  // the plain sequence with x1 = b.
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    Complex a = 0.5 * rng.complex_normal();
    if (std::abs(a) >= 1.0) a /= (1.5 * std::abs(a));
    const Complex b = rng.complex_normal();

    Matrix am(1, 1), bm(1, 1), cm(1, 1);
    am(0, 0) = a;
    bm(0, 0) = 1.0;
    cm(0, 0) = b;
    stein::Operator op({am, bm, cm});

    SolverConfig cfg;
    cfg.mode = IterationMode::Plain;
    cfg.tol = 1e-30;
    cfg.max_outer = 12;
    std::vector<Complex> matrix_path;
    IterateObserver<stein::State> record =
        [&](const stein::State& s, std::int64_t) {
          matrix_path.push_back(s.C(0, 0));
        };
    plain_iterate(op, op.problem(), cfg, record);

    const LinearProblem prob{a, b, b};
    Complex x = prob.x1;
    for (std::size_t k = 0; k < matrix_path.size(); ++k) {
      CHECK(std::abs(matrix_path[k] - x) <= 1e-12);
      x = scalar::linear_plain_step(prob, x);
    }
  }
}

}  // TEST_SUITE

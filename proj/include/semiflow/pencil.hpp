#pragma once

#include <array>
#include <vector>

#include "semiflow/core.hpp"
#include "semiflow/matrixkit.hpp"

namespace semiflow::pencil {

/// State of the inverse-free iteration for a regular pencil A - lambda B:
/// A_{k+1} = A_1 D A_k, B_{k+1} = B_k D B_1 with D = (A_1 + B_k)^{-1}.
/// Both matrices are n-by-n; A_1 + B_1 must be nonsingular for the first D.
struct State {
  Matrix A;
  Matrix B;

  std::array<const Matrix*, 2> components() const { return {&A, &B}; }
};

void validate(const State& state);

/// The pencil semigroup action
/// F(Xa, Xb) = (A_a D A_b, B_b D B_a) with D = (A_a + B_b)^{-1};
/// algebraically also (A_b - B_b D A_b, B_a - A_a D B_a).
/// Throws BreakdownError when A_a + B_b is singular.
State pencil_operator(const State& xa, const State& xb);

/// Stable subspace U (orthonormal columns), its pencil restriction Lambda
/// with A U = B U Lambda and rho(Lambda) < 1, and the relative residual
/// ||A U - B U Lambda||_F / ||A||_F.
struct SubspaceResult {
  Matrix U;
  Matrix Lambda;
  double residual = 0.0;
  double max_b_norm = 0.0;      // largest ||B_k||_F seen along the iteration
  bool b_norm_flagged = false;  // ||B_k|| grew beyond 1e8 * ||B_1||
  ConvergenceReport report;
};

/// Engine adapter. The iteration has no single-matrix equation residual, so
/// both residual and stop_measure return the relative size of the next plain
/// update ||B_x (A_1 + B_x)^{-1} A_x||_F / ||A_x||_F, which vanishes exactly
/// when the A component stabilizes.
class Operator {
 public:
  using State = pencil::State;

  explicit Operator(State problem);

  State apply(const State& xa, const State& xb) const;
  double residual(const State& x) const;
  double stop_measure(const State& x) const { return residual(x); }
  const Matrix& solution_view(const State& x) const { return x.A; }

  const State& problem() const { return problem_; }

 private:
  State problem_;
};

/// Iterate until the A component stabilizes, then split off the m-dimensional
/// right null space of the limit: U spans the m smallest right singular
/// vectors of A_final, Lambda solves the least-squares restriction
/// (B U) Lambda ~= A U.
///
/// The caller asserts that exactly m eigenvalues lie inside the unit circle;
/// misuse surfaces as a large residual. Throws RankAmbiguityError when
/// singular values m and m+1 of A_final are separated by less than a factor
/// of 100, BreakdownError when an iteration pivot goes singular, and
/// PreconditionError when A_1 + B_1 is already singular.
SubspaceResult stable_subspace_solve(const State& problem, Eigen::Index m,
                                     const SolverConfig& cfg);

/// Principal angles (radians, largest first) between the column spaces of
/// two orthonormal bases of equal ambient dimension.
std::vector<double> principal_angles(const Matrix& u, const Matrix& v);

}  // namespace semiflow::pencil

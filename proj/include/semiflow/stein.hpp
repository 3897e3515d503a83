#pragma once

#include <array>
#include <utility>

#include "semiflow/core.hpp"
#include "semiflow/matrixkit.hpp"

namespace semiflow::stein {

/// Coefficients of the Stein equation X = A X B + C; also the iteration
/// state of the Smith recursion A_{k+1} = A_k A_1, B_{k+1} = B_1 B_k,
/// C_{k+1} = C_k + A_k C_1 B_k. A is m-by-m, B n-by-n, C m-by-n.
struct State {
  Matrix A;
  Matrix B;
  Matrix C;

  std::array<const Matrix*, 3> components() const { return {&A, &B, &C}; }
};

/// Dimension-checks a state. Throws DimensionMismatchError.
void validate(const State& state);

/// The Stein semigroup action
/// F(Xa, Xb) = (A_a A_b, B_b B_a, C_a + A_a C_b B_a). Multiplication only,
/// so it never breaks down.
State stein_operator(const State& xa, const State& xb);

/// ||X - A X B - C||_F / max(1, ||C||_F) for a candidate X.
double stein_residual(const State& problem, const Matrix& x);

/// rho(A) * rho(B); the equation has the unique solution sum A^i C B^i
/// when this is < 1.
double contraction_factor(const State& problem);

/// Engine adapter: residual-stopped, C-component is the solution view.
class Operator {
 public:
  using State = stein::State;

  explicit Operator(State problem);

  State apply(const State& xa, const State& xb) const;
  double residual(const State& x) const;
  double stop_measure(const State& x) const { return residual(x); }
  const Matrix& solution_view(const State& x) const { return x.C; }

  const State& problem() const { return problem_; }

 private:
  State problem_;
};

/// The r-Smith iteration in its direct form: Ahat_{k+1} = Ahat_k^r,
/// Bhat_{k+1} = Bhat_k^r, Chat_{k+1} = sum_{l=0}^{r-1} Ahat_k^l Chat_k
/// Bhat_k^l, the last evaluated by nested accumulation (r - 1 multiplies per
/// side, no explicit powers). Report indices are r^(k-1).
///
/// Requires rho(A) rho(B) < 1 unless `force`; violation throws
/// PreconditionError. Divergent forced runs end in MaxIterations.
std::pair<Matrix, ConvergenceReport> r_smith_direct(const State& problem,
                                                    int r,
                                                    const SolverConfig& cfg,
                                                    bool force = false);

}  // namespace semiflow::stein

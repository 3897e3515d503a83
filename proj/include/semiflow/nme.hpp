#pragma once

#include <array>
#include <utility>

#include "semiflow/core.hpp"
#include "semiflow/matrixkit.hpp"

namespace semiflow::nme {

/// Four-matrix state of the composite iteration for X = Q - A X^{-1} B:
/// A_{k+1} = A_k D A_1, B_{k+1} = B_1 D B_k, P_{k+1} = P_1 + B_1 D A_1,
/// Q_{k+1} = Q_k - A_k D B_k with D = (Q_1 - P_k)^{-1}. All blocks n-by-n;
/// the initial state carries P = 0.
struct State {
  Matrix A;
  Matrix B;
  Matrix P;
  Matrix Q;

  std::array<const Matrix*, 4> components() const { return {&A, &B, &P, &Q}; }
};

void validate(const State& state);

/// The composite-map semigroup action
/// F(Xa, Xb) = (A_b D A_a, B_a D B_b, P_a + B_a D A_a, Q_b - A_b D B_b)
/// with D = (Q_a - P_b)^{-1}. Throws BreakdownError when Q_a - P_b is
/// singular.
State nme_operator(const State& xa, const State& xb);

/// Relative errors of the four pivot-block identities satisfied by
/// Xd = F(Xa, Xb) and Xe = F(Xb, Xc), writing D_uv = (Q_u - P_v)^{-1}:
///   (i)   D_ae = D_ab + D_ab B_b D_dc A_b D_ab
///   (ii)  D_dc = D_bc + D_bc A_b D_ae B_b D_bc
///   (iii) D_ab B_b D_dc = D_ae B_b D_bc
///   (iv)  D_dc A_b D_ab = D_bc A_b D_ae
std::array<double, 4> lemma_identity_errors(const State& xa, const State& xb,
                                            const State& xc);

/// Engine adapter: the solution view is the Q component; stopping measures
/// the next plain Q update ||A_x (Q_1 - P_x)^{-1} B_x|| / ||Q_x||, while the
/// reported residual is the equation residual
/// ||X - Q + A X^{-1} B||_F / ||Q||_F of the candidate X = Q_x (one extra
/// factorization per accepted iterate; a singular candidate throws
/// SingularIterateError).
class Operator {
 public:
  using State = nme::State;

  explicit Operator(State problem);

  State apply(const State& xa, const State& xb) const;
  double residual(const State& x) const;
  double stop_measure(const State& x) const;
  const Matrix& solution_view(const State& x) const { return x.Q; }

  const State& problem() const { return problem_; }

 private:
  State problem_;
  double q_norm_ = 0.0;
};

/// Solve X = Q - A X^{-1} B from the initial state (A, B, 0, Q), returning
/// the Q component at convergence. Q must be nonsingular (the first pivot
/// block); throws PreconditionError otherwise.
std::pair<Matrix, ConvergenceReport> solve(const Matrix& q, const Matrix& a,
                                           const Matrix& b,
                                           const SolverConfig& cfg);

}  // namespace semiflow::nme

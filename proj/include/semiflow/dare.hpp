#pragma once

#include <array>
#include <utility>

#include "semiflow/core.hpp"
#include "semiflow/matrixkit.hpp"

namespace semiflow::dare {

/// State of the fixed-point iteration for the discrete-time algebraic
/// Riccati equation X = H + A^H X (I + G X)^{-1} A:
/// A_{k+1} = A_1 D A_k, G_{k+1} = G_1 + A_1 D G_k A_1^H,
/// H_{k+1} = H_k + A_k^H H_1 D A_k with D = (I + G_k H_1)^{-1}.
/// G and H are Hermitian positive semidefinite and stay Hermitian through
/// re-symmetrization after every operator application.
struct State {
  Matrix A;
  Matrix G;
  Matrix H;

  std::array<const Matrix*, 3> components() const { return {&A, &G, &H}; }
};

void validate(const State& state);

/// The Riccati semigroup action
/// F(Xa, Xb) = (A_b D A_a, G_b + A_b D G_a A_b^H, H_a + A_a^H H_b D A_a)
/// with D = (I + G_a H_b)^{-1}; its order-2 acceleration is the
/// structure-preserving doubling algorithm. G and H components are
/// re-Hermitianized. I + G_a H_b is nonsingular for PSD inputs; indefinite
/// data may throw BreakdownError.
State dare_operator(const State& xa, const State& xb);

/// Same action without the closing symmetrization; exposed so drift of the
/// raw update can be measured.
State dare_operator_raw(const State& xa, const State& xb);

/// ||X - H - A^H X (I + G X)^{-1} A||_F / max(1, ||H||_F) for a candidate X.
double dare_residual(const State& problem, const Matrix& x);

/// Relative errors of the four pivot-block identities satisfied by
/// Xd = F(Xa, Xb) and Xe = F(Xb, Xc), writing D_uv = (I + G_u H_v)^{-1}
/// and M = G_a A_b^H H_c:
///   (i)   D_ae = D_ab - D_ab M D_dc A_b D_ab
///   (ii)  D_dc = D_bc - D_bc A_b D_ae M D_bc
///   (iii) D_ab M D_dc = D_ae M D_bc
///   (iv)  D_dc A_b D_ab = D_bc A_b D_ae
std::array<double, 4> lemma_identity_errors(const State& xa, const State& xb,
                                            const State& xc);

/// Engine adapter: residual-stopped, H component is the solution view.
class Operator {
 public:
  using State = dare::State;

  explicit Operator(State problem);

  State apply(const State& xa, const State& xb) const;
  double residual(const State& x) const;
  double stop_measure(const State& x) const { return residual(x); }
  const Matrix& solution_view(const State& x) const { return x.H; }

  const State& problem() const { return problem_; }

 private:
  State problem_;
};

/// Solve the equation from (A, G, H), returning the H component at
/// convergence. G and H must be Hermitian to 1e-10 relative; PSD is expected
/// but not enforced (indefinite inputs may break down informatively).
std::pair<Matrix, ConvergenceReport> solve(const Matrix& a, const Matrix& g,
                                           const Matrix& h,
                                           const SolverConfig& cfg);

}  // namespace semiflow::dare

#include "semiflow/dare.hpp"

#include <string>

namespace semiflow::dare {

namespace {

LuFactors factor_delta(const Matrix& block, const char* context) {
  try {
    return lu_factor(block);
  } catch (const SingularMatrixError& err) {
    throw BreakdownError(std::string(context) + ": " + err.what());
  }
}

}  // namespace

void validate(const State& state) {
  const Eigen::Index n = state.A.rows();
  for (const Matrix* m : state.components()) {
    if (m->rows() != n || m->cols() != n) {
      throw DimensionMismatchError(
          "dare: A, G, H must all be square of equal size");
    }
  }
}

State dare_operator_raw(const State& xa, const State& xb) {
  if (xa.A.rows() != xb.A.rows()) {
    throw DimensionMismatchError("dare_operator: states do not conform");
  }
  const Eigen::Index n = xa.A.rows();
  const LuFactors delta = factor_delta(identity(n) + xa.G * xb.H,
                                       "dare_operator: I + G_a H_b singular");
  State out;
  out.A = xb.A * delta.solve(xa.A);
  out.G = xb.G + xb.A * delta.solve(xa.G * xb.A.adjoint());
  out.H = xa.H + xa.A.adjoint() * xb.H * delta.solve(xa.A);
  return out;
}

State dare_operator(const State& xa, const State& xb) {
  State out = dare_operator_raw(xa, xb);
  out.G = hermitian_part(out.G);
  out.H = hermitian_part(out.H);
  return out;
}

double dare_residual(const State& problem, const Matrix& x) {
  const Eigen::Index n = x.rows();
  const LuFactors inner = factor_delta(identity(n) + problem.G * x,
                                       "dare residual: I + G X singular");
  const Matrix defect =
      x - problem.H - problem.A.adjoint() * x * inner.solve(problem.A);
  return defect.norm() / std::max(1.0, problem.H.norm());
}

std::array<double, 4> lemma_identity_errors(const State& xa, const State& xb,
                                            const State& xc) {
  const State xd = dare_operator(xa, xb);
  const State xe = dare_operator(xb, xc);
  const Eigen::Index n = xa.A.rows();

  auto inverse = [&](const Matrix& g, const Matrix& h, const char* context) {
    return factor_delta(identity(n) + g * h, context).solve(identity(n));
  };
  const Matrix d_ab = inverse(xa.G, xb.H, "lemma: I + G_a H_b singular");
  const Matrix d_bc = inverse(xb.G, xc.H, "lemma: I + G_b H_c singular");
  const Matrix d_ae = inverse(xa.G, xe.H, "lemma: I + G_a H_e singular");
  const Matrix d_dc = inverse(xd.G, xc.H, "lemma: I + G_d H_c singular");
  const Matrix mid = xa.G * xb.A.adjoint() * xc.H;

  auto relerr = [](const Matrix& lhs, const Matrix& rhs) {
    return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
  };
  std::array<double, 4> errors{};
  errors[0] = relerr(d_ae, d_ab - d_ab * mid * d_dc * xb.A * d_ab);
  errors[1] = relerr(d_dc, d_bc - d_bc * xb.A * d_ae * mid * d_bc);
  errors[2] = relerr(d_ab * mid * d_dc, d_ae * mid * d_bc);
  errors[3] = relerr(d_dc * xb.A * d_ab, d_bc * xb.A * d_ae);
  return errors;
}

Operator::Operator(State problem) : problem_(std::move(problem)) {
  validate(problem_);
}

State Operator::apply(const State& xa, const State& xb) const {
  return dare_operator(xa, xb);
}

double Operator::residual(const State& x) const {
  return dare_residual(problem_, x.H);
}

std::pair<Matrix, ConvergenceReport> solve(const Matrix& a, const Matrix& g,
                                           const Matrix& h,
                                           const SolverConfig& cfg) {
  State initial{a, g, h};
  validate(initial);
  const double g_drift = (g - g.adjoint()).norm() / std::max(1.0, g.norm());
  const double h_drift = (h - h.adjoint()).norm() / std::max(1.0, h.norm());
  if (g_drift > 1e-10 || h_drift > 1e-10) {
    throw PreconditionError("dare::solve: G and H must be Hermitian");
  }
  initial.G = hermitian_part(initial.G);
  initial.H = hermitian_part(initial.H);
  Operator op(initial);
  auto outcome = iterate(op, std::move(initial), cfg);
  return {std::move(outcome.state.H), std::move(outcome.report)};
}

}  // namespace semiflow::dare

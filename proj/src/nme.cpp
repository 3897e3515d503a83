#include "semiflow/nme.hpp"

#include <string>

namespace semiflow::nme {

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
          "nme: A, B, P, Q must all be square of equal size");
    }
  }
}

State nme_operator(const State& xa, const State& xb) {
  if (xa.A.rows() != xb.A.rows()) {
    throw DimensionMismatchError("nme_operator: states do not conform");
  }
  const LuFactors delta =
      factor_delta(xa.Q - xb.P, "nme_operator: Q_a - P_b singular");
  State out;
  out.A = xb.A * delta.solve(xa.A);
  out.B = xa.B * delta.solve(xb.B);
  out.P = xa.P + xa.B * delta.solve(xa.A);
  out.Q = xb.Q - xb.A * delta.solve(xb.B);
  return out;
}

std::array<double, 4> lemma_identity_errors(const State& xa, const State& xb,
                                            const State& xc) {
  const State xd = nme_operator(xa, xb);
  const State xe = nme_operator(xb, xc);

  auto inverse = [](const Matrix& block, const char* context) {
    return factor_delta(block, context).solve(identity(block.rows()));
  };
  const Matrix d_ab = inverse(xa.Q - xb.P, "lemma: Q_a - P_b singular");
  const Matrix d_bc = inverse(xb.Q - xc.P, "lemma: Q_b - P_c singular");
  const Matrix d_ae = inverse(xa.Q - xe.P, "lemma: Q_a - P_e singular");
  const Matrix d_dc = inverse(xd.Q - xc.P, "lemma: Q_d - P_c singular");

  auto relerr = [](const Matrix& lhs, const Matrix& rhs) {
    return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
  };
  std::array<double, 4> errors{};
  errors[0] = relerr(d_ae, d_ab + d_ab * xb.B * d_dc * xb.A * d_ab);
  errors[1] = relerr(d_dc, d_bc + d_bc * xb.A * d_ae * xb.B * d_bc);
  errors[2] = relerr(d_ab * xb.B * d_dc, d_ae * xb.B * d_bc);
  errors[3] = relerr(d_dc * xb.A * d_ab, d_bc * xb.A * d_ae);
  return errors;
}

Operator::Operator(State problem) : problem_(std::move(problem)) {
  validate(problem_);
  q_norm_ = problem_.Q.norm();
}

State Operator::apply(const State& xa, const State& xb) const {
  return nme_operator(xa, xb);
}

double Operator::residual(const State& x) const {
  LuFactors candidate = [&] {
    try {
      return lu_factor(x.Q);
    } catch (const SingularMatrixError& err) {
      throw SingularIterateError(
          std::string("nme residual: iterate singular: ") + err.what());
    }
  }();
  const Matrix defect =
      x.Q - problem_.Q + problem_.A * candidate.solve(problem_.B);
  return defect.norm() / (q_norm_ > 0.0 ? q_norm_ : 1.0);
}

double Operator::stop_measure(const State& x) const {
  const LuFactors delta = factor_delta(
      problem_.Q - x.P, "nme stop measure: Q_1 - P_k singular");
  const Matrix update = x.A * delta.solve(x.B);
  const double scale = x.Q.norm();
  return scale > 0.0 ? update.norm() / scale : update.norm();
}

std::pair<Matrix, ConvergenceReport> solve(const Matrix& q, const Matrix& a,
                                           const Matrix& b,
                                           const SolverConfig& cfg) {
  State initial{a, b, Matrix::Zero(q.rows(), q.cols()), q};
  validate(initial);
  if (LuFactors(q).rcond() < kSingularRcond) {
    throw PreconditionError("nme::solve: Q is singular, the first pivot block "
                            "(Q - P_1)^{-1} does not exist");
  }
  Operator op(initial);
  auto outcome = iterate(op, std::move(initial), cfg);
  return {std::move(outcome.state.Q), std::move(outcome.report)};
}

}  // namespace semiflow::nme

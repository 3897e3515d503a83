#include "semiflow/stein.hpp"

#include <string>

namespace semiflow::stein {

void validate(const State& state) {
  if (state.A.rows() != state.A.cols()) {
    throw DimensionMismatchError("stein: A must be square");
  }
  if (state.B.rows() != state.B.cols()) {
    throw DimensionMismatchError("stein: B must be square");
  }
  if (state.C.rows() != state.A.rows() || state.C.cols() != state.B.rows()) {
    throw DimensionMismatchError(
        "stein: C must be " + std::to_string(state.A.rows()) + "x" +
        std::to_string(state.B.rows()) + ", got " +
        std::to_string(state.C.rows()) + "x" + std::to_string(state.C.cols()));
  }
}

State stein_operator(const State& xa, const State& xb) {
  if (xa.A.cols() != xb.A.rows() || xb.B.cols() != xa.B.rows() ||
      xa.A.cols() != xb.C.rows() || xb.C.cols() != xa.B.rows() ||
      xa.C.rows() != xa.A.rows() || xa.C.cols() != xa.B.cols()) {
    throw DimensionMismatchError("stein_operator: states do not conform");
  }
  State out;
  out.A = xa.A * xb.A;
  out.B = xb.B * xa.B;
  out.C = xa.C + xa.A * xb.C * xa.B;
  return out;
}

double stein_residual(const State& problem, const Matrix& x) {
  const Matrix defect = x - problem.A * x * problem.B - problem.C;
  return defect.norm() / std::max(1.0, problem.C.norm());
}

double contraction_factor(const State& problem) {
  return spectral_radius(problem.A) * spectral_radius(problem.B);
}

Operator::Operator(State problem) : problem_(std::move(problem)) {
  validate(problem_);
}

State Operator::apply(const State& xa, const State& xb) const {
  return stein_operator(xa, xb);
}

double Operator::residual(const State& x) const {
  return stein_residual(problem_, x.C);
}

std::pair<Matrix, ConvergenceReport> r_smith_direct(const State& problem,
                                                    int r,
                                                    const SolverConfig& cfg,
                                                    bool force) {
  validate(problem);
  if (r < 2) throw PreconditionError("r_smith_direct: order must be >= 2");
  cfg.validate();
  const double rho = contraction_factor(problem);
  if (rho >= 1.0 && !force) {
    throw PreconditionError(
        "r_smith_direct: rho(A) * rho(B) = " + std::to_string(rho) +
        " >= 1 violates the contraction precondition (pass force to proceed)");
  }

  ConvergenceReport report;
  detail::StepTimer timer;
  Matrix a = problem.A;
  Matrix b = problem.B;
  Matrix c = problem.C;
  std::int64_t index = 1;

  auto accept = [&]() {
    report.residuals.push_back(stein_residual(problem, c));
    report.iterate_indices.push_back(index);
    report.elapsed_us.push_back(timer.restart());
  };

  accept();
  if (report.residuals.back() <= cfg.tol) {
    report.status = SolveStatus::Converged;
    detail::finalize_report(report);
    return {std::move(c), std::move(report)};
  }
  for (int step = 1; step <= cfg.max_outer; ++step) {
    if (index > detail::kIndexCap / r) break;
    // Chat update first: sum_{l=0}^{r-1} A^l C B^l as the nested form
    // C + A (C + A (...) B) B.
    Matrix sum = c;
    for (int ell = 1; ell < r; ++ell) {
      sum = c + a * sum * b;
    }
    c = std::move(sum);
    // Ahat^r / Bhat^r by repeated multiplication (r - 1 multiplies each).
    Matrix a_next = a;
    Matrix b_next = b;
    for (int ell = 1; ell < r; ++ell) {
      a_next = a_next * a;
      b_next = b_next * b;
    }
    a = std::move(a_next);
    b = std::move(b_next);
    index *= r;
    report.total_applies += r - 1;
    accept();
    if (report.residuals.back() <= cfg.tol) {
      report.status = SolveStatus::Converged;
      detail::finalize_report(report);
      return {std::move(c), std::move(report)};
    }
  }
  report.status = SolveStatus::MaxIterations;
  detail::finalize_report(report);
  return {std::move(c), std::move(report)};
}

}  // namespace semiflow::stein

#include "semiflow/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semiflow::pencil {

namespace {

LuFactors factor_delta(const Matrix& sum, const char* context) {
  try {
    return lu_factor(sum);
  } catch (const SingularMatrixError& err) {
    throw BreakdownError(std::string(context) + ": " + err.what());
  }
}

}  // namespace

void validate(const State& state) {
  if (state.A.rows() != state.A.cols() || state.B.rows() != state.B.cols() ||
      state.A.rows() != state.B.rows()) {
    throw DimensionMismatchError("pencil: A and B must be square, equal size");
  }
}

State pencil_operator(const State& xa, const State& xb) {
  if (xa.A.rows() != xa.A.cols() || xb.A.rows() != xb.A.cols() ||
      xa.A.rows() != xb.A.rows()) {
    throw DimensionMismatchError("pencil_operator: states do not conform");
  }
  const LuFactors delta =
      factor_delta(xa.A + xb.B, "pencil_operator: A_a + B_b singular");
  State out;
  out.A = xa.A * delta.solve(xb.A);
  out.B = xb.B * delta.solve(xa.B);
  return out;
}

Operator::Operator(State problem) : problem_(std::move(problem)) {
  validate(problem_);
}

State Operator::apply(const State& xa, const State& xb) const {
  return pencil_operator(xa, xb);
}

double Operator::residual(const State& x) const {
  const LuFactors delta =
      factor_delta(problem_.A + x.B, "pencil residual: A_1 + B_k singular");
  const Matrix update = x.B * delta.solve(x.A);
  const double scale = x.A.norm();
  return scale > 0.0 ? update.norm() / scale : update.norm();
}

SubspaceResult stable_subspace_solve(const State& problem, Eigen::Index m,
                                     const SolverConfig& cfg) {
  validate(problem);
  const Eigen::Index n = problem.A.rows();
  if (m < 1 || m > n) {
    throw PreconditionError("stable_subspace_solve: m must be in [1, n]");
  }
  if (LuFactors(problem.A + problem.B).rcond() < kSingularRcond) {
    throw PreconditionError(
        "stable_subspace_solve: A + B singular at the initial state");
  }

  Operator op(problem);
  SubspaceResult result;
  const double b1_norm = problem.B.norm();
  result.max_b_norm = b1_norm;
  IterateObserver<State> monitor = [&](const State& state, std::int64_t) {
    result.max_b_norm = std::max(result.max_b_norm, state.B.norm());
  };
  auto outcome = iterate(op, problem, cfg, monitor);
  if (outcome.report.status == SolveStatus::Breakdown) {
    throw BreakdownError("stable_subspace_solve: " +
                         outcome.report.breakdown_detail);
  }
  result.b_norm_flagged = result.max_b_norm > 1e8 * b1_norm;

  const Matrix& a_final = outcome.state.A;
  if (m < n) {
    // Gap test between the discarded and kept parts of the spectrum of the
    // limit: sigma_{m+1} must dominate sigma_m by two orders of magnitude.
    const auto probe = singular_triplet_smallest(a_final, m + 1);
    if (probe.values[m] < 1e2 * probe.values[m - 1]) {
      throw RankAmbiguityError(
          "stable_subspace_solve: singular values " + std::to_string(m) +
          " and " + std::to_string(m + 1) + " of the iteration limit (" +
          std::to_string(probe.values[m - 1]) + ", " +
          std::to_string(probe.values[m]) +
          ") are not separated by 1e2; null-space dimension ambiguous");
    }
  }
  const auto triplet = singular_triplet_smallest(a_final, m);
  result.U = triplet.right_vectors;

  // Lambda from the least-squares restriction (B U) Lambda ~= A U.
  const Matrix bu = problem.B * result.U;
  const Matrix au = problem.A * result.U;
  result.Lambda = bu.colPivHouseholderQr().solve(au);
  result.residual = (au - bu * result.Lambda).norm() / problem.A.norm();
  result.report = std::move(outcome.report);
  return result;
}

std::vector<double> principal_angles(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows()) {
    throw DimensionMismatchError("principal_angles: ambient dimensions differ");
  }
  // Cosines lose all precision below sqrt(eps); recover small angles from the
  // matching sines of the projected complement (Bjorck-Golub).
  const Matrix cross = u.adjoint() * v;
  Eigen::JacobiSVD<Matrix> cos_svd(cross);
  const auto& cosines = cos_svd.singularValues();  // descending
  const Matrix complement = v - u * cross;
  Eigen::JacobiSVD<Matrix> sin_svd(complement);
  const auto& sines = sin_svd.singularValues();  // descending

  const Eigen::Index count = cosines.size();
  std::vector<double> angles;
  angles.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) {
    const double c = std::clamp(cosines[i], 0.0, 1.0);
    // cosines descending and sines ascending describe the same angle list.
    const double s = std::clamp(sines[sines.size() - 1 - i], 0.0, 1.0);
    angles.push_back(c * c >= 0.5 ? std::asin(s) : std::acos(c));
  }
  std::sort(angles.begin(), angles.end(), std::greater<double>());
  return angles;
}

}  // namespace semiflow::pencil

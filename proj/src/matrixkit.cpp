#include "semiflow/matrixkit.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace semiflow {

namespace {

double diagonal_rcond(const Eigen::PartialPivLU<Matrix>& lu) {
  if (lu.rows() == 0) return 1.0;
  const auto diag = lu.matrixLU().diagonal();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double mag = std::abs(diag[i]);
    lo = std::min(lo, mag);
    hi = std::max(hi, mag);
  }
  if (hi == 0.0) return 0.0;
  return lo / hi;
}

}  // namespace

LuFactors::LuFactors(const Matrix& m) : lu_(m) { rcond_ = diagonal_rcond(lu_); }

Matrix LuFactors::solve(const Matrix& rhs) const {
  if (rhs.rows() != lu_.rows()) {
    throw DimensionMismatchError("solve: RHS has " + std::to_string(rhs.rows()) +
                                 " rows, factors expect " +
                                 std::to_string(lu_.rows()));
  }
  return lu_.solve(rhs);
}

LuFactors lu_factor(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatchError("lu_factor: matrix is " +
                                 std::to_string(m.rows()) + "x" +
                                 std::to_string(m.cols()) + ", expected square");
  }
  LuFactors factors(m);
  if (factors.rcond() < kSingularRcond) {
    throw SingularMatrixError("lu_factor: matrix numerically singular (rcond " +
                              std::to_string(factors.rcond()) + ")");
  }
  return factors;
}

Matrix solve(const Matrix& m, const Matrix& rhs) {
  return lu_factor(m).solve(rhs);
}

double fro_norm(const Matrix& m) { return m.norm(); }

double spectral_radius(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatchError("spectral_radius: matrix not square");
  }
  if (m.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw EigenFailureError("spectral_radius: eigenvalue iteration failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

SingularTriplet singular_triplet_smallest(const Matrix& m, Eigen::Index count) {
  if (count < 1 || count > m.cols()) {
    throw DimensionMismatchError("singular_triplet_smallest: count " +
                                 std::to_string(count) + " out of range for " +
                                 std::to_string(m.cols()) + " columns");
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  // JacobiSVD has no failure mode to report via info(); a NaN output is the
  // practical signal.
  if (!svd.singularValues().allFinite()) {
    throw EigenFailureError("singular_triplet_smallest: SVD produced non-finite values");
  }
  const auto& sv = svd.singularValues();  // descending
  const Eigen::Index n = sv.size();
  SingularTriplet out;
  out.values.reserve(static_cast<std::size_t>(count));
  out.right_vectors.resize(m.cols(), count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Eigen::Index src = n - 1 - j;  // smallest first
    out.values.push_back(sv[src]);
    out.right_vectors.col(j) = svd.matrixV().col(src);
  }
  return out;
}

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

Matrix hermitian_part(const Matrix& m) {
  return 0.5 * (m + m.adjoint()).eval();
}

double relative_error(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatchError("relative_error: shapes differ");
  }
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace semiflow

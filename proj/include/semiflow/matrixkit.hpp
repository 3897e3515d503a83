#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "semiflow/errors.hpp"

namespace semiflow {

using Complex = std::complex<double>;

/// Dense complex double-precision matrix, row-major. The universal numeric
/// carrier of the library; real data is promoted with zero imaginary parts.
using Matrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Estimated reciprocal condition below which a factorization is declared
/// singular. Numeric surrogate for exact breakdown sets, which cannot be
/// detected symbolically in floating point.
inline constexpr double kSingularRcond = 1e-14;

/// Pivoted LU factorization of a square matrix together with a cheap
/// reciprocal-condition estimate (ratio of extreme |U| diagonal magnitudes).
class LuFactors {
 public:
  explicit LuFactors(const Matrix& m);

  /// Solve F·X = RHS. Throws DimensionMismatchError on nonconforming RHS.
  Matrix solve(const Matrix& rhs) const;

  double rcond() const { return rcond_; }
  Eigen::Index rows() const { return lu_.rows(); }

 private:
  Eigen::PartialPivLU<Matrix> lu_;
  double rcond_ = 0.0;
};

/// Factor a square matrix. Throws SingularMatrixError when the estimated
/// rcond falls below kSingularRcond; callers treat that as operator breakdown.
LuFactors lu_factor(const Matrix& m);

/// Convenience: factor-and-solve M·X = RHS in one call.
Matrix solve(const Matrix& m, const Matrix& rhs);

/// Frobenius norm.
double fro_norm(const Matrix& m);

/// max |lambda_i| from a dense eigendecomposition.
double spectral_radius(const Matrix& m);

/// The `count` smallest singular values (ascending) with the matching right
/// singular vectors as orthonormal columns.
struct SingularTriplet {
  std::vector<double> values;
  Matrix right_vectors;
};
SingularTriplet singular_triplet_smallest(const Matrix& m, Eigen::Index count);

/// n-by-n identity.
Matrix identity(Eigen::Index n);

/// Hermitian part (M + M^H)/2.
Matrix hermitian_part(const Matrix& m);

/// ||A - B||_F / max(1, ||B||_F); the library-wide relative error measure.
double relative_error(const Matrix& a, const Matrix& b);

}  // namespace semiflow

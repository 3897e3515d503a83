#include "semiflow/instances.hpp"

#include <cmath>

namespace semiflow {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(cols));
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = rng.complex_normal() * scale;
    }
  }
  return m;
}

Matrix random_psd(Eigen::Index n, Rng& rng, double scale) {
  const Matrix w = random_matrix(n, n, rng);
  Matrix psd = w * w.adjoint();
  psd = hermitian_part(psd);
  const double norm = psd.norm();
  if (norm > 0.0) psd *= scale / norm;
  return psd;
}

Matrix scaled_to_spectral_radius(const Matrix& m, double target) {
  const double rho = spectral_radius(m);
  if (rho == 0.0) {
    throw PreconditionError(
        "scaled_to_spectral_radius: matrix is nilpotent, cannot rescale");
  }
  return m * (target / rho);
}

stein::State random_stein_state(Eigen::Index rows, Eigen::Index cols,
                                Rng& rng) {
  return {random_matrix(rows, rows, rng), random_matrix(cols, cols, rng),
          random_matrix(rows, cols, rng)};
}

stein::State random_stein_contractive(Eigen::Index n, double rho_product,
                                      Rng& rng) {
  const double each = std::sqrt(rho_product);
  stein::State state = random_stein_state(n, n, rng);
  state.A = scaled_to_spectral_radius(state.A, each);
  state.B = scaled_to_spectral_radius(state.B, each);
  return state;
}

pencil::State random_pencil_state(Eigen::Index n, Rng& rng) {
  return {random_matrix(n, n, rng), random_matrix(n, n, rng)};
}

dare::State random_dare_state(Eigen::Index n, Rng& rng) {
  return {random_matrix(n, n, rng), random_psd(n, rng), random_psd(n, rng)};
}

nme::State random_nme_state(Eigen::Index n, Rng& rng, double p_scale) {
  nme::State state;
  state.A = random_matrix(n, n, rng);
  state.B = random_matrix(n, n, rng);
  state.P = p_scale == 0.0 ? Matrix::Zero(n, n).eval()
                           : (p_scale * random_matrix(n, n, rng)).eval();
  state.Q = random_matrix(n, n, rng) + 3.0 * identity(n);
  return state;
}

ConjugatedPencil conjugated_pencil(const std::vector<Complex>& eigenvalues,
                                   Rng& rng) {
  const Eigen::Index n = static_cast<Eigen::Index>(eigenvalues.size());
  const Matrix left = identity(n) + 0.3 * random_matrix(n, n, rng);
  const Matrix right = identity(n) + 0.3 * random_matrix(n, n, rng);
  Matrix diag = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) diag(i, i) = eigenvalues[i];

  ConjugatedPencil out;
  out.state.A = left * diag * right;
  out.state.B = left * right;

  std::vector<Eigen::Index> stable;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(eigenvalues[i]) < 1.0) stable.push_back(i);
  }
  const Matrix right_inverse = lu_factor(right).solve(identity(n));
  const Eigen::Index m = static_cast<Eigen::Index>(stable.size());
  out.invariant_basis.resize(n, m);
  out.stable_lambda = Matrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.invariant_basis.col(j) = right_inverse.col(stable[j]);
    out.stable_lambda(j, j) = eigenvalues[stable[j]];
  }
  out.stable_basis = orthonormalize(out.invariant_basis);
  return out;
}

ConstructedNme constructed_nme_instance(Eigen::Index n, Rng& rng) {
  ConstructedNme out;
  out.solution = random_psd(n, rng) + identity(n);
  out.b = 0.5 * random_matrix(n, n, rng);
  out.a = out.b.adjoint();
  out.q = out.solution + out.a * lu_factor(out.solution).solve(out.b);
  return out;
}

Matrix orthonormalize(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  return q;
}

}  // namespace semiflow

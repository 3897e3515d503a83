#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "semiflow/dare.hpp"
#include "semiflow/matrixkit.hpp"
#include "semiflow/nme.hpp"
#include "semiflow/pencil.hpp"
#include "semiflow/stein.hpp"

namespace semiflow {

/// Deterministic complex-Gaussian source for seeded instance generation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  Complex complex_normal() { return {normal(), normal()}; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Entries ~ complex normal, scaled by 1/sqrt(2 cols) so the spectral norm
/// stays O(1) at any size.
Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Random Hermitian positive semidefinite matrix with unit Frobenius norm
/// times `scale`.
Matrix random_psd(Eigen::Index n, Rng& rng, double scale = 1.0);

/// Rescale a square matrix so that its spectral radius equals `target`.
Matrix scaled_to_spectral_radius(const Matrix& m, double target);

stein::State random_stein_state(Eigen::Index rows, Eigen::Index cols,
                                Rng& rng);

/// Stein coefficients with rho(A) = rho(B) = sqrt(rho_product).
stein::State random_stein_contractive(Eigen::Index n, double rho_product,
                                      Rng& rng);

pencil::State random_pencil_state(Eigen::Index n, Rng& rng);

dare::State random_dare_state(Eigen::Index n, Rng& rng);

/// Random NME state; Q gets a diagonal shift so the pivot blocks stay well
/// conditioned, P is scaled by p_scale (0 for initial states).
nme::State random_nme_state(Eigen::Index n, Rng& rng, double p_scale = 0.0);

/// Pencil with prescribed generalized eigenvalues: A = L diag(ev) R, B = L R
/// for random well-conditioned L, R. stable_basis carries the (orthonormal)
/// ground-truth stable subspace, invariant_basis the raw one with
/// A * invariant_basis = B * invariant_basis * stable_lambda.
struct ConjugatedPencil {
  pencil::State state;
  Matrix stable_basis;
  Matrix invariant_basis;
  Matrix stable_lambda;
};
ConjugatedPencil conjugated_pencil(const std::vector<Complex>& eigenvalues,
                                   Rng& rng);

/// NME instance with a known solution: X symmetric positive definite is
/// chosen, B random with moderate norm, A = B^H, and Q = X + A X^{-1} B.
struct ConstructedNme {
  Matrix q;
  Matrix a;
  Matrix b;
  Matrix solution;
};
ConstructedNme constructed_nme_instance(Eigen::Index n, Rng& rng);

/// Orthonormal basis of the column space (thin QR).
Matrix orthonormalize(const Matrix& m);

}  // namespace semiflow

#pragma once

#include <cstdint>
#include <vector>

#include "liftspec/lanczos.hpp"
#include "liftspec/model.hpp"
#include "liftspec/numerics.hpp"
#include "liftspec/spectral_set.hpp"

namespace liftspec {

// A = a0 (x) 1 + sum_i a_i (x) S_i on C^r (x) C^n, applied matrix-free:
//   (A v)(x) = a0 v(x) + sum_i a_i v(sigma_i(x)).
// Vector layout: flat index x * r + b.
class LiftOperator {
 public:
  LiftOperator(WeightSystem ws, PermutationFamily pf);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(ws_.r) * pf_.n; }
  int r() const { return ws_.r; }
  int n() const { return pf_.n; }
  const WeightSystem& weights() const { return ws_; }
  const PermutationFamily& perms() const { return pf_; }

  void apply(const CVector& in, CVector& out) const;
  CVector apply(const CVector& in) const;

 private:
  WeightSystem ws_;
  PermutationFamily pf_;
};

// Orthogonal projection onto H0 = C^r (x) 1^perp: removes, for each block
// coordinate, the mean over x. Layout x * r + b.
void project_H0(CVector& v, int r);
CVector project_H0(const CVector& v, int r);

// Helmert transform: coordinates of v in the orthonormal basis
// h_k = (1, ..., 1, -k, 0, ...) / sqrt(k (k + 1)), k = 1..n-1, of 1^perp,
// tensored with C^r. Output layout (k - 1) * r + b, length r (n - 1).
CVector helmert_forward(const CVector& v, int r, int n);
// Inverse map from H0 coordinates back to C^r (x) C^n.
CVector helmert_backward(const CVector& c, int r, int n);

// Full dense assembly of a lift operator (tests and small dense paths).
CMatrix dense_matrix(const LiftOperator& a);

// Compression Q^* M Q of an operator on C^r (x) C^n onto H0, with Q the
// Helmert basis. `apply` supplies the action of M.
CMatrix restrict_to_H0(const LinearMap& apply, int r, int n);

inline constexpr Eigen::Index kMaxDenseLiftDim = 4096;

ExtremeEigs extreme_eigs_H0(const LiftOperator& a, int k, double tol,
                            std::uint64_t seed = 0);

struct DenseSpectrum {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;    // ||A v - lambda v|| in the H0 basis
};

// All r (n - 1) eigenvalues of A restricted to H0.
SpectralSet dense_spectrum_H0(const LiftOperator& a);
DenseSpectrum dense_spectrum_H0_with_residuals(const LiftOperator& a);

// A2 = a0 (x) 1 (x) 1 + sum_i a_i (x) S_i (x) S_i on C^r (x) C^{n^2}.
// Layout ((x * n) + y) * r + b.
class TensorLiftOperator {
 public:
  TensorLiftOperator(WeightSystem ws, PermutationFamily pf);

  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(ws_.r) * pf_.n * pf_.n;
  }
  int r() const { return ws_.r; }
  int n() const { return pf_.n; }
  const WeightSystem& weights() const { return ws_; }
  const PermutationFamily& perms() const { return pf_; }

  void apply(const CVector& in, CVector& out) const;
  CVector apply(const CVector& in) const;

 private:
  WeightSystem ws_;
  PermutationFamily pf_;
};

TensorLiftOperator build_tensor(const WeightSystem& ws, const PermutationFamily& pf);

// Projection onto H0^(2) = C^r (x) span{I, J}^perp, with I the diagonal and J
// the off-diagonal indicator of X^2.
void project_H0_tensor(CVector& v, int r, int n);

ExtremeEigs extreme_eigs_H0_tensor(const TensorLiftOperator& a2, int k,
                                   double tol, std::uint64_t seed = 0);

}  // namespace liftspec

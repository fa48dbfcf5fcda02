#pragma once

#include <cstdint>

#include "liftspec/freelimit.hpp"
#include "liftspec/lanczos.hpp"
#include "liftspec/model.hpp"
#include "liftspec/numerics.hpp"

namespace liftspec {

// B = sum_{j != i*} a_j (x) S_i (x) E_ij on C^r (x) C^n (x) C^d:
//   (B v)(x, i) = sum_{j != i*} a_j v(sigma_i(x), j).
// Layout ((x * d) + i) * r + b. a0 plays no role.
class NBOperator {
 public:
  NBOperator(WeightSystem ws, PermutationFamily pf);

  Eigen::Index dim() const {
    return static_cast<Eigen::Index>(ws_.r) * pf_.n * ws_.d();
  }
  int r() const { return ws_.r; }
  int n() const { return pf_.n; }
  int d() const { return ws_.d(); }
  const WeightSystem& weights() const { return ws_; }
  const PermutationFamily& perms() const { return pf_; }

  void apply(const CVector& in, CVector& out) const;
  CVector apply(const CVector& in) const;

 private:
  WeightSystem ws_;
  PermutationFamily pf_;
};

NBOperator build_B(const WeightSystem& ws, const PermutationFamily& pf);

inline constexpr Eigen::Index kMaxDenseNBDim = 4096;
CMatrix dense_matrix(const NBOperator& b);

// Removes the mean over x for every (i, b).
void project_K0(CVector& v, int r, int d);

// a_i(l) = l a_i (l^2 - a_{i*} a_i)^{-1},
// a0(l) = -1 - sum_i a_i (l^2 - a_{i*} a_i)^{-1} a_{i*}.
// The result is not symmetric in general.
WeightSystem a_lambda(const WeightSystem& ws, Complex lambda);

inline constexpr Eigen::Index kMaxIharaBassDim = 512;

struct IharaBassResidual {
  double full = 0.0;  // smallest singular value of A_lambda
  double h0 = 0.0;    // same, restricted to H0
};

IharaBassResidual ihara_bass_residual(const WeightSystem& ws, const PermutationFamily& pf,
                                      Complex lambda);

// Weights a_hat_i(mu) of the resolvent state, with a0 = 0.
WeightSystem b_mu(const WeightSystem& ws, const ResolventState& state);

// max over trials of ||(P B)^l g||^{1/l} for random unit g in K0.
double radius_K0(const NBOperator& b, int l, int trials = 8, std::uint64_t seed = 0);
int default_radius_length(int n);

}  // namespace liftspec

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "liftspec/numerics.hpp"

namespace liftspec {

using LinearMap = std::function<void(const CVector& in, CVector& out)>;
// Orthogonal projector applied in place; restricts the search space.
using Projector = std::function<void(CVector& v)>;

struct LanczosOptions {
  int k = 1;              // wanted eigenvalues at each end
  double tol = 1e-8;      // residual certificate ||Av - lambda v|| per pair
  int basis_size = 0;     // 0: chosen from k
  int max_restarts = 0;   // 0: ceil(10 k log(dim))
  std::uint64_t seed = 0;
};

struct RitzPair {
  double value = 0.0;
  double residual = 0.0;
  CVector vector;
};

struct ExtremeEigs {
  std::vector<RitzPair> lowest;   // ascending
  std::vector<RitzPair> highest;  // descending (highest first)
  int restarts = 0;
  int matvecs = 0;
};

// Thick-restart Lanczos (Krylov-Schur for Hermitian operators) with full
// reorthogonalization. Every vector is passed through `project` so the
// iteration stays inside the projector's range. Throws NoConvergence when a
// wanted pair misses `tol` after the restart budget.
ExtremeEigs lanczos_extremes(const LinearMap& apply, const Projector& project,
                             Eigen::Index dim, const LanczosOptions& opts);

}  // namespace liftspec

#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "liftspec/model.hpp"
#include "liftspec/rng.hpp"

namespace testing {

using liftspec::CMatrix;
using liftspec::Complex;

inline CMatrix random_hermitian(int n, liftspec::Rng& rng) {
  const CMatrix g = liftspec::random_complex_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

inline CMatrix random_unitary(int n, liftspec::Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(liftspec::random_complex_matrix(n, n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

// Random symmetric weight system in the canonical layout: pairs (i, i+q)
// with a_{i+q} = a_i^*, Hermitian a_i beyond 2q, Hermitian a0.
inline liftspec::WeightSystem random_symmetric_ws(int r, int q, int d, liftspec::Rng& rng,
                                                  bool with_a0 = true) {
  liftspec::WeightSystem ws;
  ws.r = r;
  ws.star = liftspec::canonical_star(q, d);
  ws.a0 = with_a0 ? random_hermitian(r, rng) : CMatrix::Zero(r, r);
  ws.weights.assign(static_cast<size_t>(d), CMatrix());
  for (int i = 0; i < q; ++i) {
    ws.weights[static_cast<size_t>(i)] = liftspec::random_complex_matrix(r, r, rng);
    ws.weights[static_cast<size_t>(i + q)] = ws.weights[static_cast<size_t>(i)].adjoint();
  }
  for (int i = 2 * q; i < d; ++i) ws.weights[static_cast<size_t>(i)] = random_hermitian(r, rng);
  return ws;
}

inline liftspec::WeightSystem scalar_regular(int d) {
  return liftspec::preset("regular:" + std::to_string(d));
}

inline std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testing

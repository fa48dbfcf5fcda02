#include "liftspec/nonbacktracking.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liftspec/errors.hpp"
#include "liftspec/lift.hpp"
#include "liftspec/rng.hpp"

namespace liftspec {

NBOperator::NBOperator(WeightSystem ws, PermutationFamily pf)
    : ws_(std::move(ws)), pf_(std::move(pf)) {
  require_valid(ws_);
  if (ws_.d() != pf_.d()) {
    throw DimensionMismatch("weight system has d = " + std::to_string(ws_.d()) +
                            " but permutation family has " + std::to_string(pf_.d()));
  }
}

void NBOperator::apply(const CVector& in, CVector& out) const {
  if (in.size() != dim()) {
    throw DimensionMismatch("B matvec: vector has length " + std::to_string(in.size()) +
                            ", expected r*n*d = " + std::to_string(dim()));
  }
  const int r = ws_.r;
  const int d = ws_.d();
  const Eigen::Index n = pf_.n;
  out.resize(dim());
  if (d == 0) {
    out.setZero();
    return;
  }
  // s(y) = sum_j a_j v(y, j); then (Bv)(x, i) = s(y) - a_{i*} v(y, i*), y = sigma_i(x).
  CVector s = CVector::Zero(n * r);
  for (Eigen::Index y = 0; y < n; ++y)
    for (int j = 0; j < d; ++j)
      s.segment(y * r, r).noalias() +=
          ws_.weights[static_cast<size_t>(j)] * in.segment((y * d + j) * r, r);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (int i = 0; i < d; ++i) {
      const int is = ws_.star[static_cast<size_t>(i)];
      const Eigen::Index y = pf_.perms[static_cast<size_t>(i)][static_cast<size_t>(x)];
      auto dst = out.segment((x * d + i) * r, r);
      dst = s.segment(y * r, r);
      dst.noalias() -= ws_.weights[static_cast<size_t>(is)] * in.segment((y * d + is) * r, r);
    }
  }
}

CVector NBOperator::apply(const CVector& in) const {
  CVector out;
  apply(in, out);
  return out;
}

NBOperator build_B(const WeightSystem& ws, const PermutationFamily& pf) {
  return NBOperator(ws, pf);
}

CMatrix dense_matrix(const NBOperator& b) {
  const Eigen::Index n = b.dim();
  if (n > kMaxDenseNBDim) {
    throw DimensionTooLarge("dense B assembly: r*n*d = " + std::to_string(n) +
                            " exceeds " + std::to_string(kMaxDenseNBDim));
  }
  CMatrix m(n, n);
  CVector e = CVector::Zero(n);
  CVector col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    b.apply(e, col);
    m.col(j) = col;
    e[j] = 0.0;
  }
  return m;
}

void project_K0(CVector& v, int r, int d) {
  const int width = r * d;
  const Eigen::Index n = v.size() / width;
  for (int c = 0; c < width; ++c) {
    Complex mean = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) mean += v[x * width + c];
    mean /= static_cast<double>(n);
    for (Eigen::Index x = 0; x < n; ++x) v[x * width + c] -= mean;
  }
}

WeightSystem a_lambda(const WeightSystem& ws, Complex lambda) {
  require_valid(ws);
  const int r = ws.r;
  WeightSystem out;
  out.r = r;
  out.star = ws.star;
  out.symmetric = false;
  out.a0 = -CMatrix::Identity(r, r);
  const CMatrix id = CMatrix::Identity(r, r);
  for (int i = 0; i < ws.d(); ++i) {
    const CMatrix& ai = ws.weights[static_cast<size_t>(i)];
    const CMatrix& as = ws.weights[static_cast<size_t>(ws.star[static_cast<size_t>(i)])];
    const CMatrix shift = lambda * lambda * id - as * ai;
    const double smin = min_singular_value(shift);
    if (!(smin > 1e-10)) {
      throw SingularShift("a_lambda: lambda^2 - a_{i*} a_i is singular for i = " +
                              std::to_string(i + 1) + " (smallest singular value " +
                              std::to_string(smin) + ")",
                          i);
    }
    const CMatrix sinv = shift.partialPivLu().inverse();
    out.weights.push_back(lambda * ai * sinv);
    out.a0 -= ai * sinv * as;
  }
  return out;
}

IharaBassResidual ihara_bass_residual(const WeightSystem& ws, const PermutationFamily& pf,
                                      Complex lambda) {
  const WeightSystem al = a_lambda(ws, lambda);
  const LiftOperator a(al, pf);
  if (a.dim() > kMaxIharaBassDim) {
    throw DimensionTooLarge("ihara_bass_residual: r*n = " + std::to_string(a.dim()) +
                            " exceeds " + std::to_string(kMaxIharaBassDim));
  }
  IharaBassResidual out;
  out.full = min_singular_value(dense_matrix(a));
  if (a.n() >= 2) {
    out.h0 = min_singular_value(restrict_to_H0(
        [&a](const CVector& in, CVector& o) { a.apply(in, o); }, a.r(), a.n()));
  }
  return out;
}

WeightSystem b_mu(const WeightSystem& ws, const ResolventState& state) {
  if (static_cast<int>(state.a_hats.size()) != ws.d()) {
    throw DimensionMismatch("b_mu: resolvent state does not match the weight system");
  }
  const double scale = std::max(1.0, op_norm(state.g_oo));
  if (!(min_singular_value(state.g_oo) > 1e-12 * scale)) {
    throw SingularResolvent("b_mu: G_oo is singular");
  }
  WeightSystem out;
  out.r = ws.r;
  out.star = ws.star;
  out.symmetric = false;
  out.a0 = CMatrix::Zero(ws.r, ws.r);
  out.weights = state.a_hats;
  return out;
}

int default_radius_length(int n) {
  return std::max(1, static_cast<int>(std::floor(std::log(std::max(n, 2)))));
}

double radius_K0(const NBOperator& b, int l, int trials, std::uint64_t seed) {
  if (l < 1) throw InvalidArgument("radius_K0: l must be >= 1");
  if (trials < 1) throw InvalidArgument("radius_K0: trials must be >= 1");
  const int r = b.r();
  const int d = b.d();
  if (d == 0 || b.n() < 2) return 0.0;
  double best = 0.0;
  CVector w;
  for (int t = 0; t < trials; ++t) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(t)));
    CVector g = random_unit_vector(b.dim(), rng);
    project_K0(g, r, d);
    double nrm = g.norm();
    if (nrm == 0.0) continue;
    g /= nrm;
    // Track log ||(PB)^s g|| with renormalization at every step.
    double log_norm = 0.0;
    bool zero = false;
    for (int s = 0; s < l; ++s) {
      b.apply(g, w);
      project_K0(w, r, d);
      nrm = w.norm();
      if (nrm == 0.0) {
        zero = true;
        break;
      }
      log_norm += std::log(nrm);
      g = w / nrm;
    }
    if (!zero) best = std::max(best, std::exp(log_norm / l));
  }
  return best;
}

}  // namespace liftspec

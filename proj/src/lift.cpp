#include "liftspec/lift.hpp"

#include <cmath>
#include <string>

#include "liftspec/errors.hpp"

namespace liftspec {

namespace {

void check_compatible(const WeightSystem& ws, const PermutationFamily& pf) {
  require_valid(ws);
  if (ws.d() != pf.d()) {
    throw DimensionMismatch("weight system has d = " + std::to_string(ws.d()) +
                            " but permutation family has " + std::to_string(pf.d()));
  }
  if (pf.n < 1) throw InvalidArgument("permutation family is empty");
}

bool self_adjoint(const WeightSystem& ws, const PermutationFamily& pf) {
  if (!ws.symmetric) return false;
  for (int i = 0; i < ws.d(); ++i) {
    const auto& p = pf.perms[static_cast<size_t>(i)];
    const auto& ps = pf.perms[static_cast<size_t>(ws.star[static_cast<size_t>(i)])];
    for (int x = 0; x < pf.n; ++x)
      if (ps[static_cast<size_t>(p[static_cast<size_t>(x)])] != x) return false;
  }
  return true;
}

void require_self_adjoint(const WeightSystem& ws, const PermutationFamily& pf) {
  if (!self_adjoint(ws, pf)) {
    throw NotSelfAdjoint(
        "operator is not self-adjoint: needs the symmetric weight condition and "
        "sigma_{i*} = sigma_i^{-1}");
  }
}

// Block action shared by the plain and tensor lifts: out_u = a0 v_u +
// sum_i a_i v_{target(i, u)} over `count` sites of r-blocks.
template <class Target>
void apply_blocks(const WeightSystem& ws, Eigen::Index count, const CVector& in,
                  CVector& out, Target target) {
  const int r = ws.r;
  const int d = ws.d();
  if (r == 1) {
    const Complex a0 = ws.a0(0, 0);
    std::vector<Complex> w(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) w[static_cast<size_t>(i)] = ws.weights[static_cast<size_t>(i)](0, 0);
    for (Eigen::Index u = 0; u < count; ++u) {
      Complex acc = a0 * in[u];
      for (int i = 0; i < d; ++i) acc += w[static_cast<size_t>(i)] * in[target(i, u)];
      out[u] = acc;
    }
    return;
  }
  for (Eigen::Index u = 0; u < count; ++u) {
    auto dst = out.segment(u * r, r);
    dst.noalias() = ws.a0 * in.segment(u * r, r);
    for (int i = 0; i < d; ++i)
      dst.noalias() += ws.weights[static_cast<size_t>(i)] * in.segment(target(i, u) * r, r);
  }
}

}  // namespace

LiftOperator::LiftOperator(WeightSystem ws, PermutationFamily pf)
    : ws_(std::move(ws)), pf_(std::move(pf)) {
  check_compatible(ws_, pf_);
}

void LiftOperator::apply(const CVector& in, CVector& out) const {
  if (in.size() != dim()) {
    throw DimensionMismatch("lift matvec: vector has length " + std::to_string(in.size()) +
                            ", expected r*n = " + std::to_string(dim()));
  }
  out.resize(dim());
  const auto& perms = pf_.perms;
  apply_blocks(ws_, pf_.n, in, out, [&perms](int i, Eigen::Index x) {
    return static_cast<Eigen::Index>(perms[static_cast<size_t>(i)][static_cast<size_t>(x)]);
  });
}

CVector LiftOperator::apply(const CVector& in) const {
  CVector out;
  apply(in, out);
  return out;
}

void project_H0(CVector& v, int r) {
  const Eigen::Index n = v.size() / r;
  for (int b = 0; b < r; ++b) {
    Complex mean = 0.0;
    for (Eigen::Index x = 0; x < n; ++x) mean += v[x * r + b];
    mean /= static_cast<double>(n);
    for (Eigen::Index x = 0; x < n; ++x) v[x * r + b] -= mean;
  }
}

CVector project_H0(const CVector& v, int r) {
  CVector out = v;
  project_H0(out, r);
  return out;
}

CVector helmert_forward(const CVector& v, int r, int n) {
  CVector c(static_cast<Eigen::Index>(r) * (n - 1));
  for (int b = 0; b < r; ++b) {
    Complex prefix = v[b];
    for (int k = 1; k < n; ++k) {
      const double kk = k;
      c[static_cast<Eigen::Index>(k - 1) * r + b] =
          (prefix - kk * v[static_cast<Eigen::Index>(k) * r + b]) / std::sqrt(kk * (kk + 1.0));
      prefix += v[static_cast<Eigen::Index>(k) * r + b];
    }
  }
  return c;
}

CVector helmert_backward(const CVector& c, int r, int n) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(r) * n);
  for (int b = 0; b < r; ++b) {
    // v_x = sum_{k > x} c_k / sqrt(k(k+1)) - x c_x / sqrt(x(x+1)).
    Complex suffix = 0.0;
    for (int x = n - 1; x >= 0; --x) {
      Complex val = suffix;
      if (x >= 1) {
        const double xx = x;
        const Complex cx = c[static_cast<Eigen::Index>(x - 1) * r + b];
        val -= xx * cx / std::sqrt(xx * (xx + 1.0));
        suffix += cx / std::sqrt(xx * (xx + 1.0));
      }
      v[static_cast<Eigen::Index>(x) * r + b] = val;
    }
  }
  return v;
}

CMatrix dense_matrix(const LiftOperator& a) {
  const Eigen::Index n = a.dim();
  if (n > kMaxDenseLiftDim) {
    throw DimensionTooLarge("dense lift assembly: r*n = " + std::to_string(n) +
                            " exceeds " + std::to_string(kMaxDenseLiftDim));
  }
  CMatrix m(n, n);
  CVector e = CVector::Zero(n);
  CVector col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    a.apply(e, col);
    m.col(j) = col;
    e[j] = 0.0;
  }
  return m;
}

CMatrix restrict_to_H0(const LinearMap& apply, int r, int n) {
  const Eigen::Index dim0 = static_cast<Eigen::Index>(r) * (n - 1);
  CMatrix m(dim0, dim0);
  CVector e = CVector::Zero(dim0);
  CVector image;
  for (Eigen::Index c = 0; c < dim0; ++c) {
    e[c] = 1.0;
    const CVector basis_vec = helmert_backward(e, r, n);
    apply(basis_vec, image);
    m.col(c) = helmert_forward(image, r, n);
    e[c] = 0.0;
  }
  return m;
}

ExtremeEigs extreme_eigs_H0(const LiftOperator& a, int k, double tol,
                            std::uint64_t seed) {
  require_self_adjoint(a.weights(), a.perms());
  LanczosOptions opts;
  opts.k = k;
  opts.tol = tol;
  opts.seed = seed;
  const int r = a.r();
  return lanczos_extremes([&a](const CVector& in, CVector& out) { a.apply(in, out); },
                          [r](CVector& v) { project_H0(v, r); }, a.dim(), opts);
}

namespace {

CMatrix dense_H0(const LiftOperator& a) {
  require_self_adjoint(a.weights(), a.perms());
  if (a.dim() > kMaxDenseLiftDim) {
    throw DimensionTooLarge("dense H0 spectrum: r*n = " + std::to_string(a.dim()) +
                            " exceeds " + std::to_string(kMaxDenseLiftDim));
  }
  CMatrix m = restrict_to_H0([&a](const CVector& in, CVector& out) { a.apply(in, out); },
                             a.r(), a.n());
  // Roundoff from the transforms; the exact compression is Hermitian.
  return 0.5 * (m + m.adjoint());
}

}  // namespace

SpectralSet dense_spectrum_H0(const LiftOperator& a) {
  if (a.n() < 2) return SpectralSet::finite({});
  return SpectralSet::finite(hermitian_eigvals(dense_H0(a)));
}

DenseSpectrum dense_spectrum_H0_with_residuals(const LiftOperator& a) {
  DenseSpectrum out;
  if (a.n() < 2) return out;
  auto eig = hermitian_eig(dense_H0(a));
  out.eigenvalues = eig.eigenvalues;
  out.residuals.resize(eig.eigenvalues.size());
  // Certificates against the operator itself rather than the assembled matrix.
  CVector full(a.dim());
  CVector image(a.dim());
  for (size_t c = 0; c < eig.eigenvalues.size(); ++c) {
    const CVector v = eig.eigenvectors.col(static_cast<Eigen::Index>(c));
    full = helmert_backward(v, a.r(), a.n());
    a.apply(full, image);
    out.residuals[c] = (helmert_forward(image, a.r(), a.n()) - eig.eigenvalues[c] * v).norm();
  }
  return out;
}

TensorLiftOperator::TensorLiftOperator(WeightSystem ws, PermutationFamily pf)
    : ws_(std::move(ws)), pf_(std::move(pf)) {
  check_compatible(ws_, pf_);
}

void TensorLiftOperator::apply(const CVector& in, CVector& out) const {
  if (in.size() != dim()) {
    throw DimensionMismatch("tensor matvec: vector has length " + std::to_string(in.size()) +
                            ", expected r*n^2 = " + std::to_string(dim()));
  }
  out.resize(dim());
  const auto& perms = pf_.perms;
  const Eigen::Index n = pf_.n;
  apply_blocks(ws_, n * n, in, out, [&perms, n](int i, Eigen::Index u) {
    const auto& p = perms[static_cast<size_t>(i)];
    const auto x = static_cast<size_t>(u / n);
    const auto y = static_cast<size_t>(u % n);
    return static_cast<Eigen::Index>(p[x]) * n + p[y];
  });
}

CVector TensorLiftOperator::apply(const CVector& in) const {
  CVector out;
  apply(in, out);
  return out;
}

TensorLiftOperator build_tensor(const WeightSystem& ws, const PermutationFamily& pf) {
  return TensorLiftOperator(ws, pf);
}

void project_H0_tensor(CVector& v, int r, int n) {
  const Eigen::Index nn = n;
  for (int b = 0; b < r; ++b) {
    Complex diag = 0.0;
    Complex total = 0.0;
    for (Eigen::Index u = 0; u < nn * nn; ++u) total += v[u * r + b];
    for (Eigen::Index x = 0; x < nn; ++x) diag += v[(x * nn + x) * r + b];
    const Complex off = total - diag;
    const Complex diag_mean = diag / static_cast<double>(nn);
    const Complex off_mean =
        nn > 1 ? off / static_cast<double>(nn * nn - nn) : Complex(0.0);
    for (Eigen::Index x = 0; x < nn; ++x)
      for (Eigen::Index y = 0; y < nn; ++y)
        v[(x * nn + y) * r + b] -= (x == y) ? diag_mean : off_mean;
  }
}

ExtremeEigs extreme_eigs_H0_tensor(const TensorLiftOperator& a2, int k,
                                   double tol, std::uint64_t seed) {
  // S_i (x) S_i inherits sigma_{i*} = sigma_i^{-1}; checked on the factors.
  require_self_adjoint(a2.weights(), a2.perms());
  LanczosOptions opts;
  opts.k = k;
  opts.tol = tol;
  opts.seed = seed;
  const int r = a2.r();
  const int n = a2.n();
  return lanczos_extremes([&a2](const CVector& in, CVector& out) { a2.apply(in, out); },
                          [r, n](CVector& v) { project_H0_tensor(v, r, n); }, a2.dim(),
                          opts);
}

}  // namespace liftspec

#include "liftspec/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "liftspec/errors.hpp"
#include "liftspec/rng.hpp"

namespace liftspec {

namespace {

// Two passes of classical Gram-Schmidt; returns the accumulated coefficients.
CVector orthogonalize(const std::vector<CVector>& basis, CVector& w) {
  CVector h = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (int pass = 0; pass < 2; ++pass) {
    for (size_t i = 0; i < basis.size(); ++i) {
      const Complex c = basis[i].dot(w);
      h[static_cast<Eigen::Index>(i)] += c;
      w -= c * basis[i];
    }
  }
  return h;
}

// Random direction orthogonal to the basis and inside the projector range;
// empty when the reachable space is exhausted.
bool fresh_direction(const std::vector<CVector>& basis, const Projector& project,
                     Eigen::Index dim, Rng& rng, CVector& out) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    out = random_unit_vector(dim, rng);
    project(out);
    orthogonalize(basis, out);
    project(out);
    const double nrm = out.norm();
    if (nrm > 1e-8) {
      out /= nrm;
      return true;
    }
  }
  return false;
}

CVector combine(const std::vector<CVector>& basis, const CMatrix& y, Eigen::Index col) {
  CVector v = CVector::Zero(basis.front().size());
  for (size_t i = 0; i < basis.size(); ++i) v += y(static_cast<Eigen::Index>(i), col) * basis[i];
  return v;
}

}  // namespace

ExtremeEigs lanczos_extremes(const LinearMap& apply, const Projector& project,
                             Eigen::Index dim, const LanczosOptions& opts) {
  if (opts.k < 1) throw InvalidArgument("lanczos: k must be >= 1");
  if (dim < 1) throw InvalidArgument("lanczos: empty space");
  const int k = opts.k;
  const int m = static_cast<int>(std::min<Eigen::Index>(
      dim, opts.basis_size > 0 ? opts.basis_size : std::max(4 * k + 24, 40)));
  const int restart_cap =
      opts.max_restarts > 0
          ? opts.max_restarts
          : std::max(1, static_cast<int>(std::ceil(
                            10.0 * k * std::log(std::max<double>(dim, 2.0)))));

  Rng rng(opts.seed);
  ExtremeEigs out;
  std::vector<CVector> basis;
  basis.reserve(static_cast<size_t>(m) + 1);
  CMatrix t = CMatrix::Zero(m, m);

  CVector v;
  if (!fresh_direction(basis, project, dim, rng, v)) {
    throw InvalidArgument("lanczos: projector range is empty");
  }
  basis.push_back(v);

  CVector w(dim);
  for (int restart = 0;; ++restart) {
    double beta = 0.0;
    bool exhausted = false;
    CVector resid;
    for (int j = static_cast<int>(basis.size()) - 1;; ++j) {
      apply(basis[static_cast<size_t>(j)], w);
      ++out.matvecs;
      project(w);
      const CVector h = orthogonalize(basis, w);
      for (int i = 0; i <= j; ++i) {
        t(i, j) = h[i];
        t(j, i) = std::conj(h[i]);
      }
      t(j, j) = h[j].real();
      beta = w.norm();
      if (j + 1 == m) {
        resid = w;
        break;
      }
      const double scale = std::max(1.0, t.topLeftCorner(j + 1, j + 1).cwiseAbs().maxCoeff());
      if (beta <= 1e-12 * scale) {
        // Invariant subspace found: continue in a fresh direction, or stop if
        // the whole projected space has been spanned.
        beta = 0.0;
        CVector fresh;
        if (!fresh_direction(basis, project, dim, rng, fresh)) {
          exhausted = true;
          break;
        }
        basis.push_back(std::move(fresh));
      } else {
        basis.push_back(w / beta);
      }
    }

    const int size = static_cast<int>(basis.size());
    const CMatrix h = 0.5 * (t.topLeftCorner(size, size) +
                             t.topLeftCorner(size, size).adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    const Eigen::VectorXd theta = eig.eigenvalues();
    const CMatrix y = eig.eigenvectors();

    const int kl = std::min(k, size);
    const int kh = std::min(k, size);
    auto estimate = [&](int c) { return exhausted ? 0.0 : std::abs(beta * y(size - 1, c)); };
    bool converged = true;
    for (int c = 0; c < kl; ++c) converged = converged && estimate(c) <= 0.5 * opts.tol;
    for (int c = size - kh; c < size; ++c) converged = converged && estimate(c) <= 0.5 * opts.tol;

    if (converged || exhausted || restart >= restart_cap) {
      auto certify = [&](int c) {
        RitzPair p;
        p.value = theta[c];
        p.vector = combine(basis, y, c);
        p.vector /= p.vector.norm();
        CVector av(dim);
        apply(p.vector, av);
        ++out.matvecs;
        project(av);
        p.residual = (av - p.value * p.vector).norm();
        return p;
      };
      out.lowest.clear();
      out.highest.clear();
      for (int c = 0; c < kl; ++c) out.lowest.push_back(certify(c));
      for (int c = size - 1; c >= size - kh; --c) out.highest.push_back(certify(c));
      out.restarts = restart;
      bool certified = true;
      for (const auto& p : out.lowest) certified = certified && p.residual <= opts.tol;
      for (const auto& p : out.highest) certified = certified && p.residual <= opts.tol;
      if (certified) return out;
      if (restart >= restart_cap || exhausted) {
        double worst = 0.0;
        for (const auto& p : out.lowest) worst = std::max(worst, p.residual);
        for (const auto& p : out.highest) worst = std::max(worst, p.residual);
        throw NoConvergence("lanczos: residual " + std::to_string(worst) +
                                " above tolerance after " + std::to_string(restart) +
                                " restarts",
                            worst, out.matvecs);
      }
    }

    // Thick restart: keep Ritz vectors from both ends plus the residual
    // direction.
    const int keep_each = std::max(1, std::min(k + m / 6, (size - 1) / 2));
    std::vector<int> keep;
    for (int c = 0; c < keep_each; ++c) keep.push_back(c);
    for (int c = size - keep_each; c < size; ++c)
      if (c >= keep_each) keep.push_back(c);
    std::vector<CVector> next;
    next.reserve(static_cast<size_t>(m) + 1);
    for (int c : keep) next.push_back(combine(basis, y, c));
    t.setZero();
    for (size_t c = 0; c < keep.size(); ++c) {
      const auto idx = static_cast<Eigen::Index>(c);
      t(idx, idx) = theta[keep[c]];
    }
    basis = std::move(next);
    CVector dir;
    if (beta > 0.0) {
      dir = resid / beta;
      orthogonalize(basis, dir);
      const double nrm = dir.norm();
      if (nrm > 1e-8) {
        basis.push_back(dir / nrm);
        continue;
      }
    }
    if (!fresh_direction(basis, project, dim, rng, dir)) {
      throw NoConvergence("lanczos: cannot extend basis after restart", 0.0, out.matvecs);
    }
    basis.push_back(std::move(dir));
  }
}

}  // namespace liftspec

#include "liftspec/freelimit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "liftspec/errors.hpp"

namespace liftspec {

namespace {

double frob(const std::vector<CMatrix>& x) {
  double s = 0.0;
  for (const auto& b : x) s += b.squaredNorm();
  return std::sqrt(s);
}

Complex inner(const std::vector<CMatrix>& x, const std::vector<CMatrix>& y) {
  Complex s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += (x[i].adjoint() * y[i]).trace();
  return s;
}

double psd_norm(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<CMatrix> CPMapL::apply(const std::vector<CMatrix>& x) const {
  if (static_cast<int>(x.size()) != d())
    throw DimensionMismatch("L: expected " + std::to_string(d()) + " blocks");
  std::vector<CMatrix> p(x.size());
  for (size_t j = 0; j < x.size(); ++j) p[j] = b[j] * x[j] * b[j].adjoint();
  std::vector<CMatrix> out(x.size(), CMatrix::Zero(r, r));
  for (int i = 0; i < d(); ++i) {
    const int is = star[static_cast<size_t>(i)];
    for (int j = 0; j < d(); ++j)
      if (j != is) out[static_cast<size_t>(i)] += p[static_cast<size_t>(j)];
  }
  return out;
}

CPMapL build_L(std::vector<CMatrix> b, std::vector<int> star) {
  if (b.size() != star.size()) throw DimensionMismatch("build_L: star and weights differ in size");
  CPMapL l;
  l.r = b.empty() ? 1 : static_cast<int>(b.front().rows());
  for (const auto& m : b)
    if (m.rows() != l.r || m.cols() != l.r)
      throw DimensionMismatch("build_L: blocks must all be r x r");
  for (int s : star)
    if (s < 0 || s >= static_cast<int>(star.size()))
      throw IndexOutOfRange("build_L: star index out of range");
  l.b = std::move(b);
  l.star = std::move(star);
  return l;
}

CPRadius cp_radius(const CPMapL& l, double tol, int max_iter) {
  CPRadius out;
  const int d = l.d();
  if (d == 0) return out;
  const int r = l.r;
  std::vector<CMatrix> x(static_cast<size_t>(d), CMatrix::Identity(r, r));
  {
    const double nx = frob(x);
    for (auto& blk : x) blk /= nx;
  }
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<CMatrix> y = l.apply(x);
    const double rq = inner(x, y).real();
    double res2 = 0.0;
    for (size_t i = 0; i < y.size(); ++i) res2 += (y[i] - rq * x[i]).squaredNorm();
    const double res = std::sqrt(res2);
    out.rho = rq;
    out.residual = res;
    out.iterations = it;
    const double scale = std::max(rq, 1e-300);
    if (std::abs(rq - prev) <= tol * scale && res <= 1e3 * tol * scale) {
      out.x = x;
      return out;
    }
    prev = rq;
    // A shift of half the current estimate breaks periodicity on the circle.
    const double shift = 0.5 * std::max(rq, 0.0);
    for (size_t i = 0; i < y.size(); ++i) {
      y[i] += shift * x[i];
      y[i] = 0.5 * (y[i] + y[i].adjoint()).eval();
    }
    const double ny = frob(y);
    if (ny == 0.0) {
      out.rho = 0.0;
      out.x = x;
      return out;
    }
    for (auto& blk : y) blk /= ny;
    x.swap(y);
  }
  throw NoConvergence("cp_radius: power iteration did not converge (residual " +
                          std::to_string(out.residual) + ")",
                      out.residual, out.iterations);
}

CMatrix dense_matrix(const CPMapL& l) {
  const int r = l.r;
  const int rr = r * r;
  const int d = l.d();
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d) * rr, static_cast<Eigen::Index>(d) * rr);
  for (int j = 0; j < d; ++j) {
    const CMatrix& bj = l.b[static_cast<size_t>(j)];
    // vec(b X b^*) = (conj(b) (x) b) vec(X).
    CMatrix k(rr, rr);
    for (int c = 0; c < r; ++c)
      for (int c2 = 0; c2 < r; ++c2)
        k.block(c * r, c2 * r, r, r) = std::conj(bj(c, c2)) * bj;
    for (int i = 0; i < d; ++i)
      if (j != l.star[static_cast<size_t>(i)]) m.block(i * rr, j * rr, rr, rr) = k;
  }
  return m;
}

double rho_b_star(const WeightSystem& ws) {
  require_valid(ws);
  if (ws.d() == 0) return 0.0;
  return std::sqrt(std::max(0.0, cp_radius(build_L(ws.weights, ws.star)).rho));
}

std::vector<std::vector<CMatrix>> gelfand_blocks(const WeightSystem& ws, int n_max) {
  require_valid(ws);
  if (n_max < 0) throw InvalidArgument("gelfand: n_max must be >= 0");
  const CPMapL l = build_L(ws.weights, ws.star);
  std::vector<std::vector<CMatrix>> z;
  z.emplace_back(static_cast<size_t>(ws.d()), CMatrix::Identity(ws.r, ws.r));
  for (int n = 1; n <= n_max; ++n) z.push_back(l.apply(z.back()));
  return z;
}

std::vector<double> gelfand_crosscheck(const WeightSystem& ws, int n_max) {
  if (n_max < 1) throw InvalidArgument("gelfand_crosscheck: n_max must be >= 1");
  const auto z = gelfand_blocks(ws, n_max);
  std::vector<double> out;
  for (int n = 1; n <= n_max; ++n) {
    double top = 0.0;
    for (const auto& blk : z[static_cast<size_t>(n)]) top = std::max(top, psd_norm(blk));
    out.push_back(std::pow(top, 1.0 / (2.0 * n)));
  }
  return out;
}

}  // namespace liftspec

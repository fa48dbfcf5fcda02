#include "liftspec/proofchecks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "liftspec/errors.hpp"
#include "liftspec/rng.hpp"

namespace liftspec {

namespace {

void check_params(const BinTParams& t) {
  if (t.k < 0) throw InvalidArgument("bint: k must be >= 0");
  if (!(t.p >= 0.0 && t.p <= 1.0)) throw InvalidArgument("bint: p must lie in [0, 1]");
  if (!(t.q > 0.0)) throw InvalidArgument("bint: q must be > 0");
}

// Neumaier summation.
struct Sum {
  long double s = 0.0L;
  long double c = 0.0L;
  void add(long double v) {
    const long double t = s + v;
    if (std::fabs(s) >= std::fabs(v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  }
  long double value() const { return s + c; }
};

double min_block_eig(const std::vector<CMatrix>& x) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& b : x) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (b + b.adjoint()), Eigen::EigenvaluesOnly);
    worst = std::min(worst, eig.eigenvalues().minCoeff());
  }
  return worst;
}

std::vector<CMatrix> random_psd_blocks(int d, int r, Rng& rng) {
  std::vector<CMatrix> x;
  for (int i = 0; i < d; ++i) {
    const CMatrix g = random_complex_matrix(r, r, rng);
    x.push_back(g * g.adjoint());
  }
  return x;
}

CVector vec_blocks(const std::vector<CMatrix>& x, int r) {
  const int rr = r * r;
  CVector v(static_cast<Eigen::Index>(x.size()) * rr);
  for (size_t i = 0; i < x.size(); ++i)
    v.segment(static_cast<Eigen::Index>(i) * rr, rr) = x[i].reshaped();
  return v;
}

std::vector<CMatrix> unvec_blocks(const CVector& v, int r, int d) {
  const int rr = r * r;
  std::vector<CMatrix> x;
  for (int i = 0; i < d; ++i) x.push_back(v.segment(static_cast<Eigen::Index>(i) * rr, rr).reshaped(r, r));
  return x;
}

}  // namespace

bool bint_precondition(const BinTParams& t) {
  check_params(t);
  const long double p = t.p;
  const long double q = t.q;
  const long double lhs = 8.0L * (1.0L - p - p / q) * (1.0L - p - p / q);
  const long double mid = 4.0L * t.z * static_cast<long double>(t.k) * t.k * std::sqrt(q);
  return lhs <= mid && mid <= 1.0L;
}

long double bint_expectation(const BinTParams& t) {
  check_params(t);
  const long double p = t.p;
  const long double inv_sqrt_q = 1.0L / std::sqrt(static_cast<long double>(t.q));
  const long double z = t.z;
  Sum total;
  long double binom = 1.0L;  // C(k, s)
  long double prod = 1.0L;   // prod_{n=0}^{2s-1} (1/sqrt(q) - z n)
  for (int s = 0; s <= t.k; ++s) {
    if (s > 0) {
      binom = binom * (t.k - s + 1) / s;
      prod *= (inv_sqrt_q - z * (2 * s - 2)) * (inv_sqrt_q - z * (2 * s - 1));
    }
    const long double weight =
        binom * std::pow(p, static_cast<long double>(s)) *
        std::pow(1.0L - p, static_cast<long double>(t.k - s));
    const long double term = (s % 2 == 0 ? 1.0L : -1.0L) * weight * prod;
    if (!std::isfinite(term))
      throw NumericalError("bint_expectation: term overflow");
    total.add(term);
  }
  return total.value();
}

long double bint_bound(const BinTParams& t) {
  check_params(t);
  const long double base = 3.0L * std::sqrt(2.0L * t.z) * t.k *
                           std::pow(static_cast<long double>(t.q), 0.25L);
  return 8.0L * std::pow(base, static_cast<long double>(t.k));
}

KreinRutmanReport krein_rutman_check(const CPMapL& l, std::uint64_t seed) {
  const int r = l.r;
  const int d = l.d();
  if (d * r * r > kMaxKreinRutmanDim)
    throw DimensionTooLarge("krein_rutman_check: d r^2 = " + std::to_string(d * r * r) +
                            " exceeds " + std::to_string(kMaxKreinRutmanDim));
  KreinRutmanReport rep;
  if (d == 0) {
    rep.passed = true;
    return rep;
  }
  const CPRadius cp = cp_radius(l);
  rep.rho_power = cp.rho;
  const CMatrix m = dense_matrix(l);
  for (const Complex& ev : general_eig_dense(m)) rep.rho_dense = std::max(rep.rho_dense, std::abs(ev));
  rep.rho_error = std::abs(rep.rho_power - rep.rho_dense);

  const CVector xv = vec_blocks(cp.x, r);
  rep.eigvec_residual = (m * xv - cp.rho * xv).norm();
  rep.min_psd_eig = min_block_eig(cp.x);

  Rng rng(seed);
  const CMatrix madj = m.adjoint();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (int probe = 0; probe < 20; ++probe) {
    const auto x = random_psd_blocks(d, r, rng);
    double xs = 0.0;
    for (const auto& b : x) xs = std::max(xs, b.cwiseAbs().maxCoeff());
    const double floor = -1e-12 * scale * xs * d;
    if (min_block_eig(unvec_blocks(m * vec_blocks(x, r), r, d)) < floor) ++rep.psd_failures;
    if (min_block_eig(unvec_blocks(madj * vec_blocks(x, r), r, d)) < floor) ++rep.adjoint_failures;
  }
  const double rho_scale = std::max(1.0, rep.rho_dense);
  rep.passed = rep.rho_error <= 1e-8 * rho_scale && rep.min_psd_eig >= -1e-9 &&
               rep.eigvec_residual <= 1e-6 * rho_scale && rep.psd_failures == 0 &&
               rep.adjoint_failures == 0;
  return rep;
}

}  // namespace liftspec

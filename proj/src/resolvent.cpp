#include "liftspec/freelimit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include "liftspec/errors.hpp"

namespace liftspec {

namespace {

constexpr int kDampedBudget = 300;
constexpr int kNewtonSteps = 40;
constexpr double kMinDamping = 1.0 / 256.0;
constexpr double kLevelTol = 1e-7;
constexpr int kRateWindow = 20;

// Stack storage for the usual small block sizes.
using SmallMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

// Structural nonzeros, column-major r x r.
using Pattern = std::vector<char>;

Pattern pattern_of(const CMatrix& m) {
  Pattern out(static_cast<size_t>(m.size()));
  for (Eigen::Index k = 0; k < m.size(); ++k) out[static_cast<size_t>(k)] = m.data()[k] != Complex(0.0);
  return out;
}

Pattern bool_product(const Pattern& a, const Pattern& b, int r) {
  Pattern out(static_cast<size_t>(r * r), 0);
  for (int c = 0; c < r; ++c)
    for (int k = 0; k < r; ++k)
      if (b[c * r + k])
        for (int p = 0; p < r; ++p)
          if (a[k * r + p]) out[c * r + p] = 1;
  return out;
}

void unite(Pattern& a, const Pattern& b) {
  for (size_t k = 0; k < a.size(); ++k) a[k] = a[k] || b[k];
}

// Entries that can be nonzero in an inverse: the reflexive transitive closure.
Pattern inverse_pattern(Pattern m, int r) {
  for (int p = 0; p < r; ++p) m[p * r + p] = 1;
  for (int k = 0; k < r; ++k)
    for (int c = 0; c < r; ++c)
      if (m[c * r + k])
        for (int p = 0; p < r; ++p)
          if (m[k * r + p]) m[c * r + p] = 1;
  return m;
}

// In-place Gauss-Jordan with partial pivoting.
template <class Mat>
bool invert_in_place(Mat& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> perm(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::norm(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::norm(m(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > 0.0)) return false;
    perm[static_cast<size_t>(k)] = p;
    if (p != k) m.row(k).swap(m.row(p));
    const Complex inv = 1.0 / m(k, k);
    m(k, k) = 1.0;
    m.row(k) *= inv;
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const Complex f = m(i, k);
      if (f == Complex(0.0)) continue;
      m(i, k) = 0.0;
      m.row(i) -= f * m.row(k);
    }
  }
  for (int k = n - 1; k >= 0; --k)
    if (perm[static_cast<size_t>(k)] != k) m.col(k).swap(m.col(perm[static_cast<size_t>(k)]));
  return m.allFinite();
}

struct Entry {
  int p, s;
  Complex x;
};

template <class Mat>
struct System {
  int r = 0;
  int d = 0;
  std::vector<int> star;
  std::vector<Mat> a;
  std::vector<std::vector<Entry>> nz;  // nonzeros of a_j
  std::vector<char> sparse;            // a_j g a_{j*} done entrywise
  std::vector<Pattern> support;        // of gamma_i
  std::vector<char> diagonal;          // support of gamma_i is diagonal
  Mat a0;
  Complex z;

  explicit System(const WeightSystem& ws)
      : r(ws.r), d(ws.d()), star(ws.star), a0(ws.a0) {
    for (const auto& w : ws.weights) {
      a.emplace_back(w);
      std::vector<Entry> e;
      for (int c = 0; c < r; ++c)
        for (int p = 0; p < r; ++p)
          if (w(p, c) != Complex(0.0)) e.push_back({p, c, w(p, c)});
      nz.push_back(std::move(e));
    }
    for (int j = 0; j < d; ++j)
      sparse.push_back(nz[j].size() * nz[star[j]].size() <= static_cast<size_t>(r * r * r));
    find_support(ws);
  }

  // Smallest family of patterns closed under the map and containing Id.
  void find_support(const WeightSystem& ws) {
    std::vector<Pattern> pa;
    for (const auto& w : ws.weights) pa.push_back(pattern_of(w));
    Pattern id(static_cast<size_t>(r * r), 0);
    for (int p = 0; p < r; ++p) id[p * r + p] = 1;
    support.assign(static_cast<size_t>(d), id);
    for (bool changed = true; changed;) {
      changed = false;
      Pattern base = id;
      unite(base, pattern_of(ws.a0));
      for (int j = 0; j < d; ++j)
        unite(base, bool_product(bool_product(pa[j], support[j], r), pa[star[j]], r));
      for (int i = 0; i < d; ++i) {
        Pattern m = base;
        unite(m, bool_product(bool_product(pa[star[i]], support[star[i]], r), pa[i], r));
        Pattern next = inverse_pattern(std::move(m), r);
        unite(next, support[i]);
        if (next != support[i]) {
          support[i] = std::move(next);
          changed = true;
        }
      }
    }
    for (int i = 0; i < d; ++i) {
      bool diag = true;
      for (int c = 0; c < r; ++c)
        for (int p = 0; p < r; ++p)
          if (p != c && support[i][c * r + p]) diag = false;
      diagonal.push_back(diag);
    }
  }

  // out += sign * a_j g a_{j*}.
  void add_sandwich(Mat& out, int j, const Mat& g, double sign) const {
    const int js = star[j];
    if (sparse[j]) {
      for (const Entry& u : nz[j])
        for (const Entry& v : nz[js]) out(u.p, v.s) += sign * u.x * g(u.s, v.p) * v.x;
      return;
    }
    const Mat ag = a[j] * g;
    out.noalias() += sign * (ag * a[js]);
  }

  // z - a0 - sum_j a_j gamma_j a_{j*}.
  Mat base(const std::vector<Mat>& g) const {
    Mat t = -a0;
    t.diagonal().array() += z;
    for (int j = 0; j < d; ++j) add_sandwich(t, j, g[j], -1.0);
    return t;
  }

  Mat m_block(const Mat& b, const std::vector<Mat>& g, int i) const {
    Mat m = b;
    add_sandwich(m, star[i], g[star[i]], 1.0);
    return m;
  }

  // f = F(g); returns false on a singular or non-finite inverse.
  bool map(const std::vector<Mat>& g, std::vector<Mat>& f) const {
    const Mat b = base(g);
    for (int i = 0; i < d; ++i) {
      Mat m = m_block(b, g, i);
      if (diagonal[i]) {
        f[i].setZero(r, r);
        for (int p = 0; p < r; ++p) {
          if (m(p, p) == Complex(0.0)) return false;
          f[i](p, p) = 1.0 / m(p, p);
        }
        if (!f[i].allFinite()) return false;
        continue;
      }
      if (!invert_in_place(m)) return false;
      f[i] = std::move(m);
    }
    return true;
  }

  // max_i ||g_i - f_i||_F / max(1, max_i ||g_i||_F).
  static double residual(const std::vector<Mat>& g, const std::vector<Mat>& f) {
    double diff = 0.0;
    double scale = 1.0;
    for (size_t i = 0; i < g.size(); ++i) {
      diff = std::max(diff, (g[i] - f[i]).norm());
      scale = std::max(scale, g[i].norm());
    }
    return diff / scale;
  }
};

template <class Mat>
struct Level {
  std::vector<Mat> g;
  double residual = 0.0;
  int iterations = 0;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Damped iteration with step halving on residual increase. With `stall`,
// gives up early once the observed contraction rate cannot reach tol within
// the budget. Returns true when the residual reaches tol.
template <class Mat>
bool damped(const System<Mat>& sys, Level<Mat>& s, double tol, int budget, double alpha0,
            bool stall) {
  std::vector<Mat> f(s.g.size());
  std::vector<Mat> ft(s.g.size());
  std::vector<Mat> trial(s.g.size());
  s.residual = sys.map(s.g, f) ? System<Mat>::residual(s.g, f) : kInf;
  if (!std::isfinite(s.residual)) return false;
  double alpha = alpha0;
  double window_start = s.residual;
  for (int it = 0; it < budget; ++it) {
    if (s.residual <= tol) return true;
    if (stall && it > 0 && it % kRateWindow == 0) {
      const double rate = std::pow(s.residual / window_start, 1.0 / kRateWindow);
      if (!(rate < 1.0) || std::log(tol / s.residual) / std::log(rate) > budget - it) return false;
      window_start = s.residual;
    }
    for (size_t i = 0; i < s.g.size(); ++i) trial[i] = (1.0 - alpha) * s.g[i] + alpha * f[i];
    ++s.iterations;
    const double rt = sys.map(trial, ft) ? System<Mat>::residual(trial, ft) : kInf;
    if (!(rt <= s.residual) && alpha > kMinDamping) {
      alpha = std::max(kMinDamping, 0.5 * alpha);
      continue;
    }
    if (!std::isfinite(rt)) return false;
    s.g.swap(trial);
    f.swap(ft);
    s.residual = rt;
    if (alpha < alpha0) alpha = std::min(alpha0, 1.25 * alpha);
  }
  return s.residual <= tol;
}

// Newton on R_i = gamma_i M_i - I. With vec column-major,
//   dR_i = dgamma_i M_i - gamma_i sum_{j != i*} a_j dgamma_j a_{j*}
// gives blocks (M_i^T (x) I) on the diagonal and -(a_{j*}^T (x) gamma_i a_j).
// Newton on R_i = gamma_i M_i - I over the support entries. With vec
// column-major,
//   dR_i = dgamma_i M_i - gamma_i sum_{j != i*} a_j dgamma_j a_{j*}
// gives blocks (M_i^T (x) I) on the diagonal and -(a_{j*}^T (x) gamma_i a_j).
template <class Mat>
bool newton(const System<Mat>& sys, Level<Mat>& s, double tol) {
  const int r = sys.r;
  const int d = sys.d;
  const int rr = r * r;
  std::vector<int> pos(static_cast<size_t>(d * rr), -1);
  std::vector<int> full;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < rr; ++k)
      if (sys.support[i][k]) {
        pos[i * rr + k] = static_cast<int>(full.size());
        full.push_back(i * rr + k);
      }
  const int dim = static_cast<int>(full.size());
  CMatrix jac(dim, dim);
  CVector rhs(dim);
  std::vector<lapack_int> piv(static_cast<size_t>(dim));
  std::vector<Mat> f(s.g.size());
  std::vector<Mat> trial(s.g.size());
  auto add = [&](int row, int col, Complex v) {
    const int a = pos[row];
    const int b = pos[col];
    if (a >= 0 && b >= 0) jac(a, b) += v;
  };
  for (int step = 0; step < kNewtonSteps; ++step) {
    if (s.residual <= tol) return true;
    const Mat b = sys.base(s.g);
    jac.setZero();
    for (int i = 0; i < d; ++i) {
      const Mat m = sys.m_block(b, s.g, i);
      Mat res = s.g[i] * m;
      res.diagonal().array() -= 1.0;
      for (int c = 0; c < r; ++c)
        for (int p = 0; p < r; ++p)
          if (pos[i * rr + c * r + p] >= 0) rhs[pos[i * rr + c * r + p]] = -res(p, c);
      // (M_i^T (x) I): entry ((c, p), (c', p')) = M_i(c', c) delta(p, p').
      for (int c = 0; c < r; ++c)
        for (int c2 = 0; c2 < r; ++c2) {
          if (m(c2, c) == Complex(0.0)) continue;
          for (int p = 0; p < r; ++p) add(i * rr + c * r + p, i * rr + c2 * r + p, m(c2, c));
        }
      for (int j = 0; j < d; ++j) {
        if (j == sys.star[i]) continue;
        const Mat left = s.g[i] * sys.a[j];
        const Mat& right = sys.a[sys.star[j]];
        // (right^T (x) left): entry ((c, p), (c', p')) = right(c', c) left(p, p').
        for (int c = 0; c < r; ++c)
          for (int c2 = 0; c2 < r; ++c2) {
            const Complex rc = right(c2, c);
            if (rc == Complex(0.0)) continue;
            for (int p = 0; p < r; ++p)
              for (int p2 = 0; p2 < r; ++p2) {
                const Complex l = left(p, p2);
                if (l != Complex(0.0)) add(i * rr + c * r + p, j * rr + c2 * r + p2, -rc * l);
              }
          }
      }
    }
    const lapack_int info = LAPACKE_zgesv(
        LAPACK_COL_MAJOR, dim, 1, reinterpret_cast<lapack_complex_double*>(jac.data()), dim,
        piv.data(), reinterpret_cast<lapack_complex_double*>(rhs.data()), dim);
    if (info != 0 || !rhs.allFinite()) return false;
    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls, t *= 0.5) {
      trial = s.g;
      for (int k = 0; k < dim; ++k) {
        const int e = full[static_cast<size_t>(k)];
        trial[e / rr]((e % rr) % r, (e % rr) / r) += t * rhs[k];
      }
      if (!sys.map(trial, f)) continue;
      const double rt = System<Mat>::residual(trial, f);
      if (rt < s.residual) {
        s.g.swap(trial);
        s.residual = rt;
        improved = true;
        break;
      }
    }
    ++s.iterations;
    if (!improved) return s.residual <= tol;
  }
  return s.residual <= tol;
}

template <class Mat>
bool herglotz(const std::vector<Mat>& g) {
  double scale = 1.0;
  std::vector<CMatrix> blocks;
  for (const auto& gi : g) {
    scale = std::max(scale, gi.cwiseAbs().maxCoeff());
    blocks.emplace_back(gi);
  }
  return blocks.empty() || min_neg_imag_eig(blocks) >= -1e-9 * scale;
}

void check_schedule(const std::vector<double>& etas) {
  if (etas.empty()) throw InvalidArgument("solve_resolvent: empty eta schedule");
  for (size_t k = 0; k < etas.size(); ++k) {
    if (!(etas[k] >= 0.0) || !std::isfinite(etas[k]))
      throw InvalidArgument("solve_resolvent: eta values must be finite and >= 0");
    if (k > 0 && !(etas[k] < etas[k - 1]))
      throw InvalidArgument("solve_resolvent: eta schedule must be strictly decreasing");
  }
}

struct Outcome {
  ResolventState state;
  std::string failure;  // empty on success
  bool singular = false;
};

template <class Mat>
Outcome solve_levels(const WeightSystem& ws, Complex mu, const std::vector<double>& etas,
                     const ResolventOptions& opts) {
  System<Mat> sys(ws);
  const int r = ws.r;
  const int d = ws.d();
  Outcome out;
  Level<Mat> s;
  const Complex z0 = mu + Complex(0.0, etas.front());
  if (z0 == Complex(0.0)) throw InvalidArgument("solve_resolvent: z = 0 at the first level");
  s.g.assign(static_cast<size_t>(d), Mat(CMatrix::Identity(r, r) / z0));

  sys.z = mu + Complex(0.0, etas.back());
  int budget_left = opts.max_iter;
  for (size_t k = 0; d > 0 && k < etas.size(); ++k) {
    sys.z = mu + Complex(0.0, etas[k]);
    const bool last = k + 1 == etas.size();
    const double tol = last ? opts.tol : std::max(opts.tol, kLevelTol);
    const int before = s.iterations;
    bool ok = damped(sys, s, tol, std::min(kDampedBudget, budget_left), opts.damping, true);
    if (!ok) {
      Level<Mat> trial = s;
      if (newton(sys, trial, tol) &&
          (!ws.symmetric || sys.z.imag() <= 0.0 || herglotz(trial.g))) {
        s = std::move(trial);
        ok = true;
      } else {
        s.iterations = trial.iterations;
      }
    }
    budget_left -= s.iterations - before;
    if (!ok && budget_left > 0) {
      const int b2 = s.iterations;
      ok = damped(sys, s, tol, budget_left, opts.damping, false);
      budget_left -= s.iterations - b2;
    }
    if (!ok) {
      out.failure = "solve_resolvent: no convergence at eta = " + std::to_string(etas[k]) +
                    " (residual " + std::to_string(s.residual) + ")";
      break;
    }
  }
  out.state.z = sys.z;
  out.state.iterations = s.iterations;
  out.state.residual = d == 0 ? 0.0 : s.residual;
  for (const auto& gi : s.g) out.state.gammas.emplace_back(gi);
  try {
    out.state.g_oo = inv_fast(CMatrix(sys.base(s.g)));
    for (int i = 0; i < d; ++i)
      out.state.a_hats.push_back(ws.weights[static_cast<size_t>(i)] * out.state.gammas[static_cast<size_t>(i)]);
  } catch (const SingularMatrix& e) {
    out.failure = std::string("solve_resolvent: singular inverse: ") + e.what();
    out.singular = true;
    out.state.g_oo.resize(0, 0);
    out.state.a_hats.clear();
  }
  if (!std::isfinite(out.state.residual) && out.failure.empty()) {
    out.failure = "solve_resolvent: singular inverse in the iteration";
    out.singular = true;
  }
  out.state.converged = out.failure.empty();
  return out;
}

Outcome solve_core(const WeightSystem& ws, Complex mu, const ResolventOptions& opts) {
  require_valid(ws);
  if (!(opts.damping > 0.0 && opts.damping <= 1.0))
    throw InvalidArgument("solve_resolvent: damping must be in (0, 1]");
  if (!(opts.tol > 0.0)) throw InvalidArgument("solve_resolvent: tol must be > 0");
  const std::vector<double> etas =
      opts.eta_schedule.empty() ? default_eta_schedule(opts.eta_final) : opts.eta_schedule;
  check_schedule(etas);
  if (ws.r <= 8) return solve_levels<SmallMat>(ws, mu, etas, opts);
  return solve_levels<CMatrix>(ws, mu, etas, opts);
}

}  // namespace

std::vector<double> default_eta_schedule(double eta_final) {
  if (!(eta_final >= 0.0)) throw InvalidArgument("eta_final must be >= 0");
  std::vector<double> etas;
  for (double e = 1.0; e >= 1e-5 && e > eta_final; e *= 0.5) etas.push_back(e);
  etas.push_back(eta_final);
  return etas;
}

double fixed_point_residual(const WeightSystem& ws, Complex z,
                            const std::vector<CMatrix>& gammas) {
  if (static_cast<int>(gammas.size()) != ws.d())
    throw DimensionMismatch("fixed_point_residual: wrong number of gamma blocks");
  if (gammas.empty()) return 0.0;
  System<CMatrix> sys(ws);
  sys.z = z;
  std::vector<CMatrix> f(gammas.size());
  if (!sys.map(gammas, f)) throw SingularMatrix("fixed_point_residual: singular block");
  return System<CMatrix>::residual(gammas, f);
}

double min_neg_imag_eig(const std::vector<CMatrix>& ms) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& m : ms) {
    const CMatrix h = (m - m.adjoint()) * Complex(0.0, 0.5);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h, Eigen::EigenvaluesOnly);
    worst = std::min(worst, eig.eigenvalues().minCoeff());
  }
  return worst;
}

ResolventState solve_resolvent(const WeightSystem& ws, Complex mu,
                               const ResolventOptions& opts) {
  Outcome o = solve_core(ws, mu, opts);
  if (o.singular) throw SingularIteration(o.failure);
  if (!o.failure.empty())
    throw NoConvergence(o.failure, o.state.residual, o.state.iterations);
  return std::move(o.state);
}

ResolventState try_solve_resolvent(const WeightSystem& ws, Complex mu,
                                   const ResolventOptions& opts) {
  return solve_core(ws, mu, opts).state;
}

}  // namespace liftspec

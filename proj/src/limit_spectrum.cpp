#include "liftspec/freelimit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liftspec/errors.hpp"
#include "liftspec/parallel.hpp"

namespace liftspec {

namespace {

void require_symmetric(const WeightSystem& ws, const char* op) {
  require_valid(ws);
  if (!ws.symmetric)
    throw NotSelfAdjoint(std::string(op) + ": needs a symmetric weight system");
}

}  // namespace

MembershipResult is_in_limit_spectrum(const WeightSystem& ws, double mu,
                                      const MembershipOptions& opts) {
  require_symmetric(ws, "is_in_limit_spectrum");
  ResolventOptions ro;
  ro.eta_final = opts.eta_final;
  ro.tol = opts.tol;
  const ResolventState st = try_solve_resolvent(ws, mu, ro);

  MembershipResult m;
  m.iterations = st.iterations;
  m.residual = st.residual;
  m.converged = st.converged;
  const double eta = st.z.imag();
  if (st.g_oo.size() > 0) {
    m.im_tr_goo = -st.g_oo.trace().imag();
    m.atom_mass = eta * m.im_tr_goo / ws.r;
  }
  if (m.converged) {
    try {
      const CPRadius cp = cp_radius(build_L(st.a_hats, ws.star), 1e-10, 200000);
      m.rho_b_mu = std::sqrt(std::max(0.0, cp.rho));
    } catch (const NoConvergence&) {
      m.converged = false;
    }
  }
  if (m.converged) {
    m.member = m.rho_b_mu >= 1.0 - opts.rho_tol || m.atom_mass >= opts.atom_tol;
  } else {
    m.member = m.im_tr_goo / ws.r >= opts.density_tol;
  }
  return m;
}

ScanResult limit_spectrum_scan(const WeightSystem& ws, const ScanOptions& opts) {
  require_symmetric(ws, "limit_spectrum_scan");
  if (!(opts.grid_step > 0.0) || !(opts.refine_tol > 0.0))
    throw InvalidArgument("limit_spectrum_scan: grid_step and refine_tol must be > 0");
  double lo = opts.lo;
  double hi = opts.hi;
  if (lo == 0.0 && hi == 0.0) {
    const double bound = norm_bound(ws);
    lo = -bound - 2.0 * opts.grid_step;
    hi = bound + 2.0 * opts.grid_step;
  }
  if (!(lo < hi)) throw InvalidArgument("limit_spectrum_scan: empty range");
  const double step = opts.grid_step;
  const auto k_lo = static_cast<long long>(std::ceil(lo / step - 1e-9));
  const auto k_hi = static_cast<long long>(std::floor(hi / step + 1e-9));
  const long long count = k_hi - k_lo + 1;
  if (count > 10'000'000) throw InvalidArgument("limit_spectrum_scan: grid too fine");

  ScanResult out;
  out.rows.resize(static_cast<size_t>(count));
  parallel_for(static_cast<int>(count), opts.threads, [&](int k) {
    const double mu = static_cast<double>(k_lo + k) * step;
    out.rows[static_cast<size_t>(k)] = {mu, is_in_limit_spectrum(ws, mu, opts.membership)};
  });

  // Maximal runs of members.
  struct Run {
    int a, b;
  };
  std::vector<Run> runs;
  for (int k = 0; k < static_cast<int>(count); ++k) {
    if (!out.rows[static_cast<size_t>(k)].m.member) continue;
    if (!runs.empty() && runs.back().b == k - 1) {
      runs.back().b = k;
    } else {
      runs.push_back({k, k});
    }
  }

  // Bisection tasks: one per run endpoint that has a non-member neighbour.
  struct Edge {
    double in, out;
    double value = 0.0;
    std::vector<ScanRow> rows;
  };
  std::vector<Edge> edges;
  std::vector<std::pair<int, int>> run_edges;
  for (const auto& run : runs) {
    int left = -1;
    int right = -1;
    if (run.a > 0) {
      left = static_cast<int>(edges.size());
      edges.push_back({out.rows[static_cast<size_t>(run.a)].mu,
                       out.rows[static_cast<size_t>(run.a - 1)].mu, 0.0, {}});
    }
    if (run.b + 1 < count) {
      right = static_cast<int>(edges.size());
      edges.push_back({out.rows[static_cast<size_t>(run.b)].mu,
                       out.rows[static_cast<size_t>(run.b + 1)].mu, 0.0, {}});
    }
    run_edges.emplace_back(left, right);
  }
  parallel_for(static_cast<int>(edges.size()), opts.threads, [&](int e) {
    Edge& edge = edges[static_cast<size_t>(e)];
    double in = edge.in;
    double outside = edge.out;
    while (std::abs(in - outside) > opts.refine_tol) {
      const double mid = 0.5 * (in + outside);
      const MembershipResult m = is_in_limit_spectrum(ws, mid, opts.membership);
      edge.rows.push_back({mid, m});
      (m.member ? in : outside) = mid;
    }
    edge.value = 0.5 * (in + outside);
  });

  std::vector<Interval> intervals;
  std::vector<double> points;
  for (size_t i = 0; i < runs.size(); ++i) {
    const auto [le, re] = run_edges[i];
    const double left = le >= 0 ? edges[static_cast<size_t>(le)].value
                                : out.rows[static_cast<size_t>(runs[i].a)].mu;
    const double right = re >= 0 ? edges[static_cast<size_t>(re)].value
                                 : out.rows[static_cast<size_t>(runs[i].b)].mu;
    const bool narrow = runs[i].b - runs[i].a <= 2;
    if (narrow && right - left <= 4.0 * opts.refine_tol) {
      points.push_back(0.5 * (left + right));
    } else {
      intervals.push_back({left, right});
    }
  }
  for (auto& edge : edges)
    for (auto& row : edge.rows) out.rows.push_back(std::move(row));
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [](const ScanRow& a, const ScanRow& b) { return a.mu < b.mu; });
  for (const auto& row : out.rows)
    if (!row.m.converged) ++out.nonconverged;
  out.set = SpectralSet::from_parts(std::move(intervals), std::move(points));
  return out;
}

double spectral_edge(const WeightSystem& ws, double tol, const MembershipOptions& opts) {
  require_symmetric(ws, "spectral_edge");
  if (!(tol > 0.0)) throw InvalidArgument("spectral_edge: tol must be > 0");
  const double bound = norm_bound(ws);
  const double step = 1e-2;
  double outside = bound + step;
  double inside = outside;
  bool found = false;
  for (double mu = bound; mu >= -bound - step; mu -= step) {
    if (is_in_limit_spectrum(ws, mu, opts).member) {
      inside = mu;
      found = true;
      break;
    }
    outside = mu;
  }
  if (!found) throw NoConvergence("spectral_edge: no spectrum found below the norm bound", 0.0, 0);
  while (outside - inside > tol) {
    const double mid = 0.5 * (inside + outside);
    (is_in_limit_spectrum(ws, mid, opts).member ? inside : outside) = mid;
  }
  return 0.5 * (inside + outside);
}

}  // namespace liftspec

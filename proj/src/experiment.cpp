#include "liftspec/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "liftspec/errors.hpp"
#include "liftspec/lift.hpp"
#include "liftspec/nonbacktracking.hpp"
#include "liftspec/parallel.hpp"
#include "liftspec/rng.hpp"

namespace liftspec {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<SpectrumRow> extremes_rows(const ExtremeEigs& e, long long total) {
  std::vector<SpectrumRow> rows;
  for (size_t j = 0; j < e.lowest.size(); ++j)
    rows.push_back({static_cast<long long>(j) + 1, e.lowest[j].value, e.lowest[j].residual});
  for (size_t j = 0; j < e.highest.size(); ++j)
    rows.push_back({total - static_cast<long long>(j), e.highest[j].value, e.highest[j].residual});
  std::sort(rows.begin(), rows.end(),
            [](const SpectrumRow& a, const SpectrumRow& b) { return a.index < b.index; });
  return rows;
}

void check_k(int k, long long total) {
  if (k < 1) throw InvalidArgument("spectrum: k must be >= 1");
  if (2LL * k > total)
    throw InvalidArgument("spectrum: 2k = " + std::to_string(2 * k) +
                          " exceeds the H0 dimension " + std::to_string(total) +
                          "; use the dense method");
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

const char* method_name(SpectrumMethod m) {
  switch (m) {
    case SpectrumMethod::Dense:
      return "dense";
    case SpectrumMethod::Lanczos:
      return "lanczos";
    default:
      return "auto";
  }
}

}  // namespace

WeightSystem load_source(const WsSource& src) {
  const bool has_preset = !src.preset.empty();
  const bool has_file = !src.file.empty();
  if (has_preset == has_file)
    throw InvalidArgument("give exactly one of --preset and --ws");
  return has_preset ? preset(src.preset) : load_weight_system(src.file);
}

std::string describe(const WsSource& src) {
  return src.preset.empty() ? "file:" + src.file.string() : "preset:" + src.preset;
}

std::uint64_t sample_seed(std::uint64_t seed, int n, int s) {
  return split_seed(split_seed(seed, static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(s));
}

SpectrumMethod parse_method(const std::string& name) {
  if (name == "auto") return SpectrumMethod::Auto;
  if (name == "dense") return SpectrumMethod::Dense;
  if (name == "lanczos") return SpectrumMethod::Lanczos;
  throw InvalidArgument("unknown method '" + name + "' (known: auto, dense, lanczos)");
}

std::vector<SpectrumRow> lift_spectrum(const WeightSystem& ws, const PermutationFamily& pf,
                                       const SpectrumOptions& opts, std::uint64_t lanczos_seed) {
  const LiftOperator a(ws, pf);
  const long long total = static_cast<long long>(ws.r) * (pf.n - 1);
  SpectrumMethod method = opts.method;
  if (method == SpectrumMethod::Auto)
    method = a.dim() <= kMaxDenseLiftDim ? SpectrumMethod::Dense : SpectrumMethod::Lanczos;
  if (method == SpectrumMethod::Dense) {
    const DenseSpectrum ds = dense_spectrum_H0_with_residuals(a);
    std::vector<SpectrumRow> rows;
    for (size_t i = 0; i < ds.eigenvalues.size(); ++i)
      rows.push_back({static_cast<long long>(i) + 1, ds.eigenvalues[i], ds.residuals[i]});
    return rows;
  }
  check_k(opts.k, total);
  return extremes_rows(extreme_eigs_H0(a, opts.k, opts.tol, lanczos_seed), total);
}

std::vector<SpectrumRow> tensor_spectrum(const WeightSystem& ws, const PermutationFamily& pf,
                                         int k, double tol, std::uint64_t lanczos_seed) {
  if (pf.n < 2) throw InvalidArgument("tensor spectrum: n must be >= 2");
  const long long n = pf.n;
  const long long total = static_cast<long long>(ws.r) * (n * n - 2);
  check_k(k, total);
  return extremes_rows(extreme_eigs_H0_tensor(build_tensor(ws, pf), k, tol, lanczos_seed), total);
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows) {
  os << "index,eigenvalue,residual\n";
  for (const auto& r : rows) os << r.index << ',' << fmt(r.eigenvalue) << ',' << fmt(r.residual) << '\n';
}

std::vector<SpectrumRow> read_spectrum_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "index,eigenvalue,residual")
    throw ParseError("spectrum csv: expected header index,eigenvalue,residual", 1, "header");
  std::vector<SpectrumRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    SpectrumRow r;
    char c1 = 0;
    char c2 = 0;
    std::istringstream ss(line);
    if (!(ss >> r.index >> c1 >> r.eigenvalue >> c2 >> r.residual) || c1 != ',' || c2 != ',')
      throw ParseError("spectrum csv: bad row at line " + std::to_string(lineno), lineno, "row");
    rows.push_back(r);
  }
  return rows;
}

void write_diag_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "mu,rho_b_mu,im_tr_goo,iterations,residual,member,converged\n";
  for (const auto& row : rows) {
    const auto& m = row.m;
    os << fmt(row.mu) << ',' << fmt(m.rho_b_mu) << ',' << fmt(m.im_tr_goo) << ','
       << m.iterations << ',' << fmt(m.residual) << ',' << (m.member ? 1 : 0) << ','
       << (m.converged ? 1 : 0) << '\n';
  }
}

TangleReport tangle_report(const PermutationFamily& pf, int l) {
  if (l < 1) throw InvalidArgument("tangle: l must be >= 1");
  const ColoredGraph g = build_colored_graph(pf);
  TangleReport t;
  t.n = pf.n;
  t.l = l;
  for (int x = 0; x < g.n; ++x) t.max_excess = std::max(t.max_excess, ball_excess(g, x, l));
  t.tangle_free = t.max_excess <= 1;
  const int lmax = std::min(2 * l + 1, kMaxCycleLength);
  for (int len = 1; len <= lmax; ++len) t.cycles.push_back(count_cycles(g, len));
  return t;
}

json to_json(const TangleReport& t) {
  json j;
  j["n"] = t.n;
  j["l"] = t.l;
  j["tangle_free"] = t.tangle_free;
  j["max_excess"] = t.max_excess;
  j["cycles"] = t.cycles;
  return j;
}

int default_tangle_length(int n, int d) {
  if (d <= 2 || n < 2) return 1;
  const int l = static_cast<int>(std::floor(std::log(static_cast<double>(n)) /
                                            (4.0 * std::log(static_cast<double>(d - 1)))));
  return std::max(1, l);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.ns.empty()) throw InvalidArgument("experiment: no --n given");
  for (int n : cfg.ns)
    if (n < 2) throw InvalidArgument("experiment: n must be >= 2");
  if (cfg.samples < 1) throw InvalidArgument("experiment: samples must be >= 1");
  if (!(cfg.hausdorff_threshold > 0.0) || !(cfg.edge_margin > 0.0))
    throw InvalidArgument("experiment: thresholds must be > 0");
  const WeightSystem ws = load_source(cfg.source);
  if (!ws.symmetric) throw NotSelfAdjoint("experiment: needs a symmetric weight system");
  const int threads = cfg.threads > 0 ? cfg.threads : default_threads();

  ExperimentReport rep;
  rep.config = cfg;
  ScanOptions scan = cfg.scan;
  scan.threads = threads;
  rep.limit = limit_spectrum_scan(ws, scan);
  rep.rho_b_star = rho_b_star(ws);
  rep.edge = rep.limit.set.empty() ? 0.0 : rep.limit.set.max();

  const int tasks = static_cast<int>(cfg.ns.size()) * cfg.samples;
  rep.samples.resize(static_cast<size_t>(tasks));
  parallel_for(tasks, threads, [&](int t) {
    SampleResult& out = rep.samples[static_cast<size_t>(t)];
    out.n = cfg.ns[static_cast<size_t>(t / cfg.samples)];
    out.sample = t % cfg.samples;
    out.seed = sample_seed(cfg.seed, out.n, out.sample);
    const PermutationFamily pf = sample_for(ws, out.n, out.seed);
    SpectrumMethod method = cfg.spectrum.method;
    if (method == SpectrumMethod::Auto)
      method = static_cast<long long>(ws.r) * out.n <= kMaxDenseLiftDim ? SpectrumMethod::Dense
                                                                       : SpectrumMethod::Lanczos;
    SpectrumOptions so = cfg.spectrum;
    so.method = method;
    out.method = method_name(method);
    std::vector<double> values;
    for (const auto& row : lift_spectrum(ws, pf, so, split_seed(out.seed, kLanczosStream)))
      values.push_back(row.eigenvalue);
    out.spectrum = SpectralSet::finite(values);
    if (!values.empty()) {
      out.bottom = out.spectrum.min();
      out.top = out.spectrum.max();
      if (!rep.limit.set.empty()) {
        out.hausdorff = hausdorff(out.spectrum, rep.limit.set);
        out.excess = directed_distance(out.spectrum, rep.limit.set);
      }
    }
    const int l = cfg.tangle_l > 0 ? cfg.tangle_l : default_tangle_length(out.n, ws.d());
    out.tangle = tangle_report(pf, l);
    if (ws.d() > 0)
      out.radius_k0 = radius_K0(build_B(ws, pf), default_radius_length(out.n), 8,
                                split_seed(out.seed, kRadiusStream));
  });
  return rep;
}

json to_json(const ExperimentReport& r) {
  const auto& cfg = r.config;
  json j;
  j["version"] = kReportVersion;
  j["config"] = {{"source", describe(cfg.source)},
                 {"n", cfg.ns},
                 {"seed", cfg.seed},
                 {"samples", cfg.samples},
                 {"tangle_l", cfg.tangle_l},
                 {"grid_step", cfg.scan.grid_step},
                 {"refine_tol", cfg.scan.refine_tol},
                 {"method", method_name(cfg.spectrum.method)},
                 {"hausdorff_threshold", cfg.hausdorff_threshold},
                 {"edge_margin", cfg.edge_margin}};
  j["limit"] = to_json(r.limit.set);
  j["limit_grid_points"] = r.limit.rows.size();
  j["limit_nonconverged"] = r.limit.nonconverged;
  j["rho_b_star"] = r.rho_b_star;
  j["edge"] = r.edge;

  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"n", s.n},
                       {"sample", s.sample},
                       {"seed", s.seed},
                       {"method", s.method},
                       {"spectrum", to_json(s.spectrum)},
                       {"bottom", s.bottom},
                       {"top", s.top},
                       {"hausdorff", s.hausdorff},
                       {"excess", s.excess},
                       {"tangle", to_json(s.tangle)},
                       {"radius_k0", s.radius_k0}});
  }
  j["samples"] = std::move(samples);

  json summary = json::array();
  bool hausdorff_ok = true;
  bool edge_ok = true;
  for (int n : cfg.ns) {
    std::vector<double> hs;
    int h_pass = 0;
    int e_pass = 0;
    int within = 0;
    for (const auto& s : r.samples) {
      if (s.n != n) continue;
      hs.push_back(s.hausdorff);
      if (s.hausdorff <= cfg.hausdorff_threshold) ++h_pass;
      if (s.top >= r.edge - cfg.edge_margin) ++e_pass;
      if (s.excess <= cfg.hausdorff_threshold) ++within;
    }
    const int count = static_cast<int>(hs.size());
    const int needed = static_cast<int>(std::ceil(0.9 * count));
    if (h_pass < needed) hausdorff_ok = false;
    if (n >= 500 && e_pass < count) edge_ok = false;
    summary.push_back({{"n", n},
                       {"samples", count},
                       {"median_hausdorff", median(hs)},
                       {"hausdorff_pass", h_pass},
                       {"within_threshold", within},
                       {"edge_pass", e_pass}});
  }
  j["summary"] = std::move(summary);
  j["pass"] = {{"hausdorff", hausdorff_ok}, {"alon_boppana", edge_ok}};
  return j;
}

}  // namespace liftspec

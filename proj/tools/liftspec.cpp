#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "liftspec/errors.hpp"
#include "liftspec/experiment.hpp"
#include "liftspec/parallel.hpp"
#include "liftspec/rng.hpp"

namespace fs = std::filesystem;
using namespace liftspec;

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2, kIo = 3 };

struct Common {
  WsSource source;
  std::uint64_t seed = 0;
  std::string out = ".";
};

void add_source(CLI::App* cmd, Common& c) {
  auto* p = cmd->add_option("--preset", c.source.preset, "figure1 or regular:<d>");
  auto* w = cmd->add_option("--ws", c.source.file, "weight-system JSON file");
  p->excludes(w);
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
}

fs::path out_file(const Common& c, const std::string& name) {
  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw IoError("cannot create output directory " + c.out + ": " + ec.message());
  return fs::path(c.out) / name;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& w) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  w(os);
  os.flush();
  if (!os) throw IoError("write failed for " + path.string());
}

int single_n(const std::vector<int>& ns, const char* cmd) {
  if (ns.size() != 1) throw InvalidArgument(std::string(cmd) + ": give exactly one --n");
  if (ns[0] < 2) throw InvalidArgument(std::string(cmd) + ": n must be >= 2");
  return ns[0];
}

int cmd_limit(const Common& c, ScanOptions opts) {
  const WeightSystem ws = load_source(c.source);
  opts.threads = default_threads();
  const ScanResult res = limit_spectrum_scan(ws, opts);
  const auto limit_path = out_file(c, "limit.json");
  write_file(limit_path, [&](std::ostream& os) { os << to_json(res.set).dump(2) << '\n'; });
  write_file(out_file(c, "diag.csv"), [&](std::ostream& os) { write_diag_csv(os, res.rows); });
  std::cout << to_json(res.set).dump() << '\n';
  if (res.nonconverged > 0) {
    std::cerr << "liftspec limit: " << res.nonconverged
              << " grid points did not converge (see diag.csv)\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_spectrum(const Common& c, int n, const SpectrumOptions& so) {
  const WeightSystem ws = load_source(c.source);
  const std::uint64_t s = sample_seed(c.seed, n, 0);
  const auto rows = lift_spectrum(ws, sample_for(ws, n, s), so, split_seed(s, kLanczosStream));
  write_file(out_file(c, "spectrum.csv"), [&](std::ostream& os) { write_spectrum_csv(os, rows); });
  std::cout << rows.size() << " eigenvalues written\n";
  return kOk;
}

int cmd_tensor(const Common& c, int n, int k, double tol) {
  const WeightSystem ws = load_source(c.source);
  const std::uint64_t s = sample_seed(c.seed, n, 0);
  const auto rows = tensor_spectrum(ws, sample_for(ws, n, s), k, tol, split_seed(s, kLanczosStream));
  write_file(out_file(c, "spectrum.csv"), [&](std::ostream& os) { write_spectrum_csv(os, rows); });
  std::cout << rows.size() << " eigenvalues written\n";
  return kOk;
}

int cmd_tangle(const Common& c, const std::vector<int>& ns, const std::string& pf_file, int l,
               bool graph) {
  PermutationFamily pf;
  int q = 0;
  if (!pf_file.empty()) {
    if (!c.source.preset.empty() || !c.source.file.empty())
      throw InvalidArgument("tangle: --pf excludes --preset and --ws");
    pf = load_permutation_family(pf_file);
  } else {
    const WeightSystem ws = load_source(c.source);
    const int n = single_n(ns, "tangle");
    pf = sample_for(ws, n, sample_seed(c.seed, n, 0));
  }
  q = pf.q;
  if (l == 0) l = default_tangle_length(pf.n, pf.d());
  const TangleReport t = tangle_report(pf, l);
  write_file(out_file(c, "tangle.json"), [&](std::ostream& os) { os << to_json(t).dump(2) << '\n'; });
  if (graph) {
    const ColoredGraph g = build_colored_graph(pf);
    write_file(out_file(c, "graph.txt"), [&](std::ostream& os) { write_edge_list(os, g, q); });
  }
  std::cout << to_json(t).dump() << '\n';
  return kOk;
}

int cmd_experiment(const Common& c, ExperimentConfig cfg) {
  cfg.source = c.source;
  cfg.seed = c.seed;
  const ExperimentReport rep = run_experiment(cfg);
  const nlohmann::json j = to_json(rep);
  write_file(out_file(c, "report.json"), [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  write_file(out_file(c, "limit.json"),
             [&](std::ostream& os) { os << to_json(rep.limit.set).dump(2) << '\n'; });
  write_file(out_file(c, "diag.csv"), [&](std::ostream& os) { write_diag_csv(os, rep.limit.rows); });
  std::cout << j["summary"].dump() << '\n' << j["pass"].dump() << '\n';
  if (rep.limit.nonconverged > 0) {
    std::cerr << "liftspec experiment: " << rep.limit.nonconverged
              << " limit grid points did not converge\n";
    return kNumerical;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of random lifts and their free-group limits"};
  app.require_subcommand(1);

  Common common;
  std::vector<int> ns;
  ScanOptions scan;
  SpectrumOptions so;
  std::string method = "auto";
  std::string pf_file;
  int l = 0;
  bool graph = false;
  int tensor_k = 4;
  ExperimentConfig cfg;

  auto* limit = app.add_subcommand("limit", "limit spectrum of the free-group operator");
  add_source(limit, common);
  add_common(limit, common);
  limit->add_option("--grid-step", scan.grid_step)->capture_default_str();
  limit->add_option("--refine-tol", scan.refine_tol)->capture_default_str();
  limit->add_option("--lo", scan.lo, "scan range; default: the norm bound");
  limit->add_option("--hi", scan.hi);

  auto* spectrum = app.add_subcommand("spectrum", "spectrum of A on H0 for one sample");
  add_source(spectrum, common);
  add_common(spectrum, common);
  spectrum->add_option("--n", ns)->required();
  spectrum->add_option("--method", method, "auto, dense or lanczos")->capture_default_str();
  spectrum->add_option("--k", so.k, "Lanczos values per end")->capture_default_str();
  spectrum->add_option("--tol", so.tol)->capture_default_str();

  auto* tensor = app.add_subcommand("tensor", "extreme eigenvalues of A2 on H0^(2)");
  add_source(tensor, common);
  add_common(tensor, common);
  tensor->add_option("--n", ns)->required();
  tensor->add_option("--k", tensor_k)->capture_default_str();
  tensor->add_option("--tol", so.tol)->capture_default_str();

  auto* tangle = app.add_subcommand("tangle", "tangle status and cycle counts of G^sigma");
  add_source(tangle, common);
  add_common(tangle, common);
  tangle->add_option("--n", ns);
  tangle->add_option("--pf", pf_file, "permutation-family JSON file");
  tangle->add_option("--l", l, "ball radius; default floor(log n / (4 log(d-1)))");
  tangle->add_flag("--graph", graph, "also write graph.txt");

  auto* experiment = app.add_subcommand("experiment", "samples versus the limit spectrum");
  add_source(experiment, common);
  add_common(experiment, common);
  experiment->add_option("--n", ns)->required();
  experiment->add_option("--samples", cfg.samples)->capture_default_str();
  experiment->add_option("--l", cfg.tangle_l);
  experiment->add_option("--grid-step", scan.grid_step)->capture_default_str();
  experiment->add_option("--refine-tol", scan.refine_tol)->capture_default_str();
  experiment->add_option("--method", method)->capture_default_str();
  experiment->add_option("--k", so.k)->capture_default_str();
  experiment->add_option("--hausdorff-threshold", cfg.hausdorff_threshold)->capture_default_str();
  experiment->add_option("--edge-margin", cfg.edge_margin)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*limit) return cmd_limit(common, scan);
    so.method = parse_method(method);
    if (*spectrum) return cmd_spectrum(common, single_n(ns, "spectrum"), so);
    if (*tensor) return cmd_tensor(common, single_n(ns, "tensor"), tensor_k, so.tol);
    if (*tangle) return cmd_tangle(common, ns, pf_file, l, graph);
    cfg.ns = ns;
    cfg.scan = scan;
    cfg.spectrum = so;
    return cmd_experiment(common, cfg);
  } catch (const ValidationError& e) {
    std::cerr << "liftspec: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    std::cerr << "liftspec: " << e.what() << '\n';
    return kNumerical;
  } catch (const IoError& e) {
    std::cerr << "liftspec: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "liftspec: " << e.what() << '\n';
    return kIo;
  }
}

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "liftspec/freelimit.hpp"
#include "liftspec/graphs.hpp"
#include "liftspec/model.hpp"
#include "liftspec/spectral_set.hpp"

namespace liftspec {

// Exactly one of preset / file.
struct WsSource {
  std::string preset;
  std::filesystem::path file;
};

WeightSystem load_source(const WsSource& src);
std::string describe(const WsSource& src);

// Seed of sample s at size n: split_seed(split_seed(seed, n), s).
std::uint64_t sample_seed(std::uint64_t seed, int n, int s);
// Streams derived from a sample seed.
inline constexpr std::uint64_t kLanczosStream = 1;
inline constexpr std::uint64_t kRadiusStream = 2;

enum class SpectrumMethod { Auto, Dense, Lanczos };
SpectrumMethod parse_method(const std::string& name);

struct SpectrumRow {
  long long index = 0;  // 1-based position in the ascending H0 spectrum
  double eigenvalue = 0.0;
  double residual = 0.0;
};

struct SpectrumOptions {
  SpectrumMethod method = SpectrumMethod::Auto;  // Auto: dense when r n <= 4096
  int k = 10;                                    // Lanczos: values per end
  double tol = 1e-8;
};

// Spectrum of A on H0. Dense rows cover every index 1..r(n-1); Lanczos rows
// carry the indices the same eigenvalues have in the dense ordering.
std::vector<SpectrumRow> lift_spectrum(const WeightSystem& ws, const PermutationFamily& pf,
                                       const SpectrumOptions& opts, std::uint64_t lanczos_seed);

// Extremes of A2 on H0^(2), indexed within the r(n^2 - 2) dimensional space.
std::vector<SpectrumRow> tensor_spectrum(const WeightSystem& ws, const PermutationFamily& pf,
                                         int k, double tol, std::uint64_t lanczos_seed);

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows);
std::vector<SpectrumRow> read_spectrum_csv(std::istream& is);

// mu, rho_b_mu, im_tr_goo, iterations, residual, member, converged.
void write_diag_csv(std::ostream& os, const std::vector<ScanRow>& rows);

struct TangleReport {
  int n = 0;
  int l = 0;
  bool tangle_free = true;
  int max_excess = 0;               // over all radius-l balls
  std::vector<long long> cycles;    // cycles[k - 1] = cycles of length k
};

// Cycle lengths 1..min(2l + 1, 12) are counted.
TangleReport tangle_report(const PermutationFamily& pf, int l);
nlohmann::json to_json(const TangleReport& t);

// floor(log n / (4 log(d - 1))), at least 1; 1 when d <= 2.
int default_tangle_length(int n, int d);

inline constexpr const char* kReportVersion = "liftspec-report-1";

struct ExperimentConfig {
  WsSource source;
  std::vector<int> ns;
  std::uint64_t seed = 0;
  int samples = 10;
  int tangle_l = 0;  // 0: default_tangle_length per n
  ScanOptions scan;
  SpectrumOptions spectrum;
  double hausdorff_threshold = 0.15;
  double edge_margin = 0.15;  // s(A_H0) >= s(A_star) - margin
  int threads = 0;            // 0: default_threads()
};

struct SampleResult {
  int n = 0;
  int sample = 0;
  std::uint64_t seed = 0;
  std::string method;
  SpectralSet spectrum;
  double top = 0.0;
  double bottom = 0.0;
  double hausdorff = 0.0;
  double excess = 0.0;  // directed distance from the spectrum to the limit set
  TangleReport tangle;
  double radius_k0 = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  ScanResult limit;
  double rho_b_star = 0.0;
  double edge = 0.0;  // s(A_star), the top of the limit set
  std::vector<SampleResult> samples;  // ordered by n, then sample
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);
nlohmann::json to_json(const ExperimentReport& r);

}  // namespace liftspec

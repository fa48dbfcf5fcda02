#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftspec/numerics.hpp"

namespace liftspec {

// Coefficients of A = a0 (x) 1 + sum_i a_i (x) S_i together with the
// involution i -> star[i] on generator indices. Indices are 0-based in memory;
// files and human-facing output are 1-based.
struct WeightSystem {
  int r = 1;
  std::vector<int> star;
  CMatrix a0;
  std::vector<CMatrix> weights;
  // When set, a0 must be Hermitian and weights[i]^* == weights[star[i]].
  bool symmetric = true;

  int d() const { return static_cast<int>(weights.size()); }
};

struct Violation {
  std::string kind;
  std::string message;
};

// Empty iff every WeightSystem invariant holds.
std::vector<Violation> validate(const WeightSystem& ws);
void require_valid(const WeightSystem& ws);

// a0 + sum_i a_i.
CMatrix base_adjacency(const WeightSystem& ws);

// sum_i ||a_i|| + ||a0||, the norm bound used for limit-spectrum ranges.
double norm_bound(const WeightSystem& ws);

// Canonical involution layout: i <-> i+q for i < q, fixed points beyond 2q.
std::vector<int> canonical_star(int q, int d);
// Returns q when ws.star has the canonical layout; throws otherwise.
int canonical_q(const WeightSystem& ws);

struct BaseGraphSpec {
  int r = 0;
  // 1-based vertex pairs (u, v); edge k contributes a_k = E_uv and its
  // reverse a_{k+m} = E_vu, where m is the edge count.
  std::vector<std::pair<int, int>> edges;
};

WeightSystem from_base_graph(const BaseGraphSpec& spec);

// Figure-1 base graph: r = 5, seven edges.
BaseGraphSpec figure1_base_graph();

// Named presets: "figure1", "regular:d".
WeightSystem preset(std::string_view name);

// d permutations of {0, ..., n-1}. perms[i + q] is the inverse of perms[i]
// for i < q; perms[i] for i >= 2q are fixed-point-free involutions.
struct PermutationFamily {
  int n = 0;
  int q = 0;
  std::vector<std::vector<int>> perms;

  int d() const { return static_cast<int>(perms.size()); }
};

std::vector<Violation> validate(const PermutationFamily& pf);

// Uniform permutations by Fisher-Yates, uniform matchings by shuffling and
// pairing consecutive entries. Pure function of (n, q, d, seed).
PermutationFamily sample_symmetric(int n, int q, int d, std::uint64_t seed);

// Samples using the canonical layout of ws.
PermutationFamily sample_for(const WeightSystem& ws, int n, std::uint64_t seed);

// Weight-system files (JSON, version "liftspec-ws-1").
inline constexpr const char* kWeightSystemVersion = "liftspec-ws-1";

std::string weight_system_to_json(const WeightSystem& ws);
WeightSystem parse_weight_system(std::string_view text);
WeightSystem load_weight_system(const std::filesystem::path& path);
void save_weight_system(const WeightSystem& ws,
                        const std::filesystem::path& path);

// Permutation-family files (JSON, version "liftspec-pf-1"): n, q and the
// permutations as 1-based arrays.
inline constexpr const char* kPermutationFamilyVersion = "liftspec-pf-1";

std::string permutation_family_to_json(const PermutationFamily& pf);
PermutationFamily parse_permutation_family(std::string_view text);
PermutationFamily load_permutation_family(const std::filesystem::path& path);
void save_permutation_family(const PermutationFamily& pf,
                             const std::filesystem::path& path);

}  // namespace liftspec

#pragma once

#include <cstdint>
#include <random>

#include "liftspec/numerics.hpp"

namespace liftspec {

// Versioned random source. "liftspec-rng-1": std::mt19937_64 (whose output
// sequence is fixed by the C++ standard) seeded with splitmix64(seed).
// Bounded integers use rejection sampling and floats use the top 53 bits, so
// draws are identical across platforms and standard libraries.
inline constexpr const char* kRngVersion = "liftspec-rng-1";

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent stream seed; used for per-sample and per-trial seeds.
std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on {0, ..., bound - 1}; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform on [0, 1).
  double uniform();
  double normal();
  // Standard complex Gaussian (real and imaginary parts N(0, 1/2)).
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

CVector random_unit_vector(Eigen::Index dim, Rng& rng);
CMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace liftspec

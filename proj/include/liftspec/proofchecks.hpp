#pragma once

#include <cstdint>

#include "liftspec/freelimit.hpp"

namespace liftspec {

struct BinTParams {
  double z = 1.0;
  int k = 1;
  double p = 0.25;
  double q = 0.25;
};

// 8 (1 - p - p/q)^2 <= 4 z k^2 sqrt(q) <= 1.
bool bint_precondition(const BinTParams& t);

// E (-1)^N prod_{n=0}^{2N-1} (1/sqrt(q) - z n) for N ~ Bin(k, p), summed
// exactly over t = 0..k in long double.
long double bint_expectation(const BinTParams& t);

// 8 (3 sqrt(2z) k q^{1/4})^k.
long double bint_bound(const BinTParams& t);

struct KreinRutmanReport {
  double rho_power = 0.0;
  double rho_dense = 0.0;        // largest modulus over the dense spectrum
  double rho_error = 0.0;        // |rho_power - rho_dense|
  double eigvec_residual = 0.0;  // ||L x - rho x|| for the power vector
  double min_psd_eig = 0.0;      // smallest eigenvalue over the blocks of x
  int psd_failures = 0;          // random PSD inputs mapped outside the cone
  int adjoint_failures = 0;      // same for L^*
  bool passed = false;
};

inline constexpr int kMaxKreinRutmanDim = 144;

KreinRutmanReport krein_rutman_check(const CPMapL& l, std::uint64_t seed = 0);

}  // namespace liftspec

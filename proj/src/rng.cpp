#include "liftspec/rng.hpp"

#include <cmath>
#include <numbers>

namespace liftspec {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Largest multiple of bound representable; reject draws above it.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_normal() {
  const double s = std::numbers::sqrt2 / 2.0;
  const double re = normal();
  const double im = normal();
  return {s * re, s * im};
}

CVector random_unit_vector(Eigen::Index dim, Rng& rng) {
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.complex_normal();
  const double nrm = v.norm();
  if (nrm > 0.0) v /= nrm;
  return v;
}

CMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

}  // namespace liftspec

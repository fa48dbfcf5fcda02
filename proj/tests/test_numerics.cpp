#include "doctest.h"
#include "helpers.hpp"
#include "liftspec/errors.hpp"
#include "liftspec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace liftspec;
using testing::random_hermitian;

TEST_CASE("make_matrix is row-major and rejects non-finite entries") {
  const std::vector<Complex> e{1.0, 2.0, 3.0, 4.0};
  const CMatrix m = make_matrix(2, 2, e);
  CHECK(m(0, 1) == Complex(2.0));
  CHECK(m(1, 0) == Complex(3.0));
  const std::vector<Complex> bad{1.0, std::nan("")};
  CHECK_THROWS_AS(make_matrix(1, 2, bad), InvalidArgument);
  const std::vector<Complex> short_list{1.0};
  CHECK_THROWS_AS(make_matrix(2, 2, short_list), DimensionMismatch);
}

TEST_CASE("inv on identity, diagonal and random matrices") {
  CHECK((inv(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)).norm() == doctest::Approx(0.0));
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 4.0;
  const CMatrix di = inv(d);
  CHECK(std::abs(di(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(di(1, 1) - 0.25) < 1e-15);
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const CMatrix m = random_complex_matrix(4, 4, rng);
    CHECK((m * inv(m) - CMatrix::Identity(4, 4)).norm() < 1e-9);
    CHECK((inv(inv(m)) - m).norm() <= 1e-8 * op_norm(m));
  }
}

TEST_CASE("inv rejects singular input") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  CHECK_THROWS_AS(inv(m), SingularMatrix);
  CHECK_THROWS_AS(inv_fast(m), SingularMatrix);
  CHECK_THROWS_AS(inv(CMatrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("hermitian_eig small cases") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  auto e = hermitian_eig(d);
  CHECK(e.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0));
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  e = hermitian_eig(s);
  CHECK(e.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig residuals, trace and unitary invariance") {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const CMatrix m = random_hermitian(8, rng);
    const auto e = hermitian_eig(m);
    double sum = 0.0;
    for (size_t k = 0; k < e.eigenvalues.size(); ++k) {
      sum += e.eigenvalues[k];
      if (k > 0) CHECK(e.eigenvalues[k] >= e.eigenvalues[k - 1]);
      const auto kk = static_cast<Eigen::Index>(k);
      CHECK((m * e.eigenvectors.col(kk) - e.eigenvalues[k] * e.eigenvectors.col(kk)).norm() <=
            1e-8 * op_norm(m));
    }
    CHECK(std::abs(sum - m.trace().real()) < 1e-9);
    CHECK((e.eigenvectors.adjoint() * e.eigenvectors - CMatrix::Identity(8, 8)).norm() < 1e-12);
    const CMatrix u = testing::random_unitary(8, rng);
    const auto e2 = hermitian_eigvals(u * m * u.adjoint());
    CHECK(testing::max_abs_diff(e.eigenvalues, e2) < 1e-9);
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(m), NotHermitian);
}

TEST_CASE("general_eig_dense examples") {
  CMatrix nil = CMatrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  for (const auto& ev : general_eig_dense(nil)) CHECK(std::abs(ev) < 1e-12);

  CMatrix cyc = CMatrix::Zero(3, 3);
  cyc(0, 1) = cyc(1, 2) = cyc(2, 0) = 1.0;
  auto ev = general_eig_dense(cyc);
  for (const auto& l : ev) {
    CHECK(std::abs(std::abs(l) - 1.0) < 1e-12);
    CHECK(std::abs(l * l * l - Complex(1.0)) < 1e-12);
  }
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return a.imag() < b.imag(); });
  CHECK(std::abs(ev[1] - Complex(1.0)) < 1e-12);

  // Companion matrix of x^2 - x - 1.
  CMatrix comp = CMatrix::Zero(2, 2);
  comp(0, 0) = 1.0;
  comp(0, 1) = 1.0;
  comp(1, 0) = 1.0;
  std::vector<double> re;
  for (const auto& l : general_eig_dense(comp)) {
    CHECK(std::abs(l.imag()) < 1e-12);
    re.push_back(l.real());
  }
  re = testing::sorted(re);
  CHECK(re[0] == doctest::Approx(-0.6180339887498949).epsilon(1e-14));
  CHECK(re[1] == doctest::Approx(1.6180339887498949).epsilon(1e-14));
}

TEST_CASE("general_eig_dense trace identity and Hermitian agreement") {
  Rng rng(9);
  for (int t = 0; t < 5; ++t) {
    const CMatrix m = random_complex_matrix(12, 12, rng);
    Complex sum = 0.0;
    for (const auto& l : general_eig_dense(m)) sum += l;
    CHECK(std::abs(sum - m.trace()) <= 1e-6 * 12 * op_norm(m));
    const CMatrix h = random_hermitian(10, rng);
    std::vector<double> re;
    for (const auto& l : general_eig_dense(h)) re.push_back(l.real());
    CHECK(testing::max_abs_diff(testing::sorted(re), hermitian_eigvals(h)) < 1e-7);
  }
  CHECK_THROWS_AS(general_eig_dense(CMatrix::Zero(3, 2)), DimensionMismatch);
  CHECK_THROWS_AS(general_eig_dense(CMatrix::Zero(4097, 4097)), DimensionTooLarge);
}

TEST_CASE("min_singular_value examples") {
  CHECK(min_singular_value(CMatrix::Identity(2, 2)) == doctest::Approx(1.0));
  CMatrix p = CMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  CHECK(min_singular_value(p) == doctest::Approx(0.0));
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const CMatrix m = random_complex_matrix(5, 5, rng);
    const CMatrix mm = m.adjoint() * m;
    const double oracle = std::sqrt(hermitian_eigvals(0.5 * (mm + mm.adjoint())).front());
    CHECK(std::abs(min_singular_value(m) - oracle) <= 1e-9 * std::max(1.0, oracle) + 1e-12);
  }
}

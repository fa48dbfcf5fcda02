#include "doctest.h"
#include "helpers.hpp"
#include "liftspec/errors.hpp"
#include "liftspec/lift.hpp"

#include <algorithm>
#include <cmath>

using namespace liftspec;

namespace {

// Entry (x r + b, y r + c) = a0(b, c) [x = y] + sum_i a_i(b, c) [sigma_i(x) = y].
CMatrix assemble(const WeightSystem& ws, const PermutationFamily& pf) {
  const int r = ws.r;
  const int n = pf.n;
  CMatrix m = CMatrix::Zero(r * n, r * n);
  for (int x = 0; x < n; ++x) {
    m.block(x * r, x * r, r, r) += ws.a0;
    for (int i = 0; i < ws.d(); ++i) {
      const int y = pf.perms[static_cast<size_t>(i)][static_cast<size_t>(x)];
      m.block(x * r, y * r, r, r) += ws.weights[static_cast<size_t>(i)];
    }
  }
  return m;
}

// Entry over pairs (x, y) -> (sigma_i(x), sigma_i(y)).
CMatrix assemble_tensor(const WeightSystem& ws, const PermutationFamily& pf) {
  const int r = ws.r;
  const int n = pf.n;
  const int nn = n * n;
  CMatrix m = CMatrix::Zero(r * nn, r * nn);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const int p = x * n + y;
      m.block(p * r, p * r, r, r) += ws.a0;
      for (int i = 0; i < ws.d(); ++i) {
        const auto& s = pf.perms[static_cast<size_t>(i)];
        const int t = s[static_cast<size_t>(x)] * n + s[static_cast<size_t>(y)];
        m.block(p * r, t * r, r, r) += ws.weights[static_cast<size_t>(i)];
      }
    }
  return m;
}

PermutationFamily swap2() {
  PermutationFamily pf;
  pf.n = 2;
  pf.q = 0;
  pf.perms = {{1, 0}};
  return pf;
}

WeightSystem matching_ws() {
  WeightSystem ws;
  ws.r = 1;
  ws.star = {0};
  ws.a0 = CMatrix::Zero(1, 1);
  ws.weights = {CMatrix::Ones(1, 1)};
  return ws;
}

std::vector<double> remove_values(std::vector<double> all, const std::vector<double>& drop) {
  for (double v : drop) {
    auto it = std::min_element(all.begin(), all.end(),
                               [v](double a, double b) { return std::abs(a - v) < std::abs(b - v); });
    all.erase(it);
  }
  return all;
}

}  // namespace

TEST_CASE("matvec on a 3-cycle") {
  WeightSystem ws;
  ws.r = 1;
  ws.star = {1, 0};
  ws.a0 = CMatrix::Zero(1, 1);
  ws.weights = {CMatrix::Ones(1, 1), CMatrix::Zero(1, 1)};
  ws.symmetric = false;
  PermutationFamily pf{3, 1, {{1, 2, 0}, {2, 0, 1}}};
  const LiftOperator a(ws, pf);
  CVector v = CVector::Zero(3);
  v(1) = 1.0;
  const CVector av = a.apply(v);
  // (A v)(x) = v(sigma(x)): only x with sigma(x) = 1, i.e. x = 0.
  CHECK(av(0) == Complex(1.0));
  CHECK(av(1) == Complex(0.0));
  CHECK(av(2) == Complex(0.0));
  CHECK_THROWS_AS(a.apply(CVector::Zero(4)), DimensionMismatch);
}

TEST_CASE("matvec agrees with dense assembly") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const WeightSystem ws = testing::random_symmetric_ws(3, 1, 3, rng);
    const PermutationFamily pf = sample_for(ws, 8, 100 + trial);
    const LiftOperator a(ws, pf);
    const CMatrix m = assemble(ws, pf);
    CHECK((dense_matrix(a) - m).norm() <= 1e-12 * m.norm());
    for (int probe = 0; probe < 3; ++probe) {
      const CVector v = random_complex_matrix(a.dim(), 1, rng);
      CHECK((a.apply(v) - m * v).norm() <= 1e-12 * m.norm() * v.norm());
    }
  }
}

TEST_CASE("constant vectors see the base adjacency") {
  const WeightSystem ws = preset("figure1");
  const PermutationFamily pf = sample_for(ws, 7, 3);
  const LiftOperator a(ws, pf);
  Rng rng(1);
  const CVector f = random_complex_matrix(5, 1, rng);
  CVector v(35);
  for (int x = 0; x < 7; ++x) v.segment(x * 5, 5) = f;
  const CVector af = base_adjacency(ws) * f;
  const CVector av = a.apply(v);
  for (int x = 0; x < 7; ++x) CHECK((av.segment(x * 5, 5) - af).norm() <= 1e-12);
}

TEST_CASE("project_H0") {
  Rng rng(2);
  const int r = 3;
  const int n = 9;
  CVector f = random_complex_matrix(r, 1, rng);
  CVector ones(r * n);
  for (int x = 0; x < n; ++x) ones.segment(x * r, r) = f;
  CHECK(project_H0(static_cast<const CVector&>(ones), r).norm() <= 1e-12 * ones.norm());

  const CVector v = random_complex_matrix(r * n, 1, rng);
  const CVector pv = project_H0(v, r);
  for (int b = 0; b < r; ++b) {
    Complex s = 0.0;
    for (int x = 0; x < n; ++x) s += pv(x * r + b);
    CHECK(std::abs(s) <= 1e-12 * v.norm());
  }
  CHECK((project_H0(pv, r) - pv).norm() <= 1e-12 * v.norm());
  const CVector u = random_complex_matrix(r * n, 1, rng);
  CHECK(std::abs(u.dot(pv) - project_H0(u, r).dot(v)) <= 1e-12 * u.norm() * v.norm());
  CHECK(std::abs(v.squaredNorm() - pv.squaredNorm() - (v - pv).squaredNorm()) <=
        1e-12 * v.squaredNorm());
}

TEST_CASE("Helmert transform is an isometry onto H0") {
  Rng rng(4);
  const int r = 2;
  const int n = 7;
  const CVector v = project_H0(random_complex_matrix(r * n, 1, rng), r);
  const CVector c = helmert_forward(v, r, n);
  CHECK(c.size() == r * (n - 1));
  CHECK(std::abs(c.norm() - v.norm()) <= 1e-12 * v.norm());
  CHECK((helmert_backward(c, r, n) - v).norm() <= 1e-12 * v.norm());
}

TEST_CASE("A commutes with the H0 projector and is self-adjoint") {
  Rng rng(5);
  const WeightSystem ws = testing::random_symmetric_ws(2, 2, 5, rng);
  const LiftOperator a(ws, sample_for(ws, 12, 9));
  const double norm = op_norm(dense_matrix(a));
  for (int probe = 0; probe < 5; ++probe) {
    const CVector v = random_complex_matrix(a.dim(), 1, rng);
    const CVector u = random_complex_matrix(a.dim(), 1, rng);
    CHECK((project_H0(a.apply(v), 2) - a.apply(project_H0(v, 2))).norm() <=
          1e-10 * norm * v.norm());
    CHECK(std::abs(u.dot(a.apply(v)) - a.apply(u).dot(v)) <= 1e-10 * norm * u.norm() * v.norm());
  }
}

TEST_CASE("Lanczos matches the dense Helmert-basis spectrum") {
  const WeightSystem ws = testing::scalar_regular(4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const LiftOperator a(ws, sample_for(ws, 8, seed));
    const CMatrix h = restrict_to_H0([&](const CVector& in, CVector& out) { a.apply(in, out); }, 1, 8);
    const auto dense = hermitian_eigvals(h);
    const ExtremeEigs e = extreme_eigs_H0(a, 2, 1e-10, seed);
    REQUIRE(e.lowest.size() == 2);
    REQUIRE(e.highest.size() == 2);
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(e.lowest[j].value - dense[j]) <= 1e-8);
      CHECK(std::abs(e.highest[j].value - dense[dense.size() - 1 - j]) <= 1e-8);
      CHECK(e.highest[j].residual <= 1e-10);
      const CVector& vec = e.highest[j].vector;
      CHECK(std::abs(vec.sum()) <= 1e-10);
      CHECK((a.apply(vec) - e.highest[j].value * vec).norm() <= 1e-9);
    }
  }
}

TEST_CASE("two-point swap") {
  const LiftOperator a(matching_ws(), swap2());
  const auto dense = dense_spectrum_H0(a);
  REQUIRE(dense.points().size() == 1);
  CHECK(dense.points()[0] == doctest::Approx(-1.0).epsilon(1e-12));
  const ExtremeEigs e = extreme_eigs_H0(a, 1, 1e-10);
  CHECK(e.highest.at(0).value == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("dense H0 spectrum plus base spectrum is the full spectrum") {
  const WeightSystem ws = preset("figure1");
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const LiftOperator a(ws, sample_for(ws, 10, seed));
    const DenseSpectrum h0 = dense_spectrum_H0_with_residuals(a);
    CHECK(h0.eigenvalues.size() == 45);
    for (double res : h0.residuals) CHECK(res <= 1e-10);
    std::vector<double> merged = h0.eigenvalues;
    for (double v : hermitian_eigvals(base_adjacency(ws))) merged.push_back(v);
    const auto full = hermitian_eigvals(assemble(ws, a.perms()));
    CHECK(testing::max_abs_diff(testing::sorted(merged), full) <= 1e-8);
  }
}

TEST_CASE("Figure 1 lift at n = 40 stays inside the norm bound") {
  const WeightSystem ws = preset("figure1");
  double bound = op_norm(ws.a0);
  for (const auto& w : ws.weights) bound += op_norm(w);
  CHECK(bound == doctest::Approx(14.0));
  const SpectralSet s = dense_spectrum_H0(LiftOperator(ws, sample_for(ws, 40, 2024)));
  CHECK(s.points().size() == 195);
  CHECK(s.min() >= -bound - 1.0);
  CHECK(s.max() <= bound + 1.0);
}

TEST_CASE("dense path refuses large dimensions") {
  const WeightSystem ws = testing::scalar_regular(4);
  CHECK_THROWS_AS(dense_spectrum_H0(LiftOperator(ws, sample_for(ws, 4098, 1))), DimensionTooLarge);
}

TEST_CASE("tensor operator fixes I and J") {
  const WeightSystem ws = testing::scalar_regular(3);
  const int n = 6;
  const PermutationFamily pf = sample_for(ws, n, 5);
  WeightSystem single = ws;
  for (int i = 0; i < ws.d(); ++i) {
    for (auto& w : single.weights) w.setZero();
    single.weights[static_cast<size_t>(i)].setOnes();
    single.symmetric = false;
    const TensorLiftOperator s2(single, pf);
    CVector iv = CVector::Zero(n * n);
    CVector jv = CVector::Zero(n * n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) (x == y ? iv : jv)(x * n + y) = 1.0;
    CHECK(s2.apply(iv) == iv);
    CHECK(s2.apply(jv) == jv);
  }
}

TEST_CASE("tensor operator against dense assembly") {
  Rng rng(8);
  const WeightSystem ws = testing::random_symmetric_ws(2, 1, 3, rng);
  const PermutationFamily pf = sample_for(ws, 4, 3);
  const TensorLiftOperator a2 = build_tensor(ws, pf);
  const CMatrix m = assemble_tensor(ws, pf);
  for (int probe = 0; probe < 3; ++probe) {
    const CVector v = random_complex_matrix(a2.dim(), 1, rng);
    CHECK((a2.apply(v) - m * v).norm() <= 1e-12 * m.norm() * v.norm());
  }
}

TEST_CASE("tensor extremes at n = 6 match the dense spectrum") {
  const WeightSystem ws = testing::scalar_regular(4);
  const int n = 6;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PermutationFamily pf = sample_for(ws, n, seed);
    const auto full = hermitian_eigvals(assemble_tensor(ws, pf));
    // A2 I = 4 I and A2 J = 4 J.
    const auto h0 = remove_values(full, {4.0, 4.0});
    const ExtremeEigs e = extreme_eigs_H0_tensor(build_tensor(ws, pf), 3, 1e-10, seed);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(e.lowest[j].value - h0[j]) <= 1e-8);
      CHECK(std::abs(e.highest[j].value - h0[h0.size() - 1 - j]) <= 1e-8);
    }
  }
}

TEST_CASE("project_H0_tensor removes I and J") {
  Rng rng(12);
  const int r = 2;
  const int n = 5;
  CVector v = random_complex_matrix(r * n * n, 1, rng);
  project_H0_tensor(v, r, n);
  for (int b = 0; b < r; ++b) {
    Complex on = 0.0;
    Complex off = 0.0;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) (x == y ? on : off) += v((x * n + y) * r + b);
    CHECK(std::abs(on) <= 1e-12);
    CHECK(std::abs(off) <= 1e-12);
  }
  CVector w = v;
  project_H0_tensor(w, r, n);
  CHECK((w - v).norm() <= 1e-12);
}

TEST_CASE("tensor operator on the diagonal is the plain lift") {
  Rng rng(13);
  const WeightSystem ws = testing::random_symmetric_ws(3, 1, 4, rng);
  const int n = 8;
  const PermutationFamily pf = sample_for(ws, n, 4);
  const LiftOperator a(ws, pf);
  const TensorLiftOperator a2(ws, pf);
  const CVector u = random_complex_matrix(3 * n, 1, rng);
  CVector v = CVector::Zero(3 * n * n);
  for (int x = 0; x < n; ++x) v.segment((x * n + x) * 3, 3) = u.segment(x * 3, 3);
  const CVector au = a.apply(u);
  const CVector av = a2.apply(v);
  for (int x = 0; x < n; ++x) {
    CHECK((av.segment((x * n + x) * 3, 3) - au.segment(x * 3, 3)).norm() <= 1e-12);
    for (int y = 0; y < n; ++y)
      if (y != x) CHECK(av.segment((x * n + y) * 3, 3).norm() == 0.0);
  }
}

TEST_CASE("hausdorff distances") {
  const SpectralSet t = SpectralSet::from_parts({{-2.0, 2.0}}, {});
  CHECK(hausdorff(t, t) == 0.0);
  // {0} is 1 away from [1, 2], but the point 2 is 2 away from {0}.
  const SpectralSet zero = SpectralSet::finite({0.0});
  const SpectralSet band = SpectralSet::from_parts({{1.0, 2.0}}, {});
  CHECK(directed_distance(zero, band) == 1.0);
  CHECK(hausdorff(zero, band) == 2.0);
  // Points of T near +-1.5 are 1.5 away from {-3, 0, 3}.
  const SpectralSet s = SpectralSet::finite({-3.0, 0.0, 3.0});
  CHECK(directed_distance(s, t) == doctest::Approx(1.0));
  CHECK(directed_distance(t, s) == doctest::Approx(1.5));
  CHECK(hausdorff(s, t) == doctest::Approx(1.5));
  CHECK_THROWS_AS(hausdorff(SpectralSet(), t), EmptySet);
}

TEST_CASE("hausdorff agrees with a brute-force grid") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Interval> iv;
    std::vector<double> pts;
    for (int k = 0; k < 3; ++k) {
      const double a = 10.0 * rng.uniform() - 5.0;
      iv.push_back({a, a + rng.uniform()});
      pts.push_back(10.0 * rng.uniform() - 5.0);
    }
    const SpectralSet s = SpectralSet::from_parts({iv[0], iv[1]}, {pts[0]});
    const SpectralSet t = SpectralSet::from_parts({iv[2]}, {pts[1], pts[2]});
    const auto sample = [](const SpectralSet& x) {
      std::vector<double> out(x.points());
      for (const auto& i : x.intervals())
        for (double u = i.lo; u <= i.hi; u += 1e-3) out.push_back(u);
      for (const auto& i : x.intervals()) out.push_back(i.hi);
      return out;
    };
    double brute = 0.0;
    for (double u : sample(s)) brute = std::max(brute, t.distance_to(u));
    for (double u : sample(t)) brute = std::max(brute, s.distance_to(u));
    const double h = hausdorff(s, t);
    CHECK(h >= brute - 1e-12);
    CHECK(h <= brute + 1e-3);
  }
}

TEST_CASE("spectral set json round-trip") {
  const SpectralSet s = SpectralSet::from_parts({{-1.0, 0.5}, {0.25, 2.0}}, {3.0, 1.0});
  REQUIRE(s.intervals().size() == 1);
  CHECK(s.points() == std::vector<double>{3.0});
  const SpectralSet back = spectral_set_from_json(to_json(s));
  CHECK(back.intervals()[0].lo == -1.0);
  CHECK(back.intervals()[0].hi == 2.0);
  CHECK(back.points() == s.points());
}

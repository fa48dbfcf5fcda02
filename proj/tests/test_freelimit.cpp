#include "doctest.h"
#include "helpers.hpp"
#include "liftspec/errors.hpp"
#include "liftspec/freelimit.hpp"

#include <cmath>

using namespace liftspec;

namespace {

const double kEdge4 = 2.0 * std::sqrt(3.0);

// (L x)_ii = sum_{j != i*} b_j x_jj b_j^*, written out.
std::vector<CMatrix> naive_L(const std::vector<CMatrix>& b, const std::vector<int>& star,
                             const std::vector<CMatrix>& x) {
  const int d = static_cast<int>(b.size());
  std::vector<CMatrix> out;
  for (int i = 0; i < d; ++i) {
    CMatrix acc = CMatrix::Zero(b[0].rows(), b[0].rows());
    for (int j = 0; j < d; ++j)
      if (j != star[static_cast<size_t>(i)])
        acc += b[static_cast<size_t>(j)] * x[static_cast<size_t>(j)] * b[static_cast<size_t>(j)].adjoint();
    out.push_back(acc);
  }
  return out;
}

std::vector<CMatrix> random_blocks(int d, int r, Rng& rng) {
  std::vector<CMatrix> b;
  for (int i = 0; i < d; ++i) b.push_back(random_complex_matrix(r, r, rng));
  return b;
}

double dense_rho(const CPMapL& l) {
  double rho = 0.0;
  for (const Complex& ev : general_eig_dense(dense_matrix(l))) rho = std::max(rho, std::abs(ev));
  return rho;
}

}  // namespace

TEST_CASE("scalar resolvent on the 4-regular tree") {
  const WeightSystem ws = testing::scalar_regular(4);
  ResolventOptions ro;
  ro.eta_schedule = {3.0};
  ro.tol = 1e-13;
  const ResolventState st = solve_resolvent(ws, 0.0, ro);
  CHECK(st.converged);
  CHECK(st.z == Complex(0.0, 3.0));
  for (const auto& g : st.gammas) CHECK(std::abs(g(0, 0) - Complex(0.0, -0.263762615825973334)) <= 1e-12);
  CHECK(std::abs(st.g_oo(0, 0) - Complex(0.0, -0.246606055596467200)) <= 1e-12);
  CHECK(fixed_point_residual(ws, st.z, st.gammas) <= ro.tol);
}

TEST_CASE("Neumann regime far outside the spectrum") {
  Rng rng(41);
  const WeightSystem ws = testing::random_symmetric_ws(3, 1, 3, rng);
  const double bound = norm_bound(ws);
  ResolventOptions ro;
  ro.eta_final = 0.0;
  for (double mu : {bound + 1.5, -bound - 3.0}) {
    const ResolventState st = solve_resolvent(ws, mu, ro);
    CHECK(st.converged);
    CHECK(st.residual <= ro.tol);
    for (const auto& g : st.gammas) CHECK(op_norm(g) <= 1.0 / (std::abs(mu) - bound) + ro.tol);
  }
}

TEST_CASE("Figure 1 atom at zero") {
  const WeightSystem ws = preset("figure1");
  const ResolventState st = solve_resolvent(ws, 0.0);
  CHECK(st.converged);
  CHECK(-st.g_oo.trace().imag() > 1e4);
  const MembershipResult m = is_in_limit_spectrum(ws, 0.0);
  CHECK(m.member);
  CHECK(m.atom_mass == doctest::Approx(0.2).epsilon(0.01));
}

TEST_CASE("returned states satisfy their declared tolerance") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightSystem ws = testing::random_symmetric_ws(2, 1, 3, rng);
    const double mu = (2.0 * rng.uniform() - 1.0) * norm_bound(ws);
    ResolventOptions ro;
    ro.eta_final = 1e-3;
    const ResolventState st = try_solve_resolvent(ws, mu, ro);
    if (!st.converged) continue;
    CHECK(fixed_point_residual(ws, st.z, st.gammas) <= ro.tol);
    // Herglotz sign.
    CHECK(min_neg_imag_eig(st.gammas) >= -1e-9);
    CHECK(min_neg_imag_eig({st.g_oo}) >= -1e-9);
  }
}

TEST_CASE("second resolvent identity at the fixed point") {
  Rng rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    const WeightSystem ws = testing::random_symmetric_ws(3, 2, 5, rng);
    ResolventOptions ro;
    ro.eta_schedule = default_eta_schedule(0.5);
    const ResolventState st = solve_resolvent(ws, 0.3, ro);
    for (int i = 0; i < ws.d(); ++i) {
      const CMatrix& ah = st.a_hats[static_cast<size_t>(i)];
      const CMatrix& ahs = st.a_hats[static_cast<size_t>(ws.star[static_cast<size_t>(i)])];
      const CMatrix lhs = ws.weights[static_cast<size_t>(i)] * st.g_oo;
      const CMatrix rhs = ah * inv(CMatrix::Identity(3, 3) - ahs * ah);
      CHECK((lhs - rhs).norm() <= 10.0 * ro.tol * std::max(1.0, lhs.norm()));
    }
  }
}

TEST_CASE("build_L examples") {
  const int d = 4;
  std::vector<CMatrix> ones(d, CMatrix::Ones(1, 1));
  const CPMapL l = build_L(ones, canonical_star(2, d));
  for (const auto& b : l.apply(ones)) CHECK(b(0, 0) == Complex(3.0));

  const CPMapL single = build_L({CMatrix::Ones(1, 1)}, {0});
  CHECK(single.apply({CMatrix::Ones(1, 1)})[0].norm() == 0.0);

  Rng rng(44);
  const auto b = random_blocks(5, 3, rng);
  const auto star = canonical_star(2, 5);
  const auto x = random_blocks(5, 3, rng);
  const auto fast = build_L(b, star).apply(x);
  const auto slow = naive_L(b, star, x);
  for (int i = 0; i < 5; ++i) CHECK((fast[static_cast<size_t>(i)] - slow[static_cast<size_t>(i)]).norm() <= 1e-12 * slow[static_cast<size_t>(i)].norm());
}

TEST_CASE("cp_radius examples") {
  const std::vector<CMatrix> ones(4, CMatrix::Ones(1, 1));
  const CPRadius unit = cp_radius(build_L(ones, canonical_star(2, 4)));
  CHECK(unit.rho == doctest::Approx(3.0).epsilon(1e-12));
  for (const auto& b : unit.x) CHECK(b(0, 0).real() == doctest::Approx(0.5).epsilon(1e-9));

  Rng rng(45);
  int checked = 0;
  for (int r = 1; r <= 4; ++r)
    for (int d = 2; d * r <= 12 && d * r * r <= 144; ++d) {
      const CPMapL l = build_L(random_blocks(d, r, rng), canonical_star(d / 2, d));
      const CPRadius cp = cp_radius(l);
      CHECK(std::abs(cp.rho - dense_rho(l)) <= 1e-8 * std::max(1.0, cp.rho));
      for (const auto& b : cp.x) {
        const auto eig = hermitian_eigvals(0.5 * (b + b.adjoint()));
        CHECK(eig.front() >= -1e-10);
      }
      ++checked;
    }
  CHECK(checked >= 10);
}

TEST_CASE("cp_radius scales quadratically") {
  Rng rng(46);
  const auto b = random_blocks(4, 2, rng);
  const auto star = canonical_star(1, 4);
  const double rho = cp_radius(build_L(b, star)).rho;
  const Complex c(0.7, -1.1);
  std::vector<CMatrix> scaled;
  for (const auto& m : b) scaled.push_back(c * m);
  CHECK(cp_radius(build_L(scaled, star)).rho == doctest::Approx(std::norm(c) * rho).epsilon(1e-8));
}

TEST_CASE("rho_b_star") {
  for (int d : {3, 4, 6}) CHECK(rho_b_star(testing::scalar_regular(d)) == doctest::Approx(std::sqrt(d - 1.0)).epsilon(1e-9));
  CHECK(rho_b_star(testing::scalar_regular(1)) == 0.0);

  Rng rng(47);
  WeightSystem ws = testing::random_symmetric_ws(3, 2, 5, rng);
  const double base = rho_b_star(ws);
  const CMatrix bump = 1e-6 * random_complex_matrix(3, 3, rng).normalized();
  ws.weights[0] += bump;
  ws.weights[2] += bump.adjoint();
  CHECK(std::abs(rho_b_star(ws) - base) <= 1e-4);
}

TEST_CASE("Gelfand recursion") {
  const auto blocks = gelfand_blocks(testing::scalar_regular(4), 6);
  for (int n = 0; n <= 6; ++n)
    for (const auto& b : blocks[static_cast<size_t>(n)]) CHECK(b(0, 0).real() == std::pow(3.0, n));
  for (double v : gelfand_crosscheck(testing::scalar_regular(4), 6)) CHECK(v == doctest::Approx(std::sqrt(3.0)));

  const WeightSystem fig = preset("figure1");
  for (const auto& level : gelfand_blocks(fig, 8))
    for (const auto& b : level) CHECK(hermitian_eigvals(b).front() >= -1e-9);
  const auto seq = gelfand_crosscheck(fig, 12);
  CHECK(seq.size() == 12);
  CHECK(std::abs(seq.back() - rho_b_star(fig)) <= 0.1 * rho_b_star(fig));
}

TEST_CASE("membership examples") {
  const WeightSystem fig = preset("figure1");
  CHECK_FALSE(is_in_limit_spectrum(fig, norm_bound(fig) + 2.0).member);
  CHECK(is_in_limit_spectrum(fig, 1.0).member);
  CHECK_FALSE(is_in_limit_spectrum(fig, 0.15).member);
  const WeightSystem reg = testing::scalar_regular(4);
  CHECK_FALSE(is_in_limit_spectrum(reg, 3.465).member);
  CHECK(is_in_limit_spectrum(reg, 3.45).member);
}

TEST_CASE("membership is consistent at the edges") {
  const WeightSystem reg = testing::scalar_regular(4);
  const double delta = 5.0 * ScanOptions{}.refine_tol;
  for (double s : {-1.0, 1.0}) {
    CHECK(is_in_limit_spectrum(reg, s * (kEdge4 - delta)).member);
    CHECK_FALSE(is_in_limit_spectrum(reg, s * (kEdge4 + delta)).member);
  }
  for (int k = 0; k <= 20; ++k) {
    const double mu = -kEdge4 + delta + k * (2.0 * (kEdge4 - delta) / 20.0);
    CHECK(is_in_limit_spectrum(reg, mu).member);
    CHECK_FALSE(is_in_limit_spectrum(reg, kEdge4 + delta + 0.1 * k).member);
  }
}

TEST_CASE("scan of the 4-regular tree") {
  ScanOptions so;
  const ScanResult res = limit_spectrum_scan(testing::scalar_regular(4), so);
  CHECK(res.nonconverged == 0);
  REQUIRE(res.set.intervals().size() == 1);
  CHECK(res.set.points().empty());
  CHECK(std::abs(res.set.intervals()[0].lo + kEdge4) <= 2.0 * so.refine_tol);
  CHECK(std::abs(res.set.intervals()[0].hi - kEdge4) <= 2.0 * so.refine_tol);
  for (size_t k = 1; k < res.rows.size(); ++k) CHECK(res.rows[k - 1].mu <= res.rows[k].mu);
}

TEST_CASE("scan without generators returns the eigenvalues of a0") {
  WeightSystem ws;
  ws.r = 2;
  ws.a0 = CMatrix::Zero(2, 2);
  ws.a0(0, 0) = 1.0;
  ws.a0(1, 1) = 2.0;
  const ScanResult res = limit_spectrum_scan(ws);
  CHECK(res.set.intervals().empty());
  REQUIRE(res.set.points().size() == 2);
  CHECK(res.set.points()[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(res.set.points()[1] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("spectral edges") {
  CHECK(std::abs(spectral_edge(testing::scalar_regular(4), 1e-4) - kEdge4) <= 2e-4);
  CHECK(std::abs(spectral_edge(testing::scalar_regular(2), 1e-4) - 2.0) <= 2e-4);
  CHECK(std::abs(spectral_edge(preset("figure1"), 1e-4) - 2.866) <= 0.005);
  CHECK_THROWS_AS(spectral_edge(testing::scalar_regular(4), 0.0), InvalidArgument);
}

TEST_CASE("free moments") {
  const WeightSystem reg = testing::scalar_regular(4);
  CHECK(free_moment(reg, 0) == doctest::Approx(1.0));
  CHECK(free_moment(reg, 1) == doctest::Approx(0.0));
  CHECK(free_moment(reg, 2) == doctest::Approx(4.0));
  CHECK(free_moment(reg, 4) == doctest::Approx(28.0));
  CHECK(free_moment(reg, 6) == doctest::Approx(232.0));
  const WeightSystem fig = preset("figure1");
  CHECK(std::abs(free_moment(fig, 1)) <= 1e-12);
  CHECK(free_moment(fig, 2) == doctest::Approx(2.8));
  CHECK(std::abs(free_moment(fig, 3)) <= 1e-12);
  CHECK(free_moment(fig, 4) == doctest::Approx(14.8));
  CHECK(free_moment(fig, 6) == doctest::Approx(90.4));
  CHECK_THROWS_AS(free_moment(reg, kMaxFreeMomentOrder + 1), DepthTooLarge);
}

TEST_CASE("free moments against the smoothed density") {
  const WeightSystem reg = testing::scalar_regular(4);
  ResolventOptions ro;
  ro.eta_schedule = default_eta_schedule(1e-3);
  const double h = 1e-3;
  double m[5] = {0, 0, 0, 0, 0};
  for (int k = -6000; k <= 6000; ++k) {
    const double mu = k * h;
    const double rho = -solve_resolvent(reg, mu, ro).g_oo(0, 0).imag() / M_PI;
    double p = 1.0;
    for (int j = 0; j <= 4; ++j) {
      m[j] += h * rho * p;
      p *= mu;
    }
  }
  for (int j : {0, 2, 4}) CHECK(std::abs(m[j] - free_moment(reg, j)) <= 0.02 * free_moment(reg, j));
  CHECK(std::abs(m[1]) <= 0.02);
  CHECK(std::abs(m[3]) <= 0.02);
}

#pragma once

#include <cstdint>
#include <vector>

#include "liftspec/model.hpp"
#include "liftspec/numerics.hpp"
#include "liftspec/spectral_set.hpp"

namespace liftspec {

// Solution of the tree recursion
//   gamma_i = (z - a0 - sum_{j != i*} a_j gamma_j a_{j*})^{-1}
// at z, with G_oo = (z - a0 - sum_j a_j gamma_j a_{j*})^{-1} and
// a_hat_i = a_i gamma_i.
struct ResolventState {
  Complex z;
  std::vector<CMatrix> gammas;
  CMatrix g_oo;
  std::vector<CMatrix> a_hats;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct ResolventOptions {
  // Decreasing imaginary parts, the last one used for the returned state.
  // Empty: geometric from 1 with ratio 1/2 down to 1e-5, then eta_final.
  std::vector<double> eta_schedule;
  double eta_final = 1e-5;
  double damping = 0.5;
  double tol = 1e-10;
  int max_iter = 200000;
};

std::vector<double> default_eta_schedule(double eta_final);

// max_i ||gamma_i - F_i(gamma)||_F / max(1, max_i ||gamma_i||_F).
double fixed_point_residual(const WeightSystem& ws, Complex z,
                            const std::vector<CMatrix>& gammas);

// z = mu + i eta along the schedule. Warm-started damped iteration per level,
// with a Newton solve when the damped iteration stalls. Throws NoConvergence
// or SingularIteration.
ResolventState solve_resolvent(const WeightSystem& ws, Complex mu,
                               const ResolventOptions& opts = {});

// Same, but never throws on failure; `converged` tells.
ResolventState try_solve_resolvent(const WeightSystem& ws, Complex mu,
                                   const ResolventOptions& opts = {});

// min over i of the smallest eigenvalue of -Im(m_i) = (m_i^* - m_i) / (2i).
double min_neg_imag_eig(const std::vector<CMatrix>& ms);

// (L x)_ii = sum_{j != i*} b_j x_jj b_j^* on block-diagonal x.
struct CPMapL {
  int r = 1;
  std::vector<int> star;
  std::vector<CMatrix> b;

  int d() const { return static_cast<int>(b.size()); }
  std::vector<CMatrix> apply(const std::vector<CMatrix>& x) const;
};

CPMapL build_L(std::vector<CMatrix> b, std::vector<int> star);

struct CPRadius {
  double rho = 0.0;
  std::vector<CMatrix> x;  // PSD blocks, unit Frobenius norm
  int iterations = 0;
  double residual = 0.0;   // ||L x - rho x||
};

// Power iteration from x0 = Id, shifted by half the running estimate.
CPRadius cp_radius(const CPMapL& l, double tol = 1e-12, int max_iter = 1000000);

// (d r^2) x (d r^2) matrix of L; block i is vec'd column-major at offset i r^2.
CMatrix dense_matrix(const CPMapL& l);

// rho(B_star) = rho(L)^{1/2}.
double rho_b_star(const WeightSystem& ws);

// max_i ||Z_{n,i}||^{1/(2n)} for n = 1..n_max with Z_0 = Id, Z_{n+1} = L(Z_n).
std::vector<double> gelfand_crosscheck(const WeightSystem& ws, int n_max);
// The blocks Z_n themselves, n = 0..n_max.
std::vector<std::vector<CMatrix>> gelfand_blocks(const WeightSystem& ws, int n_max);

struct MembershipOptions {
  double eta_final = 1e-5;
  double rho_tol = 1e-3;
  // An atom of mass m at mu gives eta * (-Im tr G_oo) / r close to m.
  double atom_tol = 1e-2;
  // Density fallback when the resolvent does not converge.
  double density_tol = 1e-3;
  double tol = 1e-9;
};

struct MembershipResult {
  bool member = false;
  double rho_b_mu = 0.0;
  double im_tr_goo = 0.0;  // -Im tr G_oo
  double atom_mass = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

MembershipResult is_in_limit_spectrum(const WeightSystem& ws, double mu,
                                      const MembershipOptions& opts = {});

struct ScanOptions {
  // Both zero: +-(norm bound) padded by two grid steps.
  double lo = 0.0;
  double hi = 0.0;
  double grid_step = 1e-2;
  double refine_tol = 1e-4;
  MembershipOptions membership;
  int threads = 1;
};

struct ScanRow {
  double mu = 0.0;
  MembershipResult m;
};

struct ScanResult {
  SpectralSet set;
  std::vector<ScanRow> rows;  // grid and refinement points, sorted by mu
  int nonconverged = 0;
};

ScanResult limit_spectrum_scan(const WeightSystem& ws, const ScanOptions& opts = {});

// s(A_star): first member found scanning down from the norm bound, then
// bisection to tol.
double spectral_edge(const WeightSystem& ws, double tol = 1e-4,
                     const MembershipOptions& opts = {});

inline constexpr int kMaxFreeMomentOrder = 16;

// tau(A_star^k) on the depth ceil(k/2) ball of the free-product Cayley tree.
double free_moment(const WeightSystem& ws, int k);

}  // namespace liftspec

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace liftspec {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Builds a matrix from row-major entries. Rejects NaN/Inf.
CMatrix make_matrix(Eigen::Index rows, Eigen::Index cols,
                    std::span<const Complex> row_major);

bool all_finite(const CMatrix& m);

// Largest singular value.
double op_norm(const CMatrix& m);

// Inverse with an exact singular-value guard: throws SingularMatrix when the
// smallest singular value is below 1e-12 * ||M||.
CMatrix inv(const CMatrix& m);

// LU inverse guarded by the reciprocal condition estimate. Used in inner
// loops where an SVD per inverse would dominate the cost.
CMatrix inv_fast(const CMatrix& m, double rcond_floor = 1e-13);

struct HermitianEigResult {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // orthonormal columns, same order
};

HermitianEigResult hermitian_eig(const CMatrix& m);
std::vector<double> hermitian_eigvals(const CMatrix& m);

inline constexpr Eigen::Index kMaxDenseGeneralDim = 4096;

// All eigenvalues of a square matrix (multiset, unsorted).
std::vector<Complex> general_eig_dense(const CMatrix& m);

// Eigenvalues together with right eigenvectors (columns).
struct GeneralEigResult {
  std::vector<Complex> eigenvalues;
  CMatrix eigenvectors;
};
GeneralEigResult general_eig_dense_vectors(const CMatrix& m);

double min_singular_value(const CMatrix& m);

// Relative tolerance helper: tol * max(scale, 1e-14).
inline double scaled_tol(double tol, double scale) {
  return tol * std::max(scale, 1e-14);
}

}  // namespace liftspec

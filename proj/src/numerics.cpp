#include "liftspec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

#include "liftspec/errors.hpp"

namespace liftspec {

namespace {

std::string dims(const CMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const CMatrix& m, const char* op) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(op) + ": matrix is not square (" +
                            dims(m) + ")");
  }
}

std::vector<double> singular_values(CMatrix a) {
  const lapack_int rows = static_cast<lapack_int>(a.rows());
  const lapack_int cols = static_cast<lapack_int>(a.cols());
  std::vector<double> s(static_cast<size_t>(std::min(rows, cols)));
  if (s.empty()) return s;
  std::vector<double> superb(s.size() + 1);
  // Eigen storage is column-major.
  const lapack_int info = LAPACKE_zgesvd(
      LAPACK_COL_MAJOR, 'N', 'N', rows, cols,
      reinterpret_cast<lapack_complex_double*>(a.data()), rows, s.data(),
      nullptr, 1, nullptr, 1, superb.data());
  if (info != 0) {
    throw NumericalError("zgesvd failed with info=" + std::to_string(info));
  }
  return s;  // descending
}

bool is_real(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j).imag() != 0.0) return false;
  return true;
}

void require_hermitian(const CMatrix& m) {
  require_square(m, "hermitian_eig");
  const double scale = m.norm();
  const double asym = (m - m.adjoint()).norm();
  if (asym > scaled_tol(1e-10, scale)) {
    throw NotHermitian("hermitian_eig: ||M - M*|| = " + std::to_string(asym) +
                       " exceeds 1e-10 * ||M||");
  }
}

HermitianEigResult hermitian_solve(const CMatrix& m, bool want_vectors) {
  require_hermitian(m);
  const lapack_int n = static_cast<lapack_int>(m.rows());
  HermitianEigResult out;
  out.eigenvalues.resize(static_cast<size_t>(n));
  if (n == 0) return out;
  const char jobz = want_vectors ? 'V' : 'N';
  if (is_real(m)) {
    Eigen::MatrixXd a = m.real();
    // Symmetrize exactly so the lower triangle LAPACK reads is consistent.
    a = 0.5 * (a + a.transpose()).eval();
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'L', n,
                                           a.data(), n, out.eigenvalues.data());
    if (info != 0)
      throw NumericalError("dsyevd failed with info=" + std::to_string(info));
    if (want_vectors) out.eigenvectors = a.cast<Complex>();
  } else {
    CMatrix a = 0.5 * (m + m.adjoint());
    const lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, jobz, 'L', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n,
        out.eigenvalues.data());
    if (info != 0)
      throw NumericalError("zheevd failed with info=" + std::to_string(info));
    if (want_vectors) out.eigenvectors = std::move(a);
  }
  return out;
}

}  // namespace

CMatrix make_matrix(Eigen::Index rows, Eigen::Index cols,
                    std::span<const Complex> row_major) {
  if (rows <= 0 || cols <= 0) throw InvalidArgument("matrix dimensions must be positive");
  if (static_cast<Eigen::Index>(row_major.size()) != rows * cols) {
    throw DimensionMismatch("make_matrix: expected " +
                            std::to_string(rows * cols) + " entries, got " +
                            std::to_string(row_major.size()));
  }
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Complex v = row_major[static_cast<size_t>(i * cols + j)];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw InvalidArgument("make_matrix: non-finite entry at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      }
      m(i, j) = v;
    }
  }
  return m;
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m).front();
}

CMatrix inv(const CMatrix& m) {
  require_square(m, "inv");
  const auto s = singular_values(m);
  const double smax = s.front();
  const double smin = s.back();
  if (!(smin > 1e-12 * smax) || smax == 0.0) {
    throw SingularMatrix("inv: smallest singular value " + std::to_string(smin) +
                         " <= 1e-12 * ||M|| (" + std::to_string(smax) + ")");
  }
  return m.partialPivLu().inverse();
}

CMatrix inv_fast(const CMatrix& m, double rcond_floor) {
  require_square(m, "inv_fast");
  Eigen::PartialPivLU<CMatrix> lu(m);
  // rcond() is NaN-blind: an exactly zero pivot can report 1.
  const double rc = lu.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0 ? lu.rcond() : 0.0;
  if (!(rc > rcond_floor)) {
    throw SingularMatrix("inverse: reciprocal condition estimate " +
                         std::to_string(rc) + " below floor");
  }
  return lu.inverse();
}

HermitianEigResult hermitian_eig(const CMatrix& m) {
  return hermitian_solve(m, true);
}

std::vector<double> hermitian_eigvals(const CMatrix& m) {
  return hermitian_solve(m, false).eigenvalues;
}

GeneralEigResult general_eig_dense_vectors(const CMatrix& m) {
  require_square(m, "general_eig_dense");
  if (m.rows() > kMaxDenseGeneralDim) {
    throw DimensionTooLarge("general_eig_dense: dimension " +
                            std::to_string(m.rows()) + " exceeds " +
                            std::to_string(kMaxDenseGeneralDim));
  }
  const lapack_int n = static_cast<lapack_int>(m.rows());
  GeneralEigResult out;
  if (n == 0) return out;
  CMatrix a = m;
  std::vector<Complex> w(static_cast<size_t>(n));
  out.eigenvectors.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
      reinterpret_cast<lapack_complex_double*>(out.eigenvectors.data()), n);
  if (info != 0)
    throw NumericalError("zgeev failed with info=" + std::to_string(info));
  out.eigenvalues = std::move(w);
  return out;
}

std::vector<Complex> general_eig_dense(const CMatrix& m) {
  require_square(m, "general_eig_dense");
  if (m.rows() > kMaxDenseGeneralDim) {
    throw DimensionTooLarge("general_eig_dense: dimension " +
                            std::to_string(m.rows()) + " exceeds " +
                            std::to_string(kMaxDenseGeneralDim));
  }
  const lapack_int n = static_cast<lapack_int>(m.rows());
  std::vector<Complex> w(static_cast<size_t>(n));
  if (n == 0) return w;
  CMatrix a = m;
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', n,
      reinterpret_cast<lapack_complex_double*>(a.data()), n,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr,
      1);
  if (info != 0)
    throw NumericalError("zgeev failed with info=" + std::to_string(info));
  return w;
}

double min_singular_value(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const auto s = singular_values(m);
  // A wide or tall matrix has a nontrivial kernel on one side; report the
  // smallest computed value, consistent with sqrt(lambda_min(M*M)) for
  // square inputs.
  return std::max(0.0, s.back());
}

}  // namespace liftspec

#include "bvarx/linalg.hpp"

#include <string>

#include "bvarx/errors.hpp"

namespace bvarx {

MatrixXd symmetrize(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

bool is_diagonal(const MatrixXd& a) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j && a(i, j) != 0.0) return false;
  return true;
}

Eigen::LLT<MatrixXd> checked_llt(const MatrixXd& a, std::string_view module,
                                 std::string_view what) {
  Eigen::LLT<MatrixXd> llt(a);
  if (llt.info() != Eigen::Success || !llt.matrixL().toDenseMatrix().allFinite()) {
    throw NumericalError(std::string(module),
                         "Cholesky factorization failed for " + std::string(what));
  }
  // Eigen's LLT does not flag non-positive pivots that are tiny negatives
  // rounded to zero; check the diagonal explicitly.
  const MatrixXd l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0)) {
      throw NumericalError(std::string(module),
                           std::string(what) + " is not positive definite");
    }
  }
  return llt;
}

MatrixXd spd_inverse(const MatrixXd& a, std::string_view module) {
  if (is_diagonal(a)) {
    MatrixXd out = MatrixXd::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (!(a(i, i) > 0.0))
        throw NumericalError(std::string(module), "diagonal matrix is not positive definite");
      out(i, i) = 1.0 / a(i, i);
    }
    return out;
  }
  auto llt = checked_llt(a, module, "matrix inverse");
  return symmetrize(llt.solve(MatrixXd::Identity(a.rows(), a.cols())));
}

MatrixXd cholesky_or_zero(const MatrixXd& a, std::string_view module,
                          std::string_view what) {
  if (a.isZero(0.0)) return MatrixXd::Zero(a.rows(), a.cols());
  return checked_llt(a, module, what).matrixL();
}

MatrixXd least_squares(const MatrixXd& x, const MatrixXd& y,
                       std::string_view module) {
  if (x.rows() != y.rows())
    throw NumericalError(std::string(module), "least squares: row mismatch");
  Eigen::ColPivHouseholderQR<MatrixXd> qr(x);
  if (qr.rank() < x.cols()) {
    throw NumericalError(std::string(module),
                         "rank-deficient regressor matrix (rank " +
                             std::to_string(qr.rank()) + " of " +
                             std::to_string(x.cols()) + ")");
  }
  return qr.solve(y);
}

double max_abs(const MatrixXd& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

}  // namespace bvarx

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <string_view>

namespace bvarx {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// (A + A') / 2.
MatrixXd symmetrize(const MatrixXd& a);

bool is_diagonal(const MatrixXd& a);

/// Cholesky factorization that throws NumericalError naming `what` on failure.
Eigen::LLT<MatrixXd> checked_llt(const MatrixXd& a, std::string_view module,
                                 std::string_view what);

/// Inverse of a symmetric positive-definite matrix. Diagonal inputs are
/// inverted elementwise, others through a Cholesky solve.
MatrixXd spd_inverse(const MatrixXd& a, std::string_view module = "linalg");

/// Lower Cholesky factor, or the zero matrix when `a` is exactly zero.
/// Anything else that is not positive definite throws.
MatrixXd cholesky_or_zero(const MatrixXd& a, std::string_view module,
                          std::string_view what);

/// Least squares B minimizing ||Y - X B||_F. Throws on rank deficiency.
MatrixXd least_squares(const MatrixXd& x, const MatrixXd& y,
                       std::string_view module);

/// Max absolute entry.
double max_abs(const MatrixXd& a);

}  // namespace bvarx

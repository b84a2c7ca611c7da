#include <limits>

#include <Eigen/Eigenvalues>

#include "bvarx/errors.hpp"
#include "bvarx/szbvar.hpp"

namespace bvarx {

Eigen::MatrixXd companion_matrix(const std::vector<Eigen::MatrixXd>& phi) {
  if (phi.empty()) throw NumericalError("szbvarx_core", "companion matrix needs at least one lag block");
  const Eigen::Index m = phi.front().rows();
  const auto p = static_cast<Eigen::Index>(phi.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m * p, m * p);
  for (Eigen::Index l = 0; l < p; ++l) {
    const auto& block = phi[static_cast<std::size_t>(l)];
    if (block.rows() != m || block.cols() != m)
      throw NumericalError("szbvarx_core", "lag blocks must all be m x m");
    c.block(0, l * m, m, m) = block;
  }
  if (p > 1) c.block(m, 0, m * (p - 1), m * (p - 1)).setIdentity();
  return c;
}

StabilityResult stability(const std::vector<Eigen::MatrixXd>& phi) {
  const Eigen::MatrixXd c = companion_matrix(phi);
  if (!c.allFinite()) return {false, std::numeric_limits<double>::infinity()};
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalError("szbvarx_core", "eigenvalue solver did not converge on the companion matrix");
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  return {radius < 1.0 - kStabilityEps, radius};
}

}  // namespace bvarx

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "bvarx/compare.hpp"
#include "bvarx/errors.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "compare_tests";

}  // namespace

std::string to_string(HacKernel kernel) {
  switch (kernel) {
    case HacKernel::Rectangular:
      return "rectangular";
    case HacKernel::Bartlett:
      return "bartlett";
    case HacKernel::Parzen:
      return "parzen";
  }
  return "unknown";
}

double kernel_weight(HacKernel kernel, Eigen::Index j, Eigen::Index bandwidth) {
  if (j == 0) return 1.0;
  switch (kernel) {
    case HacKernel::Rectangular:
      return j <= bandwidth ? 1.0 : 0.0;
    case HacKernel::Bartlett:
      return j <= bandwidth ? 1.0 - static_cast<double>(j) / static_cast<double>(bandwidth + 1) : 0.0;
    case HacKernel::Parzen: {
      if (bandwidth <= 0) return 0.0;
      const double x = static_cast<double>(j) / static_cast<double>(bandwidth);
      if (x <= 0.5) return 1.0 - 6.0 * x * x + 6.0 * x * x * x;
      if (x <= 1.0) return 2.0 * std::pow(1.0 - x, 3);
      return 0.0;
    }
  }
  return 0.0;
}

Eigen::Index newey_west_bandwidth(Eigen::Index n) {
  return static_cast<Eigen::Index>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

double newey_west_var(const Eigen::VectorXd& series, Eigen::Index lag) {
  const Eigen::Index n = series.size();
  if (n < 2) throw DataError(DataFault::BadShape, kModule, "HAC variance needs at least two observations");
  if (lag < 0 || lag >= n) throw ConfigError(kModule, "HAC lag must lie in [0, N)");
  const Eigen::VectorXd x = series.array() - series.mean();
  const double dn = static_cast<double>(n);
  double total = x.squaredNorm() / dn;
  for (Eigen::Index j = 1; j <= lag; ++j) {
    const double gj = x.tail(n - j).dot(x.head(n - j)) / dn;
    total += 2.0 * kernel_weight(HacKernel::Bartlett, j, lag) * gj;
  }
  return std::max(0.0, total) / dn;
}

Eigen::MatrixXd hac_covariance(const Eigen::MatrixXd& x, Eigen::Index lag, HacKernel kernel) {
  const Eigen::Index t = x.rows();
  if (t < 2) throw DataError(DataFault::BadShape, kModule, "HAC covariance needs at least two observations");
  if (lag < 0) throw ConfigError(kModule, "HAC lag must be >= 0");
  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  const double dt = static_cast<double>(t);
  Eigen::MatrixXd omega = c.transpose() * c / dt;
  for (Eigen::Index j = 1; j <= std::min(lag, t - 1); ++j) {
    const double w = kernel_weight(kernel, j, lag);
    if (w == 0.0) continue;
    const Eigen::MatrixXd gj = c.bottomRows(t - j).transpose() * c.topRows(t - j) / dt;
    omega += w * (gj + gj.transpose());
  }
  return (omega + omega.transpose()) / 2.0;
}

double chi_square_sf(double statistic, double dof) {
  if (!(dof > 0.0)) throw ConfigError(kModule, "chi-square degrees of freedom must be > 0");
  if (std::isnan(statistic)) return std::numeric_limits<double>::quiet_NaN();
  if (statistic <= 0.0) return 1.0;
  if (std::isinf(statistic)) return 0.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

}  // namespace bvarx

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <Eigen/Eigenvalues>

#include "bvarx/compare.hpp"
#include "bvarx/errors.hpp"
#include "bvarx/metrics.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "compare_tests";

// T dbar' Omega^{-1} dbar with the degenerate and singular cases flagged.
WaldTestResult wald(const Eigen::MatrixXd& d, const Eigen::MatrixXd& omega) {
  WaldTestResult out;
  const double t = static_cast<double>(d.rows());
  const Eigen::VectorXd dbar = d.colwise().mean().transpose();
  out.dof = static_cast<int>(d.cols());
  if (omega.cwiseAbs().maxCoeff() == 0.0) {
    out.degenerate = true;
    if (dbar.cwiseAbs().maxCoeff() == 0.0) {
      out.statistic = 0.0;
      out.p_value = 1.0;
    } else {
      out.statistic = std::numeric_limits<double>::infinity();
      out.p_value = 0.0;
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega);
  if (es.info() != Eigen::Success) throw NumericalError(kModule, "eigen-decomposition of the HAC covariance failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  const double tol = 1e-12 * ev.cwiseAbs().maxCoeff();
  const Eigen::VectorXd proj = es.eigenvectors().transpose() * dbar;
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > tol) s += proj(i) * proj(i) / ev(i);
    else out.pseudo_inverse = true;
  }
  out.statistic = t * s;
  return out;
}

}  // namespace

double extremal_score(double forecast, double actual, double theta, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError(kModule, "expectile level must lie in (0, 1)");
  if (actual <= theta && theta < forecast) return (alpha - 1.0) * (actual - theta);
  if (forecast <= theta && theta < actual) return alpha * (actual - theta);
  return 0.0;
}

std::vector<double> murphy_grid(const Eigen::VectorXd& fa, const Eigen::VectorXd& fb, const Eigen::VectorXd& actual,
                                std::size_t points) {
  if (points < 2) throw ConfigError(kModule, "Murphy grid needs at least two points");
  const double lo = std::min({fa.minCoeff(), fb.minCoeff(), actual.minCoeff()});
  const double hi = std::max({fa.maxCoeff(), fb.maxCoeff(), actual.maxCoeff()});
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  if (!(hi > lo)) grid.resize(1);
  return grid;
}

MurphyCurve murphy_diff(const Eigen::VectorXd& fa, const Eigen::VectorXd& fb, const Eigen::VectorXd& actual,
                        const std::vector<double>& thetas, double alpha, double conf, Eigen::Index lag) {
  const Eigen::Index n = actual.size();
  if (fa.size() != n || fb.size() != n) throw DataError(DataFault::BadShape, kModule, "Murphy inputs differ in length");
  if (n < 2) throw DataError(DataFault::BadShape, kModule, "Murphy diagram needs at least two observations");
  if (thetas.empty()) throw ConfigError(kModule, "empty theta grid");
  for (std::size_t i = 1; i < thetas.size(); ++i)
    if (!(thetas[i] > thetas[i - 1])) throw ConfigError(kModule, "theta grid must be strictly increasing");
  if (!(conf > 0.0 && conf < 1.0)) throw ConfigError(kModule, "confidence level must lie in (0, 1)");

  MurphyCurve curve;
  curve.thetas = thetas;
  curve.alpha = alpha;
  curve.conf = conf;
  curve.lag = lag < 0 ? std::min(newey_west_bandwidth(n), n - 1) : lag;
  const double z = boost::math::quantile(boost::math::normal(), 1.0 - (1.0 - conf) / 2.0);
  Eigen::VectorXd d(n);
  for (double theta : thetas) {
    for (Eigen::Index t = 0; t < n; ++t)
      d(t) = extremal_score(fa(t), actual(t), theta, alpha) - extremal_score(fb(t), actual(t), theta, alpha);
    const double mean = d.mean();
    const double var = newey_west_var(d, curve.lag);
    const double half = z * std::sqrt(var);
    curve.diff.push_back(mean);
    curve.variance.push_back(var);
    curve.band_lo.push_back(mean - half);
    curve.band_hi.push_back(mean + half);
  }
  return curve;
}

Eigen::VectorXd absolute_scaled_errors(const Eigen::VectorXd& actual, const Eigen::VectorXd& forecast,
                                       const Eigen::VectorXd& insample, int season) {
  if (actual.size() != forecast.size()) throw DataError(DataFault::BadShape, kModule, "lengths differ");
  const double scale = seasonal_naive_mad(insample, season);
  if (scale == 0.0) throw NumericalError(kModule, "in-sample naive MAD is zero");
  return (actual - forecast).cwiseAbs() / scale;
}

WaldTestResult dm_multivariate(const Eigen::MatrixXd& losses, const DmOptions& opts) {
  const Eigen::Index t = losses.rows();
  const Eigen::Index k = losses.cols();
  if (k < 2) throw ConfigError(kModule, "DM test needs at least two models");
  if (t <= k) throw DataError(DataFault::BadShape, kModule, "DM test needs more observations than models");
  if (opts.q < 1 || opts.q >= t) throw ConfigError(kModule, "DM block length must lie in [1, T)");
  Eigen::MatrixXd d(t, k - 1);
  for (Eigen::Index i = 0; i + 1 < k; ++i)
    d.col(i) = opts.pairing == DmPairing::Adjacent ? losses.col(i) - losses.col(i + 1)
                                                    : losses.col(0) - losses.col(i + 1);
  const Eigen::MatrixXd omega = hac_covariance(d, opts.q - 1, HacKernel::Rectangular);
  WaldTestResult out = wald(d, omega);
  out.kernel = HacKernel::Rectangular;
  out.lag = opts.q - 1;
  if (opts.small_sample_correction) {
    const double dt = static_cast<double>(t);
    const double q = opts.q;
    const double c = (dt + 1.0 - 2.0 * q + q * (q - 1.0) / dt) / dt;
    if (std::isfinite(out.statistic)) out.statistic *= c;
    out.correction = "hln";
  } else {
    out.correction = "none";
  }
  if (!out.degenerate) out.p_value = chi_square_sf(out.statistic, out.dof);
  return out;
}

WaldTestResult gw_unconditional(const Eigen::MatrixXd& loss_diffs, Eigen::Index bandwidth) {
  const Eigen::Index t = loss_diffs.rows();
  const Eigen::Index r = loss_diffs.cols();
  if (r < 1) throw ConfigError(kModule, "GW test needs at least one differential");
  if (t <= r) throw DataError(DataFault::BadShape, kModule, "GW test needs more observations than differentials");
  const Eigen::Index lag =
      bandwidth < 0 ? static_cast<Eigen::Index>(std::floor(std::cbrt(static_cast<double>(t)))) : bandwidth;
  const Eigen::MatrixXd omega = hac_covariance(loss_diffs, lag, HacKernel::Parzen);
  WaldTestResult out = wald(loss_diffs, omega);
  out.kernel = HacKernel::Parzen;
  out.lag = lag;
  out.correction = "none";
  if (!out.degenerate) out.p_value = chi_square_sf(out.statistic, out.dof);
  return out;
}

}  // namespace bvarx

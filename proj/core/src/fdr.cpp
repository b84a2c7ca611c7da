#include <algorithm>
#include <cmath>
#include <numeric>

#include "bvarx/errors.hpp"
#include "bvarx/wavelet.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "wavelet_coherence";

std::vector<std::size_t> finite_order(const std::vector<double>& p) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (std::isfinite(p[i])) idx.push_back(i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  return idx;
}

}  // namespace

std::vector<bool> fdr_bh(const std::vector<double>& pvals, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError(kModule, "FDR level must lie in (0, 1)");
  std::vector<bool> mask(pvals.size(), false);
  const auto order = finite_order(pvals);
  const double m = static_cast<double>(order.size());
  std::size_t k_star = 0;
  for (std::size_t k = 1; k <= order.size(); ++k)
    if (pvals[order[k - 1]] <= static_cast<double>(k) / m * alpha) k_star = k;
  if (k_star == 0) return mask;
  const double cut = pvals[order[k_star - 1]];
  for (std::size_t i : order)
    if (pvals[i] <= cut) mask[i] = true;
  return mask;
}

BoolField fdr_bh_per_scale(const Eigen::MatrixXd& pvals, double alpha) {
  BoolField mask = BoolField::Constant(pvals.rows(), pvals.cols(), false);
  std::vector<double> row(static_cast<std::size_t>(pvals.cols()));
  for (Eigen::Index s = 0; s < pvals.rows(); ++s) {
    for (Eigen::Index t = 0; t < pvals.cols(); ++t) row[static_cast<std::size_t>(t)] = pvals(s, t);
    const auto m = fdr_bh(row, alpha);
    for (Eigen::Index t = 0; t < pvals.cols(); ++t) mask(s, t) = m[static_cast<std::size_t>(t)];
  }
  return mask;
}

std::vector<double> by_qvalues(const std::vector<double>& pvals) {
  std::vector<double> q(pvals.size(), std::numeric_limits<double>::quiet_NaN());
  const auto order = finite_order(pvals);
  const std::size_t m = order.size();
  if (m == 0) return q;
  double harmonic = 0.0;
  for (std::size_t i = 1; i <= m; ++i) harmonic += 1.0 / static_cast<double>(i);
  double running = 1.0;
  for (std::size_t r = m; r-- > 0;) {
    const double v = pvals[order[r]] * static_cast<double>(m) * harmonic / static_cast<double>(r + 1);
    running = std::min(running, std::min(1.0, v));
    q[order[r]] = running;
  }
  return q;
}

Eigen::MatrixXd by_pooled_qvalues(const Eigen::MatrixXd& pvals) {
  std::vector<double> flat(pvals.data(), pvals.data() + pvals.size());
  const auto q = by_qvalues(flat);
  return Eigen::Map<const Eigen::MatrixXd>(q.data(), pvals.rows(), pvals.cols());
}

}  // namespace bvarx

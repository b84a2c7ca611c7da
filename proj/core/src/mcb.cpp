#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "bvarx/compare.hpp"
#include "bvarx/errors.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "compare_tests";

// Upper quantiles of the studentized range (infinite df) divided by sqrt(2),
// for 2..20 algorithms. Computed by numerical quadrature.
constexpr std::array<double, 19> kQ01{2.5758293035, 2.9134943378, 3.1132503453, 3.2546859715, 3.3637403685, 3.4522128234, 3.5264706985, 3.5903386986, 3.6462915484, 3.6960208999, 3.7407331678, 3.7813182411, 3.8184508563, 3.8526544765, 3.8843431545, 3.9138498871, 3.9414463675, 3.9673570833, 3.9917695942};
constexpr std::array<double, 19> kQ05{1.9599639845, 2.3437005864, 2.5690317725, 2.7277743709, 2.8497054196, 2.9483200175, 3.0308784496, 3.1017303413, 3.1636835771, 3.2186536073, 3.2680039245, 3.3127385934, 3.3536177519, 3.3912302838, 3.4260413794, 3.4584247073, 3.4886847994, 3.5170730087, 3.5437991315};
constexpr std::array<double, 19> kQ10{1.6448536270, 2.0522927305, 2.2913414969, 2.4595157643, 2.5885206019, 2.6927321010, 2.7798836082, 2.8546064312, 2.9198888401, 2.9777682513, 3.0296941832, 3.0767334683, 3.1196933331, 3.1591988189, 3.1957434330, 3.2297234009, 3.2614614896, 3.2912239866, 3.3192330595};

}  // namespace

double nemenyi_q(int algorithms, double alpha) {
  if (algorithms < 2 || algorithms > 20)
    throw ConfigError(kModule, "Nemenyi table covers 2 to 20 algorithms, got " + std::to_string(algorithms));
  const auto i = static_cast<std::size_t>(algorithms - 2);
  if (alpha == 0.01) return kQ01[i];
  if (alpha == 0.05) return kQ05[i];
  if (alpha == 0.10) return kQ10[i];
  throw ConfigError(kModule, "MCB alpha must be one of 0.01, 0.05, 0.10");
}

Eigen::MatrixXd average_ranks(const Eigen::MatrixXd& scores) {
  const Eigen::Index n = scores.cols();
  Eigen::MatrixXd ranks(scores.rows(), n);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::isnan(scores(r, j))) throw DataError(DataFault::MissingValue, kModule, "NaN score in MCB input");
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return scores(r, a) < scores(r, b); });
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && scores(r, order[j + 1]) == scores(r, order[i])) ++j;
      // Positions i..j (0-based) share the mean of ranks i+1..j+1.
      const double rank = static_cast<double>(i + j + 2) / 2.0;
      for (std::size_t u = i; u <= j; ++u) ranks(r, order[u]) = rank;
      i = j + 1;
    }
  }
  return ranks;
}

double critical_distance(int algorithms, int datasets, double alpha) {
  if (datasets < 1) throw ConfigError(kModule, "MCB needs at least one dataset");
  const double a = algorithms;
  return nemenyi_q(algorithms, alpha) * std::sqrt(a * (a + 1.0) / (6.0 * datasets));
}

McbResult mcb(const Eigen::MatrixXd& scores, double alpha) {
  if (scores.rows() < 2 || scores.cols() < 2)
    throw DataError(DataFault::BadShape, kModule, "MCB needs at least two datasets and two algorithms");
  McbResult out;
  out.alpha = alpha;
  out.ranks = average_ranks(scores);
  out.mean_ranks = out.ranks.colwise().mean().transpose();
  out.q_alpha = nemenyi_q(static_cast<int>(scores.cols()), alpha);
  out.cd = critical_distance(static_cast<int>(scores.cols()), static_cast<int>(scores.rows()), alpha);
  out.lower = out.mean_ranks.array() - out.cd / 2.0;
  out.upper = out.mean_ranks.array() + out.cd / 2.0;
  out.mean_ranks.minCoeff(&out.best);
  return out;
}

}  // namespace bvarx

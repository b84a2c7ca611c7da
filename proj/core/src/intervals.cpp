#include <algorithm>
#include <cmath>

#include "bvarx/errors.hpp"
#include "bvarx/forecast.hpp"

namespace bvarx {
namespace {

constexpr const char* kModule = "forecast_engine";

}  // namespace

BoundKind parse_bound_kind(const std::string& name) {
  if (name == "unbounded" || name == "none") return BoundKind::Unbounded;
  if (name == "rate") return BoundKind::Rate;
  if (name == "level") return BoundKind::Level;
  if (name == "custom") return BoundKind::Custom;
  throw ConfigError(kModule, "unknown bound kind '" + name + "'");
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Unbounded:
      return "unbounded";
    case BoundKind::Rate:
      return "rate";
    case BoundKind::Level:
      return "level";
    case BoundKind::Custom:
      return "custom";
  }
  return "unknown";
}

Bound Bound::of(BoundKind kind) {
  switch (kind) {
    case BoundKind::Rate:
      return {0.0, 100.0};
    case BoundKind::Level:
      return {0.0, std::numeric_limits<double>::infinity()};
    case BoundKind::Unbounded:
    case BoundKind::Custom:
      break;
  }
  return {};
}

void SupportBounds::validate() const {
  for (std::size_t j = 0; j < bounds.size(); ++j)
    if (!(bounds[j].lower < bounds[j].upper) || std::isnan(bounds[j].lower) || std::isnan(bounds[j].upper))
      throw ConfigError(kModule, "support bound " + std::to_string(j) + " needs lower < upper");
}

Interval shortest_interval(const std::vector<double>& draws, double anchor, const Bound& bound, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError(kModule, "gamma must lie in (0, 1)");
  if (draws.empty()) throw NumericalError(kModule, "no draws supplied");
  std::vector<double> a;
  a.reserve(draws.size());
  for (double v : draws)
    if (bound.contains(v)) a.push_back(v);
  Interval out;
  out.gamma = gamma;
  out.rho = static_cast<double>(a.size()) / static_cast<double>(draws.size());
  out.admissible = a.size();
  if (a.empty())
    throw NumericalError(kModule, "no admissible draws inside the support bounds (rho = 0)");
  out.gamma_eff = out.rho < 1.0 ? gamma * out.rho : gamma;
  std::sort(a.begin(), a.end());

  const std::size_t n = a.size();
  const double dn = static_cast<double>(n);
  // Smallest window size whose mass reaches gamma.
  std::size_t k = static_cast<std::size_t>(std::floor(gamma * dn));
  k = std::clamp<std::size_t>(k, 1, n);
  while (k < n && static_cast<double>(k) / dn < gamma) ++k;
  while (k > 1 && static_cast<double>(k - 1) / dn >= gamma) --k;

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + k <= n; ++i) {
    const double lo = std::min(a[i], anchor);
    const double hi = std::max(a[i + k - 1], anchor);
    if (hi - lo < best) {
      best = hi - lo;
      out.lower = lo;
      out.upper = hi;
    }
  }
  return out;
}

IntervalTable credible_intervals(const DrawCube& cube, const SupportBounds& bounds, double gamma,
                                 const Eigen::MatrixXd& anchor) {
  if (cube.empty()) throw NumericalError(kModule, "empty draw cube");
  const Eigen::Index h_max = anchor.rows();
  const Eigen::Index m = anchor.cols();
  if (static_cast<Eigen::Index>(bounds.bounds.size()) != m)
    throw ConfigError(kModule, "support bounds given for " + std::to_string(bounds.bounds.size()) +
                                   " variables, expected " + std::to_string(m));
  bounds.validate();
  IntervalTable table(static_cast<std::size_t>(m), std::vector<Interval>(static_cast<std::size_t>(h_max)));
  std::vector<double> column(cube.size());
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index h = 0; h < h_max; ++h) {
      for (std::size_t s = 0; s < cube.size(); ++s) {
        if (cube[s].rows() != h_max || cube[s].cols() != m)
          throw NumericalError(kModule, "draw shape does not match the point forecast");
        column[s] = cube[s](h, j);
      }
      try {
        table[static_cast<std::size_t>(j)][static_cast<std::size_t>(h)] =
            shortest_interval(column, anchor(h, j), bounds.bounds[static_cast<std::size_t>(j)], gamma);
      } catch (const NumericalError& e) {
        throw NumericalError(kModule, std::string(e.what()) + " for variable " + std::to_string(j) +
                                          ", horizon " + std::to_string(h + 1));
      }
    }
  }
  return table;
}

}  // namespace bvarx

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bvarx/panel.hpp"
#include "bvarx/szbvar.hpp"

namespace bvarx {

/// Simulated forecast paths, one H x m matrix per draw.
using DrawCube = std::vector<Eigen::MatrixXd>;

/// Deterministic recursion with zero shocks, started from the last p rows of
/// `history`. `exog` must have H rows (any row count is accepted when k = 0).
Eigen::MatrixXd point_forecast(const ParamDraw& params, const Eigen::MatrixXd& history,
                               const Eigen::MatrixXd& exog, int horizon);
Eigen::MatrixXd point_forecast(const ParamDraw& params, const Panel& train, const ExogPath& exog,
                               int horizon);

/// Same recursion with u ~ N(0, sigma) drawn from `rng` at every step.
Eigen::MatrixXd stochastic_path(const ParamDraw& params, const Eigen::MatrixXd& sigma,
                                const Eigen::MatrixXd& history, const Eigen::MatrixXd& exog,
                                int horizon, Rng& rng);

struct MeanForecastOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double min_stable_frac = 0.5;
};

struct MeanForecast {
  Eigen::MatrixXd path;  ///< H x m
  std::size_t used = 0;  ///< stable draws averaged
  double stable_fraction = 0.0;
};

/// Average of per-draw stochastic paths over stable draws only.
MeanForecast posterior_mean_forecast(const std::vector<ParamDraw>& draws, const Panel& train,
                                     const ExogPath& exog, int horizon,
                                     const MeanForecastOptions& opts = {});

struct SimulationOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// S shock-simulated paths at fixed parameters with shocks ~ N(0, sigma_bar).
DrawCube simulate_paths(const ParamDraw& mean_params, const Eigen::MatrixXd& sigma_bar, const Panel& train,
                        const ExogPath& exog, int horizon, std::size_t paths,
                        const SimulationOptions& opts = {});

/// Adds delta = tuned - deterministic to every draw. Returns (cube', delta).
DrawCube snap_center(const DrawCube& cube, const Eigen::MatrixXd& tuned, const Eigen::MatrixXd& deterministic,
                     Eigen::MatrixXd* delta_out = nullptr);

enum class BoundKind { Unbounded, Rate, Level, Custom };
BoundKind parse_bound_kind(const std::string& name);
std::string to_string(BoundKind kind);

/// Support [lower, upper] of one variable.
struct Bound {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  static Bound of(BoundKind kind);
  bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Per-variable support bounds.
struct SupportBounds {
  std::vector<Bound> bounds;

  static SupportBounds unbounded(std::size_t m) { return {std::vector<Bound>(m)}; }
  /// Throws ConfigError unless lower < upper for every variable.
  void validate() const;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double gamma = 0.0;
  double gamma_eff = 0.0;
  double rho = 0.0;              ///< admissible fraction of draws
  std::size_t admissible = 0;
};

/// Shortest interval that contains `anchor` and at least a gamma fraction of
/// the draws lying inside `bound`. Endpoints are draw values or the anchor.
Interval shortest_interval(const std::vector<double>& draws, double anchor, const Bound& bound, double gamma);

/// intervals[j][h] for variable j, horizon h.
using IntervalTable = std::vector<std::vector<Interval>>;

IntervalTable credible_intervals(const DrawCube& cube, const SupportBounds& bounds, double gamma,
                                 const Eigen::MatrixXd& anchor);

/// Everything a forecast run produces.
struct ForecastDistribution {
  Eigen::MatrixXd point;       ///< H x m tuned point forecast
  DrawCube draws;              ///< snap-centered
  IntervalTable intervals;
  Eigen::MatrixXd snap_delta;  ///< H x m
};

}  // namespace bvarx
